#include "stereowave/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stereowave {

using std::numbers::pi;

namespace {

inline void philox_round(std::uint32_t c[4], const std::uint32_t k[2]) {
  constexpr std::uint64_t kMul0 = 0xD2511F53;
  constexpr std::uint64_t kMul1 = 0xCD9E8D57;
  const std::uint64_t p0 = kMul0 * c[0];
  const std::uint64_t p1 = kMul1 * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  const std::uint32_t out[4] = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  c[0] = out[0];
  c[1] = out[1];
  c[2] = out[2];
  c[3] = out[3];
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32) ^ static_cast<std::uint32_t>(stream);
  counter_hi_ = stream >> 32 | (stream << 32);
}

void CounterRng::refill() {
  std::uint32_t c[4] = {static_cast<std::uint32_t>(block_),
                        static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(counter_hi_),
                        static_cast<std::uint32_t>(counter_hi_ >> 32)};
  std::uint32_t k[2] = {key_[0], key_[1]};
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k);
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  out_[0] = c[0];
  out_[1] = c[1];
  out_[2] = c[2];
  out_[3] = c[3];
  pos_ = 0;
  ++block_;
}

std::uint32_t CounterRng::next_u32() {
  if (pos_ >= 4) refill();
  return out_[pos_++];
}

double CounterRng::next_double() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  const std::uint64_t bits53 = (hi << 21) ^ (lo >> 11);
  return (static_cast<double>(bits53 & ((std::uint64_t{1} << 53) - 1)) + 0.5) *
         (1.0 / 9007199254740992.0);
}

double CounterRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

SpherePoint uniform_sphere(CounterRng& rng) {
  for (;;) {
    const Eigen::Vector3d v(rng.next_normal(), rng.next_normal(), rng.next_normal());
    const double n = v.norm();
    if (n > 1e-12) return SpherePoint::normalized(v);
  }
}

DensityOnSphere test_density(TestDensity which) {
  DensityOnSphere d;
  if (which == TestDensity::F1) {
    const double c = 0.3785;
    const double a = pi / 8.0, b = 7.0 * pi / 8.0;
    d.evaluator = [=](const SpherePoint& p) {
      const double z = p.z();
      if (z < std::sin(a)) return 0.0;
      const double u = std::asin(std::min(z, 1.0));
      const double f1 = (u - a) * (u - b);
      return c * f1 * f1;
    };
    // sup attained at z = 1: c (3 pi / 8)^4
    const double q = 3.0 * pi / 8.0;
    d.sup_bound = c * q * q * q * q;
  } else {
    const double c = 42.2126;
    const double a = pi / 4.0, b = pi / 2.0;
    d.evaluator = [=](const SpherePoint& p) {
      const double z = p.z();
      if (z < std::sin(a)) return 0.0;
      const double u = std::asin(std::min(z, 1.0));
      const double f1 = (u - a) * (u - b);
      return c * f1 * f1;
    };
    // sup at the midpoint u = 3 pi / 8: c (pi / 8)^4
    const double q = pi / 8.0;
    d.sup_bound = c * q * q * q * q;
  }
  // zonal density: mass = 2 pi int f(u) cos(u) du by Gauss-Legendre in u
  const double lo = which == TestDensity::F1 ? pi / 8.0 : pi / 4.0;
  Eigen::VectorXd un, uw;
  gauss_legendre(200, un, uw);
  double mass = 0.0;
  for (int i = 0; i < un.size(); ++i) {
    const double u = lo + (pi / 2.0 - lo) * 0.5 * (un[i] + 1.0);
    const double z = std::sin(u);
    mass += uw[i] * d.evaluator(SpherePoint::normalized(Eigen::Vector3d(std::cos(u), 0.0, z))) *
            std::cos(u);
  }
  d.quadrature_mass = 2.0 * pi * mass * (pi / 2.0 - lo) * 0.5;
  return d;
}

std::vector<SpherePoint> rejection_sample(const DensityOnSphere& density, std::size_t n,
                                          CounterRng& rng) {
  if (!density.evaluator) throw std::invalid_argument("rejection_sample: missing evaluator");
  // validate the declared sup bound on a deterministic scan, 1% headroom
  {
    const auto grid = fibonacci_grid(10000);
    double scan = 0.0;
    for (const auto& p : grid) scan = std::max(scan, density.evaluator(p));
    if (density.sup_bound * 1.01 < scan) {
      throw std::invalid_argument("rejection_sample: sup_bound below the scanned sup");
    }
  }
  const double height = 1.0 + density.sup_bound;
  std::vector<SpherePoint> sample;
  sample.reserve(n);
  std::size_t proposals = 0;
  while (sample.size() < n) {
    const SpherePoint u = uniform_sphere(rng);
    const double m = height * rng.next_double();
    ++proposals;
    if (m < density.evaluator(u)) sample.push_back(u);
    if (proposals % 1000000 == 0 &&
        static_cast<double>(sample.size()) < 1e-4 * static_cast<double>(proposals)) {
      throw std::runtime_error("rejection_sample: acceptance rate below 1e-4 after " +
                               std::to_string(proposals) + " proposals");
    }
  }
  return sample;
}

}  // namespace stereowave
