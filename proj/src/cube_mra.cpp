#include "stereowave/cube_mra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stereowave {

Enlargement Enlargement::integer(int k) {
  if (k < 1) throw std::invalid_argument("Enlargement: integer k must be >= 1");
  return Enlargement(static_cast<double>(k));
}

Enlargement Enlargement::dyadic(int k) {
  if (k < 1) throw std::invalid_argument("Enlargement: dyadic k must be >= 1");
  return Enlargement(std::ldexp(1.0, -k));
}

int compute_j0_for_length(double support_length, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("compute_j0: epsilon must be > 0");
  if (!(support_length > 0.0)) throw std::invalid_argument("compute_j0: support length must be > 0");
  int j = -1024;
  while (std::ldexp(support_length, -j) > epsilon / 2.0) {
    ++j;
    if (j > 1024) throw std::runtime_error("compute_j0: no admissible level");
  }
  return j;
}

int compute_j0(int order, double epsilon) {
  return compute_j0_for_length(static_cast<double>(2 * order - 1), epsilon);
}

namespace {

LevelRange make_range(int j, int order, double epsilon) {
  // 2^-j k >= -(1+eps) and 2^-j (k + 2N-1) <= 1+eps per coordinate.
  const double bound = std::ldexp(1.0 + epsilon, j);
  const auto hi = static_cast<std::int64_t>(std::floor(bound));
  const auto lo = -static_cast<std::int64_t>(std::floor(bound));
  LevelRange r;
  r.j = j;
  r.kmin = static_cast<int>(lo);
  r.kmax = static_cast<int>(hi) - (2 * order - 1);
  return r;
}

}  // namespace

LocalizedSystem::LocalizedSystem(const WaveletTable& table, Enlargement eps, int max_level,
                                 SupportRule rule)
    : order_(table.family().order()),
      epsilon_(eps.value()),
      rule_(rule),
      j0_strict_(compute_j0(order_, epsilon_)),
      max_level_(max_level) {
  if (rule.kind == SupportRule::Kind::Effective) {
    const double len = table.effective_support_length(rule.threshold);
    j0_ = compute_j0_for_length(len, epsilon_);
  } else {
    j0_ = j0_strict_;
  }
  if (max_level_ < j0_) {
    throw std::invalid_argument("LocalizedSystem: max_level " + std::to_string(max_level_) +
                                " is below j0 = " + std::to_string(j0_));
  }
  ranges_.reserve(max_level_ - j0_ + 1);
  for (int j = j0_; j <= max_level_; ++j) ranges_.push_back(make_range(j, order_, epsilon_));
}

const LevelRange& LocalizedSystem::level(int j) const {
  if (j < j0_ || j > max_level_) {
    throw std::out_of_range("LocalizedSystem: level " + std::to_string(j) + " outside [" +
                            std::to_string(j0_) + ", " + std::to_string(max_level_) + "]");
  }
  return ranges_[j - j0_];
}

std::vector<DyadicCube> LocalizedSystem::enumerate(int j) const {
  const LevelRange& r = level(j);
  std::vector<DyadicCube> cubes;
  cubes.reserve(static_cast<std::size_t>(r.cells()));
  for (int k1 = r.kmin; k1 <= r.kmax; ++k1) {
    for (int k2 = r.kmin; k2 <= r.kmax; ++k2) cubes.push_back({j, k1, k2});
  }
  return cubes;
}

}  // namespace stereowave
