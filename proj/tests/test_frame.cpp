#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stereowave/frame.hpp"
#include "stereowave/io.hpp"
#include "stereowave/sampling.hpp"

using namespace stereowave;
using std::numbers::pi;

namespace {

const double kDelta = pi / 6.0;

struct Fixture {
  WaveletTable table;
  LocalizedSystem sys;
  StereographicFrame frame;

  Fixture(int order, int eps, int max_level, SupportRule rule = SupportRule::strict(),
          int depth = 10)
      : table(WaveletTable::cascade(WaveletFamily::daubechies(order), depth)),
        sys(table, Enlargement::integer(eps), max_level, rule),
        frame(table, sys, CutoffFunction(kDelta)) {}
};

std::span<const double> span_of(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

TEST_CASE("transport: fixed value at the pole-facing point and pole handling") {
  Fixture fx(2, 4, 2);
  auto psi = [](const Eigen::Vector2d& w) { return std::exp(-w.squaredNorm()); };

  // T+ psi at the north pole: S_+ = 0, value psi(0,0)/2
  const SpherePoint north(Eigen::Vector3d(0.0, 0.0, 1.0));
  CHECK(fx.frame.transport(Hemisphere::Plus, psi, north) == doctest::Approx(0.5).epsilon(1e-15));

  // excluded pole: 0 for compactly supported psi, domain error otherwise
  const SpherePoint south(Eigen::Vector3d(0.0, 0.0, -1.0));
  CHECK(fx.frame.transport(Hemisphere::Plus, psi, south, true) == 0.0);
  CHECK_THROWS_AS(fx.frame.transport(Hemisphere::Plus, psi, south, false), std::domain_error);
}

TEST_CASE("transport: jacobian form equals the closed Cartesian form") {
  Fixture fx(2, 4, 2);
  auto psi = [](const Eigen::Vector2d& w) { return std::cos(w[0]) + w[1] * w[1]; };
  CounterRng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint x = uniform_sphere(rng);
    for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) {
      if ((h == Hemisphere::Minus && x.z() > 1.0 - 1e-9) ||
          (h == Hemisphere::Plus && x.z() < -1.0 + 1e-9)) {
        continue;
      }
      const Eigen::Vector2d w = stereo(h, x);
      const double via_jacobian = psi(w) / std::sqrt(stereo_jacobian(w));
      const double denom = h == Hemisphere::Minus ? 1.0 - x.z() : 1.0 + x.z();
      const Eigen::Vector2d wc(x.x() / denom, x.y() / denom);
      const double closed = 0.5 * psi(wc) * (1.0 + wc.squaredNorm());
      const double lib = fx.frame.transport(h, psi, x);
      const double scale = std::max(1.0, std::abs(closed));
      worst = std::max(worst, std::abs(via_jacobian - closed) / scale);
      worst = std::max(worst, std::abs(lib - closed) / scale);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("transport is an isometry onto the sphere (quadrature)") {
  // Raw transported elements are not localized by E, so cubes near the
  // J_eps boundary land where the projection compresses by (1+|w|^2)/2 of
  // up to 26; the quadrature has to resolve that, and the integrand is only
  // as smooth as the wavelet, so this runs on DB8.
  Fixture fx(8, 4, 3);
  const QuadratureRule quad = product_quadrature(1024);
  CounterRng rng(11);
  const LevelRange& r = fx.sys.level(3);
  for (int trial = 0; trial < 5; ++trial) {
    // random combination of orthonormal tensor wavelets: planar norm is the
    // coefficient norm
    struct Term {
      int e, k1, k2;
      double c;
    };
    std::vector<Term> terms;
    double c2 = 0.0;
    for (int t = 0; t < 6; ++t) {
      Term tm;
      tm.e = static_cast<int>(rng.next_double() * 4.0);
      tm.k1 = r.kmin + static_cast<int>(rng.next_double() * r.count());
      tm.k2 = r.kmin + static_cast<int>(rng.next_double() * r.count());
      tm.c = rng.next_normal();
      bool dup = false;
      for (const auto& o : terms) dup = dup || (o.e == tm.e && o.k1 == tm.k1 && o.k2 == tm.k2);
      if (dup) continue;
      terms.push_back(tm);
      c2 += tm.c * tm.c;
    }
    auto psi = [&](const Eigen::Vector2d& w) {
      double acc = 0.0;
      for (const auto& tm : terms) {
        acc += tm.c * 8.0 * fx.table.factor(tm.e & 1, 8.0 * w[0] - tm.k1) *
               fx.table.factor((tm.e >> 1) & 1, 8.0 * w[1] - tm.k2);
      }
      return acc;
    };
    for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) {
      const double norm2 = quad.integrate([&](const SpherePoint& p) {
        const double v = ((p.z() > 1.0 - 1e-12 && h == Hemisphere::Minus) ||
                          (p.z() < -1.0 + 1e-12 && h == Hemisphere::Plus))
                             ? 0.0
                             : fx.frame.transport(h, psi, p);
        return v * v;
      });
      CHECK(std::abs(std::sqrt(norm2) - std::sqrt(c2)) <= 1e-3 * std::max(1.0, std::sqrt(c2)));
    }
  }
}

TEST_CASE("frame elements: localization and the identity branch") {
  Fixture fx(8, 4, 3, SupportRule::effective(1e-3));
  const LevelRange& r = fx.sys.level(2);
  FrameElement plus_el{Hemisphere::Plus, 0, {2, -3, 1}};
  REQUIRE(r.contains(-3, 1));
  CounterRng rng(29);

  auto psi0 = [&](const Eigen::Vector2d& w) {
    return 4.0 * fx.table.phi(4.0 * w[0] + 3.0) * fx.table.phi(4.0 * w[1] - 1.0);
  };

  int checked_zero = 0, checked_pure = 0;
  for (int i = 0; i < 2000; ++i) {
    const SpherePoint x = uniform_sphere(rng);
    if (x.z() < -std::sin(kDelta)) {
      CHECK(fx.frame.element(plus_el, x) == 0.0);  // E^+ localized on A_+
      ++checked_zero;
    } else if (x.z() > std::sin(kDelta)) {
      // pure region: equals the transport directly
      const double el = fx.frame.element(plus_el, x);
      const double tr = fx.frame.transport(Hemisphere::Plus, psi0, x);
      CHECK(el == doctest::Approx(tr).epsilon(1e-14));
      ++checked_pure;
    }
  }
  CHECK(checked_zero > 100);
  CHECK(checked_pure > 100);
}

TEST_CASE("frame elements are contractions of unit vectors") {
  Fixture fx(2, 4, 3);
  const QuadratureRule quad = product_quadrature(128);
  CounterRng rng(31);
  for (int t = 0; t < 8; ++t) {
    FrameElement el;
    el.hemisphere = rng.next_double() < 0.5 ? Hemisphere::Minus : Hemisphere::Plus;
    el.cube.j = 1 + static_cast<int>(rng.next_double() * 2.0);
    el.e = static_cast<int>(rng.next_double() * 4.0);
    const LevelRange& r = fx.sys.level(el.cube.j);
    el.cube.k1 = r.kmin + static_cast<int>(rng.next_double() * r.count());
    el.cube.k2 = r.kmin + static_cast<int>(rng.next_double() * r.count());
    const double n2 = quad.integrate([&](const SpherePoint& p) {
      const double v = fx.frame.element(el, p);
      return v * v;
    });
    CHECK(n2 <= 1.0 + 2e-3);
  }
}

TEST_CASE("kernel is bitwise symmetric") {
  Fixture fx(8, 4, 3, SupportRule::effective(1e-3));
  CounterRng rng(37);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint x = uniform_sphere(rng);
    const SpherePoint y = uniform_sphere(rng);
    for (int j : {2, 3}) {
      REQUIRE(fx.frame.kernel(j, x, y) == fx.frame.kernel(j, y, x));
    }
  }
}

TEST_CASE("at most 2 (2N-1)^d distinct cubes contribute to the kernel") {
  Fixture fx(2, 4, 3);
  CounterRng rng(41);
  const int bound = 2 * 3 * 3;
  for (int i = 0; i < 500; ++i) {
    const SpherePoint x = uniform_sphere(rng);
    SpherePoint y = uniform_sphere(rng);
    if (i % 3 == 0) y = SpherePoint::normalized(0.9 * x.coords() + 0.1 * y.coords());
    for (int j : {1, 2}) {
      REQUIRE(fx.frame.kernel_terms(j, x, y) <= bound);
    }
  }
}

TEST_CASE("telescoping K_{j+1} = K_j + G_j at and above the strict base level") {
  // The identity needs every disk-touching cube inside J_eps, which is the
  // strict j0 condition. The residual it leaves is the two-scale defect of
  // the interpolated table, which scales like the squared grid step times
  // the kernel magnitude, so the check runs on a deep table. DB2 is only
  // C^0.55 and can never reach this tolerance through interpolation; DB8 is
  // smooth enough.
  Fixture fx(8, 8, 3, SupportRule::strict(), 17);
  REQUIRE(fx.sys.j0() == 2);
  CounterRng rng(43);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SpherePoint x = uniform_sphere(rng);
    const SpherePoint y = uniform_sphere(rng);
    const double lhs = fx.frame.kernel(3, x, y);
    const double rhs = fx.frame.kernel(2, x, y) + fx.frame.detail_kernel(2, x, y);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("below the strict base level the telescoping defect is real") {
  // DB8 with eps = 4 admits j = 2 only under the effective support rule;
  // the cubes cut at the J_eps boundary leave a genuine residual in
  // K_3 - K_2 - G_2 on the band slivers facing the boundary cubes.
  Fixture fx(8, 4, 3, SupportRule::effective(1e-3), 12);
  REQUIRE(fx.sys.j0() == 2);
  REQUIRE(fx.sys.j0_strict() == 3);
  // point projecting into w1 in (1.5, 1.73): the sliver of the dropped k=6
  // column, z inside the band
  const Eigen::Vector2d w(1.62, 0.1);
  const SpherePoint x = stereo_inverse(Hemisphere::Minus, w);
  REQUIRE(std::abs(x.z()) < std::sin(kDelta));
  const double defect =
      fx.frame.kernel(3, x, x) - fx.frame.kernel(2, x, x) - fx.frame.detail_kernel(2, x, x);
  CHECK(std::abs(defect) > 1e-6);
}

TEST_CASE("kernel contraction and quasi-projection behavior") {
  Fixture fx(8, 8, 4);
  REQUIRE(fx.sys.j0() == 2);
  const QuadratureRule quad = product_quadrature(128);

  SphereFunction g = [](const SpherePoint& p) {
    return std::cos(2.0 * p.x()) + 0.5 * p.z() * p.y();
  };
  const Eigen::VectorXd gv = values_on(quad, g);
  for (int j : {2, 3}) {
    const BlockList cf = fx.frame.scaling_coefficients(quad, span_of(gv), j);
    const Eigen::VectorXd kg = fx.frame.synthesize_on(quad, cf);
    CHECK(l2_norm_squared(quad, kg) <= l2_norm_squared(quad, gv) * (1.0 + 1e-6));
  }

  // K_j fixes functions transported from level-j scaling combinations
  // supported in the pure region (pullback inside the inner disk)
  {
    const int j = 4;
    const LevelRange& r = fx.sys.level(j);
    // support [k/16, (k+15)/16] inside the disk of radius 1/sqrt(3) ~ 0.577
    std::vector<FrameElement> els = {{Hemisphere::Minus, 0, {j, -7, -8}},
                                     {Hemisphere::Minus, 0, {j, -8, 0}},
                                     {Hemisphere::Plus, 0, {j, -2, -6}}};
    for (const auto& el : els) REQUIRE(r.contains(el.cube.k1, el.cube.k2));
    SphereFunction f = [&](const SpherePoint& p) {
      double acc = 0.0;
      const double cs[3] = {1.0, -0.7, 0.4};
      for (int i = 0; i < 3; ++i) acc += cs[i] * fx.frame.element(els[i], p);
      return acc;
    };
    const Eigen::VectorXd fv = values_on(quad, f);
    const double err = fx.frame.approximation_error(quad, span_of(fv), j);
    CHECK(err <= 1e-3);
  }

  // near the blend band the level-j scaling system is not tight, so the
  // kernel is a strict contraction there: iterated kernel differs from the
  // kernel at band pairs but matches in the pure regions
  {
    const int j = 3;
    const SpherePoint xp = SpherePoint::normalized(Eigen::Vector3d(0.3, 0.1, 0.95));
    const SpherePoint yp = SpherePoint::normalized(Eigen::Vector3d(0.25, 0.2, 0.9));
    double iter = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      iter += quad.weights[i] * fx.frame.kernel(j, xp, quad.nodes[i]) *
              fx.frame.kernel(j, quad.nodes[i], yp);
    }
    CHECK(std::abs(iter - fx.frame.kernel(j, xp, yp)) <= 1e-3);
  }
}

TEST_CASE("frame coefficients: zero function, linearity, CSV dump") {
  Fixture fx(2, 4, 2);
  const QuadratureRule quad = product_quadrature(64);

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(quad.size());
  const CoefficientSet cz = fx.frame.frame_coefficients(quad, span_of(zeros), 2);
  CHECK(cz.sum_squares() == 0.0);

  SphereFunction g = [](const SpherePoint& p) { return std::exp(p.z()) + p.x(); };
  const Eigen::VectorXd gv = values_on(quad, g);
  const Eigen::VectorXd gv3 = 3.0 * gv;
  const CoefficientSet c1 = fx.frame.frame_coefficients(quad, span_of(gv), 2);
  const CoefficientSet c3 = fx.frame.frame_coefficients(quad, span_of(gv3), 2);
  double worst = 0.0;
  for (std::size_t b = 0; b < c1.blocks.size(); ++b) {
    worst = std::max(worst,
                     (c3.blocks[b].values - 3.0 * c1.blocks[b].values).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-14 * c1.blocks[0].values.cwiseAbs().maxCoeff() * 3.0 + 1e-300);

  const std::string csv = coefficients_csv(c1.blocks);
  CHECK(csv.rfind("hemisphere,e,j,k1,k2,value\n", 0) == 0);
  CHECK(csv.find("\n-,0,1,") != std::string::npos);
}

TEST_CASE("Parseval identity for synthesized functions (small system)") {
  Fixture fx(2, 4, 4);
  REQUIRE(fx.sys.j0() == 1);
  const QuadratureRule quad = product_quadrature(128);
  CounterRng rng(47);
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<FrameElement> els;
    std::vector<double> cs;
    for (int i = 0; i < 40; ++i) {
      FrameElement el;
      const double u = rng.next_double();
      el.cube.j = 1 + (u < 0.4 ? 0 : (u < 0.8 ? 1 : 2));
      el.e = (el.cube.j == 1 && rng.next_double() < 0.5) ? 0
             : 1 + static_cast<int>(rng.next_double() * 3.0);
      const LevelRange& r = fx.sys.level(el.cube.j);
      el.cube.k1 = r.kmin + static_cast<int>(rng.next_double() * r.count());
      el.cube.k2 = r.kmin + static_cast<int>(rng.next_double() * r.count());
      el.hemisphere = rng.next_double() < 0.5 ? Hemisphere::Minus : Hemisphere::Plus;
      els.push_back(el);
      cs.push_back(rng.next_normal() * std::ldexp(1.0, -2 * (el.cube.j - 1)));
    }
    SphereFunction f = [&](const SpherePoint& p) {
      double acc = 0.0;
      for (std::size_t i = 0; i < els.size(); ++i) acc += cs[i] * fx.frame.element(els[i], p);
      return acc;
    };
    const Eigen::VectorXd fv = values_on(quad, f);
    const double norm2 = l2_norm_squared(quad, fv);
    const CoefficientSet coeffs = fx.frame.frame_coefficients(quad, span_of(fv), 4);
    // DB2's low regularity makes the truncated tail (the inverted-mirror
    // content of band elements) decay slowly, so the gate here is loose;
    // the acceptance suite runs the tight check on DB8.
    CHECK(std::abs(coeffs.sum_squares() - norm2) <= 8e-2 * norm2);
  }
}

TEST_CASE("besov norm: zero, homogeneity, truncation monotonicity") {
  Fixture fx(2, 4, 3);
  const QuadratureRule quad = product_quadrature(64);

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(quad.size());
  CHECK(besov_norm(fx.frame.frame_coefficients(quad, span_of(zeros), 3), 1.5) == 0.0);

  SphereFunction g = [](const SpherePoint& p) { return std::exp(-p.z() * p.z()) + 0.2 * p.y(); };
  const Eigen::VectorXd gv = values_on(quad, g);
  CoefficientSet c = fx.frame.frame_coefficients(quad, span_of(gv), 3);
  const double n1 = besov_norm(c, 1.5);
  CoefficientSet c2 = c;
  c2.scale(-2.5);
  CHECK(besov_norm(c2, 1.5) == doctest::Approx(2.5 * n1).epsilon(1e-15));

  // truncation monotone: a deeper cap never decreases the sup
  CoefficientSet shallow = fx.frame.frame_coefficients(quad, span_of(gv), 2);
  CHECK(besov_norm(shallow, 1.5) <= n1 + 1e-12);

  CHECK_THROWS_AS(besov_norm(c, 0.0), std::invalid_argument);
}

TEST_CASE("approximation error decreases in the level for a smooth function") {
  Fixture fx(8, 8, 4);
  const QuadratureRule quad = product_quadrature(256);
  SphereFunction g = [](const SpherePoint& p) { return std::exp(0.8 * p.z()) + 0.1 * p.x(); };
  const Eigen::VectorXd gv = values_on(quad, g);
  double prev = 1e300;
  for (int j = 2; j <= 4; ++j) {
    const double err = fx.frame.approximation_error(quad, span_of(gv), j);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("kernel bound: finite, grid-monotone, quadrature-stable") {
  Fixture fx(8, 4, 3, SupportRule::effective(1e-3));
  const QuadratureRule q128 = product_quadrature(128);
  const auto grid = fibonacci_grid(24);
  const KernelBound dn24 = fx.frame.compute_DN(q128, 2, 3, grid);
  CHECK(std::isfinite(dn24.value));
  CHECK(dn24.value > 0.0);

  const auto grid12 = std::vector<SpherePoint>(grid.begin(), grid.begin() + 12);
  const KernelBound dn12 = fx.frame.compute_DN(q128, 2, 3, grid12);
  CHECK(dn12.value <= dn24.value);  // sup over a larger set

  const KernelBound dn2x = fx.frame.compute_DN(product_quadrature(256), 2, 3, grid12);
  CHECK(std::abs(dn2x.value - dn12.value) <= 0.01 * dn12.value);
}
