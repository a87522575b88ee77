#include "stereowave/sphere_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace stereowave {

using std::numbers::pi;

SpherePoint::SpherePoint(const Eigen::Vector3d& v) : v_(v) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("SpherePoint: vector is not on the unit sphere");
  }
}

SpherePoint SpherePoint::normalized(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("SpherePoint: zero vector");
  return SpherePoint(v / n, 0);
}

Eigen::Vector2d stereo(Hemisphere h, const SpherePoint& x) {
  return stereo_of(h, x.coords());
}

SpherePoint stereo_inverse(Hemisphere h, const Eigen::Vector2d& y) {
  const double t = y.squaredNorm();
  const double scale = 2.0 / (1.0 + t);
  const double last = h == Hemisphere::Minus ? (t - 1.0) / (t + 1.0) : (1.0 - t) / (1.0 + t);
  return SpherePoint::normalized(Eigen::Vector3d(scale * y[0], scale * y[1], last));
}

SpherePoint parametrize(double theta, const Eigen::Vector2d& xi) {
  if (!(theta > 0.0 && theta < pi)) {
    throw std::domain_error("parametrize: theta must lie strictly inside (0, pi)");
  }
  const double st = std::sin(theta);
  return SpherePoint::normalized(Eigen::Vector3d(xi[0] * st, xi[1] * st, std::cos(theta)));
}

std::pair<double, Eigen::Vector2d> parametrize_inverse(const SpherePoint& x) {
  const double theta = std::acos(std::clamp(x.z(), -1.0, 1.0));
  const double st = std::hypot(x.x(), x.y());
  if (st == 0.0) throw std::domain_error("parametrize_inverse: point is a pole");
  return {theta, Eigen::Vector2d(x.x() / st, x.y() / st)};
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // enforce exact symmetry
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule product_quadrature(int order) {
  if (order < 2) throw std::invalid_argument("product_quadrature: order must be >= 2");
  Eigen::VectorXd z, wz;
  gauss_legendre(order, z, wz);
  const int naz = 2 * order;
  const double waz = 2.0 * pi / naz;

  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(order) * naz);
  rule.weights.resize(static_cast<Eigen::Index>(order) * naz);
  Eigen::Index idx = 0;
  for (int i = 0; i < order; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int m = 0; m < naz; ++m) {
      const double az = waz * m;
      rule.nodes.push_back(
          SpherePoint::normalized(Eigen::Vector3d(st * std::cos(az), st * std::sin(az), z[i])));
      rule.weights[idx++] = wz[i] * waz;
    }
  }
  return rule;
}

namespace {

// Quantized key for duplicate removal; 1e-9 grid.
struct PointKey {
  std::int64_t a, b, c;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t h = std::hash<std::int64_t>()(k.a);
    h ^= std::hash<std::int64_t>()(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>()(k.c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

PointKey key_of(const Eigen::Vector3d& v) {
  return {static_cast<std::int64_t>(std::llround(v[0] * 1e9)),
          static_cast<std::int64_t>(std::llround(v[1] * 1e9)),
          static_cast<std::int64_t>(std::llround(v[2] * 1e9))};
}

}  // namespace

std::vector<SpherePoint> evaluation_grid() {
  std::vector<SpherePoint> grid;
  std::unordered_set<PointKey, PointKeyHash> seen;
  auto push = [&](double x, double y, double z) {
    const Eigen::Vector3d v(x, y, z);
    if (seen.insert(key_of(v)).second) grid.push_back(SpherePoint::normalized(v));
  };
  // free coordinate axis: 2 = z, 1 = y, 0 = x
  for (int axis = 2; axis >= 0; --axis) {
    for (int i = 0; i < 99; ++i) {
      for (int l = 0; l < 99; ++l) {
        const double a = -0.98 + 0.02 * i;
        const double b = -0.98 + 0.02 * l;
        const double rest = 1.0 - a * a - b * b;
        if (rest < 0.0) continue;
        const double c = std::sqrt(rest);
        for (const double s : {c, -c}) {
          if (axis == 2) {
            push(a, b, s);
          } else if (axis == 1) {
            push(a, s, b);
          } else {
            push(s, a, b);
          }
          if (c == 0.0) break;
        }
      }
    }
  }
  return grid;
}

std::vector<SpherePoint> fibonacci_grid(int n, double offset) {
  std::vector<SpherePoint> pts;
  pts.reserve(n);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0 + 2.0 * offset) / n;
    const double zc = std::clamp(z, -1.0, 1.0);
    const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double az = golden * i + 2.0 * pi * offset;
    pts.push_back(SpherePoint::normalized(Eigen::Vector3d(r * std::cos(az), r * std::sin(az), zc)));
  }
  return pts;
}

}  // namespace stereowave
