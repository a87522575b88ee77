#pragma once

#include <Eigen/Dense>
#include <vector>

namespace stereowave {

enum class Hemisphere { Minus, Plus };

inline Hemisphere opposite(Hemisphere h) {
  return h == Hemisphere::Minus ? Hemisphere::Plus : Hemisphere::Minus;
}

//! Point on the unit sphere S^2 in R^3.
class SpherePoint {
 public:
  //! Validates |norm - 1| <= 1e-12.
  explicit SpherePoint(const Eigen::Vector3d& v);
  //! Normalizes a nonzero vector onto the sphere.
  static SpherePoint normalized(const Eigen::Vector3d& v);

  const Eigen::Vector3d& coords() const { return v_; }
  double x() const { return v_[0]; }
  double y() const { return v_[1]; }
  double z() const { return v_[2]; }

  //! Reflection through the equatorial plane, (x, y, -z). In the natural
  //! parametrization this is theta -> pi - theta.
  SpherePoint mirror() const { return SpherePoint(Eigen::Vector3d(v_[0], v_[1], -v_[2]), 0); }

 private:
  SpherePoint(const Eigen::Vector3d& v, int) : v_(v) {}
  Eigen::Vector3d v_;
};

//! Stereographic projection. Minus projects from the north pole 1^d
//! (excluded), Plus from the south pole. d-generic in the vector length.
template <typename Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime == Eigen::Dynamic ? Eigen::Dynamic
                                                                   : Derived::RowsAtCompileTime - 1,
              1>
stereo_of(Hemisphere h, const Eigen::MatrixBase<Derived>& x) {
  const auto d = x.size() - 1;
  const double last = x[d];
  const double denom = h == Hemisphere::Minus ? 1.0 - last : 1.0 + last;
  if (std::abs(denom) <= 1e-12) {
    throw std::domain_error("stereo: point at the excluded pole");
  }
  return x.template head(d) / denom;
}

Eigen::Vector2d stereo(Hemisphere h, const SpherePoint& x);

//! Inverse stereographic projection back onto the sphere.
SpherePoint stereo_inverse(Hemisphere h, const Eigen::Vector2d& y);

//! Jacobian of the inverse projection, J_d(y) = (2 / (1 + |y|^2))^d.
template <typename Derived>
double stereo_jacobian(const Eigen::MatrixBase<Derived>& y) {
  const double base = 2.0 / (1.0 + y.squaredNorm());
  double r = 1.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) r *= base;
  return r;
}

//! Natural parametrization Phi_d(theta, xi) = (xi sin theta, cos theta),
//! theta in (0, pi), xi on S^{d-1}. d = 2: xi = (cos az, sin az).
SpherePoint parametrize(double theta, const Eigen::Vector2d& xi);

//! Inverse of the parametrization; recovers (theta, xi).
std::pair<double, Eigen::Vector2d> parametrize_inverse(const SpherePoint& x);

//! Quadrature rule on S^2 in surface-measure units; weights sum to 4*pi.
struct QuadratureRule {
  std::vector<SpherePoint> nodes;
  Eigen::VectorXd weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

//! Gauss-Legendre nodes and weights on [-1, 1]. The returned rule is exactly
//! symmetric: node i and node n-1-i are bitwise negatives with equal weights.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

//! Product rule: Q Gauss-Legendre nodes in cos(theta) times 2Q uniform
//! azimuth nodes. Mirror-closed: the z -> -z reflection of every node is a
//! node with the same weight.
QuadratureRule product_quadrature(int order);

//! The fixed display grid: three coordinate-plane lattices with step 0.02
//! over {-0.98, ..., 0.98}, both square-root signs, duplicates removed.
std::vector<SpherePoint> evaluation_grid();

//! Deterministic, roughly uniform spread of n points (golden-angle spiral).
//! offset shifts the z placement so disjoint grids can be produced.
std::vector<SpherePoint> fibonacci_grid(int n, double offset = 0.0);

}  // namespace stereowave
