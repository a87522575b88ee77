#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stereowave/aww.hpp"
#include "stereowave/cube_mra.hpp"
#include "stereowave/daubechies.hpp"
#include "stereowave/sphere_geometry.hpp"

namespace stereowave {

//! One frame function E^h (T^h psi^e_I). e holds the vertex bits: bit a set
//! means axis a carries the wavelet factor, clear means the scaling factor.
struct FrameElement {
  Hemisphere hemisphere = Hemisphere::Minus;
  int e = 0;
  DyadicCube cube;
};

//! Dense array of pairings <f, E^h T^h psi^e_{j,.}> over the index range of
//! one level, one vertex, one hemisphere.
struct CoefficientBlock {
  int j = 0;
  int e = 0;
  Hemisphere hemisphere = Hemisphere::Minus;
  LevelRange range;
  Eigen::VectorXd values;

  double sum_squares() const { return values.squaredNorm(); }
};

using BlockList = std::vector<CoefficientBlock>;

//! Frame coefficients of one function: the base scaling blocks at j0 plus
//! the detail blocks (e != 0) for every level j0..max_level, both
//! hemispheres.
struct CoefficientSet {
  int j0 = 0;
  int max_level = 0;
  BlockList blocks;

  double base_sum_squares() const;
  double detail_sum_squares(int j) const;
  double sum_squares() const;
  void scale(double a);
};

//! Numerical kernel bound sup_j sup_y int K_j^2(x,y) dsigma(x) / 2^{jd},
//! reported together with the grid it was taken over.
struct KernelBound {
  double value = 0.0;
  int j_lo = 0;
  int j_hi = 0;
  int grid_points = 0;
  int quad_order = 0;
};

//! The stereographic wavelet frame on S^2: evaluation of frame elements,
//! projection kernels K_j, detail kernels G_j, coefficient pairings and the
//! Besov norm functional. All evaluation is pure; the object is immutable
//! and safe for concurrent use.
class StereographicFrame {
 public:
  StereographicFrame(WaveletTable table, LocalizedSystem system, CutoffFunction cutoff);

  const WaveletTable& table() const { return table_; }
  const LocalizedSystem& system() const { return system_; }
  const CutoffFunction& cutoff() const { return cutoff_; }
  int j0() const { return system_.j0(); }

  //! T^h psi (x) = psi(S_h(x)) / sqrt(J_d(S_h(x))). At the excluded pole the
  //! value is 0 for compactly supported psi, otherwise a domain error.
  double transport(Hemisphere h, const std::function<double(const Eigen::Vector2d&)>& psi,
                   const SpherePoint& x, bool compact_support = true) const;

  //! E^h(T^h psi^e_I)(x).
  double element(const FrameElement& el, const SpherePoint& x) const;

  //! Projection kernel K_j(x, y), scaling elements of both hemispheres.
  double kernel(int j, const SpherePoint& x, const SpherePoint& y) const;

  //! Detail kernel G_j(x, y), nonzero vertices of both hemispheres.
  double detail_kernel(int j, const SpherePoint& x, const SpherePoint& y) const;

  //! Number of distinct cubes with a nonzero product in K_j(x, y).
  int kernel_terms(int j, const SpherePoint& x, const SpherePoint& y) const;

  //! Pairings against a function given by its values on the quadrature
  //! nodes. Base + detail blocks through max_level.
  CoefficientSet frame_coefficients(const QuadratureRule& quad, std::span<const double> fvals,
                                    int max_level) const;

  //! Scaling-only blocks (e = 0, both hemispheres) at one level.
  BlockList scaling_coefficients(const QuadratureRule& quad, std::span<const double> fvals,
                                 int j) const;

  //! Empirical scaling blocks (1/n) sum_i F(X_i); the estimator's sufficient
  //! statistic: synthesizing them gives f_n(j).
  BlockList empirical_coefficients(std::span<const SpherePoint> sample, int j) const;

  //! sum over blocks of sum_k coeff * element(x).
  double synthesize(const BlockList& blocks, const SpherePoint& x) const;

  //! Synthesis on all quadrature nodes (parallel, deterministic).
  Eigen::VectorXd synthesize_on(const QuadratureRule& quad, const BlockList& blocks) const;

  //! int K_j(x, y)^2 dsigma(x) by quadrature, y fixed.
  double kernel_l2_slice(const QuadratureRule& quad, int j, const SpherePoint& y) const;

  //! Numerical sup of the kernel squared-slice bound over levels and grid
  //! points, int K_j^2(x, y) dsigma(x) / 2^{jd}.
  KernelBound compute_DN(const QuadratureRule& quad, int j_lo, int j_hi,
                         std::span<const SpherePoint> points) const;

  //! || f - K_j f ||_2 by quadrature.
  double approximation_error(const QuadratureRule& quad, std::span<const double> fvals,
                             int j) const;

 private:
  struct BlockSpec {
    int j;
    int e;
    Hemisphere h;
  };

  BlockList accumulate(std::span<const SpherePoint> points, std::span<const double> weights,
                       std::span<const double> fvals, std::span<const BlockSpec> specs) const;

  WaveletTable table_;
  LocalizedSystem system_;
  CutoffFunction cutoff_;
};

//! Besov functional from frame coefficients, truncated at the set's
//! max_level: max of the base term 2^{j0 s} sqrt(base sums) and
//! sup_j 2^{js} sqrt(detail sums at level j).
double besov_norm(const CoefficientSet& coeffs, double s);

//! Evaluate a function on all quadrature nodes (parallel, deterministic).
Eigen::VectorXd values_on(const QuadratureRule& quad, const SphereFunction& f);

//! Quadrature L2 norm squared of values, || . ||_2^2 = sum w v^2.
double l2_norm_squared(const QuadratureRule& quad, const Eigen::VectorXd& values);

}  // namespace stereowave
