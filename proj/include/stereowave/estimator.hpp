#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "stereowave/frame.hpp"
#include "stereowave/sampling.hpp"

namespace stereowave {

//! Parameters of the adaptive estimator. Smoothness window d/2 < r < R;
//! U = 0 requests the plug-in sup of the pilot estimate at j_min; c_s = 0
//! requests the practical constant derived from the numerical kernel bound.
struct EstimatorConfig {
  double r = 1.5;
  double R = 2.0;
  double U = 0.0;
  int wavelet_order = 8;
  double delta = 0.5235987755982988;  // pi/6
  Enlargement epsilon = Enlargement::integer(4);
  SupportRule rule = SupportRule::strict();
  double c_s = 0.0;
  int floor_level = 2;   // -1 disables the floor
  std::uint64_t seed = 1;
  int quad_order = 256;
  int table_depth = 10;
  int dn_grid_points = 128;

  void validate() const;
};

struct ResolutionBounds {
  int j_min = 0;
  int j_max = 0;
};

//! j_min = floor(log2 n / (2R+d)), j_max = ceil(log2 n / (2r+d)), with the
//! optional floor applied to j_min. Throws when flooring leaves
//! j_min > j_max.
ResolutionBounds resolution_bounds(std::size_t n, double r, double R, int d,
                                   std::optional<int> floor_level);

//! Practical threshold constant
//! C(S) = (2 + 4 max{10 sqrt(D)/3, 4/3 + sqrt(2)} sqrt(D))^2.
double practical_frame_constant(double d_n);

//! Frame, quadrature and kernel-bound state shared by estimator runs.
//! Immutable after construction except for the lazily cached kernel bound.
class EstimatorContext {
 public:
  EstimatorContext(const EstimatorConfig& config, int max_level);

  const EstimatorConfig& config() const { return config_; }
  const StereographicFrame& frame() const { return *frame_; }
  const QuadratureRule& quad() const { return quad_; }
  int max_level() const { return max_level_; }

  //! Cached numerical kernel bound over [j_lo, j_hi] on the default grid.
  const KernelBound& kernel_bound(int j_lo, int j_hi) const;

 private:
  EstimatorConfig config_;
  int max_level_;
  QuadratureRule quad_;
  std::unique_ptr<StereographicFrame> frame_;
  mutable std::mutex dn_mutex_;
  mutable std::optional<KernelBound> dn_;
};

//! f_n(j)(x) = (1/n) sum_i K_j(x, X_i).
double estimate_density(const EstimatorContext& ctx, std::span<const SpherePoint> sample, int j,
                        const SpherePoint& x);

struct PairwiseNorm {
  int j = 0;
  int l = 0;
  double norm_squared = 0.0;
};

struct EstimatorRun {
  std::size_t n = 0;
  int j_min = 0;
  int j_max = 0;
  int j0 = 0;
  int j_n = 0;
  double u_effective = 0.0;
  bool u_from_pilot = false;
  double c_s = 0.0;
  double d_n = 0.0;  // 0 when the constant was supplied explicitly
  std::vector<PairwiseNorm> pairwise;
  //! Per-level estimates on the display grid, levels j_min..j_max in order.
  std::vector<Eigen::VectorXd> grid_estimates;
  //! Per-level estimates on the quadrature nodes (kept for norm recomputation).
  std::vector<Eigen::VectorXd> node_estimates;
  double wall_seconds = 0.0;
};

//! Lepski selection: the smallest level whose estimate is within the
//! threshold C(S) (U v 1) 2^{ld} / n of every finer-level estimate.
EstimatorRun lepski_select(const EstimatorContext& ctx, std::span<const SpherePoint> sample,
                           std::span<const SpherePoint> display_grid = {});

//! Default grid for the kernel bound: the n points with the largest
//! diagonal K_j(y,y)/2^{jd} from a deterministic candidate pool (uniform
//! spiral, equator-belt rings where the slice peaks, and points phase-
//! aligned with the cube lattice). The diagonal is cheap and tracks the
//! slice integral, so the selected grid pins its supremum.
std::vector<SpherePoint> kernel_bound_grid(int n, const StereographicFrame& frame, int j_lo,
                                           int j_hi);

}  // namespace stereowave
