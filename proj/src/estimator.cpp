#include "stereowave/estimator.hpp"

#include "stereowave/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stereowave {

using std::numbers::pi;

void EstimatorConfig::validate() const {
  if (!(r > 1.0)) throw std::invalid_argument("EstimatorConfig: need r > d/2 = 1");
  if (!(R > r)) throw std::invalid_argument("EstimatorConfig: need R > r");
  if (wavelet_order < 2 || wavelet_order > 10) {
    throw std::invalid_argument("EstimatorConfig: wavelet order outside 2..10");
  }
  if (!(delta > 0.0 && delta < pi / 2.0)) {
    throw std::invalid_argument("EstimatorConfig: delta outside (0, pi/2)");
  }
  if (quad_order < 2) throw std::invalid_argument("EstimatorConfig: quad_order < 2");
  if (table_depth < 4) throw std::invalid_argument("EstimatorConfig: table_depth < 4");
  if (U < 0.0) throw std::invalid_argument("EstimatorConfig: U < 0");
  if (c_s < 0.0) throw std::invalid_argument("EstimatorConfig: c_s < 0");
  // Daubechies smoothness grows like 0.2 N; warn when R is out of reach.
  if (0.2 * wavelet_order <= R) {
    std::fprintf(stderr,
                 "stereowave: warning: R = %g exceeds the wavelet smoothness "
                 "~0.2N = %g; take N ~ 5R\n",
                 R, 0.2 * wavelet_order);
  }
}

ResolutionBounds resolution_bounds(std::size_t n, double r, double R, int d,
                                   std::optional<int> floor_level) {
  if (n < 2) throw std::invalid_argument("resolution_bounds: need n >= 2");
  if (!(r > 0.5 * d) || !(R > r)) {
    throw std::invalid_argument("resolution_bounds: need d/2 < r < R");
  }
  const double log2n = std::log2(static_cast<double>(n));
  ResolutionBounds b;
  b.j_min = static_cast<int>(std::floor(log2n / (2.0 * R + d)));
  b.j_max = static_cast<int>(std::ceil(log2n / (2.0 * r + d)));
  if (floor_level) b.j_min = std::max(b.j_min, *floor_level);
  if (b.j_min > b.j_max) {
    throw std::invalid_argument(
        "resolution_bounds: j_min " + std::to_string(b.j_min) + " > j_max " +
        std::to_string(b.j_max) + " after flooring; increase n or lower the floor/r");
  }
  return b;
}

double practical_frame_constant(double d_n) {
  if (!(d_n > 0.0)) throw std::invalid_argument("practical_frame_constant: D_N must be > 0");
  const double rt = std::sqrt(d_n);
  const double m = std::max(10.0 * rt / 3.0, 4.0 / 3.0 + std::sqrt(2.0));
  const double root = 2.0 + 4.0 * m * rt;
  return root * root;
}

EstimatorContext::EstimatorContext(const EstimatorConfig& config, int max_level)
    : config_(config), max_level_(max_level) {
  config_.validate();
  if (config_.quad_order < (1 << (max_level + 4))) {
    std::fprintf(stderr,
                 "stereowave: warning: quadrature order %d below 2^(j_max+4) = %d; "
                 "norms at level %d may be underresolved\n",
                 config_.quad_order, 1 << (max_level + 4), max_level);
  }
  quad_ = product_quadrature(config_.quad_order);
  WaveletTable table =
      WaveletTable::cascade(WaveletFamily::daubechies(config_.wavelet_order), config_.table_depth);
  LocalizedSystem system(table, config_.epsilon, max_level, config_.rule);
  frame_ = std::make_unique<StereographicFrame>(std::move(table), std::move(system),
                                                CutoffFunction(config_.delta));
}

const KernelBound& EstimatorContext::kernel_bound(int j_lo, int j_hi) const {
  std::lock_guard<std::mutex> lock(dn_mutex_);
  if (!dn_ || dn_->j_lo != j_lo || dn_->j_hi != j_hi) {
    const auto grid =
        kernel_bound_grid(config_.dn_grid_points, *frame_, j_lo, j_hi);
    // the slice integrand lives at level j_hi; a 2^{j_hi+4} rule resolves it
    const QuadratureRule dn_quad = product_quadrature(1 << (j_hi + 4));
    dn_ = frame_->compute_DN(dn_quad, j_lo, j_hi, grid);
  }
  return *dn_;
}

double estimate_density(const EstimatorContext& ctx, std::span<const SpherePoint> sample, int j,
                        const SpherePoint& x) {
  const BlockList coeffs = ctx.frame().empirical_coefficients(sample, j);
  return ctx.frame().synthesize(coeffs, x);
}

EstimatorRun lepski_select(const EstimatorContext& ctx, std::span<const SpherePoint> sample,
                           std::span<const SpherePoint> display_grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const EstimatorConfig& cfg = ctx.config();
  const StereographicFrame& frame = ctx.frame();
  const QuadratureRule& quad = ctx.quad();

  if (sample.empty()) throw std::invalid_argument("lepski_select: empty sample");
  std::optional<int> floor;
  if (cfg.floor_level >= 0) floor = cfg.floor_level;
  ResolutionBounds bounds;
  if (sample.size() == 1) {
    // a single observation has no level window; run at the floor level
    const int j = std::max(floor.value_or(frame.j0()), frame.j0());
    bounds = {j, j};
  } else {
    bounds = resolution_bounds(sample.size(), cfg.r, cfg.R, 2, floor);
  }
  if (bounds.j_min < frame.j0()) {
    throw std::invalid_argument("lepski_select: j_min " + std::to_string(bounds.j_min) +
                                " below the system base level j0 = " +
                                std::to_string(frame.j0()));
  }
  if (bounds.j_max > ctx.max_level()) {
    throw std::invalid_argument("lepski_select: j_max " + std::to_string(bounds.j_max) +
                                " above the context max level " +
                                std::to_string(ctx.max_level()));
  }

  EstimatorRun run;
  run.n = sample.size();
  run.j_min = bounds.j_min;
  run.j_max = bounds.j_max;
  run.j0 = frame.j0();

  const int nlevels = bounds.j_max - bounds.j_min + 1;
  std::vector<BlockList> coeffs(nlevels);
  run.node_estimates.resize(nlevels);
  for (int i = 0; i < nlevels; ++i) {
    coeffs[i] = frame.empirical_coefficients(sample, bounds.j_min + i);
    run.node_estimates[i] = frame.synthesize_on(quad, coeffs[i]);
  }

  run.u_from_pilot = cfg.U == 0.0;
  run.u_effective = run.u_from_pilot ? std::max(1.0, run.node_estimates[0].maxCoeff()) : cfg.U;

  if (cfg.c_s > 0.0) {
    run.c_s = cfg.c_s;
    run.d_n = 0.0;
  } else {
    const KernelBound& dn = ctx.kernel_bound(bounds.j_min, bounds.j_max);
    run.d_n = dn.value;
    run.c_s = practical_frame_constant(dn.value);
  }
  const double ufac = std::max(run.u_effective, 1.0);

  for (int a = 0; a < nlevels; ++a) {
    for (int b = a + 1; b < nlevels; ++b) {
      const Eigen::VectorXd diff = run.node_estimates[a] - run.node_estimates[b];
      run.pairwise.push_back(
          {bounds.j_min + a, bounds.j_min + b, l2_norm_squared(quad, diff)});
    }
  }
  auto pair_norm = [&](int j, int l) {
    for (const auto& p : run.pairwise) {
      if (p.j == j && p.l == l) return p.norm_squared;
    }
    throw std::logic_error("lepski_select: missing pairwise norm");
  };

  // j_n = min { j : for all l > j, ||f_n(j) - f_n(l)||^2 <= C (U v 1) 2^{ld} / n }
  run.j_n = bounds.j_max;
  for (int j = bounds.j_min; j <= bounds.j_max; ++j) {
    bool admissible = true;
    for (int l = j + 1; l <= bounds.j_max; ++l) {
      const double thr =
          run.c_s * ufac * std::ldexp(1.0, 2 * l) / static_cast<double>(sample.size());
      if (pair_norm(j, l) > thr) {
        admissible = false;
        break;
      }
    }
    if (admissible) {
      run.j_n = j;
      break;
    }
  }

  if (!display_grid.empty()) {
    QuadratureRule grid;
    grid.nodes.assign(display_grid.begin(), display_grid.end());
    grid.weights = Eigen::VectorXd::Zero(display_grid.size());
    run.grid_estimates.reserve(nlevels);
    for (int i = 0; i < nlevels; ++i) {
      run.grid_estimates.push_back(frame.synthesize_on(grid, coeffs[i]));
    }
  }

  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

std::vector<SpherePoint> kernel_bound_grid(int n, const StereographicFrame& frame, int j_lo,
                                           int j_hi) {
  if (n < 16) throw std::invalid_argument("kernel_bound_grid: need at least 16 points");
  const WaveletTable& table = frame.table();
  const double delta = frame.cutoff().delta();

  const int n_spiral = std::clamp(n, 128, 600);
  const int n_rings = std::clamp(3 * n, 384, 1800);
  std::vector<SpherePoint> pool;
  pool.reserve(static_cast<std::size_t>(n_spiral + n_rings) + 400);

  // Uniform coverage.
  {
    const auto spiral = fibonacci_grid(n_spiral, 0.11);
    pool.insert(pool.end(), spiral.begin(), spiral.end());
  }

  // The slice integral peaks near the equator, where the two projections
  // coincide and both hemispheres load the same cubes; golden-angle rings
  // wind the lattice phases there, with guards at the blend-band edges.
  {
    const double sd = std::sin(delta);
    const double zs[12] = {0.005, -0.02, 0.04,  -0.065, 0.09,       -0.12,
                           0.15,  -0.19, 0.23,  -0.27,  -sd + 0.02, sd - 0.02};
    for (int i = 0; i < n_rings; ++i) {
      const double z = zs[i % 12];
      const double az = 2.0 * pi * 0.6180339887498949 * i;
      const double r = std::sqrt(1.0 - z * z);
      pool.push_back(
          SpherePoint::normalized(Eigen::Vector3d(r * std::cos(az), r * std::sin(az), z)));
    }
  }

  // Points with both projected coordinates at the lattice phase that
  // maximizes sum_k phi(t-k)^2, at |w| ~ 1.
  {
    double tstar = 0.0;
    double best = -1.0;
    const int send = table.family().support_end();
    for (int i = 0; i < 256; ++i) {
      const double frac = (i + 0.5) / 256.0;
      double s = 0.0;
      for (int k = 0; k < send; ++k) {
        const double v = table.phi(frac + k);
        s += v * v;
      }
      if (s > best) {
        best = s;
        tstar = frac;
      }
    }
    for (int j = j_lo; j <= j_hi; ++j) {
      const double scale = std::ldexp(1.0, -j);
      for (int m1 = 0; scale * (m1 + tstar) < 1.15; ++m1) {
        for (int m2 = m1; scale * (m2 + tstar) < 1.15; ++m2) {
          const double a = scale * (m1 + tstar);
          const double b = scale * (m2 + tstar);
          const double norm2 = a * a + b * b;
          if (norm2 < 0.7 || norm2 > 1.4) continue;
          for (const auto& w : {Eigen::Vector2d(a, b), Eigen::Vector2d(-a, b),
                                Eigen::Vector2d(a, -b), Eigen::Vector2d(b, a)}) {
            pool.push_back(stereo_inverse(Hemisphere::Minus, w));
          }
        }
      }
    }
  }

  // Rank by a coarse-quadrature slice; its ranking noise is far smaller
  // than the selection margin.
  const QuadratureRule coarse = product_quadrature(32);
  auto coarse_slice = [&](const SpherePoint& y) {
    double v = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
      v = std::max(v, std::ldexp(frame.kernel_l2_slice(coarse, j, y), -2 * j));
    }
    return v;
  };
  std::vector<std::pair<double, std::size_t>> ranked(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) ranked[i] = {coarse_slice(pool[i]), i};
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });

  // Pattern-search refinement of the leading basins, so the grid sup sits
  // on the local maxima of the slice field instead of between them.
  std::vector<std::pair<double, SpherePoint>> refined;
  std::vector<SpherePoint> seeds;
  for (const auto& [val, idx] : ranked) {
    const SpherePoint& cand = pool[idx];
    bool fresh = true;
    for (const auto& s : seeds) {
      fresh = fresh && (s.coords() - cand.coords()).norm() > 0.05;
    }
    if (!fresh) continue;
    seeds.push_back(cand);
    if (seeds.size() >= 32) break;
  }
  for (const auto& seed : seeds) {
    double z = seed.z();
    double az = std::atan2(seed.y(), seed.x());
    double best = coarse_slice(seed);
    double hz = 0.012, haz = 0.024;
    auto at = [&](double zz, double aa) {
      zz = std::clamp(zz, -0.95, 0.95);
      const double r = std::sqrt(1.0 - zz * zz);
      return SpherePoint::normalized(
          Eigen::Vector3d(r * std::cos(aa), r * std::sin(aa), zz));
    };
    for (int it = 0; it < 8; ++it) {
      bool moved = false;
      for (const auto& [dz, daz] : {std::pair{hz, 0.0}, std::pair{-hz, 0.0},
                                    std::pair{0.0, haz}, std::pair{0.0, -haz}}) {
        const SpherePoint probe = at(z + dz, az + daz);
        const double v = coarse_slice(probe);
        refined.push_back({v, probe});
        if (v > best) {
          best = v;
          z += dz;
          az += daz;
          moved = true;
        }
      }
      if (!moved) {
        hz *= 0.5;
        haz *= 0.5;
      }
    }
    refined.push_back({best, at(z, az)});
  }

  // Final grid: the best refined probes first, then the ranked pool.
  std::sort(refined.begin(), refined.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<SpherePoint> pts;
  pts.reserve(n);
  const int keep_refined = std::min<int>(n / 2, static_cast<int>(refined.size()));
  for (int i = 0; i < keep_refined; ++i) pts.push_back(refined[i].second);
  for (std::size_t i = 0; i < ranked.size() && pts.size() < static_cast<std::size_t>(n); ++i) {
    pts.push_back(pool[ranked[i].second]);
  }
  return pts;
}

}  // namespace stereowave
