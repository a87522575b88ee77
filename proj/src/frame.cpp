#include "stereowave/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "stereowave/parallel.hpp"

namespace stereowave {
namespace {

constexpr int kMaxTaps = 20;  // 2N-1 <= 19 for N <= 10

// Univariate factor values phi/psi(t - k) for the k whose support contains t.
struct AxisLookup {
  int klo = 0;
  int khi = -1;
  double vals[2][kMaxTaps];
};

// Lookups of one projected point at one level, with the transport factor
// r(w) = (1 + |w|^2)/2 = 1/sqrt(J_2(w)).
struct PlaneTabs {
  bool valid = false;
  double rfac = 0.0;
  AxisLookup ax[2];
};

void build_axis(const WaveletTable& table, double t, int kmin, int kmax, bool need_psi,
                AxisLookup& out) {
  const int send = table.family().support_end();
  out.klo = std::max(kmin, static_cast<int>(std::floor(t - send)) + 1);
  out.khi = std::min(kmax, static_cast<int>(std::ceil(t)) - 1);
  for (int k = out.klo; k <= out.khi; ++k) {
    const double arg = t - k;
    out.vals[0][k - out.klo] = table.phi(arg);
    if (need_psi) out.vals[1][k - out.klo] = table.psi(arg);
  }
}

void build_plane_tabs(const WaveletTable& table, int j, const LevelRange& range,
                      const Eigen::Vector2d& w, bool need_psi, PlaneTabs& out) {
  out.valid = true;
  out.rfac = 0.5 * (1.0 + w.squaredNorm());
  build_axis(table, std::ldexp(w[0], j), range.kmin, range.kmax, need_psi, out.ax[0]);
  build_axis(table, std::ldexp(w[1], j), range.kmin, range.kmax, need_psi, out.ax[1]);
}

struct SparseVec {
  std::vector<std::pair<std::int64_t, double>> kv;

  void clear() { kv.clear(); }
};

void push_box(const PlaneTabs& tabs, const LevelRange& range, int e, double coeff, double p2j,
              SparseVec& out) {
  const AxisLookup& a0 = tabs.ax[0];
  const AxisLookup& a1 = tabs.ax[1];
  const double* v0 = a0.vals[e & 1];
  const double* v1 = a1.vals[(e >> 1) & 1];
  const double c = coeff * tabs.rfac * p2j;
  for (int k1 = a0.klo; k1 <= a0.khi; ++k1) {
    const double f1 = c * v0[k1 - a0.klo];
    if (f1 == 0.0) continue;
    const std::int64_t base = range.index(k1, range.kmin);
    for (int k2 = a1.klo; k2 <= a1.khi; ++k2) {
      out.kv.emplace_back(base + (k2 - range.kmin), f1 * v1[k2 - a1.klo]);
    }
  }
}

void sort_merge(SparseVec& v) {
  std::sort(v.kv.begin(), v.kv.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < v.kv.size(); ++i) {
    if (w > 0 && v.kv[w - 1].first == v.kv[i].first) {
      v.kv[w - 1].second += v.kv[i].second;
    } else {
      v.kv[w++] = v.kv[i];
    }
  }
  v.kv.resize(w);
}

double dot(const SparseVec& a, const SparseVec& b) {
  double acc = 0.0;
  std::size_t i = 0, l = 0;
  while (i < a.kv.size() && l < b.kv.size()) {
    const auto ka = a.kv[i].first;
    const auto kb = b.kv[l].first;
    if (ka < kb) {
      ++i;
    } else if (kb < ka) {
      ++l;
    } else {
      acc += a.kv[i].second * b.kv[l].second;
      ++i;
      ++l;
    }
  }
  return acc;
}

// Projected points of one sphere point, with the blend weights. Only the
// projections actually referenced by the nonzero weights are computed, so
// the excluded poles are never projected.
struct PointGeometry {
  BlendWeights bw{};
  bool has_minus = false;
  bool has_plus = false;
  Eigen::Vector2d w_minus;
  Eigen::Vector2d w_plus;
};

PointGeometry point_geometry(const CutoffFunction& cutoff, const SpherePoint& x) {
  PointGeometry g;
  g.bw = blend_weights(cutoff, x.z());
  g.has_minus = g.bw.own[0] != 0.0 || g.bw.mir[1] != 0.0;
  g.has_plus = g.bw.own[1] != 0.0 || g.bw.mir[0] != 0.0;
  if (g.has_minus) g.w_minus = stereo(Hemisphere::Minus, x);
  if (g.has_plus) g.w_plus = stereo(Hemisphere::Plus, x);
  return g;
}

}  // namespace

double CoefficientSet::base_sum_squares() const {
  double acc = 0.0;
  for (const auto& b : blocks) {
    if (b.e == 0) acc += b.sum_squares();
  }
  return acc;
}

double CoefficientSet::detail_sum_squares(int j) const {
  double acc = 0.0;
  for (const auto& b : blocks) {
    if (b.e != 0 && b.j == j) acc += b.sum_squares();
  }
  return acc;
}

double CoefficientSet::sum_squares() const {
  double acc = 0.0;
  for (const auto& b : blocks) acc += b.sum_squares();
  return acc;
}

void CoefficientSet::scale(double a) {
  for (auto& b : blocks) b.values *= a;
}

StereographicFrame::StereographicFrame(WaveletTable table, LocalizedSystem system,
                                       CutoffFunction cutoff)
    : table_(std::move(table)), system_(std::move(system)), cutoff_(cutoff) {
  if (table_.family().order() != system_.order()) {
    throw std::invalid_argument("StereographicFrame: table and system order mismatch");
  }
  // Parseval needs the patch images inside J_{eps/2}.
  const double needed = 2.0 * (std::cos(cutoff_.delta()) / (1.0 - std::sin(cutoff_.delta())) - 1.0);
  if (system_.epsilon() < needed) {
    std::fprintf(stderr,
                 "stereowave: warning: epsilon = %g below 2(cos d/(1-sin d)-1) = %g; "
                 "the system is not a Parseval frame\n",
                 system_.epsilon(), needed);
  }
}

double StereographicFrame::transport(Hemisphere h,
                                     const std::function<double(const Eigen::Vector2d&)>& psi,
                                     const SpherePoint& x, bool compact_support) const {
  const double denom = h == Hemisphere::Minus ? 1.0 - x.z() : 1.0 + x.z();
  if (std::abs(denom) <= 1e-12) {
    if (compact_support) return 0.0;
    throw std::domain_error("transport: point at the excluded pole");
  }
  const Eigen::Vector2d w(x.x() / denom, x.y() / denom);
  return psi(w) * 0.5 * (1.0 + w.squaredNorm());
}

double StereographicFrame::element(const FrameElement& el, const SpherePoint& x) const {
  const LevelRange& range = system_.level(el.cube.j);
  if (!range.contains(el.cube.k1, el.cube.k2)) {
    throw std::out_of_range("element: cube outside D_j");
  }
  const PointGeometry g = point_geometry(cutoff_, x);
  const double p2j = std::ldexp(1.0, el.cube.j);
  auto tensor = [&](const Eigen::Vector2d& w) {
    const double t1 = std::ldexp(w[0], el.cube.j) - el.cube.k1;
    const double t2 = std::ldexp(w[1], el.cube.j) - el.cube.k2;
    const double v = table_.factor(el.e & 1, t1) * table_.factor((el.e >> 1) & 1, t2);
    return v * p2j * 0.5 * (1.0 + w.squaredNorm());
  };
  const bool minus = el.hemisphere == Hemisphere::Minus;
  const double own = g.bw.own_of(el.hemisphere);
  const double mir = g.bw.mir_of(el.hemisphere);
  double value = 0.0;
  if (own != 0.0) value += own * tensor(minus ? g.w_minus : g.w_plus);
  if (mir != 0.0) value += mir * tensor(minus ? g.w_plus : g.w_minus);
  return value;
}

namespace {

// Scaling (or single-vertex) vector of one point at one level: all nonzero
// values E^h(T^h psi^e_I)(x) over I, sorted by cube index.
void build_vector(const WaveletTable& table, const LevelRange& range, const PointGeometry& g,
                  Hemisphere h, int j, int e, SparseVec& out) {
  out.clear();
  const bool minus = h == Hemisphere::Minus;
  const double own = g.bw.own_of(h);
  const double mir = g.bw.mir_of(h);
  const double p2j = std::ldexp(1.0, j);
  const bool need_psi = e != 0;
  PlaneTabs tabs;
  if (own != 0.0) {
    build_plane_tabs(table, j, range, minus ? g.w_minus : g.w_plus, need_psi, tabs);
    push_box(tabs, range, e, own, p2j, out);
  }
  if (mir != 0.0) {
    build_plane_tabs(table, j, range, minus ? g.w_plus : g.w_minus, need_psi, tabs);
    push_box(tabs, range, e, mir, p2j, out);
  }
  if (own != 0.0 && mir != 0.0) sort_merge(out);
}

}  // namespace

double StereographicFrame::kernel(int j, const SpherePoint& x, const SpherePoint& y) const {
  const LevelRange& range = system_.level(j);
  const PointGeometry gx = point_geometry(cutoff_, x);
  const PointGeometry gy = point_geometry(cutoff_, y);
  SparseVec vx, vy;
  double acc = 0.0;
  for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) {
    build_vector(table_, range, gx, h, j, 0, vx);
    build_vector(table_, range, gy, h, j, 0, vy);
    acc += dot(vx, vy);
  }
  return acc;
}

double StereographicFrame::detail_kernel(int j, const SpherePoint& x,
                                         const SpherePoint& y) const {
  const LevelRange& range = system_.level(j);
  const PointGeometry gx = point_geometry(cutoff_, x);
  const PointGeometry gy = point_geometry(cutoff_, y);
  SparseVec vx, vy;
  double acc = 0.0;
  for (int e = 1; e <= 3; ++e) {
    for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) {
      build_vector(table_, range, gx, h, j, e, vx);
      build_vector(table_, range, gy, h, j, e, vy);
      acc += dot(vx, vy);
    }
  }
  return acc;
}

int StereographicFrame::kernel_terms(int j, const SpherePoint& x, const SpherePoint& y) const {
  const LevelRange& range = system_.level(j);
  const PointGeometry gx = point_geometry(cutoff_, x);
  const PointGeometry gy = point_geometry(cutoff_, y);
  SparseVec vx, vy;
  std::vector<std::int64_t> keys;
  for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) {
    build_vector(table_, range, gx, h, j, 0, vx);
    build_vector(table_, range, gy, h, j, 0, vy);
    std::size_t i = 0, l = 0;
    while (i < vx.kv.size() && l < vy.kv.size()) {
      if (vx.kv[i].first < vy.kv[l].first) {
        ++i;
      } else if (vy.kv[l].first < vx.kv[i].first) {
        ++l;
      } else {
        if (vx.kv[i].second * vy.kv[l].second != 0.0) keys.push_back(vx.kv[i].first);
        ++i;
        ++l;
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return static_cast<int>(keys.size());
}

BlockList StereographicFrame::accumulate(std::span<const SpherePoint> points,
                                         std::span<const double> weights,
                                         std::span<const double> fvals,
                                         std::span<const BlockSpec> specs) const {
  BlockList out;
  out.reserve(specs.size());
  std::vector<int> levels;
  for (const auto& s : specs) {
    CoefficientBlock b;
    b.j = s.j;
    b.e = s.e;
    b.hemisphere = s.h;
    b.range = system_.level(s.j);
    b.values = Eigen::VectorXd::Zero(b.range.cells());
    out.push_back(std::move(b));
    if (std::find(levels.begin(), levels.end(), s.j) == levels.end()) levels.push_back(s.j);
  }
  std::sort(levels.begin(), levels.end());

  const bool need_psi = std::any_of(specs.begin(), specs.end(),
                                    [](const BlockSpec& s) { return s.e != 0; });

  // Sequential over points so the accumulation order is deterministic.
  PlaneTabs tabs_m, tabs_p;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double m = weights[i] * fvals[i];
    if (m == 0.0) continue;
    const PointGeometry g = point_geometry(cutoff_, points[i]);
    for (int j : levels) {
      const LevelRange& range = system_.level(j);
      const double p2j = std::ldexp(1.0, j);
      tabs_m.valid = tabs_p.valid = false;
      if (g.has_minus) build_plane_tabs(table_, j, range, g.w_minus, need_psi, tabs_m);
      if (g.has_plus) build_plane_tabs(table_, j, range, g.w_plus, need_psi, tabs_p);
      for (std::size_t bi = 0; bi < specs.size(); ++bi) {
        if (specs[bi].j != j) continue;
        CoefficientBlock& blk = out[bi];
        const bool minus = specs[bi].h == Hemisphere::Minus;
        const PlaneTabs& own_tabs = minus ? tabs_m : tabs_p;
        const PlaneTabs& mir_tabs = minus ? tabs_p : tabs_m;
        const double cown = m * g.bw.own_of(specs[bi].h);
        const double cmir = m * g.bw.mir_of(specs[bi].h);
        auto scatter = [&](const PlaneTabs& t, double c) {
          if (c == 0.0 || !t.valid) return;
          const AxisLookup& a0 = t.ax[0];
          const AxisLookup& a1 = t.ax[1];
          const double* v0 = a0.vals[specs[bi].e & 1];
          const double* v1 = a1.vals[(specs[bi].e >> 1) & 1];
          const double cc = c * t.rfac * p2j;
          double* data = blk.values.data();
          for (int k1 = a0.klo; k1 <= a0.khi; ++k1) {
            const double f1 = cc * v0[k1 - a0.klo];
            if (f1 == 0.0) continue;
            double* row = data + range.index(k1, range.kmin);
            for (int k2 = a1.klo; k2 <= a1.khi; ++k2) {
              row[k2 - range.kmin] += f1 * v1[k2 - a1.klo];
            }
          }
        };
        scatter(own_tabs, cown);
        scatter(mir_tabs, cmir);
      }
    }
  }
  return out;
}

CoefficientSet StereographicFrame::frame_coefficients(const QuadratureRule& quad,
                                                      std::span<const double> fvals,
                                                      int max_level) const {
  if (max_level < j0()) {
    throw std::invalid_argument("frame_coefficients: max_level below j0");
  }
  std::vector<BlockSpec> specs;
  for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) specs.push_back({j0(), 0, h});
  for (int j = j0(); j <= max_level; ++j) {
    for (int e = 1; e <= 3; ++e) {
      for (Hemisphere h : {Hemisphere::Minus, Hemisphere::Plus}) specs.push_back({j, e, h});
    }
  }
  CoefficientSet cs;
  cs.j0 = j0();
  cs.max_level = max_level;
  cs.blocks = accumulate(quad.nodes, {quad.weights.data(), static_cast<std::size_t>(quad.weights.size())},
                         fvals, specs);
  return cs;
}

BlockList StereographicFrame::scaling_coefficients(const QuadratureRule& quad,
                                                   std::span<const double> fvals, int j) const {
  const std::vector<BlockSpec> specs = {{j, 0, Hemisphere::Minus}, {j, 0, Hemisphere::Plus}};
  return accumulate(quad.nodes, {quad.weights.data(), static_cast<std::size_t>(quad.weights.size())},
                    fvals, specs);
}

BlockList StereographicFrame::empirical_coefficients(std::span<const SpherePoint> sample,
                                                     int j) const {
  if (sample.empty()) throw std::invalid_argument("empirical_coefficients: empty sample");
  const std::vector<BlockSpec> specs = {{j, 0, Hemisphere::Minus}, {j, 0, Hemisphere::Plus}};
  const std::vector<double> w(sample.size(), 1.0 / static_cast<double>(sample.size()));
  const std::vector<double> ones(sample.size(), 1.0);
  return accumulate(sample, w, ones, specs);
}

double StereographicFrame::synthesize(const BlockList& blocks, const SpherePoint& x) const {
  const PointGeometry g = point_geometry(cutoff_, x);
  double value = 0.0;
  PlaneTabs tabs_m, tabs_p;
  int tabs_level = std::numeric_limits<int>::min();
  bool tabs_psi = false;
  for (const auto& blk : blocks) {
    const LevelRange& range = blk.range;
    const bool need_psi = blk.e != 0;
    if (blk.j != tabs_level || (need_psi && !tabs_psi)) {
      tabs_level = blk.j;
      tabs_psi = need_psi;
      tabs_m.valid = tabs_p.valid = false;
      if (g.has_minus) build_plane_tabs(table_, blk.j, range, g.w_minus, need_psi, tabs_m);
      if (g.has_plus) build_plane_tabs(table_, blk.j, range, g.w_plus, need_psi, tabs_p);
    }
    const double p2j = std::ldexp(1.0, blk.j);
    const bool minus = blk.hemisphere == Hemisphere::Minus;
    auto gather = [&](const PlaneTabs& t, double c) -> double {
      if (c == 0.0 || !t.valid) return 0.0;
      const AxisLookup& a0 = t.ax[0];
      const AxisLookup& a1 = t.ax[1];
      const double* v0 = a0.vals[blk.e & 1];
      const double* v1 = a1.vals[(blk.e >> 1) & 1];
      const double* data = blk.values.data();
      double acc = 0.0;
      for (int k1 = a0.klo; k1 <= a0.khi; ++k1) {
        const double f1 = v0[k1 - a0.klo];
        if (f1 == 0.0) continue;
        const double* row = data + range.index(k1, range.kmin);
        double inner = 0.0;
        for (int k2 = a1.klo; k2 <= a1.khi; ++k2) {
          inner += row[k2 - range.kmin] * v1[k2 - a1.klo];
        }
        acc += f1 * inner;
      }
      return c * t.rfac * p2j * acc;
    };
    value += gather(minus ? tabs_m : tabs_p, g.bw.own_of(blk.hemisphere));
    value += gather(minus ? tabs_p : tabs_m, g.bw.mir_of(blk.hemisphere));
  }
  return value;
}

Eigen::VectorXd StereographicFrame::synthesize_on(const QuadratureRule& quad,
                                                  const BlockList& blocks) const {
  Eigen::VectorXd out(quad.size());
  parallel_for(quad.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = synthesize(blocks, quad.nodes[i]);
  });
  return out;
}

namespace {

// One point's scaling values over a dense index box; lets the kernel slice
// gather products without building and sorting a sparse vector per node.
struct DensePatch {
  int lo1 = 0, hi1 = -1, lo2 = 0, hi2 = -1;
  std::vector<double> vals;

  bool empty() const { return hi1 < lo1; }
  int n2() const { return hi2 - lo2 + 1; }
  const double* row(int k1) const { return vals.data() + static_cast<std::size_t>(k1 - lo1) * n2(); }
};

DensePatch splat_patch(const SparseVec& v, const LevelRange& range) {
  DensePatch p;
  if (v.kv.empty()) return p;
  const int n = range.count();
  auto unpack = [&](std::int64_t key) {
    return std::pair<int, int>{range.kmin + static_cast<int>(key / n),
                               range.kmin + static_cast<int>(key % n)};
  };
  auto [a1, a2] = unpack(v.kv.front().first);
  p.lo1 = p.hi1 = a1;
  p.lo2 = p.hi2 = a2;
  for (const auto& [key, val] : v.kv) {
    const auto [k1, k2] = unpack(key);
    p.lo1 = std::min(p.lo1, k1);
    p.hi1 = std::max(p.hi1, k1);
    p.lo2 = std::min(p.lo2, k2);
    p.hi2 = std::max(p.hi2, k2);
  }
  p.vals.assign(static_cast<std::size_t>(p.hi1 - p.lo1 + 1) * (p.hi2 - p.lo2 + 1), 0.0);
  for (const auto& [key, val] : v.kv) {
    const auto [k1, k2] = unpack(key);
    p.vals[static_cast<std::size_t>(k1 - p.lo1) * p.n2() + (k2 - p.lo2)] = val;
  }
  return p;
}

// sum over the intersection of the point's box at w with the patch of
// coeff * r(w) * 2^j * phi(t1-k1) phi(t2-k2) * patch(k1,k2)
double gather_patch(const WaveletTable& table, int j, const Eigen::Vector2d& w, double coeff,
                    const DensePatch& patch) {
  const int send = table.family().support_end();
  const double t1 = std::ldexp(w[0], j);
  const double t2 = std::ldexp(w[1], j);
  const int lo1 = std::max(patch.lo1, static_cast<int>(std::floor(t1 - send)) + 1);
  const int hi1 = std::min(patch.hi1, static_cast<int>(std::ceil(t1)) - 1);
  if (hi1 < lo1) return 0.0;
  const int lo2 = std::max(patch.lo2, static_cast<int>(std::floor(t2 - send)) + 1);
  const int hi2 = std::min(patch.hi2, static_cast<int>(std::ceil(t2)) - 1);
  if (hi2 < lo2) return 0.0;
  double f2[kMaxTaps];
  for (int k2 = lo2; k2 <= hi2; ++k2) f2[k2 - lo2] = table.phi(t2 - k2);
  double acc = 0.0;
  for (int k1 = lo1; k1 <= hi1; ++k1) {
    const double f1 = table.phi(t1 - k1);
    if (f1 == 0.0) continue;
    const double* row = patch.row(k1) + (lo2 - patch.lo2);
    double inner = 0.0;
    for (int k2 = lo2; k2 <= hi2; ++k2) inner += f2[k2 - lo2] * row[k2 - lo2];
    acc += f1 * inner;
  }
  const double rfac = 0.5 * (1.0 + w.squaredNorm());
  return coeff * rfac * std::ldexp(acc, j);
}

}  // namespace

double StereographicFrame::kernel_l2_slice(const QuadratureRule& quad, int j,
                                           const SpherePoint& y) const {
  const LevelRange& range = system_.level(j);
  const PointGeometry gy = point_geometry(cutoff_, y);
  SparseVec vy;
  DensePatch patch[2];
  for (int h = 0; h < 2; ++h) {
    build_vector(table_, range, gy, h == 0 ? Hemisphere::Minus : Hemisphere::Plus, j, 0, vy);
    patch[h] = splat_patch(vy, range);
  }

  return parallel_sum(quad.size(), 2048, [&](std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const PointGeometry gx = point_geometry(cutoff_, quad.nodes[i]);
      double K = 0.0;
      for (int h = 0; h < 2; ++h) {
        if (patch[h].empty()) continue;
        const Hemisphere hemi = h == 0 ? Hemisphere::Minus : Hemisphere::Plus;
        const bool minus = h == 0;
        const double own = gx.bw.own_of(hemi);
        const double mir = gx.bw.mir_of(hemi);
        if (own != 0.0) K += gather_patch(table_, j, minus ? gx.w_minus : gx.w_plus, own, patch[h]);
        if (mir != 0.0) K += gather_patch(table_, j, minus ? gx.w_plus : gx.w_minus, mir, patch[h]);
      }
      acc += quad.weights[i] * K * K;
    }
    return acc;
  });
}

KernelBound StereographicFrame::compute_DN(const QuadratureRule& quad, int j_lo, int j_hi,
                                           std::span<const SpherePoint> points) const {
  if (j_lo > j_hi) throw std::invalid_argument("compute_DN: empty level range");
  KernelBound bound;
  bound.j_lo = j_lo;
  bound.j_hi = j_hi;
  bound.grid_points = static_cast<int>(points.size());
  bound.quad_order = static_cast<int>(std::sqrt(static_cast<double>(quad.size()) / 2.0) + 0.5);
  double best = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double scale = std::ldexp(1.0, -2 * j);  // 2^{-jd}, d = 2
    for (const auto& y : points) {
      best = std::max(best, scale * kernel_l2_slice(quad, j, y));
    }
  }
  bound.value = best;
  return bound;
}

double StereographicFrame::approximation_error(const QuadratureRule& quad,
                                               std::span<const double> fvals, int j) const {
  const BlockList coeffs = scaling_coefficients(quad, fvals, j);
  const Eigen::VectorXd proj = synthesize_on(quad, coeffs);
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double d = fvals[i] - proj[i];
    acc += quad.weights[i] * d * d;
  }
  return std::sqrt(std::max(0.0, acc));
}

double besov_norm(const CoefficientSet& coeffs, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("besov_norm: s must be > 0");
  if (coeffs.max_level < coeffs.j0) throw std::invalid_argument("besov_norm: truncation below j0");
  double best = std::pow(2.0, coeffs.j0 * s) * std::sqrt(coeffs.base_sum_squares());
  for (int j = coeffs.j0; j <= coeffs.max_level; ++j) {
    best = std::max(best, std::pow(2.0, j * s) * std::sqrt(coeffs.detail_sum_squares(j)));
  }
  return best;
}

Eigen::VectorXd values_on(const QuadratureRule& quad, const SphereFunction& f) {
  Eigen::VectorXd out(quad.size());
  parallel_for(quad.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f(quad.nodes[i]);
  });
  return out;
}

double l2_norm_squared(const QuadratureRule& quad, const Eigen::VectorXd& values) {
  return quad.weights.dot(values.cwiseAbs2());
}

}  // namespace stereowave
