#include "stereowave/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stereowave/io.hpp"
#include "stereowave/parallel.hpp"

namespace stereowave {

using nlohmann::json;
using std::numbers::pi;

void ExperimentSpec::validate() const {
  config.validate();
  if (n_values.empty()) throw std::invalid_argument("ExperimentSpec: no sample sizes");
  for (std::size_t n : n_values) {
    if (n < 1) throw std::invalid_argument("ExperimentSpec: n must be >= 1");
  }
  if (replicates < 1) throw std::invalid_argument("ExperimentSpec: replicates must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("ExperimentSpec: output directory not set");
}

EstimatorConfig paper_s5_config() {
  EstimatorConfig cfg;
  cfg.r = 1.5;
  cfg.R = 2.0;
  cfg.wavelet_order = 8;
  cfg.delta = pi / 6.0;
  cfg.epsilon = Enlargement::integer(4);
  cfg.rule = SupportRule::effective(1e-3);
  cfg.c_s = 0.2;
  cfg.floor_level = 2;
  cfg.quad_order = 256;
  cfg.table_depth = 10;
  return cfg;
}

namespace {

json config_json(const EstimatorConfig& c) {
  json j;
  j["r"] = c.r;
  j["R"] = c.R;
  j["U"] = c.U == 0.0 ? json("plugin") : json(c.U);
  j["wavelet_order"] = c.wavelet_order;
  j["delta"] = c.delta;
  j["epsilon"] = c.epsilon.value();
  j["support_rule"] =
      c.rule.kind == SupportRule::Kind::Strict ? "strict" : "effective";
  if (c.rule.kind == SupportRule::Kind::Effective) j["support_threshold"] = c.rule.threshold;
  j["c_s"] = c.c_s == 0.0 ? json("auto") : json(c.c_s);
  j["floor_level"] = c.floor_level;
  j["seed"] = c.seed;
  j["quad_order"] = c.quad_order;
  j["table_depth"] = c.table_depth;
  j["dn_grid_points"] = c.dn_grid_points;
  return j;
}

json run_json(const RunRecord& rec) {
  json j;
  j["n"] = rec.n;
  j["replicate"] = rec.replicate;
  j["j_min"] = rec.run.j_min;
  j["j_max"] = rec.run.j_max;
  j["j0"] = rec.run.j0;
  j["j_n"] = rec.run.j_n;
  j["U_effective"] = rec.run.u_effective;
  j["U_from_pilot"] = rec.run.u_from_pilot;
  j["C_S"] = rec.run.c_s;
  if (rec.run.d_n > 0.0) j["D_N"] = rec.run.d_n;
  j["mse"] = rec.mse;
  j["wall_seconds"] = rec.run.wall_seconds;
  json pw = json::array();
  for (const auto& p : rec.run.pairwise) {
    pw.push_back({{"j", p.j}, {"l", p.l}, {"norm_squared", p.norm_squared}});
  }
  j["pairwise_norms"] = pw;
  if (!rec.estimate_csv.empty()) j["estimate_csv"] = rec.estimate_csv;
  return j;
}

const char* density_name(TestDensity d) { return d == TestDensity::F1 ? "f1" : "f2"; }

std::string plot_script(const std::string& density_csv,
                        const std::vector<std::string>& run_csvs) {
  std::ostringstream out;
  out << "#!/usr/bin/env python3\n"
      << "# Renders the estimate panels from the CSV outputs (generated file).\n"
      << "import csv, sys\n"
      << "import matplotlib.pyplot as plt\n"
      << "from mpl_toolkits.mplot3d import Axes3D  # noqa: F401\n\n"
      << "def load(path):\n"
      << "    xs, ys, zs, vs = [], [], [], []\n"
      << "    with open(path) as f:\n"
      << "        for row in csv.DictReader(f):\n"
      << "            xs.append(float(row['x'])); ys.append(float(row['y']))\n"
      << "            zs.append(float(row['z'])); vs.append(float(row['value']))\n"
      << "    return xs, ys, zs, vs\n\n"
      << "panels = [\n";
  for (const auto& f : run_csvs) out << "    ('" << f << "', '" << f << "'),\n";
  out << "    ('" << density_csv << "', 'true density'),\n"
      << "]\n"
      << "fig = plt.figure(figsize=(6, 4 * len(panels)))\n"
      << "for i, (path, title) in enumerate(panels):\n"
      << "    ax = fig.add_subplot(len(panels), 1, i + 1, projection='3d')\n"
      << "    xs, ys, zs, vs = load(path)\n"
      << "    sc = ax.scatter(xs, ys, zs, c=vs, s=1)\n"
      << "    ax.set_title(title)\n"
      << "    fig.colorbar(sc, ax=ax)\n"
      << "plt.tight_layout()\n"
      << "plt.savefig(sys.argv[1] if len(sys.argv) > 1 else 'panels.png', dpi=150)\n";
  return out.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);

  int max_level = 2;
  for (std::size_t n : spec.n_values) {
    std::optional<int> floor;
    if (spec.config.floor_level >= 0) floor = spec.config.floor_level;
    if (n >= 2) {
      max_level = std::max(max_level,
                           resolution_bounds(n, spec.config.r, spec.config.R, 2, floor).j_max);
    }
  }
  EstimatorContext ctx(spec.config, max_level);

  const DensityOnSphere density = test_density(spec.density);
  const auto grid = evaluation_grid();
  const Eigen::VectorXd fquad = values_on(ctx.quad(), density.evaluator);

  // true density on the display grid
  QuadratureRule gridrule;
  gridrule.nodes = grid;
  gridrule.weights = Eigen::VectorXd::Zero(grid.size());
  const Eigen::VectorXd fgrid = values_on(gridrule, density.evaluator);

  ExperimentResult result;
  result.density_path =
      spec.out_dir / (std::string("density_") + density_name(spec.density) + ".csv");
  atomic_write(result.density_path, values_csv(grid, fgrid));

  std::vector<std::string> run_csvs;
  for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
    const std::size_t n = spec.n_values[ni];
    for (int rep = 0; rep < spec.replicates; ++rep) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(ni) << 32) |
                                   static_cast<std::uint64_t>(rep);
      CounterRng rng(spec.config.seed, stream);
      const auto sample = rejection_sample(density, n, rng);

      RunRecord rec;
      rec.n = n;
      rec.replicate = rep;
      rec.run = lepski_select(ctx, sample, grid);

      const int sel = rec.run.j_n - rec.run.j_min;
      const Eigen::VectorXd diff = rec.run.node_estimates[sel] - fquad;
      rec.mse = l2_norm_squared(ctx.quad(), diff);

      std::ostringstream name;
      name << "estimate_" << density_name(spec.density) << "_n" << n << "_r" << rep << ".csv";
      rec.estimate_csv = name.str();
      atomic_write(spec.out_dir / rec.estimate_csv,
                   values_csv(grid, rec.run.grid_estimates[sel]));
      run_csvs.push_back(rec.estimate_csv);
      result.records.push_back(std::move(rec));
    }
  }

  json summary;
  summary["density"] = density_name(spec.density);
  summary["density_mass_quadrature"] = density.quadrature_mass;
  summary["density_sup_bound"] = density.sup_bound;
  summary["config"] = config_json(spec.config);
  summary["replicates"] = spec.replicates;
  summary["n_values"] = spec.n_values;
  summary["display_grid_points"] = grid.size();
  {
    int jlo = result.records.front().run.j_min, jhi = result.records.front().run.j_max;
    for (const auto& r : result.records) {
      jlo = std::min(jlo, r.run.j_min);
      jhi = std::max(jhi, r.run.j_max);
    }
    const KernelBound dn = ctx.kernel_bound(jlo, jhi);
    summary["D_N"] = dn.value;
    summary["D_N_grid_points"] = dn.grid_points;
    summary["C_S_practical"] = practical_frame_constant(dn.value);
    summary["C_S_used"] =
        spec.config.c_s > 0.0 ? spec.config.c_s : practical_frame_constant(dn.value);
  }
  json runs = json::array();
  for (const auto& r : result.records) runs.push_back(run_json(r));
  summary["runs"] = runs;

  result.summary_path = spec.out_dir / "summary.json";
  atomic_write(result.summary_path, summary.dump(2) + "\n");
  atomic_write(spec.out_dir / "plot.py",
               plot_script(result.density_path.filename().string(), run_csvs));
  return result;
}

RateStudyResult run_rate_study(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.n_values.size() < 3) {
    throw std::invalid_argument("run_rate_study: need at least 3 sample sizes");
  }
  if (spec.replicates < 20) {
    throw std::invalid_argument("run_rate_study: need at least 20 replicates");
  }
  std::filesystem::create_directories(spec.out_dir);

  int max_level = 2;
  for (std::size_t n : spec.n_values) {
    std::optional<int> floor;
    if (spec.config.floor_level >= 0) floor = spec.config.floor_level;
    max_level = std::max(max_level,
                         resolution_bounds(n, spec.config.r, spec.config.R, 2, floor).j_max);
  }
  EstimatorContext ctx(spec.config, max_level);
  const DensityOnSphere density = test_density(spec.density);
  const Eigen::VectorXd fquad = values_on(ctx.quad(), density.evaluator);

  RateStudyResult result;
  for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
    const std::size_t n = spec.n_values[ni];
    std::vector<double> mses(spec.replicates, 0.0);
    parallel_for(static_cast<std::size_t>(spec.replicates), [&](std::size_t b, std::size_t e) {
      for (std::size_t rep = b; rep < e; ++rep) {
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint64_t>(rep);
        CounterRng rng(spec.config.seed, stream);
        const auto sample = rejection_sample(density, n, rng);
        const EstimatorRun run = lepski_select(ctx, sample);
        const Eigen::VectorXd diff = run.node_estimates[run.j_n - run.j_min] - fquad;
        mses[rep] = l2_norm_squared(ctx.quad(), diff);
      }
    });
    double mean = 0.0;
    for (double m : mses) mean += m;
    mean /= static_cast<double>(spec.replicates);
    result.rows.push_back({n, mean, spec.replicates});
  }

  // least squares slope of log(mse) on log(n)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(result.rows.size());
  for (const auto& row : result.rows) {
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.mean_mse);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  std::string table = "n,mean_mse,replicates\n";
  for (const auto& row : result.rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%d\n", row.n, row.mean_mse, row.replicates);
    table += buf;
  }
  result.table_path = spec.out_dir / "rate_table.csv";
  atomic_write(result.table_path, table);

  json summary;
  summary["density"] = density_name(spec.density);
  summary["config"] = config_json(spec.config);
  summary["replicates"] = spec.replicates;
  summary["loglog_slope"] = result.loglog_slope;
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"n", row.n}, {"mean_mse", row.mean_mse}});
  }
  summary["rows"] = rows;
  result.summary_path = spec.out_dir / "rate_summary.json";
  atomic_write(result.summary_path, summary.dump(2) + "\n");
  return result;
}

std::vector<CheckLine> run_frame_check(const EstimatorConfig& config) {
  config.validate();
  std::vector<CheckLine> lines;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    lines.push_back({name, pass, detail});
  };
  // The telescoping identity needs levels with the full support inside
  // J_eps, i.e. j >= strict j0, so the battery runs one level above it.
  // Table interpolation error enters the kernel identities at the 4^j scale,
  // so the battery deepens the dyadic grid.
  const int j0s = compute_j0(config.wavelet_order, config.epsilon.value());
  const int max_level = j0s + 1;
  EstimatorConfig battery = config;
  battery.table_depth = std::max(config.table_depth, 16);
  EstimatorContext ctx(battery, max_level);
  const StereographicFrame& frame = ctx.frame();
  const QuadratureRule& quad = ctx.quad();
  const CutoffFunction& cut = frame.cutoff();
  const int j0 = frame.j0();
  char buf[160];

  {  // partition and idempotence of the projection pair on a band of points
    SphereFunction g = [](const SpherePoint& p) {
      return std::cos(3.0 * p.x()) + p.y() * p.z() + 0.25 * p.z() * p.z();
    };
    double worst_part = 0.0, worst_idem = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double z = -0.95 + 1.9 * i / 399.0;
      const double az = 2.5 * i;
      const double r = std::sqrt(1.0 - z * z);
      const SpherePoint x =
          SpherePoint::normalized(Eigen::Vector3d(r * std::cos(az), r * std::sin(az), z));
      const double em = apply_E(Hemisphere::Minus, cut, g, x);
      const double ep = apply_E(Hemisphere::Plus, cut, g, x);
      worst_part = std::max(worst_part, std::abs(em + ep - g(x)));
      SphereFunction eg = [&](const SpherePoint& p) {
        return apply_E(Hemisphere::Minus, cut, g, p);
      };
      worst_idem = std::max(worst_idem,
                            std::abs(apply_E(Hemisphere::Minus, cut, eg, x) - em));
    }
    std::snprintf(buf, sizeof buf, "partition %.3g idempotence %.3g", worst_part, worst_idem);
    add("projector laws", worst_part <= 1e-15 && worst_idem <= 1e-12, buf);
  }

  {  // transport isometry for one frame element
    const LevelRange range = frame.system().level(j0);
    FrameElement el{Hemisphere::Minus, 0, {j0, (range.kmin + range.kmax) / 2,
                                           (range.kmin + range.kmax) / 2}};
    SphereFunction fe = [&](const SpherePoint& p) { return frame.element(el, p); };
    const Eigen::VectorXd vals = values_on(quad, fe);
    const double norm = l2_norm_squared(quad, vals);
    std::snprintf(buf, sizeof buf, "||E T psi||^2 = %.6f (<= 1)", norm);
    add("projection contracts", norm <= 1.0 + 1e-3, buf);
  }

  {  // telescoping at the strict base level
    CounterRng rng(7);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const SpherePoint x = uniform_sphere(rng);
      const SpherePoint y = uniform_sphere(rng);
      const double lhs = frame.kernel(j0s + 1, x, y);
      const double rhs = frame.kernel(j0s, x, y) + frame.detail_kernel(j0s, x, y);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::snprintf(buf, sizeof buf, "max |K_{j+1} - K_j - G_j| = %.3g at j = %d, table depth %d",
                  worst, j0s, battery.table_depth);
    add("telescoping", worst <= 1e-7, buf);
  }

  {  // kernel bound
    const auto grid =
        kernel_bound_grid(config.dn_grid_points, frame, j0, std::min(j0 + 1, max_level));
    const KernelBound dn = frame.compute_DN(quad, j0, std::min(j0 + 1, max_level), grid);
    std::snprintf(buf, sizeof buf, "D_N = %.4f over %d points", dn.value, dn.grid_points);
    add("kernel bound finite", std::isfinite(dn.value) && dn.value > 0.0, buf);
  }

  {  // Parseval identity for a synthesized function
    CounterRng rng(11);
    const LevelRange range = frame.system().level(j0);
    std::vector<FrameElement> els;
    std::vector<double> cs;
    for (int i = 0; i < 40; ++i) {
      FrameElement el;
      el.hemisphere = rng.next_double() < 0.5 ? Hemisphere::Minus : Hemisphere::Plus;
      el.e = i < 20 ? 0 : 1 + static_cast<int>(rng.next_double() * 3.0);
      el.cube.j = j0;
      el.cube.k1 = range.kmin + static_cast<int>(rng.next_double() * range.count());
      el.cube.k2 = range.kmin + static_cast<int>(rng.next_double() * range.count());
      els.push_back(el);
      cs.push_back(rng.next_normal());
    }
    SphereFunction f = [&](const SpherePoint& p) {
      double acc = 0.0;
      for (std::size_t i = 0; i < els.size(); ++i) acc += cs[i] * frame.element(els[i], p);
      return acc;
    };
    const Eigen::VectorXd vals = values_on(quad, f);
    const double norm2 = l2_norm_squared(quad, vals);
    const CoefficientSet coeffs = frame.frame_coefficients(
        quad, {vals.data(), static_cast<std::size_t>(vals.size())}, std::min(j0 + 1, max_level));
    const double sum2 = coeffs.sum_squares();
    const double rel = std::abs(sum2 - norm2) / norm2;
    std::snprintf(buf, sizeof buf, "|sum<f,g>^2 - ||f||^2| / ||f||^2 = %.3g", rel);
    add("parseval identity", rel <= 2e-3, buf);
  }

  return lines;
}

}  // namespace stereowave
