// Command line front end: estimate | rate-study | frame-check | sample.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "stereowave/experiment.hpp"
#include "stereowave/io.hpp"

namespace {

using namespace stereowave;

struct CommonOpts {
  std::string profile;
  std::string density = "f1";
  std::vector<std::size_t> n_values;
  std::uint64_t seed = 1;
  std::string out_dir;
  int quad_order = -1;
  int replicates = -1;
  std::string support_rule;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--profile", o.profile, "named parameter profile (paper-s5)");
  cmd->add_option("--density", o.density, "target density: f1 or f2")
      ->check(CLI::IsMember({"f1", "f2"}));
  cmd->add_option("--n", o.n_values, "sample size(s)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--quad-order", o.quad_order, "quadrature order Q")->check(CLI::Range(2, 4096));
  cmd->add_option("--replicates", o.replicates, "independent replicates")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--support-rule", o.support_rule, "strict or effective")
      ->check(CLI::IsMember({"strict", "effective"}));
}

ExperimentSpec build_spec(const CommonOpts& o) {
  ExperimentSpec spec;
  if (!o.profile.empty()) {
    if (o.profile != "paper-s5") {
      throw CLI::ValidationError("--profile", "unknown profile '" + o.profile + "'");
    }
    spec.config = paper_s5_config();
  } else {
    spec.config = EstimatorConfig{};
    spec.config.delta = std::numbers::pi / 6.0;
  }
  spec.density = o.density == "f2" ? TestDensity::F2 : TestDensity::F1;
  if (!o.n_values.empty()) spec.n_values = o.n_values;
  spec.config.seed = o.seed;
  if (o.quad_order > 0) spec.config.quad_order = o.quad_order;
  if (o.replicates > 0) spec.replicates = o.replicates;
  if (!o.support_rule.empty()) {
    spec.config.rule = o.support_rule == "strict" ? SupportRule::strict()
                                                  : SupportRule::effective(1e-3);
  }
  spec.out_dir = o.out_dir;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stereographic-wavelet density estimation on the sphere"};
  app.require_subcommand(1);

  CommonOpts est_opts, rate_opts, check_opts, sample_opts;

  CLI::App* est = app.add_subcommand("estimate", "run the adaptive estimator");
  add_common(est, est_opts);

  CLI::App* rate = app.add_subcommand("rate-study", "MSE against sample size sweep");
  add_common(rate, rate_opts);

  CLI::App* check = app.add_subcommand("frame-check", "verify the frame construction numerically");
  add_common(check, check_opts);

  CLI::App* sample = app.add_subcommand("sample", "draw a sample and write it as CSV");
  add_common(sample, sample_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      ExperimentSpec spec = build_spec(est_opts);
      if (spec.out_dir.empty()) throw CLI::ValidationError("--out", "output directory required");
      const ExperimentResult res = run_experiment(spec);
      for (const auto& rec : res.records) {
        std::printf("n=%zu replicate=%d j_n=%d mse=%.6g -> %s\n", rec.n, rec.replicate,
                    rec.run.j_n, rec.mse, rec.estimate_csv.c_str());
      }
      std::printf("summary: %s\n", res.summary_path.string().c_str());
    } else if (rate->parsed()) {
      ExperimentSpec spec = build_spec(rate_opts);
      if (spec.out_dir.empty()) throw CLI::ValidationError("--out", "output directory required");
      if (rate_opts.replicates <= 0) spec.replicates = 20;
      const RateStudyResult res = run_rate_study(spec);
      for (const auto& row : res.rows) {
        std::printf("n=%zu mean_mse=%.6g\n", row.n, row.mean_mse);
      }
      std::printf("log-log slope: %.4f\nsummary: %s\n", res.loglog_slope,
                  res.summary_path.string().c_str());
    } else if (check->parsed()) {
      ExperimentSpec spec = build_spec(check_opts);
      const auto lines = run_frame_check(spec.config);
      bool all = true;
      for (const auto& line : lines) {
        std::printf("[%s] %s: %s\n", line.pass ? "PASS" : "FAIL", line.name.c_str(),
                    line.detail.c_str());
        all = all && line.pass;
      }
      return all ? 0 : 1;
    } else if (sample->parsed()) {
      ExperimentSpec spec = build_spec(sample_opts);
      if (spec.out_dir.empty()) throw CLI::ValidationError("--out", "output directory required");
      std::filesystem::create_directories(spec.out_dir);
      const DensityOnSphere density = test_density(spec.density);
      for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
        CounterRng rng(spec.config.seed, static_cast<std::uint64_t>(ni) << 32);
        const auto pts = rejection_sample(density, spec.n_values[ni], rng);
        const std::filesystem::path path =
            spec.out_dir / ("sample_" + std::string(spec.density == TestDensity::F2 ? "f2" : "f1") +
                            "_n" + std::to_string(spec.n_values[ni]) + ".csv");
        atomic_write(path, points_csv(pts));
        std::printf("wrote %s\n", path.string().c_str());
      }
    }
  } catch (const CLI::Error& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
