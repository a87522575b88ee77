#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stereowave/estimator.hpp"

namespace stereowave {

//! One experiment: density, sample sizes, estimator parameters, outputs.
struct ExperimentSpec {
  TestDensity density = TestDensity::F1;
  std::vector<std::size_t> n_values = {100};
  EstimatorConfig config;
  std::filesystem::path out_dir;
  int replicates = 1;

  void validate() const;
};

//! The published experiment profile: DB8, delta = pi/6, eps = 4, r = 3/2,
//! R = 2, level floor 2, effective support rule, threshold constant 1.
EstimatorConfig paper_s5_config();

struct RunRecord {
  std::size_t n = 0;
  int replicate = 0;
  EstimatorRun run;
  double mse = 0.0;
  std::string estimate_csv;  // file name within out_dir
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::filesystem::path summary_path;
  std::filesystem::path density_path;
};

//! Runs the estimator for every (n, replicate), writes per-run estimate
//! CSVs on the display grid, the true-density CSV, a summary JSON and a
//! plot script. Deterministic for a fixed seed.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct RateRow {
  std::size_t n = 0;
  double mean_mse = 0.0;
  int replicates = 0;
};

struct RateStudyResult {
  std::vector<RateRow> rows;
  double loglog_slope = 0.0;
  std::filesystem::path table_path;
  std::filesystem::path summary_path;
};

//! Mean MSE of the adaptive estimator over a sweep of sample sizes and the
//! fitted log-log slope.
RateStudyResult run_rate_study(const ExperimentSpec& spec);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

//! Numerical verification battery of the frame construction at the given
//! configuration (projector laws, isometry, telescoping, kernel bound,
//! Parseval on synthesized functions).
std::vector<CheckLine> run_frame_check(const EstimatorConfig& config);

}  // namespace stereowave
