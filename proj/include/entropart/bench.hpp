#pragma once

// Monte-Carlo benchmark over sources x sample sizes x estimators.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropart/datagen.hpp"
#include "entropart/estimators.hpp"

namespace entropart {

struct ExperimentGrid {
  std::vector<SourceSpec> sources;
  std::vector<Count> sample_sizes{100, 200, 300, 500, 1000, 2000, 5000};
  std::vector<EstimatorKind> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};
  std::size_t trials = 1000;
  std::uint64_t base_seed = 0;
  EstimatorConfig estimator_config;
  bool keep_trials = false;

  /// Throws EstimationError describing the first violated constraint.
  void validate() const;
};

struct Aggregate {
  double mean = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double variance = 0.0;
};

/// bias = mean - true_h, variance about the mean, rmse^2 = bias^2 + variance.
Aggregate aggregate(std::span<const double> estimates, double true_h);

struct CellResult {
  std::size_t source_index = 0;
  SourceSpec source;
  double true_entropy = 0.0;
  Count n = 0;
  EstimatorKind estimator = EstimatorKind::PlugIn;
  std::size_t trials = 0;    // trials that produced an estimate
  std::size_t failures = 0;  // trials where the estimator threw
  Aggregate stats;
  std::vector<double> estimates;  // per trial, NaN on failure; only with keep_trials
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // source-major, then n, then estimator

  const CellResult& at(std::size_t source_index, Count n, EstimatorKind estimator) const;
};

/// Each source pmf is drawn once; every trial sample is shared by all
/// estimators. `threads` = 0 picks the hardware concurrency. The result does
/// not depend on `threads`.
ExperimentResult run_grid(const ExperimentGrid& grid, unsigned threads = 0);

/// Seed of the sample used by trial `trial` of cell (source, n).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t source_index, Count n,
                         std::size_t trial) noexcept;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kResultsCsvHeader =
    "source,alpha_or_exponent,support,true_entropy_nats,n,estimator,trials,mean,bias,rmse,variance";

void write_results_csv(const ExperimentResult& result, std::ostream& out);
void write_results(const ExperimentResult& result, const std::filesystem::path& path);

/// Per-trial estimates: source_index,n,trial,estimator,estimate.
void write_trials(const ExperimentResult& result, const std::filesystem::path& path);

/// One whitespace-separated file per (source, metric) for rmse and bias,
/// columns `n` then one per estimator. Returns the files written.
std::vector<std::filesystem::path> write_gnuplot(const ExperimentResult& result,
                                                 const std::filesystem::path& dir);

/// Human-readable rmse/bias table.
void print_summary(const ExperimentResult& result, std::ostream& out);

/// `uniform_S1000`, `dirichlet_a0.2_S1000`, `zipf_e1_S1000`.
std::string source_label(const SourceSpec& spec);

}  // namespace entropart
