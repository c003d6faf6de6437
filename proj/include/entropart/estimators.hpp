#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entropart/core.hpp"
#include "entropart/unseen.hpp"

namespace entropart {

/// Split of the support by observed frequency: S1 unseen, S2 seen 1..lambda
/// times, S3 seen more than lambda times; with estimated subset masses.
struct PartitionSummary {
  unsigned lambda = 3;
  Count s2_size = 0;
  Count s3_size = 0;
  Count n_s3 = 0;
  std::vector<Count> s3_counts;
  std::vector<MassEstimate> masses;  // k = 0..lambda
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_s3 = 0.0;
  bool rescaled = false;
  bool redistributed = false;
};

struct EstimatorConfig {
  unsigned lambda = 3;
  AmplificationTable amplification = AmplificationTable::standard();
  unsigned mu = 1;
};

EntropyEstimate plug_in(const CountTable& counts);

/// Plug-in plus (K-1)/(2N).
EntropyEstimate miller_madow(const CountTable& counts);

/// Coverage-adjusted Horvitz-Thompson estimator. With coverage C = 1 - h1/N
/// and p_i = C n_i / N:  H = -sum p_i ln p_i / (1 - (1 - p_i)^N).
/// When every symbol is a singleton C would be 0; C = 1 - h1/(N+1) is used
/// instead and `coverage_fallback` is set.
EntropyEstimate chao_shen(const CountTable& counts);

/// James-Stein shrinkage of the empirical frequencies towards uniform over
/// `support_size` cells, intensity estimated from the data.
EntropyEstimate shrinkage(const CountTable& counts, std::size_t support_size);

PartitionSummary partition_counts(const CountTable& counts, unsigned lambda);

/// Frequent-subset conditional entropy: Miller-Madow on the S3 counts
/// renormalized by N_S3. Requires a nonempty S3.
double conditional_mm_s3(const PartitionSummary& summary);

/// Partition-based estimator. Always fills `terms` and `diagnostics`.
EntropyEstimate proposed_entropy(const CountTable& counts, const EstimatorConfig& config = {});

enum class EstimatorKind { PlugIn, MillerMadow, ChaoShen, Shrinkage, Proposed };

inline constexpr EstimatorKind kAllEstimators[] = {
    EstimatorKind::PlugIn, EstimatorKind::MillerMadow, EstimatorKind::ChaoShen,
    EstimatorKind::Shrinkage, EstimatorKind::Proposed};

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(std::string_view name);

/// Dispatches by kind. `support_size` is only consulted by shrinkage, which
/// throws without it.
EntropyEstimate run_estimator(EstimatorKind kind, const CountTable& counts,
                              const EstimatorConfig& config,
                              std::optional<std::size_t> support_size);

}  // namespace entropart
