#include "entropart/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace entropart {
namespace {

void require_nonempty(const CountTable& counts) {
  if (counts.empty()) throw EstimationError("empty sample");
}

double plug_in_value(const CountTable& counts) {
  const auto n = static_cast<long double>(counts.total());
  CompensatedSum acc;
  for (const auto& e : counts.entries()) {
    const long double p = static_cast<long double>(e.count) / n;
    acc.add(-p * std::log(p));
  }
  return static_cast<double>(acc.value());
}

PartitionSummary partition_profile(const CountTable& counts, const Profile& profile,
                                   unsigned lambda) {
  if (lambda < 1) throw EstimationError("lambda must be >= 1");

  PartitionSummary out;
  out.lambda = lambda;
  for (const auto& e : counts.entries()) {
    if (e.count <= lambda) {
      ++out.s2_size;
    } else {
      ++out.s3_size;
      out.n_s3 += e.count;
      out.s3_counts.push_back(e.count);
    }
  }

  out.masses.reserve(lambda + 1);
  for (Count k = 0; k <= lambda; ++k) {
    if (k > profile.n()) {
      out.masses.push_back({k, 0.0, 0.0, true});
    } else {
      out.masses.push_back(estimate_total_mass(profile, k));
    }
  }

  double p1 = out.masses[0].clamped;
  double p2 = 0.0;
  for (std::size_t k = 1; k < out.masses.size(); ++k) p2 += out.masses[k].clamped;
  double p3 = 0.0;

  if (p1 + p2 > 1.0) {
    const double total = p1 + p2;
    p1 /= total;
    p2 /= total;
    out.rescaled = true;
  } else {
    p3 = std::max(0.0, 1.0 - p1 - p2);
  }

  if (out.s3_size == 0 && p3 > 0.0) {
    const double seen = p1 + p2;
    if (seen > 0.0) {
      p1 += p3 * (p1 / seen);
      p2 += p3 * (p2 / seen);
    } else {
      // S3 empty means every observed symbol is in S2.
      p2 = 1.0;
    }
    p3 = 0.0;
    out.redistributed = true;
  }

  out.p_s1 = p1;
  out.p_s2 = p2;
  out.p_s3 = p3;
  return out;
}

}  // namespace

EntropyEstimate plug_in(const CountTable& counts) {
  require_nonempty(counts);
  EntropyEstimate out;
  out.value = plug_in_value(counts);
  return out;
}

EntropyEstimate miller_madow(const CountTable& counts) {
  require_nonempty(counts);
  const double k = static_cast<double>(counts.distinct());
  const double n = static_cast<double>(counts.total());
  EntropyEstimate out;
  out.value = plug_in_value(counts) + (k - 1.0) / (2.0 * n);
  return out;
}

EntropyEstimate chao_shen(const CountTable& counts) {
  require_nonempty(counts);
  const auto n = static_cast<long double>(counts.total());
  Count singletons = 0;
  for (const auto& e : counts.entries()) singletons += e.count == 1;

  EntropyEstimate out;
  long double coverage = 1.0L - static_cast<long double>(singletons) / n;
  if (singletons == counts.total()) {
    coverage = 1.0L - static_cast<long double>(singletons) / (n + 1.0L);
    out.coverage_fallback = true;
  }

  CompensatedSum acc;
  for (const auto& e : counts.entries()) {
    const long double p = coverage * static_cast<long double>(e.count) / n;
    // 1 - (1 - p)^N
    const long double inclusion = p < 1.0L ? -std::expm1(n * std::log1p(-p)) : 1.0L;
    acc.add(-p * std::log(p) / inclusion);
  }
  out.value = static_cast<double>(acc.value());
  return out;
}

EntropyEstimate shrinkage(const CountTable& counts, std::size_t support_size) {
  require_nonempty(counts);
  if (support_size < 2) throw EstimationError("shrinkage requires support size >= 2");
  if (support_size < counts.distinct()) {
    throw EstimationError("support size is smaller than the number of observed symbols");
  }

  const auto n = static_cast<long double>(counts.total());
  const long double target = 1.0L / static_cast<long double>(support_size);
  const auto unobserved = static_cast<long double>(support_size - counts.distinct());

  long double intensity = 1.0L;
  if (counts.total() > 1) {
    CompensatedSum sum_sq;
    CompensatedSum spread;
    for (const auto& e : counts.entries()) {
      const long double p = static_cast<long double>(e.count) / n;
      sum_sq.add(p * p);
      spread.add((target - p) * (target - p));
    }
    spread.add(unobserved * target * target);
    const long double denom = (n - 1.0L) * spread.value();
    if (denom > 0.0L) intensity = std::clamp((1.0L - sum_sq.value()) / denom, 0.0L, 1.0L);
  }

  auto cell = [](long double p) { return p > 0.0L ? -p * std::log(p) : 0.0L; };
  CompensatedSum acc;
  for (const auto& e : counts.entries()) {
    const long double p = static_cast<long double>(e.count) / n;
    acc.add(cell(intensity * target + (1.0L - intensity) * p));
  }
  acc.add(unobserved * cell(intensity * target));

  EntropyEstimate out;
  out.value = static_cast<double>(acc.value());
  out.shrinkage_intensity = static_cast<double>(intensity);
  return out;
}

PartitionSummary partition_counts(const CountTable& counts, unsigned lambda) {
  require_nonempty(counts);
  return partition_profile(counts, build_profile(counts), lambda);
}

double conditional_mm_s3(const PartitionSummary& summary) {
  if (summary.s3_size == 0 || summary.n_s3 == 0) {
    throw EstimationError("frequent subset is empty");
  }
  const auto n = static_cast<long double>(summary.n_s3);
  CompensatedSum acc;
  for (Count c : summary.s3_counts) {
    const long double p = static_cast<long double>(c) / n;
    acc.add(-p * std::log(p));
  }
  acc.add(static_cast<long double>(summary.s3_size - 1) / (2.0L * n));
  return static_cast<double>(acc.value());
}

EntropyEstimate proposed_entropy(const CountTable& counts, const EstimatorConfig& config) {
  require_nonempty(counts);
  const Profile profile = build_profile(counts);
  const PartitionSummary part = partition_profile(counts, profile, config.lambda);

  // The amplification is keyed on the clamped missing mass, before any
  // rescaling of the subset probabilities.
  const double m0 = part.masses[0].clamped;
  const double a = config.amplification.lookup(m0);
  const UnseenEstimate unseen = estimate_unseen_count(profile, a, config.mu);

  TermBreakdown terms;
  const std::array<double, 3> subset_probs{part.p_s1, part.p_s2, part.p_s3};
  terms.partition_entropy = entropy_kernel(subset_probs);
  if (part.p_s1 > 0.0 && unseen.clamped > 1.0) {
    terms.unseen_term = part.p_s1 * std::log(unseen.clamped);
  }
  if (part.p_s2 > 0.0 && part.s2_size > 1) {
    terms.rare_term = part.p_s2 * std::log(static_cast<double>(part.s2_size));
  }
  if (part.p_s3 > 0.0 && part.s3_size > 0) {
    terms.frequent_term = part.p_s3 * conditional_mm_s3(part);
  }

  ProposedDiagnostics diag;
  diag.lambda = part.lambda;
  diag.amplification = a;
  diag.smoothing_r = unseen.r;
  diag.unseen_raw = unseen.raw;
  diag.unseen_clamped = unseen.clamped;
  for (const auto& m : part.masses) diag.masses.push_back({m.k, m.raw, m.clamped, m.forced_zero});
  diag.s2_size = part.s2_size;
  diag.s3_size = part.s3_size;
  diag.n_s3 = part.n_s3;
  diag.p_s1 = part.p_s1;
  diag.p_s2 = part.p_s2;
  diag.p_s3 = part.p_s3;
  diag.rescaled = part.rescaled;
  diag.redistributed = part.redistributed;

  EntropyEstimate out;
  out.value = terms.sum();
  out.terms = terms;
  out.diagnostics = std::move(diag);
  return out;
}

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::PlugIn: return "plug_in";
    case EstimatorKind::MillerMadow: return "miller_madow";
    case EstimatorKind::ChaoShen: return "chao_shen";
    case EstimatorKind::Shrinkage: return "shrinkage";
    case EstimatorKind::Proposed: return "proposed";
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  for (EstimatorKind kind : kAllEstimators) {
    if (estimator_name(kind) == name) return kind;
  }
  return std::nullopt;
}

EntropyEstimate run_estimator(EstimatorKind kind, const CountTable& counts,
                              const EstimatorConfig& config,
                              std::optional<std::size_t> support_size) {
  switch (kind) {
    case EstimatorKind::PlugIn: return plug_in(counts);
    case EstimatorKind::MillerMadow: return miller_madow(counts);
    case EstimatorKind::ChaoShen: return chao_shen(counts);
    case EstimatorKind::Shrinkage:
      if (!support_size) throw EstimationError("shrinkage requires a support size");
      return shrinkage(counts, *support_size);
    case EstimatorKind::Proposed: return proposed_entropy(counts, config);
  }
  throw EstimationError("unknown estimator");
}

}  // namespace entropart
