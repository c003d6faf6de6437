#pragma once

// Shared data types and numeric kernels for discrete entropy estimation.
// Everything here is in nats (natural log).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entropart {

using Count = std::uint64_t;
using Symbol = std::uint64_t;

/// Raised when an input violates an operation's precondition.
class EstimationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Occurrence counts of the observed symbols of a sample.
///
/// Only observed symbols are stored, so every count is >= 1. Entries are
/// kept sorted by symbol id; the order carries no meaning for estimators.
class CountTable {
 public:
  struct Entry {
    Symbol symbol;
    Count count;
    bool operator==(const Entry&) const = default;
  };

  CountTable() = default;

  /// Index is the symbol id; zero entries are skipped.
  static CountTable from_counts(std::span<const Count> counts);

  /// Interns tokens in order of first appearance.
  static CountTable from_tokens(std::span<const std::string> tokens);

  /// Adds `count` occurrences of `symbol`. A zero count is a no-op.
  void add(Symbol symbol, Count count = 1);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  Count total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return total_ == 0; }

  std::vector<Count> counts() const;

  bool operator==(const CountTable&) const = default;

 private:
  std::vector<Entry> entries_;
  Count total_ = 0;
};

/// Fingerprint of a sample: h(i) is the number of distinct symbols seen
/// exactly i times.
class Profile {
 public:
  Profile(std::map<Count, Count> h, Count n);

  Count h(Count i) const noexcept;
  Count n() const noexcept { return n_; }
  Count distinct() const noexcept { return distinct_; }

  /// Nonzero classes only, ascending by occurrence count.
  const std::map<Count, Count>& classes() const noexcept { return h_; }

  bool operator==(const Profile&) const = default;

 private:
  std::map<Count, Count> h_;
  Count n_ = 0;
  Count distinct_ = 0;
};

/// A known probability mass function over S symbols.
class TruePmf {
 public:
  explicit TruePmf(std::vector<double> probs);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t support_size() const noexcept { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

/// Four terms of the decomposition H = H(P_S) + P1 H1 + P2 H2 + P3 H3.
struct TermBreakdown {
  double partition_entropy = 0.0;
  double unseen_term = 0.0;
  double rare_term = 0.0;
  double frequent_term = 0.0;

  double sum() const noexcept {
    return partition_entropy + unseen_term + rare_term + frequent_term;
  }
};

struct MassDiagnostic {
  Count k = 0;
  double raw = 0.0;
  double clamped = 0.0;
  bool forced_zero = false;
};

/// Audit trail of the partition-based estimator.
struct ProposedDiagnostics {
  unsigned lambda = 0;
  double amplification = 0.0;
  double smoothing_r = 0.0;  // infinity under the a <= 1 limit convention
  double unseen_raw = 0.0;
  double unseen_clamped = 0.0;
  std::vector<MassDiagnostic> masses;  // k = 0..lambda
  Count s2_size = 0;
  Count s3_size = 0;
  Count n_s3 = 0;
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_s3 = 0.0;
  bool rescaled = false;      // P1 + P2 exceeded 1
  bool redistributed = false; // S3 empty, its mass moved to S1/S2
};

struct EntropyEstimate {
  double value = 0.0;
  std::optional<TermBreakdown> terms;
  std::optional<ProposedDiagnostics> diagnostics;
  bool coverage_fallback = false;     // Chao-Shen all-singletons guard used
  std::optional<double> shrinkage_intensity;
};

Profile build_profile(const CountTable& counts);

/// -sum p ln p with 0 ln 0 = 0. Throws on negative entries.
double entropy_kernel(std::span<const double> probs);

/// ln C(n, k). Throws when k > n.
double log_binomial(Count n, Count k);

/// ln Gamma(x) for x > 0, reentrant.
long double log_gamma(long double x);

/// Pr(Poi(r) >= i).
double poisson_tail(double r, Count i);

/// ln Pr(Poi(r) >= i); -inf when the tail is exactly zero (r == 0, i > 0).
long double log_poisson_tail(long double r, Count i);

constexpr double nats_to_bits(double nats) noexcept {
  return nats / 0.69314718055994530941723212145817656807550013436;
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(long double x) noexcept;
  long double value() const noexcept { return sum_ + compensation_; }

 private:
  long double sum_ = 0.0L;
  long double compensation_ = 0.0L;
};

}  // namespace entropart
