#pragma once

// Estimators for properties of the symbols a sample did not reveal.

#include <span>
#include <vector>

#include "entropart/core.hpp"

namespace entropart {

struct MassEstimate {
  Count k = 0;
  double raw = 0.0;
  double clamped = 0.0;
  bool forced_zero = false;
};

struct UnseenEstimate {
  unsigned mu = 1;
  double a = 1.0;
  double r = 0.0;  // +inf when a <= 1 (limit convention)
  double raw = 0.0;
  double clamped = 0.0;
};

/// Minimal-bias estimate of the total mass of symbols seen exactly k times:
///
///   m_k = sum_{i=1}^{N-k} (-1)^(i+1) h_{k+i} C(N,k) / C(N,k+i)
///
/// Raw values may fall outside [0,1]; `clamped` does not. For k >= 1 an
/// empty class (h_k = 0) has zero mass and is reported as forced_zero.
MassEstimate estimate_total_mass(const Profile& profile, Count k);

/// r = ln(n (a+1)^2 / (a-1)) / (2a), floored at 0. Requires a > 1.
double smoothing_parameter(Count n, double a);

/// Smoothed Good-Toulmin estimate of the number of unseen symbols that would
/// appear at least `mu` times in a sample `a` times larger.
///
/// For a <= 1 the r -> infinity limit is used: every Poisson tail is 1 and
/// the weights reduce to the plain Good-Toulmin alternating coefficients.
UnseenEstimate estimate_unseen_count(const Profile& profile, double a, unsigned mu);

/// Step function from a clamped missing-mass estimate to an amplification
/// factor. Thresholds are left-closed: m0 >= threshold selects that step.
class AmplificationTable {
 public:
  struct Step {
    double threshold;
    double amplification;
  };

  /// `steps` must have strictly decreasing thresholds; below the last
  /// threshold `fallback` applies.
  AmplificationTable(std::vector<Step> steps, double fallback);

  /// 4e5 / 100 / 8 / 5 / 2 / 1.5 at {0.8, 0.7, 0.55, 0.4, 0.3, 0.15}, else 1.
  static const AmplificationTable& standard();

  double lookup(double m0_hat) const;

  std::span<const Step> steps() const noexcept { return steps_; }
  double fallback() const noexcept { return fallback_; }

 private:
  std::vector<Step> steps_;
  double fallback_;
};

inline double lookup_amplification(double m0_hat) {
  return AmplificationTable::standard().lookup(m0_hat);
}

}  // namespace entropart
