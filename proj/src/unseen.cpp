#include "entropart/unseen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entropart {
namespace {

long double log_choose(Count n, Count k) {
  if (k == 0 || k == n) return 0.0L;
  const auto nn = static_cast<long double>(n);
  const auto kk = static_cast<long double>(k);
  return log_gamma(nn + 1) - log_gamma(kk + 1) - log_gamma(nn - kk + 1);
}

}  // namespace

MassEstimate estimate_total_mass(const Profile& profile, Count k) {
  const Count n = profile.n();
  if (k > n) throw EstimationError("occurrence class exceeds sample size");

  MassEstimate out;
  out.k = k;

  // Only classes above k contribute; absent classes are zero terms.
  const long double log_top = log_choose(n, k);
  CompensatedSum sum;
  for (auto it = profile.classes().upper_bound(k); it != profile.classes().end(); ++it) {
    const Count i = it->first - k;
    long double term;
    if (i == 1) {
      // C(N,k)/C(N,k+1) = (k+1)/(N-k); kept exact so h_1/N = 1 for all singletons.
      term = static_cast<long double>(it->second * (k + 1)) / static_cast<long double>(n - k);
    } else {
      term = static_cast<long double>(it->second) * std::exp(log_top - log_choose(n, it->first));
    }
    sum.add(i % 2 == 1 ? term : -term);
  }
  out.raw = static_cast<double>(sum.value());
  // An empty class has no true mass whatever the series says.
  out.forced_zero = k >= 1 && profile.h(k) == 0;
  out.clamped = out.forced_zero ? 0.0 : std::clamp(out.raw, 0.0, 1.0);
  return out;
}

double smoothing_parameter(Count n, double a) {
  if (!(a > 1.0)) throw EstimationError("smoothing parameter requires a > 1");
  const long double aa = a;
  const long double arg = static_cast<long double>(n) * (aa + 1) * (aa + 1) / (aa - 1);
  const long double r = std::log(arg) / (2 * aa);
  return std::max(0.0, static_cast<double>(r));
}

UnseenEstimate estimate_unseen_count(const Profile& profile, double a, unsigned mu) {
  if (!(a > 0.0) || std::isinf(a)) throw EstimationError("amplification must be finite and > 0");
  if (mu < 1) throw EstimationError("multiplicity must be >= 1");

  UnseenEstimate out;
  out.mu = mu;
  out.a = a;
  const bool limit = a <= 1.0;
  out.r = limit ? std::numeric_limits<double>::infinity() : smoothing_parameter(profile.n(), a);

  const long double log_a = std::log(static_cast<long double>(a));
  CompensatedSum total;
  for (const auto& [i, h] : profile.classes()) {
    const Count jmax = std::min<Count>(mu - 1, i);
    CompensatedSum weight;
    for (Count j = 0; j <= jmax; ++j) {
      long double magnitude;
      if (limit) {
        magnitude = std::pow(static_cast<long double>(a), static_cast<long double>(i));
        if (j > 0) magnitude *= std::exp(log_choose(i, j));
      } else {
        const long double log_tail = log_poisson_tail(out.r, i + j);
        if (std::isinf(log_tail)) continue;
        magnitude = std::exp(static_cast<long double>(i) * log_a + log_choose(i, j) + log_tail);
      }
      // -(-a)^i (-1)^j is positive exactly when i + j is odd.
      weight.add((i + j) % 2 == 1 ? magnitude : -magnitude);
    }
    total.add(weight.value() * static_cast<long double>(h));
  }
  out.raw = static_cast<double>(total.value());
  out.clamped = std::max(out.raw, 0.0);
  return out;
}

AmplificationTable::AmplificationTable(std::vector<Step> steps, double fallback)
    : steps_(std::move(steps)), fallback_(fallback) {
  if (!(fallback_ > 0.0)) throw EstimationError("amplification factors must be > 0");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!(steps_[i].amplification > 0.0)) throw EstimationError("amplification factors must be > 0");
    if (i > 0 && !(steps_[i].threshold < steps_[i - 1].threshold)) {
      throw EstimationError("amplification thresholds must be strictly decreasing");
    }
  }
}

const AmplificationTable& AmplificationTable::standard() {
  static const AmplificationTable table(
      {{0.8, 4e5}, {0.7, 100.0}, {0.55, 8.0}, {0.4, 5.0}, {0.3, 2.0}, {0.15, 1.5}}, 1.0);
  return table;
}

double AmplificationTable::lookup(double m0_hat) const {
  for (const auto& step : steps_) {
    if (m0_hat >= step.threshold) return step.amplification;
  }
  return fallback_;
}

}  // namespace entropart
