#include "entropart/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace entropart {

CountTable CountTable::from_counts(std::span<const Count> counts) {
  CountTable table;
  table.entries_.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    table.entries_.push_back({static_cast<Symbol>(i), counts[i]});
    table.total_ += counts[i];
  }
  return table;
}

CountTable CountTable::from_tokens(std::span<const std::string> tokens) {
  std::unordered_map<std::string_view, Symbol> ids;
  std::vector<Count> counts;
  for (const auto& token : tokens) {
    auto [it, inserted] = ids.try_emplace(token, counts.size());
    if (inserted) counts.push_back(0);
    ++counts[it->second];
  }
  return from_counts(counts);
}

void CountTable::add(Symbol symbol, Count count) {
  if (count == 0) return;
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), symbol,
      [](const Entry& e, Symbol s) { return e.symbol < s; });
  if (it != entries_.end() && it->symbol == symbol) {
    it->count += count;
  } else {
    entries_.insert(it, {symbol, count});
  }
  total_ += count;
}

std::vector<Count> CountTable::counts() const {
  std::vector<Count> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.count);
  return out;
}

Profile::Profile(std::map<Count, Count> h, Count n) : h_(std::move(h)), n_(n) {
  Count weighted = 0;
  for (auto it = h_.begin(); it != h_.end();) {
    if (it->first == 0) throw EstimationError("profile class 0 is not observable");
    if (it->second == 0) {
      it = h_.erase(it);
      continue;
    }
    weighted += it->first * it->second;
    distinct_ += it->second;
    ++it;
  }
  if (weighted != n_) throw EstimationError("profile does not sum to sample size");
}

Count Profile::h(Count i) const noexcept {
  auto it = h_.find(i);
  return it == h_.end() ? 0 : it->second;
}

TruePmf::TruePmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw EstimationError("empty pmf");
  long double total = 0.0L;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw EstimationError("pmf entries must be nonnegative");
    total += p;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12) {
    throw EstimationError("pmf does not sum to 1");
  }
}

Profile build_profile(const CountTable& counts) {
  if (counts.empty()) throw EstimationError("empty sample");
  std::map<Count, Count> h;
  for (const auto& e : counts.entries()) ++h[e.count];
  return Profile(std::move(h), counts.total());
}

double entropy_kernel(std::span<const double> probs) {
  CompensatedSum acc;
  for (double p : probs) {
    if (!(p >= 0.0)) throw EstimationError("negative probability in entropy kernel");
    if (p > 0.0) acc.add(-static_cast<long double>(p) * std::log(static_cast<long double>(p)));
  }
  return static_cast<double>(acc.value());
}

long double log_gamma(long double x) {
  if (!(x > 0.0L)) throw EstimationError("log_gamma requires x > 0");
  return boost::math::lgamma(x);
}

double log_binomial(Count n, Count k) {
  if (k > n) throw EstimationError("log_binomial requires k <= n");
  if (k == 0 || k == n) return 0.0;
  const auto nn = static_cast<long double>(n);
  const auto kk = static_cast<long double>(k);
  return static_cast<double>(log_gamma(nn + 1) - log_gamma(kk + 1) - log_gamma(nn - kk + 1));
}

long double log_poisson_tail(long double r, Count i) {
  if (!(r >= 0.0L) || std::isinf(r)) throw EstimationError("poisson rate must be finite and >= 0");
  if (i == 0) return 0.0L;
  if (r == 0.0L) return -std::numeric_limits<long double>::infinity();

  const auto ii = static_cast<long double>(i);
  if (ii > r) {
    // pmf(i) * sum_{m>=0} r^m i! / (i+m)!
    const long double log_pmf = ii * std::log(r) - r - log_gamma(ii + 1);
    long double term = 1.0L;
    long double series = 1.0L;
    for (Count m = 1; m < 1'000'000; ++m) {
      term *= r / (ii + static_cast<long double>(m));
      series += term;
      if (term < series * std::numeric_limits<long double>::epsilon()) break;
    }
    return log_pmf + std::log(series);
  }
  // Upper tail is at least ~1/2 here, so the complement is well conditioned.
  CompensatedSum cdf;
  long double log_term = -r;
  for (Count k = 0; k < i; ++k) {
    if (k > 0) log_term += std::log(r) - std::log(static_cast<long double>(k));
    cdf.add(std::exp(log_term));
  }
  const long double lower = std::min(cdf.value(), 1.0L);
  return std::log1p(-lower);
}

double poisson_tail(double r, Count i) {
  const long double lt = log_poisson_tail(r, i);
  return std::clamp(static_cast<double>(std::exp(lt)), 0.0, 1.0);
}

void CompensatedSum::add(long double x) noexcept {
  const long double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace entropart
