#include "entropart/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace entropart {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(base ^ (static_cast<std::uint64_t>(Rng::kRngVersion) << 56));
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double log_gamma_variate(Rng& rng, double shape) {
  if (!(shape > 0.0) || std::isinf(shape)) throw EstimationError("gamma shape must be finite and > 0");
  if (shape < 1.0) {
    const double boosted = log_gamma_variate(rng, shape + 1.0);
    return boosted + std::log(rng.uniform_open()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

void SourceSpec::validate() const {
  if (support_size < 2) throw EstimationError("support size must be >= 2");
  if (kind != SourceKind::Uniform && (!(parameter > 0.0) || std::isinf(parameter))) {
    throw EstimationError(kind == SourceKind::Dirichlet ? "dirichlet alpha must be > 0"
                                                        : "zipf exponent must be > 0");
  }
}

std::string source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::Uniform: return "uniform";
    case SourceKind::Dirichlet: return "dirichlet";
    case SourceKind::Zipf: return "zipf";
  }
  return "unknown";
}

namespace {

std::vector<double> normalize_logs(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(logs.size());
  long double total = 0.0L;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    w[i] = std::exp(logs[i] - top);
    total += w[i];
  }
  for (double& x : w) x = static_cast<double>(x / total);
  return w;
}

}  // namespace

TruePmf make_source(const SourceSpec& spec) {
  spec.validate();
  const std::size_t s = spec.support_size;
  switch (spec.kind) {
    case SourceKind::Uniform:
      return TruePmf(std::vector<double>(s, 1.0 / static_cast<double>(s)));
    case SourceKind::Dirichlet: {
      Rng rng(derive_seed(spec.seed, {0x646972ULL}));
      std::vector<double> logs(s);
      for (double& g : logs) g = log_gamma_variate(rng, spec.parameter);
      return TruePmf(normalize_logs(logs));
    }
    case SourceKind::Zipf: {
      std::vector<double> logs(s);
      for (std::size_t i = 0; i < s; ++i) {
        logs[i] = -spec.parameter * std::log(static_cast<double>(i + 1));
      }
      return TruePmf(normalize_logs(logs));
    }
  }
  throw EstimationError("unknown source kind");
}

double true_entropy(const TruePmf& pmf) { return entropy_kernel(pmf.probs()); }

CountTable draw_sample(const TruePmf& pmf, Count n, std::uint64_t seed) {
  if (n < 1) throw EstimationError("sample size must be >= 1");
  const auto probs = pmf.probs();
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  const double total = cdf.back();

  Rng rng(seed);
  std::vector<Count> counts(probs.size(), 0);
  for (Count t = 0; t < n; ++t) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto idx = static_cast<std::size_t>(std::min(it, cdf.end() - 1) - cdf.begin());
    while (idx > 0 && probs[idx] == 0.0) --idx;  // u rounded up to the total
    ++counts[idx];
  }
  return CountTable::from_counts(counts);
}

}  // namespace entropart
