#pragma once

// Synthetic sources and seeded multinomial sampling.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

#include "entropart/core.hpp"

namespace entropart {

/// Seeded generator used for all synthetic data. Streams are
/// mt19937_64 seeded through splitmix64, so a given seed yields the same
/// draws on every platform. Bump kRngVersion if the derivation changes.
class Rng {
 public:
  static constexpr int kRngVersion = 1;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1).
  double uniform_open();
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic child seed; independent streams for distinct paths.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// ln of a Gamma(shape, 1) variate. Marsaglia-Tsang squeeze/accept for
/// shape >= 1; for shape < 1 the boost G(a) = G(a+1) U^(1/a) is applied in
/// log space so tiny variates do not underflow.
double log_gamma_variate(Rng& rng, double shape);

enum class SourceKind { Uniform, Dirichlet, Zipf };

struct SourceSpec {
  SourceKind kind = SourceKind::Uniform;
  double parameter = 0.0;  // Dirichlet alpha or Zipf exponent; unused for uniform
  std::size_t support_size = 1000;
  std::uint64_t seed = 0;

  static SourceSpec uniform(std::size_t support, std::uint64_t seed = 0) {
    return {SourceKind::Uniform, 0.0, support, seed};
  }
  static SourceSpec dirichlet(double alpha, std::size_t support, std::uint64_t seed) {
    return {SourceKind::Dirichlet, alpha, support, seed};
  }
  static SourceSpec zipf(double exponent, std::size_t support) {
    return {SourceKind::Zipf, exponent, support, 0};
  }

  void validate() const;
  bool operator==(const SourceSpec&) const = default;
};

std::string source_kind_name(SourceKind kind);

TruePmf make_source(const SourceSpec& spec);

double true_entropy(const TruePmf& pmf);

/// `n` independent categorical draws. Symbol ids are pmf indices.
CountTable draw_sample(const TruePmf& pmf, Count n, std::uint64_t seed);

}  // namespace entropart
