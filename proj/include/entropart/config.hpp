#pragma once

// Benchmark config files.
//
// Line-oriented `key = value` text; `#` starts a comment, blank lines are
// ignored. Scalar keys may appear once; `source` may repeat.
//
//   trials       = <int >= 1>
//   seed         = <uint64>
//   threads      = <int >= 0>            (0: hardware concurrency)
//   lambda       = <int >= 1>
//   mu           = <int >= 1>
//   keep_trials  = true | false
//   sample_sizes = <n>, <n>, ...         (strictly increasing)
//   estimators   = <name>, <name>, ...   (plug_in miller_madow chao_shen shrinkage proposed)
//   amplification = <m0>:<a>, ..., else:<a>   (thresholds strictly decreasing)
//   source       = uniform support=<S>
//   source       = dirichlet alpha=<x> support=<S> [seed=<u64>]
//   source       = zipf exponent=<x> support=<S>
//
// A source without an explicit seed gets one derived from `seed` and its
// position in the file.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entropart/bench.hpp"

namespace entropart {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string origin, std::size_t line, const std::string& message);

  const std::string& origin() const noexcept { return origin_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string origin_;
  std::size_t line_;
};

struct BenchConfig {
  ExperimentGrid grid;
  unsigned threads = 0;
  std::vector<std::optional<std::uint64_t>> explicit_seeds;  // parallel to grid.sources

  /// Sets every source seed: explicit ones as given, the rest derived from
  /// grid.base_seed. Call again after changing base_seed.
  void apply_seeds();
};

BenchConfig parse_bench_config(std::istream& in, std::string_view origin = "<config>");
BenchConfig load_bench_config(const std::string& path);

/// `uniform`, `dirichlet:0.2`, `zipf:1.0`; `:S` may follow to set support.
SourceSpec parse_source_shorthand(std::string_view text, std::size_t default_support);

std::uint64_t default_source_seed(std::uint64_t base_seed, std::size_t index) noexcept;

}  // namespace entropart
