#include "entropart/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

namespace entropart {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Parse failures inside a line are reported through this and rethrown with
// the line number attached.
struct LineError {
  std::string message;
};

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw LineError{"invalid " + std::string(what) + " '" + std::string(text) + "'"};
  }
  return value;
}

bool parse_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw LineError{"expected true or false, got '" + std::string(text) + "'"};
}

SourceKind parse_kind(std::string_view text) {
  if (text == "uniform") return SourceKind::Uniform;
  if (text == "dirichlet") return SourceKind::Dirichlet;
  if (text == "zipf") return SourceKind::Zipf;
  throw LineError{"unknown source kind '" + std::string(text) + "'"};
}

struct ParsedSource {
  SourceSpec spec;
  std::optional<std::uint64_t> seed;
};

ParsedSource parse_source_line(std::string_view value) {
  const auto words = split_ws(value);
  if (words.empty()) throw LineError{"source needs a kind"};
  ParsedSource out;
  out.spec.kind = parse_kind(words[0]);
  bool have_support = false;
  bool have_param = false;
  const char* param_key = out.spec.kind == SourceKind::Dirichlet ? "alpha"
                          : out.spec.kind == SourceKind::Zipf    ? "exponent"
                                                                 : nullptr;
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto eq = words[i].find('=');
    if (eq == std::string_view::npos) {
      throw LineError{"expected key=value in source, got '" + std::string(words[i]) + "'"};
    }
    const auto key = words[i].substr(0, eq);
    const auto val = words[i].substr(eq + 1);
    if (key == "support") {
      out.spec.support_size = parse_number<std::size_t>(val, "support");
      have_support = true;
    } else if (key == "seed" && out.spec.kind == SourceKind::Dirichlet) {
      out.seed = parse_number<std::uint64_t>(val, "seed");
    } else if (param_key && key == param_key) {
      out.spec.parameter = parse_number<double>(val, param_key);
      have_param = true;
    } else {
      throw LineError{"unknown source attribute '" + std::string(key) + "' for " +
                      std::string(words[0])};
    }
  }
  if (!have_support) throw LineError{"source needs support=<S>"};
  if (param_key && !have_param) throw LineError{"source needs " + std::string(param_key) + "=<x>"};
  try {
    out.spec.validate();
  } catch (const EstimationError& e) {
    throw LineError{e.what()};
  }
  return out;
}

AmplificationTable parse_amplification(std::string_view value) {
  std::vector<AmplificationTable::Step> steps;
  std::optional<double> fallback;
  for (auto item : split(value, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw LineError{"amplification entries look like <m0>:<a>, got '" + std::string(item) + "'"};
    }
    const auto lhs = trim(item.substr(0, colon));
    const double a = parse_number<double>(trim(item.substr(colon + 1)), "amplification");
    if (lhs == "else") {
      fallback = a;
    } else {
      steps.push_back({parse_number<double>(lhs, "threshold"), a});
    }
  }
  if (!fallback) throw LineError{"amplification needs an else:<a> entry"};
  try {
    return AmplificationTable(std::move(steps), *fallback);
  } catch (const EstimationError& e) {
    throw LineError{e.what()};
  }
}

}  // namespace

ConfigError::ConfigError(std::string origin, std::size_t line, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message),
      origin_(std::move(origin)),
      line_(line) {}

std::uint64_t default_source_seed(std::uint64_t base_seed, std::size_t index) noexcept {
  return derive_seed(base_seed, {0x736f75726365ULL, index});
}

void BenchConfig::apply_seeds() {
  explicit_seeds.resize(grid.sources.size());
  for (std::size_t i = 0; i < grid.sources.size(); ++i) {
    grid.sources[i].seed = explicit_seeds[i].value_or(default_source_seed(grid.base_seed, i));
  }
}

BenchConfig parse_bench_config(std::istream& in, std::string_view origin) {
  BenchConfig cfg;
  cfg.grid.trials = 200;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    last_line = line_no;

    try {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw LineError{"expected key = value"};
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (value.empty()) throw LineError{"missing value for '" + std::string(key) + "'"};

      if (key == "source") {
        auto parsed = parse_source_line(value);
        cfg.grid.sources.push_back(parsed.spec);
        cfg.explicit_seeds.push_back(parsed.seed);
        continue;
      }
      if (!seen.insert(std::string(key)).second) {
        throw LineError{"duplicate key '" + std::string(key) + "'"};
      }
      if (key == "trials") {
        cfg.grid.trials = parse_number<std::size_t>(value, "trials");
        if (cfg.grid.trials < 1) throw LineError{"trials must be >= 1"};
      } else if (key == "seed") {
        cfg.grid.base_seed = parse_number<std::uint64_t>(value, "seed");
      } else if (key == "threads") {
        cfg.threads = parse_number<unsigned>(value, "threads");
      } else if (key == "lambda") {
        cfg.grid.estimator_config.lambda = parse_number<unsigned>(value, "lambda");
        if (cfg.grid.estimator_config.lambda < 1) throw LineError{"lambda must be >= 1"};
      } else if (key == "mu") {
        cfg.grid.estimator_config.mu = parse_number<unsigned>(value, "mu");
        if (cfg.grid.estimator_config.mu < 1) throw LineError{"mu must be >= 1"};
      } else if (key == "keep_trials") {
        cfg.grid.keep_trials = parse_bool(value);
      } else if (key == "sample_sizes") {
        cfg.grid.sample_sizes.clear();
        for (auto item : split(value, ',')) {
          const auto n = parse_number<Count>(item, "sample size");
          if (n < 1) throw LineError{"sample sizes must be >= 1"};
          if (!cfg.grid.sample_sizes.empty() && n <= cfg.grid.sample_sizes.back()) {
            throw LineError{"sample sizes must be strictly increasing"};
          }
          cfg.grid.sample_sizes.push_back(n);
        }
      } else if (key == "estimators") {
        cfg.grid.estimators.clear();
        for (auto item : split(value, ',')) {
          const auto kind = parse_estimator(item);
          if (!kind) throw LineError{"unknown estimator '" + std::string(item) + "'"};
          if (std::find(cfg.grid.estimators.begin(), cfg.grid.estimators.end(), *kind) !=
              cfg.grid.estimators.end()) {
            throw LineError{"duplicate estimator '" + std::string(item) + "'"};
          }
          cfg.grid.estimators.push_back(*kind);
        }
      } else if (key == "amplification") {
        cfg.grid.estimator_config.amplification = parse_amplification(value);
      } else {
        throw LineError{"unknown key '" + std::string(key) + "'"};
      }
    } catch (const LineError& e) {
      throw ConfigError(std::string(origin), line_no, e.message);
    }
  }
  if (cfg.grid.sources.empty()) {
    throw ConfigError(std::string(origin), last_line, "config defines no source");
  }
  cfg.apply_seeds();
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open config '" + path + "'");
  return parse_bench_config(in, path);
}

SourceSpec parse_source_shorthand(std::string_view text, std::size_t default_support) {
  const auto parts = split(text, ':');
  try {
    SourceSpec spec;
    spec.kind = parse_kind(parts[0]);
    spec.support_size = default_support;
    std::size_t next = 1;
    if (spec.kind != SourceKind::Uniform) {
      if (parts.size() < 2) throw LineError{"source '" + std::string(text) + "' needs a parameter"};
      spec.parameter = parse_number<double>(parts[1], "source parameter");
      next = 2;
    }
    if (parts.size() > next) spec.support_size = parse_number<std::size_t>(parts[next], "support");
    if (parts.size() > next + 1) throw LineError{"too many fields in '" + std::string(text) + "'"};
    spec.validate();
    return spec;
  } catch (const LineError& e) {
    throw EstimationError(e.message);
  }
}

}  // namespace entropart
