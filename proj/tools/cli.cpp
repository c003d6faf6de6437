#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "entropart/bench.hpp"
#include "entropart/config.hpp"
#include "entropart/datagen.hpp"
#include "entropart/estimators.hpp"

namespace entropart::cli {
namespace {

/// Bad user data; carries an exit code of kData.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Reads all of `path` ("-" for stdin).
std::string slurp(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "'");
  buf << file.rdbuf();
  if (file.bad()) throw IoError("read failed for '" + path + "'");
  return buf.str();
}

CountTable parse_counts(const std::string& text, const std::string& origin) {
  std::istringstream lines(text);
  std::string raw;
  std::vector<Count> counts;
  std::size_t line_no = 0;
  std::size_t blank_run = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) {
      // Blank lines are only tolerated at the end of the file.
      ++blank_run;
      continue;
    }
    if (blank_run > 0) {
      throw DataError(origin + ":" + std::to_string(line_no - blank_run) + ": empty line");
    }
    Count value = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw DataError(origin + ":" + std::to_string(line_no) +
                      ": expected a nonnegative integer count, got '" + line + "'");
    }
    counts.push_back(value);
  }
  return CountTable::from_counts(counts);
}

CountTable parse_tokens(const std::string& text) {
  std::istringstream words(text);
  std::vector<std::string> tokens;
  for (std::string w; words >> w;) tokens.push_back(std::move(w));
  return CountTable::from_tokens(tokens);
}

void print_breakdown(const EntropyEstimate& est, double scale, std::ostream& out) {
  const auto& t = *est.terms;
  const auto& d = *est.diagnostics;
  out << "proposed.term.partition " << fixed6(t.partition_entropy * scale) << '\n'
      << "proposed.term.unseen " << fixed6(t.unseen_term * scale) << '\n'
      << "proposed.term.rare " << fixed6(t.rare_term * scale) << '\n'
      << "proposed.term.frequent " << fixed6(t.frequent_term * scale) << '\n';
  for (const auto& m : d.masses) {
    out << "proposed.m_hat_" << m.k << ' ' << fixed6(m.clamped) << '\n';
    out << "proposed.m_hat_" << m.k << "_raw " << fixed6(m.raw) << '\n';
  }
  out << "proposed.p_s1 " << fixed6(d.p_s1) << '\n'
      << "proposed.p_s2 " << fixed6(d.p_s2) << '\n'
      << "proposed.p_s3 " << fixed6(d.p_s3) << '\n'
      << "proposed.a " << d.amplification << '\n'
      << "proposed.u_hat_1 " << fixed6(d.unseen_clamped) << '\n'
      << "proposed.u_hat_1_raw " << fixed6(d.unseen_raw) << '\n'
      << "proposed.s2_size " << d.s2_size << '\n'
      << "proposed.s3_size " << d.s3_size << '\n'
      << "proposed.n_s3 " << d.n_s3 << '\n';
}

struct EstimateOptions {
  std::string input = "-";
  bool counts_format = false;
  bool tokens_format = false;
  std::vector<std::string> estimators;
  bool all = false;
  std::optional<std::size_t> support;
  unsigned lambda = 3;
  bool bits = false;
  bool breakdown = false;
};

int cmd_estimate(const EstimateOptions& opt, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  std::vector<EstimatorKind> kinds;
  if (opt.all) {
    kinds.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
  } else if (opt.estimators.empty()) {
    kinds.push_back(EstimatorKind::Proposed);
  } else {
    for (const auto& name : opt.estimators) {
      const auto kind = parse_estimator(name);
      if (!kind) {
        err << "error: unknown estimator '" << name << "'\n";
        return kUsage;
      }
      kinds.push_back(*kind);
    }
  }

  const std::string text = slurp(opt.input, in);
  const std::string origin = opt.input == "-" ? "<stdin>" : opt.input;
  const CountTable counts = opt.tokens_format ? parse_tokens(text) : parse_counts(text, origin);
  if (counts.empty()) throw DataError(origin + ": empty sample");

  EstimatorConfig config;
  config.lambda = opt.lambda;
  const double scale = opt.bits ? nats_to_bits(1.0) : 1.0;

  for (EstimatorKind kind : kinds) {
    if (kind == EstimatorKind::Shrinkage && !opt.support) {
      err << "warning: shrinkage needs --support; skipped\n";
      continue;
    }
    EntropyEstimate est;
    try {
      est = run_estimator(kind, counts, config, opt.support);
    } catch (const EstimationError& e) {
      throw DataError(std::string(estimator_name(kind)) + ": " + e.what());
    }
    out << estimator_name(kind) << ' ' << fixed6(est.value * scale) << '\n';
    if (kind == EstimatorKind::Proposed && opt.breakdown) print_breakdown(est, scale, out);
  }
  return kOk;
}

struct GenOptions {
  std::string dist;
  std::optional<double> alpha;
  std::optional<double> exponent;
  std::size_t support = 0;
  Count n = 0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::optional<std::string> pmf_path;
  bool emit_pmf = false;
};

std::uint64_t gen_sample_seed(std::uint64_t seed) { return derive_seed(seed, {0x67656eULL}); }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("write failed for '" + path + "'");
}

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  SourceSpec spec;
  if (opt.dist == "uniform") {
    spec.kind = SourceKind::Uniform;
  } else if (opt.dist == "dirichlet") {
    if (!opt.alpha) {
      err << "error: --dist dirichlet needs --alpha\n";
      return kUsage;
    }
    spec.kind = SourceKind::Dirichlet;
    spec.parameter = *opt.alpha;
  } else if (opt.dist == "zipf") {
    spec.kind = SourceKind::Zipf;
    spec.parameter = opt.exponent.value_or(1.0);
  } else {
    err << "error: unknown --dist '" << opt.dist << "'\n";
    return kUsage;
  }
  spec.support_size = opt.support;
  spec.seed = opt.seed;
  if (opt.n < 1) {
    err << "error: --n must be >= 1\n";
    return kUsage;
  }
  try {
    spec.validate();
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::string pmf_path;
  if (opt.emit_pmf) {
    pmf_path = opt.pmf_path.value_or("");
    if (pmf_path.empty() && opt.out != "-") pmf_path = opt.out + ".pmf";
    if (pmf_path.empty()) {
      err << "error: --emit-pmf needs a path when writing the sample to stdout\n";
      return kUsage;
    }
  }

  const TruePmf pmf = make_source(spec);
  const CountTable sample = draw_sample(pmf, opt.n, gen_sample_seed(opt.seed));

  std::vector<Count> dense(spec.support_size, 0);
  for (const auto& e : sample.entries()) dense[e.symbol] = e.count;
  std::string text;
  text.reserve(dense.size() * 3);
  for (Count c : dense) text += std::to_string(c) + '\n';
  write_text(opt.out, text, out);

  if (opt.emit_pmf) {
    std::string side = "# support " + std::to_string(spec.support_size) + "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", true_entropy(pmf));
    side += std::string("# true_entropy_nats ") + buf + "\n";
    for (double p : pmf.probs()) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      side += std::string(buf) + "\n";
    }
    write_text(pmf_path, side, out);
  }
  return kOk;
}

struct BenchOptions {
  std::optional<std::string> config;
  std::vector<std::string> sources;
  std::size_t support = 1000;
  std::vector<Count> sizes;
  std::vector<std::string> estimators;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out = "results.csv";
  std::optional<std::string> gnuplot;
  std::optional<std::string> per_trial;
  bool quiet = false;
};

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  BenchConfig cfg;
  try {
    if (opt.config) {
      cfg = load_bench_config(*opt.config);
    } else {
      if (opt.sources.empty()) {
        err << "error: bench needs --config or at least one --source\n";
        return kUsage;
      }
      cfg.grid.trials = 200;
      for (const auto& s : opt.sources) {
        cfg.grid.sources.push_back(parse_source_shorthand(s, opt.support));
      }
      cfg.explicit_seeds.assign(cfg.grid.sources.size(), std::nullopt);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (!opt.sizes.empty()) cfg.grid.sample_sizes = opt.sizes;
  if (!opt.estimators.empty()) {
    cfg.grid.estimators.clear();
    for (const auto& name : opt.estimators) {
      const auto kind = parse_estimator(name);
      if (!kind) {
        err << "error: unknown estimator '" << name << "'\n";
        return kUsage;
      }
      cfg.grid.estimators.push_back(*kind);
    }
  }
  if (opt.trials) cfg.grid.trials = *opt.trials;
  if (opt.seed) cfg.grid.base_seed = *opt.seed;
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.per_trial) cfg.grid.keep_trials = true;
  cfg.apply_seeds();
  try {
    cfg.grid.validate();
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_grid(cfg.grid, cfg.threads);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  write_results(result, opt.out);
  if (opt.per_trial) write_trials(result, *opt.per_trial);
  if (opt.gnuplot) write_gnuplot(result, *opt.gnuplot);

  std::size_t failed_cells = 0;
  for (const auto& c : result.cells) {
    if (c.failures > 0) {
      ++failed_cells;
      err << "warning: " << source_label(c.source) << " n=" << c.n << ' '
          << estimator_name(c.estimator) << ": " << c.failures << " of "
          << (c.trials + c.failures) << " trials failed\n";
    }
  }
  if (!opt.quiet) {
    print_summary(result, out);
    out << "\n" << result.cells.size() << " cells written to " << opt.out << " in "
        << fixed6(elapsed.count()) << " s";
    if (failed_cells > 0) out << " (" << failed_cells << " cells with failed trials)";
    out << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Discrete Shannon entropy estimation toolkit", "entropart"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate entropy from counts or tokens");
  estimate->add_option("input", est.input, "Input file, '-' for stdin")->capture_default_str();
  auto* counts_flag = estimate->add_flag("--counts", est.counts_format,
                                         "Input is one count per line (default)");
  auto* tokens_flag = estimate->add_flag("--tokens", est.tokens_format,
                                         "Input is whitespace-separated symbols");
  counts_flag->excludes(tokens_flag);
  auto* est_opt = estimate->add_option("-e,--estimator", est.estimators,
                                       "plug_in, miller_madow, chao_shen, shrinkage, proposed");
  auto* all_flag = estimate->add_flag("--all", est.all, "Run every estimator");
  est_opt->excludes(all_flag);
  est_opt->allow_extra_args(false);
  estimate->add_option("--support", est.support, "Support size (required by shrinkage)")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--lambda", est.lambda, "Rare/frequent threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  estimate->add_flag("--bits", est.bits, "Report bits instead of nats");
  estimate->add_flag("--breakdown", est.breakdown, "Print proposed-estimator terms and diagnostics");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Draw a synthetic sample");
  gen_cmd->add_option("--dist", gen.dist, "uniform, dirichlet or zipf")->required();
  gen_cmd->add_option("--alpha", gen.alpha, "Dirichlet concentration");
  gen_cmd->add_option("--exponent", gen.exponent, "Zipf exponent (default 1)");
  gen_cmd->add_option("--support", gen.support, "Support size")->required();
  gen_cmd->add_option("--n", gen.n, "Sample size")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output counts file, '-' for stdout")->capture_default_str();
  auto* pmf_opt = gen_cmd->add_option("--emit-pmf", gen.pmf_path,
                                      "Write the pmf and its entropy (default <out>.pmf)");
  pmf_opt->expected(0, 1);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a Monte-Carlo benchmark grid");
  auto* config_opt = bench_cmd->add_option("--config", bench.config, "Config file");
  auto* source_opt = bench_cmd->add_option(
      "--source", bench.sources, "uniform | dirichlet:<alpha> | zipf:<exponent> [:<S>]");
  config_opt->excludes(source_opt);
  source_opt->allow_extra_args(false);
  bench_cmd->add_option("--support", bench.support, "Support for --source entries")
      ->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "Sample sizes")->delimiter(',');
  bench_cmd->add_option("--estimators", bench.estimators, "Estimators")->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  bench_cmd->add_option("--out", bench.out, "Results CSV")->capture_default_str();
  bench_cmd->add_option("--gnuplot", bench.gnuplot, "Also write gnuplot tables to this directory");
  bench_cmd->add_option("--per-trial", bench.per_trial, "Also write per-trial estimates");
  bench_cmd->add_flag("--quiet", bench.quiet, "Skip the summary table");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  gen.emit_pmf = pmf_opt->count() > 0;

  try {
    if (*estimate) return cmd_estimate(est, in, out, err);
    if (*gen_cmd) return cmd_gen(gen, out, err);
    return cmd_bench(bench, out, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace entropart::cli
