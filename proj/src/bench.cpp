#include "entropart/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace entropart {
namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("write failed for '" + path.string() + "'");
}

}  // namespace

void ExperimentGrid::validate() const {
  if (sources.empty()) throw EstimationError("grid has no sources");
  for (const auto& s : sources) s.validate();
  if (sample_sizes.empty()) throw EstimationError("grid has no sample sizes");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 1) throw EstimationError("sample sizes must be >= 1");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1]) {
      throw EstimationError("sample sizes must be strictly increasing");
    }
  }
  if (estimators.empty()) throw EstimationError("grid has no estimators");
  if (std::set(estimators.begin(), estimators.end()).size() != estimators.size()) {
    throw EstimationError("duplicate estimator in grid");
  }
  if (trials < 1) throw EstimationError("trials must be >= 1");
  if (estimator_config.lambda < 1) throw EstimationError("lambda must be >= 1");
}

Aggregate aggregate(std::span<const double> estimates, double true_h) {
  if (estimates.empty()) throw EstimationError("no estimates to aggregate");
  const auto n = static_cast<long double>(estimates.size());
  CompensatedSum sum;
  for (double x : estimates) sum.add(x);
  const long double mean = sum.value() / n;
  CompensatedSum sq;
  for (double x : estimates) sq.add((x - mean) * (x - mean));

  Aggregate out;
  out.mean = static_cast<double>(mean);
  out.bias = static_cast<double>(mean - true_h);
  out.variance = static_cast<double>(sq.value() / n);
  out.rmse = std::sqrt(out.bias * out.bias + out.variance);
  return out;
}

const CellResult& ExperimentResult::at(std::size_t source_index, Count n,
                                       EstimatorKind estimator) const {
  for (const auto& c : cells) {
    if (c.source_index == source_index && c.n == n && c.estimator == estimator) return c;
  }
  throw std::out_of_range("no such experiment cell");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t source_index, Count n,
                         std::size_t trial) noexcept {
  return derive_seed(base_seed, {0x747269616cULL, source_index, n, trial});
}

ExperimentResult run_grid(const ExperimentGrid& grid, unsigned threads) {
  grid.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.trials));

  const std::size_t n_est = grid.estimators.size();
  ExperimentResult result;

  for (std::size_t si = 0; si < grid.sources.size(); ++si) {
    const SourceSpec& spec = grid.sources[si];
    const TruePmf pmf = make_source(spec);
    const double truth = true_entropy(pmf);

    for (Count n : grid.sample_sizes) {
      // estimates[e * trials + t]; each slot written by exactly one worker.
      std::vector<double> estimates(n_est * grid.trials, std::numeric_limits<double>::quiet_NaN());
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        for (std::size_t t = next.fetch_add(1); t < grid.trials; t = next.fetch_add(1)) {
          const CountTable sample = draw_sample(pmf, n, trial_seed(grid.base_seed, si, n, t));
          for (std::size_t e = 0; e < n_est; ++e) {
            try {
              estimates[e * grid.trials + t] =
                  run_estimator(grid.estimators[e], sample, grid.estimator_config, spec.support_size)
                      .value;
            } catch (const std::exception&) {
              // left as NaN and counted as a failure below
            }
          }
        }
      };
      if (threads == 1) {
        work();
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
      }

      for (std::size_t e = 0; e < n_est; ++e) {
        CellResult cell;
        cell.source_index = si;
        cell.source = spec;
        cell.true_entropy = truth;
        cell.n = n;
        cell.estimator = grid.estimators[e];
        const auto begin = estimates.begin() + static_cast<std::ptrdiff_t>(e * grid.trials);
        std::vector<double> ok;
        ok.reserve(grid.trials);
        for (auto it = begin; it != begin + static_cast<std::ptrdiff_t>(grid.trials); ++it) {
          if (std::isfinite(*it)) ok.push_back(*it);
        }
        cell.trials = ok.size();
        cell.failures = grid.trials - ok.size();
        if (!ok.empty()) {
          cell.stats = aggregate(ok, truth);
        } else {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          cell.stats = {nan, nan, nan, nan};
        }
        if (grid.keep_trials) {
          cell.estimates.assign(begin, begin + static_cast<std::ptrdiff_t>(grid.trials));
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

std::string source_label(const SourceSpec& spec) {
  std::string label = source_kind_name(spec.kind);
  if (spec.kind == SourceKind::Dirichlet) label += "_a" + fmt6(spec.parameter);
  if (spec.kind == SourceKind::Zipf) label += "_e" + fmt6(spec.parameter);
  return label + "_S" + std::to_string(spec.support_size);
}

void write_results_csv(const ExperimentResult& result, std::ostream& out) {
  out << kResultsCsvHeader << '\n';
  for (const auto& c : result.cells) {
    out << source_kind_name(c.source.kind) << ','
        << (c.source.kind == SourceKind::Uniform ? std::string() : fmt6(c.source.parameter)) << ','
        << c.source.support_size << ',' << fmt6(c.true_entropy) << ',' << c.n << ','
        << estimator_name(c.estimator) << ',' << c.trials << ',' << fmt6(c.stats.mean) << ','
        << fmt6(c.stats.bias) << ',' << fmt6(c.stats.rmse) << ',' << fmt6(c.stats.variance)
        << '\n';
  }
}

void write_results(const ExperimentResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_results_csv(result, out);
  finish_output(out, path);
}

void write_trials(const ExperimentResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "source_index,n,trial,estimator,estimate\n";
  char buf[64];
  for (const auto& c : result.cells) {
    for (std::size_t t = 0; t < c.estimates.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", c.estimates[t]);
      out << c.source_index << ',' << c.n << ',' << t << ',' << estimator_name(c.estimator) << ','
          << buf << '\n';
    }
  }
  finish_output(out, path);
}

std::vector<std::filesystem::path> write_gnuplot(const ExperimentResult& result,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create '" + dir.string() + "': " + ec.message());

  // source index -> n -> cells in estimator order
  std::map<std::size_t, std::map<Count, std::vector<const CellResult*>>> by_source;
  for (const auto& c : result.cells) by_source[c.source_index][c.n].push_back(&c);

  std::vector<std::filesystem::path> written;
  for (const auto& [si, rows] : by_source) {
    const auto& first_row = rows.begin()->second;
    const std::string label = std::to_string(si) + "_" + source_label(first_row.front()->source);
    for (const char* metric : {"rmse", "bias"}) {
      const auto path = dir / (label + "_" + metric + ".dat");
      auto out = open_output(path);
      out << "# n";
      for (const auto* c : first_row) out << ' ' << estimator_name(c->estimator);
      out << '\n';
      for (const auto& [n, cells] : rows) {
        out << n;
        for (const auto* c : cells) {
          out << ' ' << fmt6(metric[0] == 'r' ? c->stats.rmse : c->stats.bias);
        }
        out << '\n';
      }
      finish_output(out, path);
      written.push_back(path);
    }
  }
  return written;
}

void print_summary(const ExperimentResult& result, std::ostream& out) {
  std::ios saved(nullptr);
  saved.copyfmt(out);
  std::size_t last_source = std::numeric_limits<std::size_t>::max();
  for (const auto& c : result.cells) {
    if (c.source_index != last_source) {
      last_source = c.source_index;
      out << "\n" << source_label(c.source) << "  (H = " << std::fixed << std::setprecision(4)
          << c.true_entropy << " nats)\n";
      out << std::left << std::setw(8) << "n" << std::setw(14) << "estimator" << std::right
          << std::setw(10) << "mean" << std::setw(10) << "bias" << std::setw(10) << "rmse"
          << std::setw(8) << "failed" << '\n';
    }
    out << std::left << std::setw(8) << c.n << std::setw(14) << estimator_name(c.estimator)
        << std::right << std::fixed << std::setprecision(4) << std::setw(10) << c.stats.mean
        << std::setw(10) << c.stats.bias << std::setw(10) << c.stats.rmse << std::setw(8)
        << c.failures << '\n';
  }
  out.copyfmt(saved);
}

}  // namespace entropart
