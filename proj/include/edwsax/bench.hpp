#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "edwsax/distance.hpp"
#include "edwsax/errors.hpp"
#include "edwsax/stats.hpp"
#include "edwsax/symbolizer.hpp"
#include "edwsax/timeseries.hpp"
#include "edwsax/ucr.hpp"

namespace edwsax {

enum class Method { sax, edwsax };

inline std::string_view method_name(Method m) {
  return m == Method::sax ? "sax" : "edwsax";
}

inline Method method_from_name(std::string_view name) {
  if (name == "sax") return Method::sax;
  if (name == "edwsax") return Method::edwsax;
  throw Error("unknown method: " + std::string(name));
}

enum class Normalization { per_series, per_dataset };

inline std::string_view normalization_name(Normalization n) {
  return n == Normalization::per_series ? "per-series" : "per-dataset";
}

inline Normalization normalization_from_name(std::string_view name) {
  if (name == "per-series") return Normalization::per_series;
  if (name == "per-dataset") return Normalization::per_dataset;
  throw Error("unknown normalization: " + std::string(name));
}

struct BenchConfig {
  Method method = Method::edwsax;
  Kernel kernel{KernelKind::epanechnikov};
  BandwidthRule bandwidth = BandwidthRule::isj();
  EstimateOn estimate_on = EstimateOn::raw;
  WordPolicy word_policy{};
  Normalization normalization = Normalization::per_series;
  std::uint64_t seed = 42;
  std::size_t max_pairs = 10000;
  bool parallel = true;
};

struct ReportRow {
  std::string dataset;
  Method method = Method::edwsax;
  int alphabet_size = 0;
  std::string metric;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_pairs = 0;
  std::size_t skipped = 0;
};

struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  std::vector<std::string> skipped_datasets;

  bool partial() const noexcept { return !skipped_datasets.empty(); }
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

struct RunningStat {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  double mean_value() const {
    return n > 0 ? mean : std::numeric_limits<double>::quiet_NaN();
  }

  //! Sample standard deviation; 0 for a single observation.
  double stddev() const {
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    if (n == 1) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1));
  }
};

inline TimeSeries normalize_with(const TimeSeries& s, double mu, double sigma) {
  std::vector<double> out(s.size(), 0.0);
  if (sigma >= 1e-12) {
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - mu) / sigma;
  }
  return TimeSeries(std::move(out));
}

//! Test split normalized either per series or with pooled train-split
//! statistics, so the evaluation scale never leaks from the test data.
inline std::vector<TimeSeries> normalized_test_series(const Dataset& ds,
                                                      Normalization norm) {
  std::vector<TimeSeries> out;
  out.reserve(ds.test.size());
  if (norm == Normalization::per_dataset) {
    std::vector<double> pool;
    for (const LabeledSeries& s : ds.train) {
      pool.insert(pool.end(), s.series.begin(), s.series.end());
    }
    const double mu = pool.empty() ? 0.0 : mean_of(pool);
    const double sigma = pool.empty() ? 0.0 : stddev_of(pool, mu);
    for (const LabeledSeries& s : ds.test) out.push_back(normalize_with(s.series, mu, sigma));
  } else {
    for (const LabeledSeries& s : ds.test) out.push_back(znormalize(s.series));
  }
  return out;
}

//! All distinct index pairs when they fit the cap, otherwise a seeded uniform
//! subsample without replacement, sorted for a deterministic merge order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_pairs(
    std::size_t m, std::size_t cap, std::mt19937_64& rng) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  const std::size_t total = m < 2 ? 0 : m * (m - 1) / 2;
  if (total <= cap) {
    pairs.reserve(total);
    for (std::uint32_t i = 0; i + 1 < m; ++i) {
      for (std::uint32_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(cap * 2);
  pairs.reserve(cap);
  while (pairs.size() < cap) {
    auto i = static_cast<std::uint32_t>(rng() % m);
    auto j = static_cast<std::uint32_t>(rng() % m);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (seen.insert(static_cast<std::uint64_t>(i) * m + j).second) {
      pairs.emplace_back(i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

struct DatasetOutcome {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
};

//! Fits the training density once per dataset (shared across alphabet sizes).
//! Returns nothing when the pool is flat or the method does not need one; a
//! failed ISJ fit falls back to Silverman with a warning instead of skipping
//! the dataset.
inline std::optional<DensityModel> fit_training_density(
    const Dataset& ds, const BenchConfig& cfg, bool needed, TrainingInfo& info,
    std::vector<std::string>& warnings) {
  info.kernel = cfg.kernel;
  info.bandwidth_rule = cfg.bandwidth;
  if (!needed) return std::nullopt;

  std::vector<TimeSeries> train;
  train.reserve(ds.train.size());
  for (const LabeledSeries& s : ds.train) train.push_back(s.series);
  const std::vector<double> pool =
      pool_training_points(train, cfg.estimate_on, cfg.word_policy);
  info.sample_count = pool.size();

  const auto [min_it, max_it] = std::minmax_element(pool.begin(), pool.end());
  if (pool.size() < 2 || !(*max_it - *min_it > 0.0)) {
    warnings.push_back(ds.name + ": flat training pool, using the normal reference");
    return std::nullopt;
  }
  std::optional<DensityModel> density;
  try {
    density.emplace(fit_density(pool, cfg.kernel, cfg.bandwidth));
  } catch (const IsjConvergenceFailure& e) {
    warnings.push_back(ds.name + ": " + e.what() + "; retrying with silverman");
    info.bandwidth_rule = BandwidthRule::silverman();
    density.emplace(fit_density(pool, cfg.kernel, info.bandwidth_rule));
  }
  info.bandwidth = density->bandwidth();
  return density;
}

inline SymbolizerModel make_bench_model(const std::optional<DensityModel>& density,
                                        Method method, int a,
                                        const TrainingInfo& info) {
  if (method == Method::sax || !density.has_value()) {
    return gaussian_model(a, info);
  }
  return model_from_density(*density, a, info);
}

inline DatasetOutcome tlb_on_dataset(const Dataset& ds, std::span<const int> alphabets,
                                     const BenchConfig& cfg) {
  DatasetOutcome out;
  out.warnings = validate_dataset(ds);
  if (ds.train.empty()) throw Error(ds.name + ": empty train split");
  if (ds.test.empty()) throw Error(ds.name + ": empty test split");

  TrainingInfo info;
  const std::optional<DensityModel> density = fit_training_density(
      ds, cfg, cfg.method == Method::edwsax, info, out.warnings);

  const std::vector<TimeSeries> test = normalized_test_series(ds, cfg.normalization);
  const std::size_t m = test.size();

  std::mt19937_64 rng(cfg.seed ^ fnv1a(ds.name));
  const auto pairs = sample_pairs(m, cfg.max_pairs, rng);

  // The same pairs are scored at every alphabet size, so rows differ only in
  // the encoding, not in the sample.
  std::vector<double> pair_ed(pairs.size(), -1.0);
  std::size_t unusable = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const TimeSeries& q = test[pairs[k].first];
    const TimeSeries& c = test[pairs[k].second];
    if (q.size() != c.size()) {
      ++unusable;
      continue;
    }
    const double ed = euclidean(q, c);
    if (ed == 0.0) {
      ++unusable;
      continue;
    }
    pair_ed[k] = ed;
  }

  std::vector<std::optional<PaaSeries>> paa_cache(m);
  auto paa_of = [&](std::uint32_t idx) -> const PaaSeries& {
    if (!paa_cache[idx]) {
      const TimeSeries& s = test[idx];
      paa_cache[idx] = paa(s, cfg.word_policy.word_length_for(s.size()));
    }
    return *paa_cache[idx];
  };

  for (const int a : alphabets) {
    const SymbolizerModel model = make_bench_model(density, cfg.method, a, info);
    std::vector<std::optional<SymbolWord>> words(m);
    auto word_of = [&](std::uint32_t idx) -> const SymbolWord& {
      if (!words[idx]) words[idx] = symbolize(model, paa_of(idx));
      return *words[idx];
    };

    RunningStat stat;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (pair_ed[k] < 0.0) continue;
      const SymbolWord& wq = word_of(pairs[k].first);
      const SymbolWord& wc = word_of(pairs[k].second);
      const double lower =
          mindist(wq, wc, model.lookup(), test[pairs[k].first].size());
      stat.add(lower / pair_ed[k]);
    }
    out.rows.push_back(ReportRow{ds.name, cfg.method, a, "tlb", stat.mean_value(),
                                 stat.stddev(), stat.n, unusable});
  }
  return out;
}

inline DatasetOutcome reconstruction_on_dataset(const Dataset& ds,
                                                std::span<const int> alphabets,
                                                std::span<const Method> methods,
                                                const BenchConfig& cfg) {
  DatasetOutcome out;
  out.warnings = validate_dataset(ds);
  if (ds.train.empty()) throw Error(ds.name + ": empty train split");
  if (ds.test.empty()) throw Error(ds.name + ": empty test split");

  const bool wants_edwsax =
      std::find(methods.begin(), methods.end(), Method::edwsax) != methods.end();
  TrainingInfo info;
  const std::optional<DensityModel> density =
      fit_training_density(ds, cfg, wants_edwsax, info, out.warnings);

  const std::vector<TimeSeries> test = normalized_test_series(ds, cfg.normalization);

  for (const Method method : methods) {
    for (const int a : alphabets) {
      const SymbolizerModel model = make_bench_model(density, method, a, info);
      RunningStat stat;
      for (const TimeSeries& z : test) {
        const std::size_t w = cfg.word_policy.word_length_for(z.size());
        const SymbolWord word = symbolize(model, paa(z, w));
        stat.add(rmse(z, reconstruct(model, word, z.size())));
      }
      out.rows.push_back(ReportRow{ds.name, method, a, "rmse", stat.mean_value(),
                                   stat.stddev(), stat.n, 0});
    }
  }
  return out;
}

inline std::vector<int> checked_alphabets(std::span<const int> alphabets) {
  if (alphabets.empty()) throw Error("experiment: no alphabet sizes given");
  std::vector<int> sorted(alphabets.begin(), alphabets.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const int a : sorted) check_alphabet(a);
  return sorted;
}

//! Runs fn over every dataset, in parallel when asked, and merges the
//! outcomes in dataset order so scheduling never changes the report. A
//! dataset whose evaluation throws is reported as skipped, not fatal.
template <typename Fn>
void run_per_dataset(std::span<const Dataset> datasets, bool parallel,
                     ExperimentReport& report, Fn fn) {
  if (datasets.empty()) throw Error("experiment: no datasets given");

  std::vector<std::future<DatasetOutcome>> futures;
  if (parallel && datasets.size() > 1) {
    futures.reserve(datasets.size());
    for (const Dataset& ds : datasets) {
      futures.push_back(std::async(std::launch::async, fn, std::cref(ds)));
    }
  }

  for (std::size_t i = 0; i < datasets.size(); ++i) {
    try {
      DatasetOutcome outcome =
          futures.empty() ? fn(datasets[i]) : futures[i].get();
      for (ReportRow& row : outcome.rows) report.rows.push_back(std::move(row));
      for (std::string& w : outcome.warnings) report.warnings.push_back(std::move(w));
    } catch (const std::exception& e) {
      report.skipped_datasets.push_back(datasets[i].name);
      report.warnings.push_back(datasets[i].name + ": skipped: " + e.what());
    }
  }
}

inline std::string word_policy_echo(const WordPolicy& policy) {
  return policy.kind == WordPolicy::Kind::segment_size
             ? "segment-size:" + std::to_string(policy.value)
             : "word-length:" + std::to_string(policy.value);
}

inline void echo_config(ExperimentReport& report, std::string_view experiment,
                        const BenchConfig& cfg) {
  report.config.emplace_back("experiment", std::string(experiment));
  report.config.emplace_back("kernel", std::string(cfg.kernel.name()));
  report.config.emplace_back("bandwidth", cfg.bandwidth.name());
  report.config.emplace_back("estimate-on", std::string(estimate_on_name(cfg.estimate_on)));
  report.config.emplace_back("word-policy", word_policy_echo(cfg.word_policy));
  report.config.emplace_back("normalization",
                             std::string(normalization_name(cfg.normalization)));
  report.config.emplace_back("seed", std::to_string(cfg.seed));
  report.config.emplace_back("max-pairs", std::to_string(cfg.max_pairs));
}

}  // namespace detail

//! Tightness-of-lower-bound protocol: per dataset, train on the train split,
//! then score mindist/euclidean over sampled test pairs at every alphabet
//! size. One row per dataset and alphabet size.
inline ExperimentReport run_tlb_experiment(std::span<const Dataset> datasets,
                                           std::span<const int> alphabet_sizes,
                                           const BenchConfig& config) {
  const std::vector<int> alphabets = detail::checked_alphabets(alphabet_sizes);
  ExperimentReport report;
  detail::echo_config(report, "tlb", config);
  report.config.emplace_back("method", std::string(method_name(config.method)));
  detail::run_per_dataset(datasets, config.parallel, report,
                          [&](const Dataset& ds) {
                            return detail::tlb_on_dataset(ds, alphabets, config);
                          });
  return report;
}

//! Reconstruction-error protocol: encode every test series and measure the
//! RMSE against its symbolic reconstruction, per dataset, method and
//! alphabet size.
inline ExperimentReport run_reconstruction_experiment(
    std::span<const Dataset> datasets, std::span<const int> alphabet_sizes,
    std::span<const Method> methods, const BenchConfig& config) {
  if (methods.empty()) throw Error("experiment: no methods given");
  const std::vector<int> alphabets = detail::checked_alphabets(alphabet_sizes);
  ExperimentReport report;
  detail::echo_config(report, "reconstruction", config);
  std::string method_list;
  for (const Method m : methods) {
    if (!method_list.empty()) method_list += "+";
    method_list += method_name(m);
  }
  report.config.emplace_back("methods", method_list);
  detail::run_per_dataset(datasets, config.parallel, report,
                          [&](const Dataset& ds) {
                            return detail::reconstruction_on_dataset(
                                ds, alphabets, methods, config);
                          });
  return report;
}

enum class ReportFormat { csv, plot_data };

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

//! Renders a report as CSV (config and warnings as leading # comments, then
//! the fixed header and one row per measurement) or as plot-data (one block
//! per dataset/method/metric with "a mean std n skipped" lines, blocks
//! separated by blank lines).
inline std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  std::string out;
  for (const auto& [key, value] : report.config) {
    out += "# " + key + "=" + value + "\n";
  }
  for (const std::string& w : report.warnings) {
    out += "# warning: " + w + "\n";
  }
  for (const std::string& name : report.skipped_datasets) {
    out += "# skipped-dataset: " + name + "\n";
  }

  if (format == ReportFormat::csv) {
    out += "dataset,method,alphabet_size,metric,mean,std,n_pairs,skipped\n";
    for (const ReportRow& row : report.rows) {
      out += row.dataset;
      out += ',';
      out += method_name(row.method);
      out += ',';
      out += std::to_string(row.alphabet_size);
      out += ',';
      out += row.metric;
      out += ',';
      out += detail::format_double(row.mean);
      out += ',';
      out += detail::format_double(row.stddev);
      out += ',';
      out += std::to_string(row.n_pairs);
      out += ',';
      out += std::to_string(row.skipped);
      out += '\n';
    }
    return out;
  }

  const ReportRow* previous = nullptr;
  for (const ReportRow& row : report.rows) {
    const bool new_block = previous == nullptr || previous->dataset != row.dataset ||
                           previous->method != row.method ||
                           previous->metric != row.metric;
    if (new_block) {
      if (previous != nullptr) out += '\n';
      out += "# dataset=" + row.dataset + " method=" + std::string(method_name(row.method)) +
             " metric=" + row.metric + "\n";
    }
    out += std::to_string(row.alphabet_size);
    out += ' ';
    out += detail::format_double(row.mean);
    out += ' ';
    out += detail::format_double(row.stddev);
    out += ' ';
    out += std::to_string(row.n_pairs);
    out += ' ';
    out += std::to_string(row.skipped);
    out += '\n';
    previous = &row;
  }
  return out;
}

}  // namespace edwsax
