#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "edwsax/bench.hpp"
#include "edwsax/errors.hpp"
#include "edwsax/symbolizer.hpp"
#include "edwsax/ucr.hpp"

namespace edwsax::cli {

struct CliConfig {
  std::string model_path;
  std::string input_path;
  std::string output_path;
  int alphabet = 5;
  std::size_t word_length = 0;
  std::size_t segment_size = 2;
  bool word_length_given = false;
  std::string kernel = "epanechnikov";
  std::string bandwidth = "isj";
  std::string estimate_on = "raw";
  std::uint64_t seed = 42;
  std::string alphabets;
  std::string experiment = "both";
  std::string format = "csv";
  std::string datasets;
  std::string method = "edwsax";
  std::string normalization = "per-series";
  std::size_t max_pairs = 10000;
  std::size_t length = 0;
  bool no_normalize = false;
  bool labeled_input = false;
  std::vector<std::string> words;
};

namespace detail {

using edwsax::detail::parse_field;
using edwsax::detail::split_fields;
using edwsax::detail::trim;

inline WordPolicy word_policy_of(const CliConfig& cfg) {
  return cfg.word_length_given ? WordPolicy::word_length(cfg.word_length)
                               : WordPolicy::segment_size(cfg.segment_size);
}

inline void require_file(const std::string& path, std::string_view flag) {
  if (path.empty()) throw Error("missing required " + std::string(flag));
  if (!std::filesystem::exists(path)) {
    throw Error("no such file: " + path + " (from " + std::string(flag) + ")");
  }
}

//! Plain series input: one series per line, whitespace- or comma-separated
//! reals. Blank lines are skipped; an empty file is an empty collection.
inline std::vector<TimeSeries> read_series_lines(std::istream& in) {
  std::vector<TimeSeries> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const Delimiter delim = line.find(',') != std::string::npos ? Delimiter::comma
                                                                : Delimiter::tab;
    const auto fields = split_fields(line, delim);
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      values.push_back(parse_field(fields[i], line_no, i + 1));
    }
    if (values.empty()) {
      throw ParseError("a series line needs at least one value", line_no, 1);
    }
    out.push_back(TimeSeries(std::move(values)));
  }
  return out;
}

inline std::vector<TimeSeries> read_series_file(const std::string& path,
                                                bool labeled) {
  if (labeled) {
    std::vector<TimeSeries> out;
    for (LabeledSeries& s : load_ucr(path)) out.push_back(std::move(s.series));
    return out;
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open series file: " + path);
  return read_series_lines(in);
}

inline std::string render_word(const SymbolWord& word) {
  std::string out;
  if (word.alphabet_size <= 26) {
    out.reserve(word.length());
    for (const std::uint8_t s : word.symbols) {
      out.push_back(static_cast<char>('a' + s));
    }
  } else {
    for (std::size_t i = 0; i < word.length(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(word.symbols[i]);
    }
  }
  return out;
}

inline SymbolWord parse_word(const std::string& line, int alphabet,
                             std::size_t line_no) {
  SymbolWord word;
  word.alphabet_size = alphabet;
  if (alphabet <= 26) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (c == ' ' || c == '\t' || c == '\r') continue;
      if (c < 'a' || c >= static_cast<char>('a' + alphabet)) {
        throw ParseError(std::string("invalid symbol '") + c +
                             "' for alphabet size " + std::to_string(alphabet),
                         line_no, i + 1);
      }
      word.symbols.push_back(static_cast<std::uint8_t>(c - 'a'));
    }
  } else {
    const auto fields = split_fields(line, Delimiter::tab);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const double v = parse_field(fields[i], line_no, i + 1);
      const auto idx = static_cast<long long>(v);
      if (static_cast<double>(idx) != v || idx < 0 || idx >= alphabet) {
        throw ParseError("symbol index out of range: '" + std::string(fields[i]) +
                             "'",
                         line_no, i + 1);
      }
      word.symbols.push_back(static_cast<std::uint8_t>(idx));
    }
  }
  if (word.symbols.empty()) {
    throw ParseError("empty word", line_no, 1);
  }
  word.source_length = word.length();
  return word;
}

inline std::string format_measure(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::vector<int> parse_alphabet_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      const int a = std::stoi(std::string(t), &used);
      if (used != t.size()) throw std::invalid_argument("trailing");
      out.push_back(a);
    } catch (const std::exception&) {
      throw Error("bad alphabet size in --alphabets: '" + std::string(t) + "'");
    }
  }
  if (out.empty()) throw Error("--alphabets given but empty");
  return out;
}

inline std::vector<std::string> parse_name_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

inline std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw Error("cannot open output file: " + path);
  return file;
}

inline int cmd_train(const CliConfig& cfg) {
  require_file(cfg.input_path, "--input");
  const std::vector<TimeSeries> series =
      read_series_file(cfg.input_path, cfg.labeled_input);
  if (series.empty()) throw Error("no series in " + cfg.input_path);

  TrainConfig train_cfg;
  train_cfg.alphabet_size = cfg.alphabet;
  train_cfg.kernel = kernel_from_name(cfg.kernel);
  train_cfg.bandwidth = BandwidthRule::parse(cfg.bandwidth);
  train_cfg.estimate_on = estimate_on_from_name(cfg.estimate_on);
  train_cfg.word_policy = word_policy_of(cfg);

  const SymbolizerModel model = train(series, train_cfg);

  const std::string out_path =
      cfg.output_path.empty() ? "model.edws" : cfg.output_path;
  save_model(model, out_path);

  std::cout << "model: " << (model.is_gaussian_reference() ? "normal-reference" : "kde")
            << " a=" << model.alphabet_size()
            << " kernel=" << model.info().kernel.name()
            << " bandwidth-rule=" << model.info().bandwidth_rule.name()
            << " h=" << format_measure(model.info().bandwidth)
            << " samples=" << model.info().sample_count << "\n";
  std::cout << "breakpoints:";
  for (const double b : model.breakpoints().interior()) {
    std::cout << ' ' << format_measure(b);
  }
  std::cout << "\ncentroids:";
  for (const double c : model.centroids().levels()) {
    std::cout << ' ' << format_measure(c);
  }
  std::cout << "\nwrote: " << out_path << "\n";
  return 0;
}

inline int cmd_encode(const CliConfig& cfg) {
  require_file(cfg.model_path, "--model");
  require_file(cfg.input_path, "--input");
  const SymbolizerModel model = load_model(cfg.model_path);
  const std::vector<TimeSeries> series =
      read_series_file(cfg.input_path, cfg.labeled_input);
  const WordPolicy policy = word_policy_of(cfg);

  std::ofstream file;
  std::ostream& out = open_output(cfg.output_path, file);
  for (const TimeSeries& s : series) {
    const TimeSeries z = cfg.no_normalize ? s : znormalize(s);
    const SymbolWord word = symbolize(model, paa(z, policy.word_length_for(z.size())));
    out << render_word(word) << "\n";
  }
  return 0;
}

inline int cmd_decode(const CliConfig& cfg) {
  require_file(cfg.model_path, "--model");
  require_file(cfg.input_path, "--input");
  const SymbolizerModel model = load_model(cfg.model_path);

  std::ifstream in(cfg.input_path);
  if (!in) throw Error("cannot open words file: " + cfg.input_path);

  std::ofstream file;
  std::ostream& out = open_output(cfg.output_path, file);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const SymbolWord word = parse_word(line, model.alphabet_size(), line_no);
    const std::size_t n = cfg.length > 0 ? cfg.length : word.length();
    const TimeSeries series = reconstruct(model, word, n);
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (i > 0) out << ' ';
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", series[i]);
      out << buf;
    }
    out << "\n";
  }
  return 0;
}

inline int cmd_dist(const CliConfig& cfg) {
  require_file(cfg.model_path, "--model");
  const SymbolizerModel model = load_model(cfg.model_path);

  std::ofstream file;
  std::ostream& out = open_output(cfg.output_path, file);

  if (!cfg.words.empty()) {
    if (cfg.words.size() != 2) throw Error("--word must be given exactly twice");
    const SymbolWord q = parse_word(cfg.words[0], model.alphabet_size(), 1);
    const SymbolWord c = parse_word(cfg.words[1], model.alphabet_size(), 2);
    const std::size_t n = cfg.length > 0 ? cfg.length : q.length();
    out << "mindist " << format_measure(mindist(q, c, model.lookup(), n)) << "\n";
    return 0;
  }

  require_file(cfg.input_path, "--input");
  const std::vector<TimeSeries> series =
      read_series_file(cfg.input_path, cfg.labeled_input);
  if (series.size() != 2) {
    throw Error("dist needs exactly two series in " + cfg.input_path + ", found " +
                std::to_string(series.size()));
  }
  const WordPolicy policy = word_policy_of(cfg);
  const TimeSeries q = cfg.no_normalize ? series[0] : znormalize(series[0]);
  const TimeSeries c = cfg.no_normalize ? series[1] : znormalize(series[1]);
  const std::size_t w = policy.word_length_for(q.size());

  const SymbolWord wq = symbolize(model, paa(q, w));
  const SymbolWord wc = symbolize(model, paa(c, w));
  out << "mindist " << format_measure(mindist(wq, wc, model.lookup(), q.size()))
      << "\n";
  out << "ed " << format_measure(euclidean(q, c)) << "\n";
  const std::optional<double> ratio = tlb(q, c, model, w);
  out << "tlb " << (ratio ? format_measure(*ratio) : "nan") << "\n";
  return 0;
}

inline std::vector<std::string> discover_datasets(const std::filesystem::path& dir) {
  std::set<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string base = entry.path().filename().string();
    if (entry.is_regular_file()) {
      const std::size_t pos = base.find("_TRAIN");
      if (pos != std::string::npos && pos > 0) names.insert(base.substr(0, pos));
    } else if (entry.is_directory()) {
      try {
        find_ucr_split(dir, base, "TRAIN");
        names.insert(base);
      } catch (const Error&) {
      }
    }
  }
  return {names.begin(), names.end()};
}

inline void write_report_file(const ExperimentReport& report, ReportFormat format,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open report file: " + path.string());
  out << emit_report(report, format);
}

inline int cmd_bench(const CliConfig& cfg) {
  if (cfg.input_path.empty()) throw Error("missing required --input");
  const std::filesystem::path dir(cfg.input_path);
  if (!std::filesystem::is_directory(dir)) {
    throw Error("not a dataset directory: " + cfg.input_path);
  }
  if (cfg.experiment != "tlb" && cfg.experiment != "reconstruction" &&
      cfg.experiment != "both") {
    throw Error("unknown experiment: " + cfg.experiment);
  }
  ReportFormat format;
  if (cfg.format == "csv") {
    format = ReportFormat::csv;
  } else if (cfg.format == "plot") {
    format = ReportFormat::plot_data;
  } else {
    throw Error("unknown format: " + cfg.format);
  }

  std::vector<std::string> names = cfg.datasets.empty()
                                       ? discover_datasets(dir)
                                       : parse_name_list(cfg.datasets);
  if (names.empty()) {
    throw Error("no datasets found under " + cfg.input_path);
  }

  std::vector<Dataset> datasets;
  std::vector<std::string> load_skipped;
  std::vector<std::string> load_warnings;
  for (const std::string& name : names) {
    try {
      datasets.push_back(load_ucr_dataset(dir, name));
    } catch (const std::exception& e) {
      load_skipped.push_back(name);
      load_warnings.push_back(name + ": skipped: " + e.what());
    }
  }

  BenchConfig bench_cfg;
  bench_cfg.method = method_from_name(cfg.method);
  bench_cfg.kernel = kernel_from_name(cfg.kernel);
  bench_cfg.bandwidth = BandwidthRule::parse(cfg.bandwidth);
  bench_cfg.estimate_on = estimate_on_from_name(cfg.estimate_on);
  bench_cfg.word_policy = word_policy_of(cfg);
  bench_cfg.normalization = normalization_from_name(cfg.normalization);
  bench_cfg.seed = cfg.seed;
  bench_cfg.max_pairs = cfg.max_pairs;

  const std::filesystem::path out_dir(
      cfg.output_path.empty() ? std::string(".") : cfg.output_path);
  std::filesystem::create_directories(out_dir);
  const std::string ext = format == ReportFormat::csv ? ".csv" : ".plot";

  bool partial = !load_skipped.empty();
  auto finish = [&](ExperimentReport& report, const std::string& stem) {
    report.skipped_datasets.insert(report.skipped_datasets.end(),
                                   load_skipped.begin(), load_skipped.end());
    report.warnings.insert(report.warnings.end(), load_warnings.begin(),
                           load_warnings.end());
    const std::filesystem::path path = out_dir / (stem + ext);
    write_report_file(report, format, path);
    std::cout << stem << ": " << report.rows.size() << " rows, "
              << report.skipped_datasets.size() << " skipped datasets -> "
              << path.string() << "\n";
    partial = partial || report.partial();
  };

  if (datasets.empty()) {
    ExperimentReport report;
    if (cfg.experiment == "tlb" || cfg.experiment == "both") finish(report, "tlb");
    if (cfg.experiment == "reconstruction" || cfg.experiment == "both") {
      finish(report, "reconstruction");
    }
    return 2;
  }

  if (cfg.experiment == "tlb" || cfg.experiment == "both") {
    const std::vector<int> alphabets =
        cfg.alphabets.empty()
            ? std::vector<int>{5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}
            : parse_alphabet_list(cfg.alphabets);
    ExperimentReport report = run_tlb_experiment(datasets, alphabets, bench_cfg);
    finish(report, "tlb");
  }
  if (cfg.experiment == "reconstruction" || cfg.experiment == "both") {
    const std::vector<int> alphabets = cfg.alphabets.empty()
                                           ? std::vector<int>{5, 10}
                                           : parse_alphabet_list(cfg.alphabets);
    const std::vector<Method> methods = {Method::sax, Method::edwsax};
    ExperimentReport report =
        run_reconstruction_experiment(datasets, alphabets, methods, bench_cfg);
    finish(report, "reconstruction");
  }
  return partial ? 2 : 0;
}

}  // namespace detail

//! Entry point of the command-line tool.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"Symbolic time-series representation with distribution-aware breakpoints"};
  app.require_subcommand(1);

  CliConfig cfg;

  auto add_model_opts = [&](CLI::App* cmd) {
    cmd->add_option("-a,--alphabet", cfg.alphabet, "alphabet size")
        ->capture_default_str();
    cmd->add_option("--kernel", cfg.kernel,
                    "kernel: uniform|triangular|epanechnikov|biweight|cosine|normal|laplace")
        ->capture_default_str();
    cmd->add_option("--bandwidth", cfg.bandwidth,
                    "bandwidth rule: silverman|scott|isj|fixed:<h>")
        ->capture_default_str();
    cmd->add_option("--estimate-on", cfg.estimate_on, "estimate density on: raw|paa")
        ->capture_default_str();
  };
  auto add_word_opts = [&](CLI::App* cmd) {
    auto* w = cmd->add_option("-w,--word-length", cfg.word_length,
                              "fixed word length");
    auto* s = cmd->add_option("--segment-size", cfg.segment_size,
                              "points per PAA segment")
                  ->capture_default_str();
    w->excludes(s);
    s->excludes(w);
    cmd->parse_complete_callback([&cfg, w] { cfg.word_length_given = w->count() > 0; });
  };

  CLI::App* train_cmd = app.add_subcommand("train", "estimate a model from series");
  train_cmd->add_option("--input", cfg.input_path, "series file")->required();
  train_cmd->add_option("--output", cfg.output_path, "model file (default model.edws)");
  train_cmd->add_flag("--ucr", cfg.labeled_input, "input lines start with a class label");
  add_model_opts(train_cmd);
  add_word_opts(train_cmd);

  CLI::App* encode_cmd = app.add_subcommand("encode", "series to symbol words");
  encode_cmd->add_option("--model", cfg.model_path, "model file")->required();
  encode_cmd->add_option("--input", cfg.input_path, "series file")->required();
  encode_cmd->add_option("--output", cfg.output_path, "words file (default stdout)");
  encode_cmd->add_flag("--no-normalize", cfg.no_normalize,
                       "encode the series as given, skip z-normalization");
  encode_cmd->add_flag("--ucr", cfg.labeled_input, "input lines start with a class label");
  add_word_opts(encode_cmd);

  CLI::App* decode_cmd = app.add_subcommand("decode", "symbol words to series");
  decode_cmd->add_option("--model", cfg.model_path, "model file")->required();
  decode_cmd->add_option("--input", cfg.input_path, "words file")->required();
  decode_cmd->add_option("--output", cfg.output_path, "series file (default stdout)");
  decode_cmd->add_option("--length", cfg.length,
                         "reconstruction length (default: word length)");

  CLI::App* dist_cmd = app.add_subcommand("dist", "mindist / ed / tlb measures");
  dist_cmd->add_option("--model", cfg.model_path, "model file")->required();
  dist_cmd->add_option("--input", cfg.input_path, "file with exactly two series");
  dist_cmd->add_option("--word", cfg.words, "symbol word (give twice)")->expected(0, 2);
  dist_cmd->add_option("--length", cfg.length, "source series length for word mode");
  dist_cmd->add_flag("--no-normalize", cfg.no_normalize,
                     "compare the series as given, skip z-normalization");
  add_word_opts(dist_cmd);

  CLI::App* bench_cmd = app.add_subcommand("bench", "run benchmark experiments");
  bench_cmd->add_option("--input", cfg.input_path, "dataset directory")->required();
  bench_cmd->add_option("--output", cfg.output_path, "report directory (default .)");
  bench_cmd->add_option("--datasets", cfg.datasets,
                        "comma-separated dataset names (default: discover)");
  bench_cmd->add_option("--experiment", cfg.experiment,
                        "experiment: tlb|reconstruction|both")
      ->capture_default_str();
  bench_cmd->add_option("--alphabets", cfg.alphabets,
                        "comma-separated alphabet sizes");
  bench_cmd->add_option("--format", cfg.format, "report format: csv|plot")
      ->capture_default_str();
  bench_cmd->add_option("--method", cfg.method,
                        "model family for the TLB experiment: sax|edwsax")
      ->capture_default_str();
  bench_cmd->add_option("--normalization", cfg.normalization,
                        "normalization: per-series|per-dataset")
      ->capture_default_str();
  bench_cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  bench_cmd->add_option("--max-pairs", cfg.max_pairs,
                        "pair-sample cap per dataset")
      ->capture_default_str();
  add_model_opts(bench_cmd);
  add_word_opts(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train_cmd->parsed()) return detail::cmd_train(cfg);
    if (encode_cmd->parsed()) return detail::cmd_encode(cfg);
    if (decode_cmd->parsed()) return detail::cmd_decode(cfg);
    if (dist_cmd->parsed()) return detail::cmd_dist(cfg);
    if (bench_cmd->parsed()) return detail::cmd_bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace edwsax::cli
