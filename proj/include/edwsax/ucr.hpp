#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edwsax/errors.hpp"
#include "edwsax/timeseries.hpp"

namespace edwsax {

struct LabeledSeries {
  long long label = 0;
  TimeSeries series;
};

struct Dataset {
  std::string name;
  std::vector<LabeledSeries> train;
  std::vector<LabeledSeries> test;
};

enum class Delimiter { auto_detect, tab, comma };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  Delimiter delim) {
  std::vector<std::string_view> fields;
  if (delim == Delimiter::comma) {
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
      fields.push_back(trim(line.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
        ++i;
      }
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
        ++i;
      }
      if (i > start) fields.push_back(line.substr(start, i - start));
    }
  }
  return fields;
}

inline double parse_field(std::string_view field, std::size_t line_no,
                          std::size_t field_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("not a number: '" + std::string(field) + "'", line_no,
                     field_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value", line_no, field_no);
  }
  return value;
}

}  // namespace detail

//! Loads one split of a labeled series collection from text: one series per
//! line, the class label first, then the values, tab- or comma-separated.
//! Auto-detection looks for a tab, then a comma, in the first data line.
inline std::vector<LabeledSeries> load_ucr(const std::filesystem::path& path,
                                           Delimiter delimiter = Delimiter::auto_detect) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data file: " + path.string());

  std::vector<LabeledSeries> out;
  std::string line;
  std::size_t line_no = 0;
  Delimiter active = delimiter;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (active == Delimiter::auto_detect) {
      if (line.find('\t') != std::string::npos) {
        active = Delimiter::tab;
      } else if (line.find(',') != std::string::npos) {
        active = Delimiter::comma;
      } else {
        active = Delimiter::tab;
      }
    }
    const auto fields = detail::split_fields(line, active);
    if (fields.size() < 2) {
      throw ParseError("a series line needs a label and at least one value",
                       line_no, fields.size());
    }
    const double label = detail::parse_field(fields[0], line_no, 1);
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      values.push_back(detail::parse_field(fields[i], line_no, i + 1));
    }
    out.push_back(LabeledSeries{static_cast<long long>(std::llround(label)),
                                TimeSeries(std::move(values))});
  }
  if (out.empty()) throw EmptyFile("no data rows in " + path.string());
  return out;
}

//! Locates a split file for a named dataset under dir, trying the flat and
//! the one-directory-per-dataset layouts and the usual extensions.
inline std::filesystem::path find_ucr_split(const std::filesystem::path& dir,
                                            std::string_view name,
                                            std::string_view split) {
  const std::string stem = std::string(name) + "_" + std::string(split);
  const std::array<std::string, 4> exts = {"", ".tsv", ".txt", ".csv"};
  for (const auto& base : {dir, dir / name}) {
    for (const auto& ext : exts) {
      const std::filesystem::path candidate = base / (stem + ext);
      if (std::filesystem::exists(candidate)) return candidate;
    }
  }
  throw Error("no " + std::string(split) + " split found for dataset '" +
              std::string(name) + "' under " + dir.string());
}

inline Dataset load_ucr_dataset(const std::filesystem::path& dir,
                                std::string_view name,
                                Delimiter delimiter = Delimiter::auto_detect) {
  Dataset ds;
  ds.name = std::string(name);
  ds.train = load_ucr(find_ucr_split(dir, name, "TRAIN"), delimiter);
  ds.test = load_ucr(find_ucr_split(dir, name, "TEST"), delimiter);
  return ds;
}

//! Declared shape of the benchmark collections this tool is usually run on.
struct DatasetInfo {
  std::string_view name;
  std::size_t train_count;
  std::size_t test_count;
  std::size_t series_length;
};

inline std::span<const DatasetInfo> reference_manifest() {
  static constexpr std::array<DatasetInfo, 20> manifest = {{
      {"Adiac", 390, 391, 176},
      {"Beef", 30, 30, 470},
      {"BeetleFly", 20, 20, 512},
      {"CBF", 30, 900, 128},
      {"Coffee", 28, 28, 286},
      {"FaceAll", 560, 1690, 131},
      {"FaceFour", 24, 88, 350},
      {"Fish", 175, 175, 463},
      {"GunPoint", 50, 150, 150},
      {"Lightning2", 60, 61, 637},
      {"Lightning7", 70, 73, 319},
      {"OSULeaf", 200, 242, 427},
      {"OliveOil", 30, 30, 570},
      {"SwedishLeaf", 500, 625, 128},
      {"SyntheticControl", 300, 300, 60},
      {"Trace", 100, 100, 275},
      {"TwoPatterns", 1000, 4000, 128},
      {"Wafer", 1000, 6164, 152},
      {"Worms", 181, 77, 900},
      {"Yoga", 300, 3000, 326},
  }};
  return manifest;
}

inline const DatasetInfo* manifest_entry(std::string_view name) {
  for (const DatasetInfo& info : reference_manifest()) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

//! Compares a loaded dataset against its manifest row, if any. Returns one
//! warning string per mismatch; unknown datasets produce none.
inline std::vector<std::string> validate_dataset(const Dataset& dataset) {
  std::vector<std::string> warnings;
  const DatasetInfo* info = manifest_entry(dataset.name);
  if (info == nullptr) return warnings;

  auto check_count = [&](std::string_view split, std::size_t got, std::size_t want) {
    if (got != want) {
      warnings.push_back(dataset.name + ": expected " + std::to_string(want) +
                         " " + std::string(split) + " series, found " +
                         std::to_string(got));
    }
  };
  check_count("train", dataset.train.size(), info->train_count);
  check_count("test", dataset.test.size(), info->test_count);

  double total = 0.0;
  std::size_t count = 0;
  for (const auto* split : {&dataset.train, &dataset.test}) {
    for (const LabeledSeries& s : *split) {
      total += static_cast<double>(s.series.size());
      ++count;
    }
  }
  if (count > 0) {
    const auto mean_len =
        static_cast<std::size_t>(std::llround(total / static_cast<double>(count)));
    if (mean_len != info->series_length) {
      warnings.push_back(dataset.name + ": expected series length " +
                         std::to_string(info->series_length) + ", found mean " +
                         std::to_string(mean_len));
    }
  }
  return warnings;
}

}  // namespace edwsax
