#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edwsax/density.hpp"
#include "edwsax/distance.hpp"
#include "edwsax/errors.hpp"
#include "edwsax/normal.hpp"
#include "edwsax/symbols.hpp"
#include "edwsax/timeseries.hpp"

namespace edwsax {

//! Interior breakpoints of the equiprobable normal partition, the classic
//! symbolization reference.
inline Breakpoints gaussian_breakpoints(int a) {
  check_alphabet(a);
  std::vector<double> interior(static_cast<std::size_t>(a) - 1);
  for (int i = 1; i < a; ++i) {
    interior[static_cast<std::size_t>(i) - 1] =
        normal_quantile(static_cast<double>(i) / static_cast<double>(a));
  }
  return Breakpoints(std::move(interior));
}

//! Normal bin medians matching gaussian_breakpoints.
inline Centroids gaussian_centroids(int a) {
  check_alphabet(a);
  std::vector<double> levels(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) {
    levels[static_cast<std::size_t>(i)] =
        normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(a));
  }
  return Centroids(std::move(levels));
}

namespace detail {

//! Left-most switch point of a monotone predicate on [lo, hi], assuming
//! pred(lo) = false and pred(hi) = true.
template <typename Pred>
double bisect_boundary(double lo, double hi, Pred pred, int max_iter) {
  const double width_tol = (hi - lo) * 0x1p-40;
  for (int i = 0; i < max_iter && hi - lo > width_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

//! Solves cdf(x) = target by bisection. Where the density vanishes the CDF
//! can be flat at the target over a whole interval; both edges of the band
//! {x : |cdf(x) - target| <= tol} are located and their midpoint returned,
//! which is deterministic and keeps the CDF residual within tol in the
//! strictly increasing case too.
inline double invert_cdf(const DensityModel& density, double target,
                         double tol = 1e-8, int max_iter = 200) {
  const double lo = density.lower();
  const double hi = density.upper();
  const double left = bisect_boundary(
      lo, hi, [&](double x) { return density.cdf(x) >= target - tol; }, max_iter);
  const double right = bisect_boundary(
      lo, hi, [&](double x) { return density.cdf(x) > target + tol; }, max_iter);
  return 0.5 * (left + right);
}

}  // namespace detail

//! Equal-mass interior breakpoints of an estimated density: the i/a quantiles
//! for i = 1 .. a-1, so every bin carries probability 1/a under the estimate.
inline Breakpoints compute_breakpoints(const DensityModel& density, int a) {
  check_alphabet(a);
  std::vector<double> interior(static_cast<std::size_t>(a) - 1);
  for (int i = 1; i < a; ++i) {
    interior[static_cast<std::size_t>(i) - 1] = detail::invert_cdf(
        density, static_cast<double>(i) / static_cast<double>(a));
  }
  return Breakpoints(std::move(interior));
}

//! Conditional bin medians of an estimated density: level i is the
//! (i + 1/2)/a quantile, splitting its bin's mass in half.
inline Centroids compute_centroids(const DensityModel& density,
                                   const Breakpoints& breakpoints) {
  const int a = breakpoints.alphabet_size();
  std::vector<double> levels(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) {
    levels[static_cast<std::size_t>(i)] = detail::invert_cdf(
        density, (static_cast<double>(i) + 0.5) / static_cast<double>(a));
  }
  return Centroids(std::move(levels));
}

//! Whether the density is estimated on raw normalized points or on their PAA
//! segment means.
enum class EstimateOn { raw, paa };

inline std::string_view estimate_on_name(EstimateOn on) {
  return on == EstimateOn::raw ? "raw" : "paa";
}

inline EstimateOn estimate_on_from_name(std::string_view name) {
  if (name == "raw") return EstimateOn::raw;
  if (name == "paa") return EstimateOn::paa;
  throw Error("unknown estimate-on mode: " + std::string(name));
}

//! Provenance of a trained model.
struct TrainingInfo {
  Kernel kernel{KernelKind::normal};
  BandwidthRule bandwidth_rule = BandwidthRule::silverman();
  double bandwidth = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t sample_count = 0;
};

//! Symbolization model: breakpoints, centroids and the derived lower-bound
//! lookup table, plus training provenance. KDE-trained models also keep the
//! fitted density in memory (it is not serialized) so downstream code can
//! interrogate bin masses.
class SymbolizerModel {
 public:
  enum class Kind : std::uint8_t { gaussian_reference = 0, kde = 1 };

  SymbolizerModel(Kind kind, Breakpoints breakpoints, Centroids centroids,
                  TrainingInfo info, std::optional<DensityModel> density = {})
      : kind_(kind),
        breakpoints_(std::move(breakpoints)),
        centroids_(std::move(centroids)),
        lookup_(build_lookup(breakpoints_)),
        info_(std::move(info)),
        density_(std::move(density)) {
    if (breakpoints_.alphabet_size() != centroids_.alphabet_size()) {
      throw InvalidAlphabet("model: breakpoints and centroids disagree on a");
    }
  }

  Kind kind() const noexcept { return kind_; }
  bool is_gaussian_reference() const noexcept {
    return kind_ == Kind::gaussian_reference;
  }
  int alphabet_size() const noexcept { return breakpoints_.alphabet_size(); }
  const Breakpoints& breakpoints() const noexcept { return breakpoints_; }
  const Centroids& centroids() const noexcept { return centroids_; }
  const DistanceTable& lookup() const noexcept { return lookup_; }
  const TrainingInfo& info() const noexcept { return info_; }
  const std::optional<DensityModel>& density() const noexcept { return density_; }

 private:
  Kind kind_;
  Breakpoints breakpoints_;
  Centroids centroids_;
  DistanceTable lookup_;
  TrainingInfo info_;
  std::optional<DensityModel> density_;
};

//! Classic normal-reference model (plain SAX).
inline SymbolizerModel gaussian_model(int a, TrainingInfo info = {}) {
  return SymbolizerModel(SymbolizerModel::Kind::gaussian_reference,
                         gaussian_breakpoints(a), gaussian_centroids(a),
                         std::move(info));
}

//! Builds a model around an already fitted density.
inline SymbolizerModel model_from_density(const DensityModel& density, int a,
                                          TrainingInfo info) {
  Breakpoints breakpoints = compute_breakpoints(density, a);
  Centroids centroids = compute_centroids(density, breakpoints);
  return SymbolizerModel(SymbolizerModel::Kind::kde, std::move(breakpoints),
                         std::move(centroids), std::move(info), density);
}

struct TrainConfig {
  int alphabet_size = 5;
  Kernel kernel{KernelKind::epanechnikov};
  BandwidthRule bandwidth = BandwidthRule::isj();
  EstimateOn estimate_on = EstimateOn::raw;
  WordPolicy word_policy{};
};

//! Pools the z-normalized training points (or their PAA segment means) that
//! the density is estimated on.
inline std::vector<double> pool_training_points(std::span<const TimeSeries> series,
                                                EstimateOn estimate_on,
                                                const WordPolicy& policy) {
  if (series.empty()) throw Error("train: no training series");
  std::vector<double> pool;
  for (const TimeSeries& s : series) {
    const TimeSeries z = znormalize(s);
    if (estimate_on == EstimateOn::paa) {
      const PaaSeries p = paa(z, policy.word_length_for(z.size()));
      pool.insert(pool.end(), p.begin(), p.end());
    } else {
      pool.insert(pool.end(), z.begin(), z.end());
    }
  }
  return pool;
}

//! Trains a distribution-aware model on a collection of series.
//!
//! A pooled sample with zero range carries no shape information, so instead
//! of failing the model falls back to the normal reference partition (same
//! behavior as the classic method); the fallback is visible through kind().
inline SymbolizerModel train(std::span<const TimeSeries> series,
                             const TrainConfig& config) {
  check_alphabet(config.alphabet_size);
  std::vector<double> pool =
      pool_training_points(series, config.estimate_on, config.word_policy);

  TrainingInfo info;
  info.kernel = config.kernel;
  info.bandwidth_rule = config.bandwidth;
  info.sample_count = pool.size();

  const auto [min_it, max_it] = std::minmax_element(pool.begin(), pool.end());
  if (pool.size() < 2 || !(*max_it - *min_it > 0.0)) {
    return gaussian_model(config.alphabet_size, std::move(info));
  }

  DensityModel density = fit_density(std::move(pool), config.kernel, config.bandwidth);
  info.bandwidth = density.bandwidth();
  return model_from_density(density, config.alphabet_size, std::move(info));
}

//! Maps PAA segment means to symbols through the model's breakpoints.
inline SymbolWord symbolize(const SymbolizerModel& model, const PaaSeries& segments) {
  SymbolWord word;
  word.alphabet_size = model.alphabet_size();
  word.source_length = segments.source_length();
  word.symbols.reserve(segments.word_length());
  for (double v : segments) {
    word.symbols.push_back(
        static_cast<std::uint8_t>(model.breakpoints().symbol_of(v)));
  }
  return word;
}

//! Expands a word back to n points, each taking the centroid of the segment
//! whose span contains it.
inline TimeSeries reconstruct(const SymbolizerModel& model, const SymbolWord& word,
                              std::size_t n) {
  if (word.alphabet_size != model.alphabet_size()) {
    throw WordMismatch("reconstruct: word alphabet " +
                       std::to_string(word.alphabet_size) +
                       " does not match the model's " +
                       std::to_string(model.alphabet_size()));
  }
  const std::size_t w = word.length();
  if (w == 0 || n < w) {
    throw InvalidLength("reconstruct: need word length in [1, n]");
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t seg = detail::segment_of_point(j, n, w);
    out[j] = model.centroids()[word.symbols[seg]];
  }
  return TimeSeries(std::move(out));
}

namespace detail {

inline void put_u8(std::string& out, std::uint8_t v) {
  out.push_back(static_cast<char>(v));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) put_u8(out, static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) put_u8(out, static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }

  std::uint16_t u16() {
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(u8()) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  void expect_end() const {
    if (pos_ != data_.size()) {
      throw CorruptModel("model stream has trailing bytes");
    }
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CorruptModel("model stream is truncated");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

inline constexpr std::string_view model_magic = "EDWSAX";
inline constexpr std::uint8_t model_version = 1;

}  // namespace detail

//! Serializes a model to a self-contained little-endian byte stream. Doubles
//! travel as raw IEEE bits, so the round trip is exact. The fitted density is
//! not part of the stream; a deserialized model symbolizes, reconstructs and
//! measures distances identically but cannot be re-interrogated for bin
//! masses.
inline std::string serialize_model(const SymbolizerModel& model) {
  std::string out;
  out += detail::model_magic;
  detail::put_u8(out, detail::model_version);
  detail::put_u8(out, static_cast<std::uint8_t>(model.kind()));
  detail::put_u16(out, static_cast<std::uint16_t>(model.alphabet_size()));
  detail::put_u8(out, static_cast<std::uint8_t>(model.info().kernel.kind));
  const std::string rule = model.info().bandwidth_rule.name();
  detail::put_u8(out, static_cast<std::uint8_t>(rule.size()));
  out += rule;
  detail::put_f64(out, model.info().bandwidth);
  detail::put_u64(out, model.info().sample_count);
  for (double b : model.breakpoints().interior()) detail::put_f64(out, b);
  for (double c : model.centroids().levels()) detail::put_f64(out, c);
  return out;
}

inline SymbolizerModel deserialize_model(std::string_view data) {
  detail::ByteReader in(data);
  if (in.bytes(detail::model_magic.size()) != detail::model_magic) {
    throw CorruptModel("bad model magic");
  }
  const std::uint8_t version = in.u8();
  if (version != detail::model_version) {
    throw FormatVersionMismatch("unsupported model format version " +
                                std::to_string(version));
  }
  const std::uint8_t kind_byte = in.u8();
  if (kind_byte > 1) throw CorruptModel("unknown model kind");
  const int a = in.u16();
  if (a < min_alphabet || a > max_alphabet) {
    throw CorruptModel("alphabet size out of range");
  }
  const std::uint8_t kernel_byte = in.u8();
  if (kernel_byte >= all_kernels.size()) throw CorruptModel("unknown kernel kind");

  TrainingInfo info;
  info.kernel = Kernel{all_kernels[kernel_byte]};
  const std::string rule_name = in.bytes(in.u8());
  try {
    info.bandwidth_rule = BandwidthRule::parse(rule_name);
  } catch (const Error&) {
    throw CorruptModel("unknown bandwidth rule name: " + rule_name);
  }
  info.bandwidth = in.f64();
  info.sample_count = in.u64();

  std::vector<double> interior(static_cast<std::size_t>(a) - 1);
  for (double& b : interior) b = in.f64();
  std::vector<double> levels(static_cast<std::size_t>(a));
  for (double& c : levels) c = in.f64();
  in.expect_end();

  try {
    return SymbolizerModel(static_cast<SymbolizerModel::Kind>(kind_byte),
                           Breakpoints(std::move(interior)),
                           Centroids(std::move(levels)), std::move(info));
  } catch (const InvalidAlphabet& e) {
    throw CorruptModel(e.what());
  }
}

inline void save_model(const SymbolizerModel& model,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open model file for writing: " + path.string());
  const std::string data = serialize_model(model);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("failed writing model file: " + path.string());
}

inline SymbolizerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_model(data);
}

}  // namespace edwsax
