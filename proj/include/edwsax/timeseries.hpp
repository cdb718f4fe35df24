#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edwsax/errors.hpp"

namespace edwsax {

//! Univariate series of finite real values, at least one point long.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw Error("TimeSeries: a series needs at least one point");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw Error("TimeSeries: values must be finite");
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  std::vector<double> values_;
};

//! Piecewise aggregate means of a series, tagged with the source length so a
//! reconstruction of the original resolution stays possible.
class PaaSeries {
 public:
  PaaSeries(std::vector<double> segments, std::size_t source_length)
      : segments_(std::move(segments)), source_length_(source_length) {
    if (segments_.empty() || source_length_ < segments_.size()) {
      throw InvalidWordLength("PaaSeries: segments exceed the source length");
    }
  }

  std::size_t word_length() const noexcept { return segments_.size(); }
  std::size_t source_length() const noexcept { return source_length_; }
  double operator[](std::size_t i) const noexcept { return segments_[i]; }
  const std::vector<double>& segments() const noexcept { return segments_; }

  auto begin() const noexcept { return segments_.begin(); }
  auto end() const noexcept { return segments_.end(); }

 private:
  std::vector<double> segments_;
  std::size_t source_length_;
};

namespace detail {

inline double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

//! Population standard deviation.
inline double stddev_of(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(xs.size()));
}

//! Boundary i of the fractional segmentation of n points into w segments.
//! Exact at i = 0 and i = w, monotone in between.
inline double segment_boundary(std::size_t i, std::size_t n, std::size_t w) {
  return static_cast<double>(i) * static_cast<double>(n) / static_cast<double>(w);
}

//! Segment owning point j under the same segmentation: the segment whose span
//! contains the point's midpoint j + 1/2.
inline std::size_t segment_of_point(std::size_t j, std::size_t n, std::size_t w) {
  const double pos = (static_cast<double>(j) + 0.5) * static_cast<double>(w) /
                     static_cast<double>(n);
  auto idx = static_cast<std::size_t>(pos);
  return std::min(idx, w - 1);
}

}  // namespace detail

//! Standardizes a series to zero mean and unit variance.
//!
//! A constant series has no scale; it maps to all zeros and, when
//! constant_series is non-null, reports the condition through it instead of
//! failing, so pipelines can treat flat inputs as already centered.
inline TimeSeries znormalize(const TimeSeries& series,
                             bool* constant_series = nullptr) {
  const double mu = detail::mean_of(series.span());
  const double sigma = detail::stddev_of(series.span(), mu);
  const bool flat = sigma < 1e-12;
  if (constant_series != nullptr) *constant_series = flat;

  std::vector<double> out(series.size());
  if (flat) {
    std::fill(out.begin(), out.end(), 0.0);
  } else {
    for (std::size_t i = 0; i < series.size(); ++i) {
      out[i] = (series[i] - mu) / sigma;
    }
  }
  return TimeSeries(std::move(out));
}

//! Piecewise aggregate approximation with w segments.
//!
//! When w does not divide n, border points are shared between neighboring
//! segments with fractional weight proportional to overlap, so every segment
//! covers exactly n/w points' worth of mass.
inline PaaSeries paa(const TimeSeries& series, std::size_t w) {
  const std::size_t n = series.size();
  if (w < 1 || w > n) {
    throw InvalidWordLength("paa: word length must lie in [1, " +
                            std::to_string(n) + "], got " + std::to_string(w));
  }

  std::vector<double> seg(w);
  if (n % w == 0) {
    const std::size_t m = n / w;
    for (std::size_t i = 0; i < w; ++i) {
      double s = 0.0;
      for (std::size_t j = i * m; j < (i + 1) * m; ++j) s += series[j];
      seg[i] = s / static_cast<double>(m);
    }
  } else {
    for (std::size_t i = 0; i < w; ++i) {
      const double lo = detail::segment_boundary(i, n, w);
      const double hi = detail::segment_boundary(i + 1, n, w);
      const auto first = static_cast<std::size_t>(lo);
      double s = 0.0;
      for (std::size_t j = first; j < n && static_cast<double>(j) < hi; ++j) {
        const double overlap = std::min(hi, static_cast<double>(j) + 1.0) -
                               std::max(lo, static_cast<double>(j));
        if (overlap > 0.0) s += overlap * series[j];
      }
      seg[i] = s / (hi - lo);
    }
  }
  return PaaSeries(std::move(seg), n);
}

//! How the word length w is derived from a series length n.
struct WordPolicy {
  enum class Kind { segment_size, word_length };

  Kind kind = Kind::segment_size;
  std::size_t value = 2;

  static WordPolicy segment_size(std::size_t s) {
    if (s < 1) throw Error("WordPolicy: segment size must be positive");
    return {Kind::segment_size, s};
  }
  static WordPolicy word_length(std::size_t w) {
    if (w < 1) throw Error("WordPolicy: word length must be positive");
    return {Kind::word_length, w};
  }

  //! Segment-size policy keeps roughly `value` points per segment,
  //! w = ceil(n / value); the fixed policy clamps to the series length.
  std::size_t word_length_for(std::size_t n) const {
    if (kind == Kind::segment_size) return (n + value - 1) / value;
    return std::min(value, n);
  }
};

}  // namespace edwsax
