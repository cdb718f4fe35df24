#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "edwsax/errors.hpp"
#include "edwsax/normal.hpp"
#include "edwsax/timeseries.hpp"

namespace edwsax {

inline double rmse(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("rmse: series lengths differ (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

namespace detail {

//! Ranks of |d| in ascending order with ties averaged, kept exact by storing
//! doubled ranks as integers (an average of two integers doubled is an
//! integer again).
inline std::vector<long long> doubled_ranks(const std::vector<double>& abs_diffs) {
  const std::size_t n = abs_diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return abs_diffs[i] < abs_diffs[j]; });

  std::vector<long long> r2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
    // positions i+1 .. j+1 share the average rank (i + j + 2) / 2
    const long long doubled = static_cast<long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) r2[order[k]] = doubled;
    i = j + 1;
  }
  return r2;
}

//! Exact two-sided signed-rank p-value by dynamic programming over the 2^n
//! sign assignments, counting how many reach each doubled-rank sum.
inline double wilcoxon_exact_p(const std::vector<long long>& r2, long long w2_plus) {
  const long long total = std::accumulate(r2.begin(), r2.end(), 0LL);
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  long long reach = 0;
  for (const long long r : r2) {
    reach += r;
    for (long long s = reach; s >= r; --s) {
      count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r)];
    }
  }
  double below = 0.0;
  double above = 0.0;
  for (long long s = 0; s <= total; ++s) {
    if (s <= w2_plus) below += count[static_cast<std::size_t>(s)];
    if (s >= w2_plus) above += count[static_cast<std::size_t>(s)];
  }
  const double all = std::ldexp(1.0, static_cast<int>(r2.size()));
  return std::min(1.0, 2.0 * std::min(below, above) / all);
}

//! Normal approximation with tie and continuity corrections.
inline double wilcoxon_approx_p(const std::vector<long long>& r2, long long w2_plus) {
  const auto n = static_cast<double>(r2.size());
  const double t = static_cast<double>(w2_plus) / 2.0;
  const double mu = n * (n + 1.0) / 4.0;

  std::vector<long long> sorted(r2);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double len = static_cast<double>(j - i + 1);
    tie_term += len * len * len - len;
    i = j + 1;
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (!(var > 0.0)) return 1.0;

  double num = t - mu;
  if (num > 0.5) {
    num -= 0.5;
  } else if (num < -0.5) {
    num += 0.5;
  } else {
    num = 0.0;
  }
  const double z = num / std::sqrt(var);
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

}  // namespace detail

//! Two-sided Wilcoxon signed-rank p-value for paired samples.
//!
//! Zero differences are dropped; ties among |differences| get averaged ranks.
//! Up to 25 effective pairs the p-value is exact (full enumeration of sign
//! assignments via dynamic programming); beyond that a normal approximation
//! with tie and continuity corrections takes over.
inline double wilcoxon_signed_rank(std::span<const double> x,
                                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("wilcoxon_signed_rank: sample sizes differ");
  }
  std::vector<double> abs_diffs;
  std::vector<int> signs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (!std::isfinite(d)) {
      throw Error("wilcoxon_signed_rank: differences must be finite");
    }
    if (d == 0.0) continue;
    abs_diffs.push_back(std::abs(d));
    signs.push_back(d > 0.0 ? 1 : -1);
  }
  const std::size_t n = abs_diffs.size();
  if (n < 6) {
    throw TooFewPairs("wilcoxon_signed_rank: need at least 6 non-zero pairs, got " +
                      std::to_string(n));
  }

  const std::vector<long long> r2 = detail::doubled_ranks(abs_diffs);
  long long w2_plus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] > 0) w2_plus += r2[i];
  }
  if (n <= 25) return detail::wilcoxon_exact_p(r2, w2_plus);
  return detail::wilcoxon_approx_p(r2, w2_plus);
}

}  // namespace edwsax
