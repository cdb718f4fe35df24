#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "edwsax/errors.hpp"
#include "edwsax/symbols.hpp"
#include "edwsax/timeseries.hpp"

namespace edwsax {

//! Builds the per-cell lower-bound distance table for a breakpoint set.
//!
//! Adjacent or equal symbols cannot be separated, so their cell is 0; for
//! symbols two or more bins apart the cell is the gap between the closest
//! edges of their bins.
inline DistanceTable build_lookup(const Breakpoints& breakpoints) {
  const int a = breakpoints.alphabet_size();
  const auto interior = breakpoints.interior();
  std::vector<double> cells(static_cast<std::size_t>(a) * static_cast<std::size_t>(a),
                            0.0);
  for (int q = 0; q < a; ++q) {
    for (int c = 0; c < a; ++c) {
      if (std::abs(q - c) <= 1) continue;
      const int hi = std::max(q, c);
      const int lo = std::min(q, c);
      cells[static_cast<std::size_t>(q) * static_cast<std::size_t>(a) +
            static_cast<std::size_t>(c)] =
          interior[static_cast<std::size_t>(hi) - 1] -
          interior[static_cast<std::size_t>(lo)];
    }
  }
  return DistanceTable(a, std::move(cells));
}

//! Euclidean distance between equal-length series.
inline double euclidean(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("euclidean: series lengths differ (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

//! Lower bound of the Euclidean distance between the source series of two
//! symbolic words: sqrt(n / w) * sqrt(sum of squared cells). n is the
//! original series length the words were derived from.
inline double mindist(const SymbolWord& q, const SymbolWord& c,
                      const DistanceTable& table, std::size_t n) {
  if (q.length() != c.length()) {
    throw LengthMismatch("mindist: word lengths differ (" +
                         std::to_string(q.length()) + " vs " +
                         std::to_string(c.length()) + ")");
  }
  if (q.alphabet_size != c.alphabet_size ||
      q.alphabet_size != table.alphabet_size()) {
    throw WordMismatch("mindist: alphabet sizes differ");
  }
  const std::size_t w = q.length();
  if (n < w) {
    throw InvalidLength("mindist: source length " + std::to_string(n) +
                        " is shorter than the word length " + std::to_string(w));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double d = table.cell(q.symbols[i], c.symbols[i]);
    sum += d * d;
  }
  return std::sqrt(static_cast<double>(n) / static_cast<double>(w)) *
         std::sqrt(sum);
}

//! Tightness of the lower bound, mindist / euclidean, for one pair encoded
//! with the given model at word length w. Both series are used as given; a
//! zero Euclidean distance leaves the ratio undefined.
template <typename Model>
std::optional<double> tlb(const TimeSeries& q, const TimeSeries& c,
                          const Model& model, std::size_t w) {
  const double ed = euclidean(q, c);
  if (ed == 0.0) return std::nullopt;
  const SymbolWord wq = symbolize(model, paa(q, w));
  const SymbolWord wc = symbolize(model, paa(c, w));
  return mindist(wq, wc, model.lookup(), q.size()) / ed;
}

}  // namespace edwsax
