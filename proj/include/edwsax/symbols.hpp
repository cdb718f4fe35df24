#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edwsax/errors.hpp"

namespace edwsax {

inline constexpr int min_alphabet = 2;
inline constexpr int max_alphabet = 256;

inline void check_alphabet(int a) {
  if (a < min_alphabet || a > max_alphabet) {
    throw InvalidAlphabet("alphabet size must lie in [2, 256], got " +
                          std::to_string(a));
  }
}

//! Ordered bin edges for an alphabet of a symbols: a - 1 finite interior
//! breakpoints plus implicit -inf and +inf sentinels at the ends.
class Breakpoints {
 public:
  explicit Breakpoints(std::vector<double> interior)
      : interior_(std::move(interior)) {
    check_alphabet(static_cast<int>(interior_.size()) + 1);
    for (std::size_t i = 0; i < interior_.size(); ++i) {
      if (!std::isfinite(interior_[i])) {
        throw InvalidAlphabet("interior breakpoints must be finite");
      }
      if (i > 0 && !(interior_[i - 1] < interior_[i])) {
        throw InvalidAlphabet("breakpoints must be strictly increasing");
      }
    }
  }

  int alphabet_size() const noexcept {
    return static_cast<int>(interior_.size()) + 1;
  }

  std::span<const double> interior() const noexcept { return interior_; }

  //! Lower edge of a bin; -inf for the first one.
  double lower_edge(int symbol) const {
    return symbol == 0 ? -std::numeric_limits<double>::infinity()
                       : interior_[static_cast<std::size_t>(symbol) - 1];
  }

  //! Upper edge of a bin; +inf for the last one.
  double upper_edge(int symbol) const {
    return symbol == alphabet_size() - 1
               ? std::numeric_limits<double>::infinity()
               : interior_[static_cast<std::size_t>(symbol)];
  }

  //! Bin index of a value. A value sitting exactly on an edge belongs to the
  //! bin above it.
  int symbol_of(double value) const {
    const auto it = std::upper_bound(interior_.begin(), interior_.end(), value);
    return static_cast<int>(it - interior_.begin());
  }

  bool operator==(const Breakpoints&) const = default;

 private:
  std::vector<double> interior_;
};

//! One representative level per bin, used for reconstruction.
class Centroids {
 public:
  explicit Centroids(std::vector<double> levels) : levels_(std::move(levels)) {
    check_alphabet(static_cast<int>(levels_.size()));
    for (double v : levels_) {
      if (!std::isfinite(v)) throw InvalidAlphabet("centroids must be finite");
    }
  }

  int alphabet_size() const noexcept { return static_cast<int>(levels_.size()); }
  double operator[](int symbol) const noexcept {
    return levels_[static_cast<std::size_t>(symbol)];
  }
  std::span<const double> levels() const noexcept { return levels_; }

  bool operator==(const Centroids&) const = default;

 private:
  std::vector<double> levels_;
};

//! Symbolic word: one byte-sized symbol per PAA segment, tagged with the
//! alphabet it was drawn from and the source series length.
struct SymbolWord {
  std::vector<std::uint8_t> symbols;
  int alphabet_size = 0;
  std::size_t source_length = 0;

  std::size_t length() const noexcept { return symbols.size(); }

  bool operator==(const SymbolWord&) const = default;
};

//! Dense a-by-a matrix of per-cell distances between symbols.
class DistanceTable {
 public:
  DistanceTable(int alphabet_size, std::vector<double> cells)
      : a_(alphabet_size), cells_(std::move(cells)) {
    check_alphabet(a_);
    if (cells_.size() != static_cast<std::size_t>(a_) * static_cast<std::size_t>(a_)) {
      throw Error("DistanceTable: cell count must be a * a");
    }
  }

  int alphabet_size() const noexcept { return a_; }

  double cell(int q, int c) const noexcept {
    return cells_[static_cast<std::size_t>(q) * static_cast<std::size_t>(a_) +
                  static_cast<std::size_t>(c)];
  }

  std::span<const double> cells() const noexcept { return cells_; }

  bool operator==(const DistanceTable&) const = default;

 private:
  int a_;
  std::vector<double> cells_;
};

}  // namespace edwsax
