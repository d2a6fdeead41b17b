#pragma once

// Constant-space stringology: two-way matching, shortest periods, and the
// non-highly-periodic window locator used by the longest-prefix matcher.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "krlz/types.hpp"

namespace krlz {

struct PeriodInfo {
  bool periodic = false;
  std::size_t period = 0;  // meaningful only when periodic

  friend bool operator==(const PeriodInfo&, const PeriodInfo&) = default;
};

namespace detail {

// Maximal suffix of x under the symbol order (or its reverse), as used by
// the critical factorization. Returns {start-1, period}.
template <SymbolView V>
std::pair<std::int64_t, std::int64_t> maximal_suffix(const V& x, bool reversed) {
  const auto m = static_cast<std::int64_t>(x.size());
  std::int64_t ms = -1, j = 0, k = 1, p = 1;
  while (j + k < m) {
    const Symbol a = x[static_cast<Position>(j + k)];
    const Symbol b = x[static_cast<Position>(ms + k)];
    if (reversed ? a > b : a < b) {
      j += k;
      k = 1;
      p = j - ms;
    } else if (a == b) {
      if (k != p) {
        ++k;
      } else {
        j += p;
        k = 1;
      }
    } else {
      ms = j;
      j = ms + 1;
      k = p = 1;
    }
  }
  return {ms, p};
}

}  // namespace detail

// Leftmost occurrence of `pattern` in `text` starting at or after `from`.
// Two-way (Crochemore-Perrin) search, O(|text| + |pattern|) time and O(1)
// extra space.
template <SymbolView P, SymbolView T>
MaybePosition find_first_occurrence(const P& x, const T& y, Position from = 0) {
  const auto m = static_cast<std::int64_t>(x.size());
  const auto n = static_cast<std::int64_t>(y.size());
  if (m == 0) throw std::invalid_argument("empty pattern");
  const auto start = static_cast<std::int64_t>(from);
  if (start + m > n) return std::nullopt;

  auto [i1, p1] = detail::maximal_suffix(x, false);
  auto [i2, p2] = detail::maximal_suffix(x, true);
  std::int64_t ell, per;
  if (i1 > i2) {
    ell = i1;
    per = p1;
  } else {
    ell = i2;
    per = p2;
  }
  auto X = [&](std::int64_t i) { return x[static_cast<Position>(i)]; };
  auto Y = [&](std::int64_t i) { return y[static_cast<Position>(i)]; };

  bool small_period = per + ell + 1 <= m;
  for (std::int64_t i = 0; small_period && i <= ell; ++i) {
    if (X(i) != X(i + per)) small_period = false;
  }

  std::int64_t j = start;
  if (small_period) {
    std::int64_t memory = -1;
    while (j <= n - m) {
      std::int64_t i = std::max(ell, memory) + 1;
      while (i < m && X(i) == Y(i + j)) ++i;
      if (i >= m) {
        i = ell;
        while (i > memory && X(i) == Y(i + j)) --i;
        if (i <= memory) return static_cast<Position>(j);
        j += per;
        memory = m - per - 1;
      } else {
        j += i - ell;
        memory = -1;
      }
    }
  } else {
    per = std::max(ell + 1, m - ell - 1) + 1;
    while (j <= n - m) {
      std::int64_t i = ell + 1;
      while (i < m && X(i) == Y(i + j)) ++i;
      if (i >= m) {
        i = ell;
        while (i >= 0 && X(i) == Y(i + j)) --i;
        if (i < 0) return static_cast<Position>(j);
        j += per;
      } else {
        j += i - ell;
      }
    }
  }
  return std::nullopt;
}

// Decides whether per(w) <= |w|/2 and reports per(w) if so. The candidate is
// one less than the start of the second occurrence of the half-prefix.
template <SymbolView V>
PeriodInfo shortest_period(const V& w) {
  const std::size_t m = w.size();
  if (m == 0) throw std::invalid_argument("shortest_period of the empty word");
  const std::size_t half = (m + 1) / 2;
  SliceView<V> v(w, 0, half);
  auto second = find_first_occurrence(v, w, 1);
  if (!second) return {};
  const std::size_t p = *second;
  for (std::size_t i = 0; i + p < m; ++i) {
    if (w[i] != w[i + p]) return {};
  }
  return {true, p};
}

inline PeriodInfo shortest_period(SymbolSpan w) { return shortest_period<SymbolSpan>(w); }

// per(w) <= |w|/3, compared as 3*per <= |w|.
template <SymbolView V>
bool is_highly_periodic(const V& w) {
  PeriodInfo pi = shortest_period(w);
  return pi.periodic && 3 * pi.period <= w.size();
}

inline bool is_highly_periodic(SymbolSpan w) { return is_highly_periodic<SymbolSpan>(w); }

// Returns i (0-based) such that w[i, i+ell) is not highly periodic and either
// i == 0 or w[0, i+ell-1) is highly periodic.
template <SymbolView V>
Position find_nonperiodic_window(const V& w, std::size_t ell) {
  if (ell < 3) throw std::invalid_argument("window length must be at least 3");
  if (w.size() < ell) throw std::invalid_argument("word shorter than the window");
  SliceView<V> head(w, 0, ell);
  PeriodInfo pi = shortest_period(head);
  if (!pi.periodic || 3 * pi.period > ell) return 0;
  // Extend the period of the head as far as it goes.
  std::size_t j = ell;
  while (j < w.size() && w[j] == w[j - pi.period]) ++j;
  if (j == w.size()) throw std::invalid_argument("word is highly periodic");
  return j + 1 - ell;
}

inline Position find_nonperiodic_window(SymbolSpan w, std::size_t ell) {
  return find_nonperiodic_window<SymbolSpan>(w, ell);
}

// A prefix x and suffix y of w sharing period p force p onto w when
// |x| + |y| >= |w| + p.
constexpr bool period_transfer_check(std::size_t x_len, std::size_t y_len, std::size_t w_len, std::size_t p) {
  return x_len + y_len >= w_len + p;
}

}  // namespace krlz
