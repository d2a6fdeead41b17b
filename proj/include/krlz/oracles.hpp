#pragma once

// Quadratic reference implementations. They share nothing with the fast
// paths beyond the basic types, and back the CLI's --verify-oracle option.

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "krlz/factorization.hpp"
#include "krlz/types.hpp"

namespace krlz::oracles {

struct NaiveMatch {
  MaybePosition leftmost;
  MaybePosition rightmost;
  std::vector<Position> all;
};

inline std::vector<NaiveMatch> naive_multi_match(SymbolSpan text, std::span<const SymbolSpan> patterns) {
  std::vector<NaiveMatch> out(patterns.size());
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const SymbolSpan p = patterns[j];
    if (p.empty() || p.size() > text.size()) continue;
    for (Position i = 0; i + p.size() <= text.size(); ++i) {
      std::size_t k = 0;
      while (k < p.size() && text[i + k] == p[k]) ++k;
      if (k == p.size()) out[j].all.push_back(i);
    }
    if (!out[j].all.empty()) {
      out[j].leftmost = out[j].all.front();
      out[j].rightmost = out[j].all.back();
    }
  }
  return out;
}

struct BrutePrefix {
  std::size_t length = 0;
  MaybePosition witness;  // leftmost start achieving the length
};

// Longest prefix of `pattern` occurring at a start <= r.
inline BrutePrefix brute_longest_prefix(SymbolSpan text, SymbolSpan pattern, Position r = static_cast<Position>(-1)) {
  BrutePrefix best;
  for (Position i = 0; i < text.size() && i <= r; ++i) {
    std::size_t l = 0;
    while (l < pattern.size() && i + l < text.size() && text[i + l] == pattern[l]) ++l;
    if (l > best.length) best = {l, i};
  }
  return best;
}

inline std::size_t brute_period(SymbolSpan w) {
  for (std::size_t p = 1; p <= w.size(); ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < w.size() && ok; ++i) ok = w[i] == w[i + p];
    if (ok) return p;
  }
  return 0;
}

// Greedy parse by trying every earlier start.
inline Factorization brute_exact_lz77(SymbolSpan text) {
  Factorization f;
  f.n = text.size();
  for (Position i = 0; i < text.size();) {
    std::size_t best = 0;
    Position src = 0;
    for (Position j = 0; j < i; ++j) {
      std::size_t l = 0;
      while (i + l < text.size() && text[j + l] == text[i + l]) ++l;
      if (l > best) {
        best = l;
        src = j;
      }
    }
    if (best == 0) {
      f.phrases.push_back({i, 1, std::nullopt, text[i]});
      ++i;
    } else {
      f.phrases.push_back({i, best, src, 0});
      i += best;
    }
  }
  return f;
}

}  // namespace krlz::oracles
