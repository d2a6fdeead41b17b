#pragma once

// Leftmost (and optionally rightmost) occurrences of many patterns that all
// have the same length, found by one rolling-window pass over the text.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "krlz/fingerprint.hpp"
#include "krlz/stats.hpp"
#include "krlz/types.hpp"

namespace krlz {

struct EqualLenResult {
  MaybePosition leftmost;
  MaybePosition rightmost;

  friend bool operator==(const EqualLenResult&, const EqualLenResult&) = default;
};

struct EqualLenOptions {
  std::span<const Position> bounds;  // optional per-pattern upper bound on the start
  bool want_rightmost = false;
  MatchStats* stats = nullptr;
};

// Patterns are given by their fingerprints; every key must describe a word of
// length `ell`.
template <SymbolView V>
std::vector<EqualLenResult> match_equal_fingerprints(const Fingerprinter& fpr, const V& text, std::size_t ell,
                                                     std::span<const Fingerprint> keys, EqualLenOptions opt = {}) {
  if (ell == 0) throw std::invalid_argument("equal-length matching needs a positive length");
  const std::size_t s = keys.size();
  std::vector<EqualLenResult> out(s);
  const std::size_t n = text.size();
  if (s == 0 || ell > n) return out;
  const bool bounded = !opt.bounds.empty();
  if (bounded && opt.bounds.size() != s) throw std::invalid_argument("one bound per pattern expected");

  std::vector<std::pair<Fingerprint, FpIndex::Id>> entries;
  entries.reserve(s);
  for (std::size_t j = 0; j < s; ++j) entries.push_back({keys[j], static_cast<FpIndex::Id>(j)});
  FpIndex index(std::move(entries));
  if (opt.stats) {
    opt.stats->note_index(index.entry_count());
    ++opt.stats->sweeps;
  }

  // One answer slot per distinct key; copied to all instances at the end.
  std::vector<EqualLenResult> slot(index.key_count());
  std::size_t unresolved = index.key_count();
  Position last_useful = n - ell;
  if (bounded && !opt.want_rightmost) {
    Position mx = 0;
    for (Position b : opt.bounds) mx = std::max(mx, b);
    last_useful = std::min(last_useful, mx);
  }
  const bool per_id = bounded && opt.want_rightmost;

  const WindowPowers wp = fpr.window_powers(ell);
  Fingerprint h = fpr.of(text, 0, ell);
  std::size_t visited = 0;
  for (Position i = 0;; ++i) {
    ++visited;
    std::size_t k = index.find(h);
    if (k != FpIndex::npos) {
      EqualLenResult& r = slot[k];
      if (!r.leftmost) {
        r.leftmost = i;
        --unresolved;
      }
      r.rightmost = i;
      if (per_id) {
        for (auto j : index.ids_of(k)) {
          if (i <= opt.bounds[j]) {
            if (!out[j].leftmost) out[j].leftmost = i;
            out[j].rightmost = i;
          }
        }
      }
    }
    if (i >= last_useful) break;
    if (unresolved == 0 && !opt.want_rightmost) break;
    h = fpr.roll(h, text[i], text[i + ell], wp);
  }
  if (opt.stats) opt.stats->windows += visited;

  if (!per_id) {
    for (std::size_t k = 0; k < index.key_count(); ++k) {
      for (auto j : index.ids_of(k)) {
        out[j] = slot[k];
        if (bounded && out[j].leftmost && *out[j].leftmost > opt.bounds[j]) out[j].leftmost.reset();
      }
    }
  }
  return out;
}

template <SymbolView V>
std::vector<EqualLenResult> match_equal_length(const Fingerprinter& fpr, const V& text,
                                               const std::vector<SymbolSpan>& patterns, EqualLenOptions opt = {}) {
  if (patterns.empty()) return {};
  const std::size_t ell = patterns.front().size();
  std::vector<Fingerprint> keys;
  keys.reserve(patterns.size());
  for (auto p : patterns) {
    if (p.size() != ell) throw std::invalid_argument("all patterns must share one length");
    keys.push_back(fpr.of(p, 0, p.size()));
  }
  return match_equal_fingerprints(fpr, text, ell, keys, opt);
}

}  // namespace krlz
