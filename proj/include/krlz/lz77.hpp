#pragma once

// LZ77-style factorizations in working space proportional to the number of
// phrases: a 2-optimal parse built in three phases, a (1+eps) refinement,
// and the exact greedy parse used as a reference.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "krlz/factorization.hpp"
#include "krlz/fingerprint.hpp"
#include "krlz/longest_prefix.hpp"
#include "krlz/match_equal.hpp"
#include "krlz/match_long.hpp"
#include "krlz/stats.hpp"
#include "krlz/types.hpp"

namespace krlz {

enum class ChainKind { Increasing, Decreasing };

// A run of phrases whose lengths are distinct powers of two: the set bits of
// `length`, ascending for increasing chains and descending for decreasing ones.
struct Chain {
  ChainKind kind = ChainKind::Decreasing;
  Position start = 0;
  std::size_t length = 0;

  friend bool operator==(const Chain&, const Chain&) = default;
};

// Two sibling leaves of the block tree; `pos`/`size` describe their parent.
struct Cherry {
  Position pos = 0;
  std::size_t size = 0;
  std::size_t dec_len = 0;  // decreasing chain ending with the left leaf
  std::size_t inc_len = 0;  // increasing chain starting with the right leaf

  friend bool operator==(const Cherry&, const Cherry&) = default;
};

struct LzStats {
  std::size_t padded_length = 0;
  std::size_t levels = 0;
  std::size_t peak_unfactored = 0;
  std::size_t peak_cherries = 0;
  std::size_t peak_live = 0;  // unfactored nodes + children under test + cherries
  std::size_t cherries = 0;
  std::size_t chains = 0;
  std::size_t phase1_phrases = 0;
  std::size_t phase2_rounds = 0;
  std::size_t phase2_phrases = 0;
  std::size_t phase3_iterations = 0;
  std::size_t phase3_phrases = 0;
  std::size_t refine_rounds = 0;
  std::size_t refine_phrases = 0;
  MatchStats match;
};

struct LzOptions {
  LzStats* stats = nullptr;
  bool las_vegas = false;
};

// Direct scan: does T[start, start+len) occur at some position < start?
inline bool is_previous_fragment(SymbolSpan text, Position start, std::size_t len) {
  if (len == 0 || start + len > text.size()) throw std::invalid_argument("fragment outside the text");
  if (start == 0) return false;
  SymbolSpan p = text.subspan(start, len);
  std::vector<std::size_t> fail(len, 0);
  for (std::size_t i = 1, k = 0; i < len; ++i) {
    while (k > 0 && p[i] != p[k]) k = fail[k - 1];
    if (p[i] == p[k]) ++k;
    fail[i] = k;
  }
  const Position limit = start + len - 1;  // last symbol of an occurrence starting before `start`
  for (std::size_t i = 0, k = 0; i < limit; ++i) {
    while (k > 0 && text[i] != p[k]) k = fail[k - 1];
    if (text[i] == p[k]) ++k;
    if (k == len) return true;
  }
  return false;
}

// Phrase lengths of a chain, left to right.
inline std::vector<std::size_t> chain_phrases(const Chain& c) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < 64; ++b) {
    if ((c.length >> b) & 1) out.push_back(std::size_t{1} << b);
  }
  if (c.kind == ChainKind::Decreasing) std::reverse(out.begin(), out.end());
  return out;
}

inline Factorization decode_chains(const std::vector<Chain>& chains) {
  std::vector<std::size_t> lengths;
  for (const Chain& c : chains)
    for (std::size_t l : chain_phrases(c)) lengths.push_back(l);
  return from_lengths(lengths);
}

struct Phase1Result {
  std::vector<Chain> chains;    // tile the text
  std::vector<Cherry> cherries; // induced blocks starting inside the text
};

// Symbol used to pad the text to a power of two.
inline Symbol padding_symbol(SymbolSpan text) {
  Symbol mx = 0;
  for (Symbol c : text) mx = std::max(mx, c);
  return std::max<Symbol>(kSentinel, mx + 1);
}

namespace detail {

// Keeps the phrases of a chain that lie inside [0, n).
inline std::size_t clip_chain(const Chain& c, std::size_t n) {
  if (c.start >= n) return 0;
  if (c.start + c.length <= n) return c.length;
  std::size_t kept = 0;
  for (std::size_t l : chain_phrases(c)) {
    if (c.start + kept + l > n) break;
    kept += l;
  }
  if (c.start + kept != n) throw invariant_violation("a phrase straddles the end of the text");
  return kept;
}

}  // namespace detail

// Top-down parse of the block tree: a block that is a previous fragment (or a
// single symbol) becomes a phrase, any other block is split in two. Phrases
// are kept implicitly as chain lengths attached to the unfactored nodes.
inline Phase1Result phase1_chains(const Fingerprinter& fpr, SymbolSpan text, LzStats* stats = nullptr) {
  Phase1Result out;
  const std::size_t n = text.size();
  if (n == 0) return out;
  const std::size_t N = std::bit_ceil(n);
  const PaddedView padded(text, N, padding_symbol(text));
  if (stats) stats->padded_length = N;

  struct Node {
    Position pos;
    std::size_t pre;   // phrases between the previous unfactored node and this one, left part
    std::size_t post;  // right part
  };
  std::vector<Cherry> cherries;
  std::vector<Node> level;
  if (N == 1) {
    out.chains.push_back({ChainKind::Decreasing, 0, 1});
    return out;
  }
  level.push_back({0, 0, 0});
  for (std::size_t size = N; !level.empty(); size /= 2) {
    const std::size_t half = size / 2;
    if (stats) ++stats->levels;
    std::vector<Fingerprint> keys;
    keys.reserve(2 * level.size());
    for (const Node& w : level) {
      keys.push_back(fpr.of(padded, w.pos, half));
      keys.push_back(fpr.of(padded, w.pos + half, half));
    }
    auto found = match_equal_fingerprints(fpr, padded, half, keys, {.bounds = {}, .want_rightmost = false,
                                                                    .stats = stats ? &stats->match : nullptr});
    std::vector<Node> next;
    std::vector<Cherry> fresh;
    for (std::size_t k = 0; k < level.size(); ++k) {
      const Node& w = level[k];
      const Position p1 = w.pos, p2 = w.pos + half;
      const bool leaf1 = half == 1 || (found[2 * k].leftmost && *found[2 * k].leftmost < p1);
      const bool leaf2 = half == 1 || (found[2 * k + 1].leftmost && *found[2 * k + 1].leftmost < p2);
      if (leaf1 && leaf2) {
        fresh.push_back({w.pos, size, w.pre | half, half | w.post});
      } else if (leaf1) {
        next.push_back({p2, w.pre | half, w.post});
      } else if (leaf2) {
        next.push_back({p1, w.pre, half | w.post});
      } else {
        next.push_back({p1, w.pre, 0});
        next.push_back({p2, 0, w.post});
      }
    }
    std::vector<Cherry> merged;
    merged.reserve(cherries.size() + fresh.size());
    std::merge(cherries.begin(), cherries.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
               [](const Cherry& a, const Cherry& b) { return a.pos < b.pos; });
    cherries = std::move(merged);
    if (stats) {
      stats->peak_unfactored = std::max(stats->peak_unfactored, level.size());
      stats->peak_cherries = std::max(stats->peak_cherries, cherries.size());
      stats->peak_live = std::max(stats->peak_live, 3 * level.size() + cherries.size());
    }
    level = std::move(next);
  }

  Position at = 0;
  for (const Cherry& c : cherries) {
    for (auto [kind, len] : {std::pair{ChainKind::Decreasing, c.dec_len}, std::pair{ChainKind::Increasing, c.inc_len}}) {
      const Chain full{kind, at, len};
      const std::size_t kept = detail::clip_chain(full, n);
      if (kept > 0) out.chains.push_back({kind, at, kept});
      at += len;
    }
    if (c.pos < n) out.cherries.push_back(c);
  }
  if (at != N) throw invariant_violation("chains do not tile the padded text");
  if (stats) {
    stats->cherries = out.cherries.size();
    stats->chains = out.chains.size();
    std::size_t phrases = 0;
    for (const Chain& c : out.chains) phrases += static_cast<std::size_t>(std::popcount(c.length));
    stats->phase1_phrases = phrases;
  }
  return out;
}

// Merges phrases inside every chain. Increasing chains grow an active group
// to the right while the fragment of twice the next phrase's length starting
// at the group is a previous fragment; decreasing chains do the same from
// their right end, growing to the left. All chains advance together, one
// power of two per round.
inline Factorization phase2_merge(const Fingerprinter& fpr, SymbolSpan text, const std::vector<Chain>& chains,
                                  LzStats* stats = nullptr) {
  const std::size_t n = text.size();
  struct State {
    bool started = false;
    Position lo = 0, hi = 0;  // active group [lo, hi)
    std::vector<std::pair<Position, std::size_t>> groups;
  };
  std::vector<State> st(chains.size());
  std::size_t max_len = 0;
  for (const Chain& c : chains) max_len = std::max(max_len, c.length);
  const int top = max_len == 0 ? -1 : static_cast<int>(std::bit_width(max_len)) - 1;

  for (int b = 0; b <= top; ++b) {
    const std::size_t ph = std::size_t{1} << b;
    std::vector<std::size_t> who;
    std::vector<Fingerprint> keys;
    std::vector<Position> starts;
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const Chain& c = chains[k];
      if (!((c.length >> b) & 1)) continue;
      State& s = st[k];
      if (!s.started) {
        s.started = true;
        if (c.kind == ChainKind::Increasing) {
          s.lo = c.start;
          s.hi = c.start + ph;
        } else {
          s.hi = c.start + c.length;
          s.lo = s.hi - ph;
        }
        continue;
      }
      // The doubled fragment must lie inside the text to be tested.
      Position fs;
      if (c.kind == ChainKind::Increasing) {
        fs = s.lo;
        if (fs + 2 * ph > n) fs = static_cast<Position>(-1);
      } else {
        fs = s.hi >= 2 * ph ? s.hi - 2 * ph : static_cast<Position>(-1);
      }
      who.push_back(k);
      starts.push_back(fs);
      keys.push_back(fs == static_cast<Position>(-1) ? Fingerprint{} : fpr.of(text, fs, 2 * ph));
    }
    if (who.empty()) continue;
    if (stats) ++stats->phase2_rounds;
    // Keys for untestable fragments are never looked at.
    std::vector<Fingerprint> live_keys;
    std::vector<std::size_t> live_idx;
    for (std::size_t q = 0; q < who.size(); ++q) {
      if (starts[q] != static_cast<Position>(-1)) {
        live_keys.push_back(keys[q]);
        live_idx.push_back(q);
      }
    }
    std::vector<bool> previous(who.size(), false);
    if (!live_keys.empty()) {
      auto found = match_equal_fingerprints(fpr, text, 2 * ph, live_keys,
                                            {.bounds = {}, .want_rightmost = false,
                                             .stats = stats ? &stats->match : nullptr});
      for (std::size_t q = 0; q < live_idx.size(); ++q)
        previous[live_idx[q]] = found[q].leftmost && *found[q].leftmost < starts[live_idx[q]];
    }
    for (std::size_t q = 0; q < who.size(); ++q) {
      const Chain& c = chains[who[q]];
      State& s = st[who[q]];
      if (c.kind == ChainKind::Increasing) {
        if (previous[q]) {
          s.hi += ph;
        } else {
          s.groups.push_back({s.lo, s.hi - s.lo});
          s.lo = s.hi;
          s.hi += ph;
        }
      } else {
        if (previous[q]) {
          s.lo -= ph;
        } else {
          s.groups.push_back({s.lo, s.hi - s.lo});
          s.hi = s.lo;
          s.lo -= ph;
        }
      }
    }
  }
  Factorization f;
  f.n = n;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    State& s = st[k];
    if (!s.started) continue;
    s.groups.push_back({s.lo, s.hi - s.lo});
    if (chains[k].kind == ChainKind::Decreasing) std::reverse(s.groups.begin(), s.groups.end());
    for (auto [pos, len] : s.groups) f.phrases.push_back({pos, len, std::nullopt, 0});
  }
  if (stats) stats->phase2_phrases = f.size();
  return f;
}

// Up to c rounds of merging adjacent phrases whose concatenation is a
// previous fragment; a phrase that has just absorbed its successor does not
// absorb another one in the same round. Turns a c-optimal parse into a
// 2-optimal one.
inline Factorization phase3_two_opt(const Fingerprinter& fpr, SymbolSpan text, Factorization f, std::size_t c,
                                    LzStats* stats = nullptr, bool las_vegas = false) {
  for (std::size_t iter = 0; iter < c && f.size() > 1; ++iter) {
    if (stats) ++stats->phase3_iterations;
    std::vector<SymbolSpan> pairs;
    pairs.reserve(f.size() - 1);
    for (std::size_t k = 1; k < f.size(); ++k)
      pairs.push_back(text.subspan(f.phrases[k - 1].start, f.phrases[k - 1].length + f.phrases[k].length));
    auto found = match_dictionary(fpr, text, pairs, {.stats = stats ? &stats->match : nullptr, .las_vegas = las_vegas});
    std::vector<Phrase> out;
    out.reserve(f.size());
    bool just_merged = false;
    bool any = false;
    out.push_back(f.phrases[0]);
    for (std::size_t k = 1; k < f.size(); ++k) {
      const bool previous = found[k - 1] && *found[k - 1] < f.phrases[k - 1].start;
      if (previous && !just_merged) {
        out.back().length += f.phrases[k].length;
        just_merged = true;
        any = true;
      } else {
        out.push_back(f.phrases[k]);
        just_merged = false;
      }
    }
    for (Phrase& p : out) p.source.reset();
    f.phrases = std::move(out);
    if (!any) break;
  }
  if (stats) stats->phase3_phrases = f.size();
  return f;
}

// Fills in sources (leftmost earlier occurrence) and literal symbols.
inline void attach_sources(const Fingerprinter& fpr, SymbolSpan text, Factorization& f, LzOptions opt = {}) {
  std::vector<SymbolSpan> words;
  words.reserve(f.size());
  for (const Phrase& p : f.phrases) words.push_back(text.subspan(p.start, p.length));
  auto found = match_dictionary(fpr, text, words,
                                {.stats = opt.stats ? &opt.stats->match : nullptr, .las_vegas = opt.las_vegas});
  for (std::size_t k = 0; k < f.size(); ++k) {
    Phrase& p = f.phrases[k];
    if (found[k] && *found[k] < p.start) {
      p.source = found[k];
    } else if (p.length == 1) {
      p.source.reset();
      p.literal = text[p.start];
    } else {
      throw invariant_violation("a phrase is not a previous fragment");
    }
  }
}

namespace detail {

inline void check_las_vegas(SymbolSpan text, const Factorization& f) {
  std::string err = validate_factorization(text, f);
  if (!err.empty()) throw verification_failure("factorization failed verification: " + err);
}

}  // namespace detail

// At most 2z phrases, 2-optimal.
inline Factorization approximate_lz77_2opt(const Fingerprinter& fpr, SymbolSpan text, LzOptions opt = {}) {
  Factorization f;
  f.n = text.size();
  if (text.empty()) return f;
  Phase1Result p1 = phase1_chains(fpr, text, opt.stats);
  f = phase2_merge(fpr, text, p1.chains, opt.stats);
  f = phase3_two_opt(fpr, text, std::move(f), 5, opt.stats, opt.las_vegas);
  attach_sources(fpr, text, f, opt);
  if (opt.las_vegas) detail::check_las_vegas(text, f);
  return f;
}

// Phrases per block in the refinement: ceil(2/eps).
inline std::size_t refine_block_size(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(2.0 / eps - 1e-9));
}

// Cuts a parse into blocks of ceil(2/eps) phrases and re-parses every block
// greedily with phrases that stay inside the block. From a 2-optimal parse
// this gives at most (1+eps)z phrases.
inline Factorization refine_epsilon(const Fingerprinter& fpr, SymbolSpan text, const Factorization& base, double eps,
                                    LzOptions opt = {}) {
  const std::size_t per_block = refine_block_size(eps);
  if (base.n != text.size() || !tiles(base)) throw std::invalid_argument("base factorization does not tile the text");
  struct Block {
    Position at, end;
    std::vector<Phrase> out;
  };
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < base.size(); k += per_block) {
    const std::size_t last = std::min(base.size(), k + per_block) - 1;
    blocks.push_back({base.phrases[k].start, base.phrases[last].start + base.phrases[last].length, {}});
  }
  for (;;) {
    std::vector<std::size_t> active;
    std::vector<SymbolSpan> words;
    std::vector<Position> bounds;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      Block& blk = blocks[b];
      if (blk.at >= blk.end) continue;
      if (blk.at == 0) {
        blk.out.push_back({0, 1, std::nullopt, text[0]});
        blk.at = 1;
        if (blk.at >= blk.end) continue;
      }
      active.push_back(b);
      words.push_back(text.subspan(blk.at, blk.end - blk.at));
      bounds.push_back(blk.at - 1);
    }
    if (active.empty()) break;
    if (opt.stats) ++opt.stats->refine_rounds;
    auto lp = longest_prefix_bounded(fpr, text, words, bounds, opt.stats ? &opt.stats->match : nullptr);
    for (std::size_t q = 0; q < active.size(); ++q) {
      Block& blk = blocks[active[q]];
      if (lp[q].length == 0) {
        blk.out.push_back({blk.at, 1, std::nullopt, text[blk.at]});
        blk.at += 1;
      } else {
        blk.out.push_back({blk.at, lp[q].length, lp[q].witness, 0});
        blk.at += lp[q].length;
      }
    }
  }
  Factorization f;
  f.n = text.size();
  for (Block& blk : blocks) f.phrases.insert(f.phrases.end(), blk.out.begin(), blk.out.end());
  if (opt.stats) opt.stats->refine_phrases = f.size();
  if (opt.las_vegas) detail::check_las_vegas(text, f);
  return f;
}

// True iff no c consecutive phrases concatenate to a previous fragment.
// Quadratic; meant for tests and small inputs.
inline bool check_c_optimal(SymbolSpan text, const Factorization& f, std::size_t c) {
  if (c == 0) throw std::invalid_argument("c must be positive");
  for (std::size_t k = 0; k + c <= f.size(); ++k) {
    const Position s = f.phrases[k].start;
    const Phrase& last = f.phrases[k + c - 1];
    if (is_previous_fragment(text, s, last.start + last.length - s)) return false;
  }
  return true;
}

// The greedy parse: each phrase is the longest prefix of the rest of the
// text that occurs earlier (leftmost such source), or a fresh symbol.
// O(n) time per phrase via the Z-function.
inline Factorization exact_lz77(SymbolSpan text) {
  const std::size_t n = text.size();
  Factorization f;
  f.n = n;
  std::vector<std::size_t> z;
  Position i = 0;
  while (i < n) {
    // Z-function of text[i..n) followed by text[0..i); a match at j < i may
    // run past i into the phrase itself.
    const std::size_t m = n - i;
    auto at = [&](std::size_t k) { return k < m ? text[i + k] : text[k - m]; };
    const std::size_t total = n;
    z.assign(total, 0);
    std::size_t best = 0, src = 0;
    for (std::size_t k = 1, l = 0, r = 0; k < total; ++k) {
      std::size_t v = 0;
      if (k < r) v = std::min(r - k, z[k - l]);
      while (k + v < total && at(v) == at(k + v)) ++v;
      z[k] = v;
      if (k + v > r) {
        l = k;
        r = k + v;
      }
      if (k >= m) {
        // Candidate source j = k - m; the copy may continue past the end of
        // the rotated string, so extend directly in the text.
        const std::size_t j = k - m;
        std::size_t len = v;
        if (len == n - k) {
          while (i + len < n && text[j + len] == text[i + len]) ++len;
        }
        len = std::min(len, m);
        if (len > best) {
          best = len;
          src = j;
        }
      }
    }
    if (best == 0) {
      f.phrases.push_back({i, 1, std::nullopt, text[i]});
      i += 1;
    } else {
      f.phrases.push_back({i, best, src, 0});
      i += best;
    }
  }
  return f;
}

}  // namespace krlz
