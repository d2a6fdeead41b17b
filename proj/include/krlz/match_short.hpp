#pragma once

// Patterns no longer than a threshold ell: the text is cut into overlapping
// blocks of length 2*ell with stride ell, and each block's suffix tree is
// matched against the trie of the patterns.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "krlz/fingerprint.hpp"
#include "krlz/stats.hpp"
#include "krlz/suffix_tree.hpp"
#include "krlz/trie.hpp"
#include "krlz/types.hpp"

namespace krlz {

struct BlockPlan {
  std::size_t ell = 1;
  std::size_t n = 0;

  // Blocks T[k*ell, min((k+2)*ell, n)); the last block reaches the end.
  std::size_t block_count() const {
    if (n == 0) return 0;
    if (n <= 2 * ell) return 1;
    return (n - 2 * ell + ell - 1) / ell + 1;
  }
  Position start(std::size_t k) const { return k * ell; }
  std::size_t length(std::size_t k) const { return std::min(2 * ell, n - start(k)); }
};

// Result of a longest-prefix query: the longest prefix of the pattern that
// occurs, and a witness start (absent iff length is 0).
struct PrefixMatch {
  std::size_t length = 0;
  MaybePosition witness;

  friend bool operator==(const PrefixMatch&, const PrefixMatch&) = default;
};

namespace detail {

inline CompactedTrie pattern_trie(const std::vector<SymbolSpan>& patterns) {
  auto order = sort_strings_lex(patterns);
  std::vector<SymbolSpan> sorted;
  std::vector<std::uint32_t> ids;
  sorted.reserve(order.size());
  for (std::size_t k : order) {
    sorted.push_back(patterns[k]);
    ids.push_back(static_cast<std::uint32_t>(k));
  }
  return build_compacted_trie(std::move(sorted), std::move(ids));
}

// Phi of a growing prefix P[0, len) together with x^len.
struct GrowingFingerprint {
  Fingerprint fp;
  std::array<std::uint64_t, kMaxChannels> power{};

  explicit GrowingFingerprint(const Fingerprinter& fpr) {
    for (std::size_t c = 0; c < fpr.channel_count(); ++c) power[c] = 1 % fpr.channel(c).prime;
  }
  void push(const Fingerprinter& fpr, Symbol sym) {
    for (std::size_t c = 0; c < fpr.channel_count(); ++c) {
      const Channel& ch = fpr.channel(c);
      fp.residue[c] = ch.add(fp.residue[c], ch.mul(ch.reduce(sym), power[c]));
      power[c] = ch.mul(power[c], ch.base);
    }
    ++fp.length;
  }
};

inline void check_short_patterns(const std::vector<SymbolSpan>& patterns, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("short-pattern threshold must be positive");
  for (auto p : patterns) {
    if (p.empty()) throw std::invalid_argument("empty pattern");
    if (p.size() > ell) throw std::invalid_argument("pattern longer than the short threshold");
  }
}

}  // namespace detail

// Leftmost occurrence of every pattern of length at most ell.
inline std::vector<MaybePosition> match_short_leftmost(const Fingerprinter& fpr, SymbolSpan text,
                                                       const std::vector<SymbolSpan>& patterns, std::size_t ell,
                                                       MatchStats* stats = nullptr) {
  detail::check_short_patterns(patterns, ell);
  std::vector<MaybePosition> ans(patterns.size());
  if (patterns.empty() || text.empty()) return ans;

  CompactedTrie ptrie = detail::pattern_trie(patterns);
  std::vector<Fingerprint> pfp;
  pfp.reserve(patterns.size());
  for (auto p : patterns) pfp.push_back(fpr.of(p, 0, p.size()));

  const BlockPlan plan{ell, text.size()};
  for (std::size_t k = 0; k < plan.block_count(); ++k) {
    const Position start = plan.start(k);
    const std::size_t len = plan.length(k);
    SliceView<SymbolSpan> block(text, start, len);
    BlockSuffixTree st(block);
    PrefixFingerprints bfp(fpr, block);
    TwinMap tw = match_twins(ptrie, st.trie(), false);
    if (stats) {
      stats->peak_block_nodes = std::max(stats->peak_block_nodes, st.trie().node_count());
      stats->twin_operations += tw.operations;
    }
    for (NodeId v = 0; v < ptrie.node_count(); ++v) {
      const TrieNode& node = ptrie.node(v);
      if (node.ids.empty()) continue;
      const Locus& loc = tw.candidate[v];
      const std::size_t plen = node.depth;
      if (st.trie().depth_of(loc) != plen) continue;
      const Position b = st.leftmost(loc);
      if (b + plen > len) continue;
      if (bfp.substring(b, plen) != pfp[node.ids.front()]) continue;
      for (auto j : node.ids) {
        if (!ans[j] || start + b < *ans[j]) ans[j] = start + b;
      }
    }
  }
  return ans;
}

// Longest prefix occurring in the text for every pattern of length at most
// ell. With bounds, only occurrences starting at or before bounds[j] count.
inline std::vector<PrefixMatch> longest_prefix_short(const Fingerprinter& fpr, SymbolSpan text,
                                                     const std::vector<SymbolSpan>& patterns, std::size_t ell,
                                                     std::span<const Position> bounds = {},
                                                     MatchStats* stats = nullptr) {
  detail::check_short_patterns(patterns, ell);
  const std::size_t s = patterns.size();
  std::vector<PrefixMatch> ans(s);
  if (s == 0 || text.empty()) return ans;
  const bool bounded = !bounds.empty();
  if (bounded && bounds.size() != s) throw std::invalid_argument("one bound per pattern expected");

  CompactedTrie ptrie = detail::pattern_trie(patterns);
  std::vector<detail::GrowingFingerprint> grown(s, detail::GrowingFingerprint(fpr));

  const BlockPlan plan{ell, text.size()};
  for (std::size_t k = 0; k < plan.block_count(); ++k) {
    const Position start = plan.start(k);
    const std::size_t len = plan.length(k);
    SliceView<SymbolSpan> block(text, start, len);
    BlockSuffixTree st(block);
    PrefixFingerprints bfp(fpr, block);
    TwinMap tw = match_twins(ptrie, st.trie(), true);
    const CompactedTrie& tt = st.trie();
    if (stats) {
      stats->peak_block_nodes = std::max(stats->peak_block_nodes, tt.node_count());
      stats->twin_operations += tw.operations;
    }
    for (NodeId v = 0; v < ptrie.node_count(); ++v) {
      const TrieNode& node = ptrie.node(v);
      if (node.ids.empty()) continue;
      const Locus& loc = tw.candidate[v];
      for (auto j : node.ids) {
        PrefixMatch& pm = ans[j];
        SymbolSpan p = patterns[j];
        if (pm.length == p.size()) continue;
        std::size_t cap = tt.depth_of(loc);
        Position b = st.leftmost(loc);
        if (bounded) {
          if (start > bounds[j]) continue;
          const Position rel = bounds[j] - start;
          if (b > rel) {
            // Deepest point on the path whose leftmost start respects the bound.
            NodeId u = loc.is_explicit() ? loc.node : loc.below;
            while (u != CompactedTrie::kRoot && tt.node(u).leftmost > rel) {
              u = tt.node(u).parent;
              cap = tt.node(u).depth;
            }
            b = tt.node(u).leftmost;
            if (u == CompactedTrie::kRoot) {
              cap = 0;
              b = 0;
            }
          }
        }
        if (cap < pm.length || b + pm.length > len) continue;
        if (pm.length > 0 && bfp.substring(b, pm.length) != grown[j].fp) continue;
        const Position pos = start + b;
        std::size_t l = pm.length;
        while (l < p.size() && pos + l < text.size() && text[pos + l] == p[l]) {
          grown[j].push(fpr, p[l]);
          ++l;
        }
        if (l > pm.length) {
          pm.length = l;
          pm.witness = pos;
        }
      }
    }
  }
  return ans;
}

}  // namespace krlz
