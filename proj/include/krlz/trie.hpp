#pragma once

// Compacted tries over read-only strings, lexicographic sorting of string
// sets, and twin matching between two tries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "krlz/types.hpp"

namespace krlz {

namespace detail {

// -1, 0, +1 for a < b, a == b, a > b, comparing from offset `from` on
// (the caller guarantees equality before it). Also reports the lcp.
inline int compare_from(SymbolSpan a, SymbolSpan b, std::size_t& lcp) {
  while (lcp < a.size() && lcp < b.size() && a[lcp] == b[lcp]) ++lcp;
  if (lcp == a.size()) return lcp == b.size() ? 0 : -1;
  if (lcp == b.size()) return 1;
  return a[lcp] < b[lcp] ? -1 : 1;
}

inline bool lex_less(SymbolSpan a, SymbolSpan b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Insertion sort that keeps the lcp of adjacent sorted strings, so that each
// insertion costs O(position + length).
inline std::vector<std::size_t> lcp_insertion_sort(const std::vector<SymbolSpan>& strs,
                                                   const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> sorted;
  std::vector<std::size_t> lcp;  // lcp[k] = lcp(sorted[k-1], sorted[k]); lcp[0] unused
  for (std::size_t id : ids) {
    SymbolSpan p = strs[id];
    std::size_t k = 0;
    std::size_t l = 0;       // lcp(p, sorted[k])
    std::size_t l_prev = 0;  // lcp(p, sorted[k-1])
    bool placed = false;
    while (k < sorted.size()) {
      if (k > 0) {
        const std::size_t lk = lcp[k];
        l_prev = l;
        if (lk > l) {
          ++k;
          continue;  // sorted[k] agrees with sorted[k-1] past l, so it is still smaller
        }
        if (lk < l) {
          // p agrees with sorted[k-1] longer than sorted[k] does: p < sorted[k]
          l = lk;
          placed = true;
          break;
        }
      }
      int c = compare_from(p, strs[sorted[k]], l);
      if (c < 0) {
        placed = true;
        break;
      }
      ++k;
    }
    if (!placed) {
      l_prev = l;
      l = 0;
    }
    sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(k), id);
    if (lcp.empty()) {
      lcp.push_back(0);
    } else {
      lcp.insert(lcp.begin() + static_cast<std::ptrdiff_t>(k), k == 0 ? 0 : l_prev);
      if (k + 1 < sorted.size()) lcp[k + 1] = l;
    }
  }
  return sorted;
}

// Stable LSD radix sort of short strings, one byte digit per pass. Strings
// that end before the current position sort first.
inline std::vector<std::size_t> radix_sort_strings(const std::vector<SymbolSpan>& strs,
                                                   std::vector<std::size_t> ids) {
  std::size_t max_len = 0;
  Symbol max_sym = 0;
  for (std::size_t id : ids) {
    max_len = std::max(max_len, strs[id].size());
    for (Symbol c : strs[id]) max_sym = std::max(max_sym, c);
  }
  int digits = 1;
  while (digits < 4 && (static_cast<std::uint64_t>(max_sym) >> (8 * digits)) != 0) ++digits;

  std::vector<std::size_t> inactive, active, scratch;
  for (std::size_t pos = max_len; pos-- > 0;) {
    inactive.clear();
    active.clear();
    for (std::size_t id : ids) (strs[id].size() > pos ? active : inactive).push_back(id);
    for (int d = 0; d < digits; ++d) {
      std::size_t count[257] = {};
      for (std::size_t id : active) ++count[((strs[id][pos] >> (8 * d)) & 0xff) + 1];
      for (int b = 0; b < 256; ++b) count[b + 1] += count[b];
      scratch.resize(active.size());
      for (std::size_t id : active) scratch[count[(strs[id][pos] >> (8 * d)) & 0xff]++] = id;
      active.swap(scratch);
    }
    ids.clear();
    ids.insert(ids.end(), inactive.begin(), inactive.end());
    ids.insert(ids.end(), active.begin(), active.end());
  }
  return ids;
}

}  // namespace detail

// Permutation listing the strings in lexicographic order, stable among
// equal strings. The longest sqrt(m)+256 strings go through the lcp insertion
// sort, the rest through radix sort, and the two lists are merged.
inline std::vector<std::size_t> sort_strings_lex(const std::vector<SymbolSpan>& strs) {
  const std::size_t s = strs.size();
  std::size_t m = 0;
  for (auto w : strs) m += w.size();
  const std::size_t cut = std::min(s, static_cast<std::size_t>(std::sqrt(static_cast<double>(m))) + 256);

  std::vector<std::size_t> ids(s);
  std::iota(ids.begin(), ids.end(), 0);
  auto longer = [&](std::size_t a, std::size_t b) {
    if (strs[a].size() != strs[b].size()) return strs[a].size() > strs[b].size();
    return a < b;
  };
  if (cut < s) std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(cut), ids.end(), longer);
  std::vector<std::size_t> long_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<std::size_t> short_ids(ids.begin() + static_cast<std::ptrdiff_t>(cut), ids.end());
  // Restore input order inside each part so that both sorts stay stable.
  std::sort(long_ids.begin(), long_ids.end());
  std::sort(short_ids.begin(), short_ids.end());

  auto a = detail::lcp_insertion_sort(strs, long_ids);
  auto b = detail::radix_sort_strings(strs, std::move(short_ids));

  std::vector<std::size_t> out;
  out.reserve(s);
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), [&](std::size_t x, std::size_t y) {
    if (detail::lex_less(strs[x], strs[y])) return true;
    if (detail::lex_less(strs[y], strs[x])) return false;
    return x < y;
  });
  return out;
}

// Node index inside a CompactedTrie.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct TrieNode {
  NodeId parent = kNoNode;
  // Edge label from the parent: sources[source][label_start, label_start+label_len).
  std::uint32_t source = 0;
  Position label_start = 0;
  std::size_t label_len = 0;
  std::size_t depth = 0;
  std::vector<std::pair<Symbol, NodeId>> children;  // sorted by first symbol
  std::vector<std::uint32_t> ids;                   // strings whose locus is this node
  Position leftmost = 0;                            // suffix trees: leftmost leaf below
};

// A (possibly implicit) node. Explicit when offset == 0; otherwise it lies
// `offset` symbols down the edge from `node` to its child `below`.
struct Locus {
  NodeId node = 0;
  NodeId below = kNoNode;
  std::size_t offset = 0;

  bool is_explicit() const { return offset == 0; }
  friend bool operator==(const Locus&, const Locus&) = default;
};

class CompactedTrie {
 public:
  static constexpr NodeId kRoot = 0;

  CompactedTrie() { nodes_.emplace_back(); }
  explicit CompactedTrie(std::vector<SymbolSpan> sources) : sources_(std::move(sources)) { nodes_.emplace_back(); }

  std::size_t node_count() const { return nodes_.size(); }
  const TrieNode& node(NodeId v) const { return nodes_[v]; }
  TrieNode& node(NodeId v) { return nodes_[v]; }
  const std::vector<SymbolSpan>& sources() const { return sources_; }
  std::vector<SymbolSpan>& sources() { return sources_; }

  Symbol label_at(NodeId v, std::size_t offset) const {
    const TrieNode& n = nodes_[v];
    return sources_[n.source][n.label_start + offset];
  }

  NodeId child(NodeId v, Symbol first) const {
    const auto& ch = nodes_[v].children;
    auto it = std::lower_bound(ch.begin(), ch.end(), first, [](const auto& e, Symbol s) { return e.first < s; });
    if (it == ch.end() || it->first != first) return kNoNode;
    return it->second;
  }

  NodeId add_node(TrieNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void attach_child(NodeId parent, NodeId c) {
    auto& ch = nodes_[parent].children;
    const Symbol first = label_at(c, 0);
    auto it = std::lower_bound(ch.begin(), ch.end(), first, [](const auto& e, Symbol s) { return e.first < s; });
    if (it != ch.end() && it->first == first) {
      it->second = c;
    } else {
      ch.insert(it, {first, c});
    }
    nodes_[c].parent = parent;
  }

  std::size_t depth_of(const Locus& l) const { return nodes_[l.node].depth + l.offset; }

  // Symbol right after the locus along an implicit edge.
  Symbol next_on_edge(const Locus& l) const { return label_at(l.below, l.offset); }

  // Walks down from the root along w; returns the locus of w or nullopt.
  std::optional<Locus> find(SymbolSpan w) const {
    Locus cur{kRoot, kNoNode, 0};
    std::size_t d = 0;
    while (d < w.size()) {
      if (cur.is_explicit()) {
        NodeId c = child(cur.node, w[d]);
        if (c == kNoNode) return std::nullopt;
        cur = {cur.node, c, 0};
      } else if (next_on_edge(cur) != w[d]) {
        return std::nullopt;
      }
      ++cur.offset;
      ++d;
      if (cur.offset == nodes_[cur.below].label_len) cur = {cur.below, kNoNode, 0};
    }
    return cur;
  }

  // Decodes the string spelled by the path to a locus.
  std::vector<Symbol> spell(const Locus& l) const {
    std::vector<NodeId> path;
    for (NodeId v = l.node; v != kRoot; v = nodes_[v].parent) path.push_back(v);
    std::vector<Symbol> out;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      for (std::size_t k = 0; k < nodes_[*it].label_len; ++k) out.push_back(label_at(*it, k));
    }
    for (std::size_t k = 0; k < l.offset; ++k) out.push_back(label_at(l.below, k));
    return out;
  }

 private:
  std::vector<SymbolSpan> sources_;
  std::vector<TrieNode> nodes_;
};

// Builds the compacted trie of lexicographically sorted strings by inserting
// them one by one from the root. `ids[k]` is attached to the locus of
// strings[k]; by default the id is k.
inline CompactedTrie build_compacted_trie(std::vector<SymbolSpan> strings, std::vector<std::uint32_t> ids = {}) {
  for (std::size_t k = 1; k < strings.size(); ++k) {
    if (detail::lex_less(strings[k], strings[k - 1])) throw std::invalid_argument("build_compacted_trie: input not sorted");
  }
  if (ids.empty()) {
    ids.resize(strings.size());
    std::iota(ids.begin(), ids.end(), 0u);
  }
  CompactedTrie t(strings);
  for (std::uint32_t k = 0; k < strings.size(); ++k) {
    SymbolSpan w = strings[k];
    NodeId v = CompactedTrie::kRoot;
    std::size_t d = 0;
    while (d < w.size()) {
      NodeId c = t.child(v, w[d]);
      if (c == kNoNode) {
        TrieNode leaf;
        leaf.source = k;
        leaf.label_start = d;
        leaf.label_len = w.size() - d;
        leaf.depth = w.size();
        NodeId id = t.add_node(std::move(leaf));
        t.attach_child(v, id);
        v = id;
        d = w.size();
        break;
      }
      const std::size_t len = t.node(c).label_len;
      std::size_t j = 0;
      while (j < len && d + j < w.size() && t.label_at(c, j) == w[d + j]) ++j;
      if (j == len) {
        v = c;
        d += len;
        continue;
      }
      // Split the edge into c after j symbols.
      TrieNode mid;
      mid.source = t.node(c).source;
      mid.label_start = t.node(c).label_start;
      mid.label_len = j;
      mid.depth = t.node(v).depth + j;
      NodeId u = t.add_node(std::move(mid));
      t.node(c).label_start += j;
      t.node(c).label_len -= j;
      t.attach_child(v, u);  // replaces c under v
      t.attach_child(u, c);
      v = u;
      d += j;
    }
    t.node(v).ids.push_back(ids[k]);
  }
  return t;
}

struct TwinMap {
  std::vector<Locus> candidate;  // indexed by node of the first trie
  std::size_t operations = 0;    // traversal steps, for the linear-cost check
};

// For every explicit node of t1 finds a locus of t2 that is its twin whenever
// a twin exists. Edge interiors are skipped without comparing symbols, so
// candidates must be verified by the caller.
//
// With subtree_fallback, a descent that fails assigns the locus reached so far
// to the whole unexplored subtree of t1; the ancestor of the candidate at any
// depth k then spells the t1 prefix of length k whenever that prefix occurs in
// t2. Without it, unexplored nodes get the root of t2.
inline TwinMap match_twins(const CompactedTrie& t1, const CompactedTrie& t2, bool subtree_fallback) {
  TwinMap tm;
  const Locus root{CompactedTrie::kRoot, kNoNode, 0};
  tm.candidate.assign(t1.node_count(), root);

  auto assign_subtree = [&](NodeId top, const Locus& loc) {
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      tm.candidate[v] = loc;
      ++tm.operations;
      for (auto& [sym, c] : t1.node(v).children) stack.push_back(c);
    }
  };

  std::vector<std::pair<NodeId, Locus>> stack{{CompactedTrie::kRoot, root}};
  while (!stack.empty()) {
    auto [v1, loc] = stack.back();
    stack.pop_back();
    tm.candidate[v1] = loc;
    ++tm.operations;
    for (auto& [first, c1] : t1.node(v1).children) {
      const std::size_t len1 = t1.node(c1).label_len;
      std::size_t consumed = 0;
      Locus cur = loc;
      bool ok = true;
      while (consumed < len1) {
        ++tm.operations;
        if (cur.is_explicit()) {
          NodeId c2 = t2.child(cur.node, t1.label_at(c1, consumed));
          if (c2 == kNoNode) {
            ok = false;
            break;
          }
          cur = {cur.node, c2, 1};
          consumed += 1;
        } else if (consumed == 0) {
          if (t2.next_on_edge(cur) != first) {
            ok = false;
            break;
          }
          cur.offset += 1;
          consumed += 1;
        } else {
          const std::size_t jump = std::min(len1 - consumed, t2.node(cur.below).label_len - cur.offset);
          cur.offset += jump;
          consumed += jump;
        }
        if (cur.offset == t2.node(cur.below).label_len) cur = {cur.below, kNoNode, 0};
      }
      if (ok) {
        stack.push_back({c1, cur});
      } else {
        assign_subtree(c1, subtree_fallback ? cur : root);
      }
    }
  }
  return tm;
}

}  // namespace krlz
