#pragma once

// Suffix tree of a text block (Ukkonen's online construction with sorted
// child arrays), annotated with the leftmost suffix start below every node.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "krlz/trie.hpp"
#include "krlz/types.hpp"

namespace krlz {

// Terminator appended to each block; larger than every alphabet symbol.
inline constexpr Symbol kTerminator = std::numeric_limits<Symbol>::max();

class BlockSuffixTree {
 public:
  template <SymbolView V>
  explicit BlockSuffixTree(const V& block) {
    text_.reserve(block.size() + 1);
    for (std::size_t i = 0; i < block.size(); ++i) text_.push_back(block[i]);
    text_.push_back(kTerminator);
    build();
  }

  BlockSuffixTree(const BlockSuffixTree&) = delete;
  BlockSuffixTree& operator=(const BlockSuffixTree&) = delete;
  BlockSuffixTree(BlockSuffixTree&&) = default;
  BlockSuffixTree& operator=(BlockSuffixTree&&) = default;

  const CompactedTrie& trie() const { return trie_; }
  // Block length without the terminator.
  std::size_t block_size() const { return text_.size() - 1; }

  // Leftmost start (0-based, block coordinates) of the string at a locus.
  Position leftmost(const Locus& l) const {
    return trie_.node(l.is_explicit() ? l.node : l.below).leftmost;
  }

 private:
  void build() {
    const auto n = static_cast<std::int64_t>(text_.size());
    trie_ = CompactedTrie({SymbolSpan(text_)});
    std::vector<std::int64_t> start{0}, end{0};
    std::vector<NodeId> link{0};
    constexpr std::int64_t kOpen = -1;

    auto new_node = [&](std::int64_t s, std::int64_t e) {
      TrieNode t;
      t.label_start = static_cast<Position>(s);
      NodeId id = trie_.add_node(std::move(t));
      start.push_back(s);
      end.push_back(e);
      link.push_back(0);
      return id;
    };
    auto child = [&](NodeId v, Symbol c) -> NodeId {
      const auto& ch = trie_.node(v).children;
      auto it = std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, Symbol s) { return e.first < s; });
      return it != ch.end() && it->first == c ? it->second : kNoNode;
    };
    auto set_child = [&](NodeId v, Symbol c, NodeId u) {
      auto& ch = trie_.node(v).children;
      auto it = std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, Symbol s) { return e.first < s; });
      if (it != ch.end() && it->first == c) {
        it->second = u;
      } else {
        ch.insert(it, {c, u});
      }
    };

    NodeId active_node = 0;
    std::int64_t active_edge = 0, active_len = 0, remainder = 0;
    for (std::int64_t pos = 0; pos < n; ++pos) {
      ++remainder;
      NodeId last_new = kNoNode;
      while (remainder > 0) {
        if (active_len == 0) active_edge = pos;
        const Symbol c = text_[static_cast<std::size_t>(active_edge)];
        NodeId nxt = child(active_node, c);
        if (nxt == kNoNode) {
          NodeId leaf = new_node(pos, kOpen);
          set_child(active_node, c, leaf);
          if (last_new != kNoNode) {
            link[last_new] = active_node;
            last_new = kNoNode;
          }
        } else {
          const std::int64_t e = end[nxt] == kOpen ? pos + 1 : end[nxt];
          const std::int64_t elen = e - start[nxt];
          if (active_len >= elen) {
            active_edge += elen;
            active_len -= elen;
            active_node = nxt;
            continue;
          }
          if (text_[static_cast<std::size_t>(start[nxt] + active_len)] == text_[static_cast<std::size_t>(pos)]) {
            if (last_new != kNoNode && active_node != 0) {
              link[last_new] = active_node;
              last_new = kNoNode;
            }
            ++active_len;
            break;
          }
          NodeId split = new_node(start[nxt], start[nxt] + active_len);
          set_child(active_node, c, split);
          NodeId leaf = new_node(pos, kOpen);
          set_child(split, text_[static_cast<std::size_t>(pos)], leaf);
          start[nxt] += active_len;
          trie_.node(nxt).label_start = static_cast<Position>(start[nxt]);
          set_child(split, text_[static_cast<std::size_t>(start[nxt])], nxt);
          if (last_new != kNoNode) link[last_new] = split;
          last_new = split;
        }
        --remainder;
        if (active_node == 0 && active_len > 0) {
          --active_len;
          active_edge = pos - remainder + 1;
        } else if (active_node != 0) {
          active_node = link[active_node];
        }
      }
    }

    // Finalize labels, depths, parents and leftmost annotations.
    std::vector<NodeId> order{0};
    order.reserve(trie_.node_count());
    for (std::size_t k = 0; k < order.size(); ++k) {
      NodeId v = order[k];
      for (auto& [sym, c] : trie_.node(v).children) {
        TrieNode& cn = trie_.node(c);
        const std::int64_t e = end[c] == kOpen ? n : end[c];
        cn.parent = v;
        cn.label_len = static_cast<std::size_t>(e - start[c]);
        cn.depth = trie_.node(v).depth + cn.label_len;
        order.push_back(c);
      }
    }
    for (NodeId v : order) trie_.node(v).leftmost = std::numeric_limits<Position>::max();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      TrieNode& t = trie_.node(*it);
      if (t.children.empty() && *it != 0) t.leftmost = static_cast<Position>(n) - t.depth;
      if (t.parent != kNoNode) {
        TrieNode& p = trie_.node(t.parent);
        p.leftmost = std::min(p.leftmost, t.leftmost);
      }
    }
  }

  std::vector<Symbol> text_;
  CompactedTrie trie_;
};

template <SymbolView V>
BlockSuffixTree build_block_suffix_tree(const V& block) {
  return BlockSuffixTree(block);
}

}  // namespace krlz
