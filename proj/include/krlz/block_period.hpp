#pragma once

// Block periodicity table used to verify that consecutive occurrences of a
// highly periodic prefix are consistent with each other.

#include <unordered_map>

#include "krlz/periodicity.hpp"
#include "krlz/types.hpp"

namespace krlz {

struct BlockPeriodEntry {
  bool periodic = false;
  std::size_t period = 0;
  Position first = 0;  // the period holds on T[first..last]
  Position last = 0;
};

enum class HpCheck { Consistent, Failure, NotApplicable };

// Overlapping blocks T[t*d, t*d + 2d) with d = floor(ell/3). Entries are
// computed on first use; extensions stop 2*ell away from the block.
template <SymbolView V>
class BlockPeriodTable {
 public:
  BlockPeriodTable(const V& text, std::size_t ell) : text_(&text), ell_(ell), third_(ell / 3) {
    if (ell < 3) throw std::invalid_argument("block period table needs ell >= 3");
  }

  std::size_t ell() const { return ell_; }
  std::size_t stride() const { return third_; }
  std::size_t block_count() const {
    const std::size_t n = text_->size();
    return n >= 2 * third_ ? n / third_ - 1 : 0;
  }

  const BlockPeriodEntry& entry(std::size_t t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(t, compute(t)).first->second;
  }

 private:
  BlockPeriodEntry compute(std::size_t t) const {
    const V& w = *text_;
    const std::size_t n = w.size();
    const Position lo = t * third_;
    const Position hi = lo + 2 * third_;  // exclusive
    BlockPeriodEntry e;
    PeriodInfo pi = shortest_period(SliceView<V>(w, lo, hi - lo));
    if (!pi.periodic) return e;
    const std::size_t p = pi.period;
    e.periodic = true;
    e.period = p;
    Position last = hi - 1;
    while (last + 1 < n && last + 1 < hi + 2 * ell_ && w[last + 1] == w[last + 1 - p]) ++last;
    Position first = lo;
    const Position floor_pos = lo > 2 * ell_ ? lo - 2 * ell_ : 0;
    while (first > floor_pos && w[first - 1] == w[first - 1 + p]) --first;
    e.first = first;
    e.last = last;
    return e;
  }

  const V* text_;
  std::size_t ell_;
  std::size_t third_;
  std::unordered_map<std::size_t, BlockPeriodEntry> cache_;
};

template <SymbolView V>
BlockPeriodTable<V> build_block_period_table(const V& text, std::size_t ell) {
  return BlockPeriodTable<V>(text, ell);
}

// Occurrences of a prefix alpha (|alpha| = ell, per(alpha) = per_alpha <=
// ell/3) were reported at occ_prev < occ_cur. When they are at most ell/2
// apart, per_alpha must be a period of T[occ_prev, occ_cur + ell); otherwise
// at least one of them is a fingerprint false positive.
template <SymbolView V>
HpCheck verify_hp_filtering(BlockPeriodTable<V>& table, std::size_t per_alpha, Position occ_prev, Position occ_cur) {
  const std::size_t ell = table.ell();
  if (occ_cur <= occ_prev || 2 * (occ_cur - occ_prev) > ell) return HpCheck::NotApplicable;
  const std::size_t d = table.stride();
  const Position span_end = occ_cur + ell;  // exclusive
  if (span_end < 2 * d) return HpCheck::NotApplicable;
  const std::size_t t = span_end / d - 2;  // rightmost block inside T[0, span_end)
  const BlockPeriodEntry& e = table.entry(t);
  if (!e.periodic || per_alpha % e.period != 0) return HpCheck::Failure;
  if (e.first <= occ_prev && e.last + 1 >= span_end) return HpCheck::Consistent;
  return HpCheck::Failure;
}

}  // namespace krlz
