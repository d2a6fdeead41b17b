#pragma once

// Patterns longer than a threshold. Patterns are grouped by length; within a
// group of window length ell every pattern is split into its first and last
// ell symbols and found by a single rolling-window pass with a queue of
// pending requests.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <queue>
#include <vector>

#include "krlz/block_period.hpp"
#include "krlz/fingerprint.hpp"
#include "krlz/match_equal.hpp"
#include "krlz/match_short.hpp"
#include "krlz/periodicity.hpp"
#include "krlz/stats.hpp"
#include "krlz/types.hpp"

namespace krlz {

// g_i = ceil((4/3)^i) for every i with g_i below 2^62, computed exactly.
inline const std::vector<std::size_t>& group_lengths() {
  static const std::vector<std::size_t> table = [] {
    using boost::multiprecision::cpp_int;
    std::vector<std::size_t> g;
    const cpp_int limit = cpp_int(1) << 62;
    cpp_int four = 1, three = 1;
    for (;;) {
      cpp_int v = (four + three - 1) / three;
      if (v >= limit) break;
      g.push_back(static_cast<std::size_t>(v));
      four *= 4;
      three *= 3;
    }
    return g;
  }();
  return table;
}

// Largest i with g_i <= len, i.e. floor(log_{4/3} len).
inline std::size_t group_of(std::size_t len) {
  if (len == 0) throw std::invalid_argument("group_of(0)");
  const auto& g = group_lengths();
  auto it = std::upper_bound(g.begin(), g.end(), len);
  return static_cast<std::size_t>(it - g.begin()) - 1;
}

inline std::size_t group_length(std::size_t i) { return group_lengths().at(i); }

enum class PatternClass { NonHPPrefix, NonHPSuffix, HighlyPeriodic };

struct PatternShape {
  PatternClass cls = PatternClass::NonHPPrefix;
  std::size_t prefix_period = 0;  // per(P[0, ell)) when that prefix is highly periodic
};

// Classification by the prefix and suffix of length ell.
template <SymbolView V>
PatternShape classify_pattern(const V& p, std::size_t ell) {
  if (ell == 0 || ell > p.size()) throw std::invalid_argument("classify_pattern: need 0 < ell <= |P|");
  SliceView<V> alpha(p, 0, ell);
  PeriodInfo pa = shortest_period(alpha);
  if (!(pa.periodic && 3 * pa.period <= ell)) return {PatternClass::NonHPPrefix, 0};
  SliceView<V> beta(p, p.size() - ell, ell);
  if (!is_highly_periodic(beta)) return {PatternClass::NonHPSuffix, pa.period};
  return {PatternClass::HighlyPeriodic, pa.period};
}

inline PatternShape classify_pattern(SymbolSpan p, std::size_t ell) { return classify_pattern<SymbolSpan>(p, ell); }

// One pattern of a sweep: fingerprints of its first and last ell symbols.
struct SweepMember {
  Fingerprint alpha;
  Fingerprint beta;
  std::size_t length = 0;
  std::size_t alpha_period = 0;  // used by the highly periodic sweep only
};

namespace detail {

// Sweep over the windows of length ell. Every occurrence of some alpha_j at
// i schedules a check of beta_j at i + |P_j| - ell. When `filter_shiftable`
// is set, an alpha occurrence exactly per(alpha) after the previous one of
// the same alpha creates no requests. `on_close` is called with consecutive
// occurrences of a highly periodic alpha that are at most ell/2 apart, as
// (per(alpha), previous, current).
template <SymbolView V>
std::vector<EqualLenResult> request_sweep(const Fingerprinter& fpr, const V& text, std::size_t ell,
                                          const std::vector<SweepMember>& members, bool filter_shiftable,
                                          MatchStats* stats,
                                          const std::function<void(std::size_t, Position, Position)>& on_close = {}) {
  const std::size_t s = members.size();
  const std::size_t n = text.size();
  std::vector<EqualLenResult> out(s);
  if (s == 0 || ell == 0 || ell > n) return out;

  std::vector<std::pair<Fingerprint, FpIndex::Id>> entries;
  entries.reserve(s);
  for (std::size_t j = 0; j < s; ++j) entries.push_back({members[j].alpha, static_cast<FpIndex::Id>(j)});
  FpIndex index(std::move(entries));
  if (stats) {
    stats->note_index(index.entry_count());
    ++stats->sweeps;
  }

  // Per distinct alpha: last occurrence (any), and last one that created requests.
  constexpr Position kNone = static_cast<Position>(-1);
  std::vector<Position> last_seen(index.key_count(), kNone);
  std::vector<Position> last_live(index.key_count(), kNone);
  std::vector<std::size_t> key_period(index.key_count(), 0);
  for (std::size_t k = 0; k < index.key_count(); ++k) key_period[k] = members[index.ids_of(k).front()].alpha_period;

  using Request = std::pair<Position, std::uint32_t>;
  std::priority_queue<Request, std::vector<Request>, std::greater<>> heap;
  std::vector<std::uint32_t> pending(s, 0);
  std::vector<std::size_t> created(s, 0);

  const WindowPowers wp = fpr.window_powers(ell);
  Fingerprint h = fpr.of(text, 0, ell);
  for (Position i = 0;; ++i) {
    const std::size_t k = index.find(h);
    if (k != FpIndex::npos) {
      bool live = true;
      if (filter_shiftable) {
        const Position prev = last_seen[k];
        if (prev != kNone) {
          if (on_close && 2 * (i - prev) <= ell) on_close(key_period[k], prev, i);
          live = prev + key_period[k] != i;
        }
        last_seen[k] = i;
        if (live && stats && last_live[k] != kNone && 2 * (i - last_live[k]) <= ell) ++stats->spacing_violations;
      } else if (stats && last_live[k] != kNone && 3 * (i - last_live[k]) <= ell) {
        ++stats->spacing_violations;
      }
      if (live) {
        last_live[k] = i;
        for (auto j : index.ids_of(k)) {
          const Position target = i + members[j].length - ell;
          if (target > n - ell) continue;
          heap.push({target, j});
          ++pending[j];
          ++created[j];
          if (stats) {
            ++stats->requests_created;
            stats->peak_pending_per_pattern = std::max<std::size_t>(stats->peak_pending_per_pattern, pending[j]);
            stats->max_requests_per_pattern = std::max(stats->max_requests_per_pattern, created[j]);
          }
        }
        if (stats) stats->note_pending(heap.size());
      }
    }
    while (!heap.empty() && heap.top().first == i) {
      const std::uint32_t j = heap.top().second;
      heap.pop();
      --pending[j];
      if (h == members[j].beta) {
        const Position start = i + ell - members[j].length;
        if (!out[j].leftmost) out[j].leftmost = start;
        out[j].rightmost = start;
      }
    }
    if (i == n - ell) break;
    h = fpr.roll(h, text[i], text[i + ell], wp);
  }
  if (stats) stats->windows += n - ell + 1;
  return out;
}

template <SymbolView PV>
SweepMember make_member(const Fingerprinter& fpr, const PV& p, std::size_t ell, std::size_t alpha_period = 0) {
  return {fpr.of(p, 0, ell), fpr.of(p, p.size() - ell, ell), p.size(), alpha_period};
}

inline void check_group(const std::vector<SymbolSpan>& patterns, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("window length must be positive");
  for (auto p : patterns)
    if (p.size() < ell) throw std::invalid_argument("pattern shorter than the window length");
}

}  // namespace detail

// Patterns whose first ell symbols are not highly periodic. Reports leftmost
// and rightmost occurrences.
template <SymbolView V>
std::vector<EqualLenResult> match_nhp_prefix_group(const Fingerprinter& fpr, const V& text,
                                                   const std::vector<SymbolSpan>& patterns, std::size_t ell,
                                                   MatchStats* stats = nullptr) {
  detail::check_group(patterns, ell);
  std::vector<SweepMember> m;
  m.reserve(patterns.size());
  for (auto p : patterns) m.push_back(detail::make_member(fpr, p, ell));
  return detail::request_sweep(fpr, text, ell, m, false, stats);
}

// Patterns whose last ell symbols are not highly periodic: the same sweep on
// the reversed text and reversed patterns.
inline std::vector<EqualLenResult> match_nhp_suffix_group(const Fingerprinter& fpr, SymbolSpan text,
                                                          const std::vector<SymbolSpan>& patterns, std::size_t ell,
                                                          MatchStats* stats = nullptr) {
  detail::check_group(patterns, ell);
  std::vector<SweepMember> m;
  m.reserve(patterns.size());
  for (auto p : patterns) m.push_back(detail::make_member(fpr, ReversedView(p), ell));
  auto rev = detail::request_sweep(fpr, ReversedView(text), ell, m, false, stats);
  const std::size_t n = text.size();
  std::vector<EqualLenResult> out(patterns.size());
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const std::size_t len = patterns[j].size();
    if (rev[j].rightmost) out[j].leftmost = n - *rev[j].rightmost - len;
    if (rev[j].leftmost) out[j].rightmost = n - *rev[j].leftmost - len;
  }
  return out;
}

// Patterns whose first and last ell symbols are both highly periodic. With
// `las_vegas`, close consecutive prefix occurrences are checked against the
// block period table and a verification_failure is thrown on inconsistency.
inline std::vector<EqualLenResult> match_hp_group(const Fingerprinter& fpr, SymbolSpan text,
                                                  const std::vector<SymbolSpan>& patterns, std::size_t ell,
                                                  MatchStats* stats = nullptr, bool las_vegas = false) {
  detail::check_group(patterns, ell);
  std::vector<SweepMember> m;
  m.reserve(patterns.size());
  for (auto p : patterns) {
    PeriodInfo pa = shortest_period(p.first(ell));
    if (!pa.periodic || 3 * pa.period > ell) throw std::invalid_argument("pattern prefix is not highly periodic");
    m.push_back(detail::make_member(fpr, p, ell, pa.period));
  }
  if (!las_vegas || ell < 3) return detail::request_sweep(fpr, text, ell, m, true, stats);
  BlockPeriodTable<SymbolSpan> table(text, ell);
  return detail::request_sweep(fpr, text, ell, m, true, stats, [&](std::size_t per, Position prev, Position cur) {
    if (verify_hp_filtering(table, per, prev, cur) == HpCheck::Failure)
      throw verification_failure("inconsistent periodic prefix occurrences");
  });
}

struct MatchOptions {
  MatchStats* stats = nullptr;
  bool las_vegas = false;
};

// Leftmost occurrence of every pattern of length at least min_len (patterns
// longer than the text are absent).
inline std::vector<MaybePosition> match_long_all(const Fingerprinter& fpr, SymbolSpan text,
                                                 const std::vector<SymbolSpan>& patterns, std::size_t min_len,
                                                 MatchOptions opt = {}) {
  const std::size_t n = text.size();
  std::vector<MaybePosition> ans(patterns.size());
  std::map<std::size_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t j = 0; j < patterns.size(); ++j) {
    const std::size_t len = patterns[j].size();
    if (len == 0) throw std::invalid_argument("empty pattern");
    if (len < min_len) throw std::invalid_argument("pattern shorter than the long-pattern threshold");
    if (len > n) continue;
    groups[group_of(len)].push_back(j);
  }
  for (auto& [gi, ids] : groups) {
    const std::size_t ell = group_length(gi);
    std::vector<SymbolSpan> cls[3];
    std::vector<std::uint32_t> cls_ids[3];
    for (auto j : ids) {
      const auto c = static_cast<std::size_t>(classify_pattern(patterns[j], ell).cls);
      cls[c].push_back(patterns[j]);
      cls_ids[c].push_back(j);
    }
    std::vector<EqualLenResult> r[3];
    if (!cls[0].empty()) r[0] = match_nhp_prefix_group(fpr, text, cls[0], ell, opt.stats);
    if (!cls[1].empty()) r[1] = match_nhp_suffix_group(fpr, text, cls[1], ell, opt.stats);
    if (!cls[2].empty()) r[2] = match_hp_group(fpr, text, cls[2], ell, opt.stats, opt.las_vegas);
    for (int c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < cls_ids[c].size(); ++k) ans[cls_ids[c][k]] = r[c][k].leftmost;
  }
  return ans;
}

// Leftmost occurrence of every pattern. Patterns of length at most min(n, s)
// go through the block suffix trees, longer ones through the sweeps.
inline std::vector<MaybePosition> match_dictionary(const Fingerprinter& fpr, SymbolSpan text,
                                                   const std::vector<SymbolSpan>& patterns, MatchOptions opt = {}) {
  const std::size_t s = patterns.size();
  const std::size_t n = text.size();
  std::vector<MaybePosition> ans(s);
  for (auto p : patterns)
    if (p.empty()) throw std::invalid_argument("empty pattern");
  if (s == 0 || n == 0) return ans;
  const std::size_t thr = std::min(n, s);
  std::vector<SymbolSpan> shorts, longs;
  std::vector<std::uint32_t> short_ids, long_ids;
  for (std::uint32_t j = 0; j < s; ++j) {
    if (patterns[j].size() <= thr) {
      shorts.push_back(patterns[j]);
      short_ids.push_back(j);
    } else if (patterns[j].size() <= n) {
      longs.push_back(patterns[j]);
      long_ids.push_back(j);
    }
  }
  if (!shorts.empty()) {
    auto r = match_short_leftmost(fpr, text, shorts, thr, opt.stats);
    for (std::size_t k = 0; k < r.size(); ++k) ans[short_ids[k]] = r[k];
  }
  if (!longs.empty()) {
    auto r = match_long_all(fpr, text, longs, thr + 1, opt);
    for (std::size_t k = 0; k < r.size(); ++k) ans[long_ids[k]] = r[k];
  }
  return ans;
}

}  // namespace krlz
