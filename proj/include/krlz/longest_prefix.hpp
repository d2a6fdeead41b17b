#pragma once

// Longest prefix of every pattern that occurs in the text, optionally only
// counting occurrences that start at or before a per-pattern bound.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "krlz/fingerprint.hpp"
#include "krlz/match_equal.hpp"
#include "krlz/match_long.hpp"
#include "krlz/match_short.hpp"
#include "krlz/periodicity.hpp"
#include "krlz/stats.hpp"
#include "krlz/types.hpp"

namespace krlz {

inline constexpr Position kNoBound = static_cast<Position>(-1);

namespace detail {

// Tentative answer for one pattern inside a group with window length ell.
struct PrefixState {
  SymbolSpan p;  // the pattern, possibly truncated
  Position bound = kNoBound;
  std::size_t len = 0;  // P[0, len) is known to occur at `witness`
  MaybePosition witness;
};

// Phi(P[len+1-ell, len+1)), the window that must match for len to grow.
class TailFingerprint {
 public:
  TailFingerprint(const Fingerprinter& fpr, std::size_t ell) : fpr_(&fpr), ell_(ell), wp_(fpr.window_powers(ell)) {}

  void reset(const PrefixState& st) {
    at_ = st.len;
    if (st.len < st.p.size()) fp_ = fpr_->of(st.p, st.len + 1 - ell_, ell_);
  }
  // Advances to the state's current length by rolling along the pattern.
  void follow(const PrefixState& st) {
    while (at_ < st.len && at_ + 1 < st.p.size()) {
      fp_ = fpr_->roll(fp_, st.p[at_ + 1 - ell_], st.p[at_ + 1], wp_);
      ++at_;
    }
    at_ = st.len;
  }
  const Fingerprint& value() const { return fp_; }

 private:
  const Fingerprinter* fpr_;
  std::size_t ell_;
  WindowPowers wp_;
  Fingerprint fp_;
  std::size_t at_ = 0;
};

// P[0, st.len + 1) is known to occur at `origin`; extend naively.
inline void extend_prefix(SymbolSpan text, PrefixState& st, Position origin) {
  std::size_t l = st.len + 1;
  while (l < st.p.size() && origin + l < text.size() && text[origin + l] == st.p[l]) ++l;
  st.len = l;
  st.witness = origin;
}

struct PrefixRequest {
  Position at;
  std::uint32_t id;
  std::size_t expected_len;

  friend bool operator>(const PrefixRequest& a, const PrefixRequest& b) {
    return std::tie(a.at, a.id) > std::tie(b.at, b.id);
  }
};
using PrefixQueue = std::priority_queue<PrefixRequest, std::vector<PrefixRequest>, std::greater<>>;

inline void note_request(MatchStats* stats, std::vector<std::uint32_t>& pending, std::vector<std::size_t>& created,
                         std::uint32_t j, std::size_t queue_size) {
  ++pending[j];
  ++created[j];
  if (!stats) return;
  ++stats->requests_created;
  stats->peak_pending_per_pattern = std::max<std::size_t>(stats->peak_pending_per_pattern, pending[j]);
  stats->max_requests_per_pattern = std::max(stats->max_requests_per_pattern, created[j]);
  stats->note_pending(queue_size);
}

}  // namespace detail

// Patterns with ell <= |P| < 4/3 ell whose prefix alpha = P[0, ell) occurs
// (within the bound) at the state's witness. With `highly_periodic`, every
// pattern must have period per(alpha) and only non-shiftable occurrences of
// alpha are used; otherwise alpha must not be highly periodic.
inline void lp_prefix_sweep(const Fingerprinter& fpr, SymbolSpan text, std::size_t ell,
                            std::vector<detail::PrefixState>& states, bool highly_periodic,
                            MatchStats* stats = nullptr) {
  const std::size_t s = states.size();
  const std::size_t n = text.size();
  if (s == 0 || ell > n) return;

  std::vector<std::pair<Fingerprint, FpIndex::Id>> entries;
  std::vector<std::size_t> period(s, 0);
  for (std::uint32_t j = 0; j < s; ++j) {
    entries.push_back({fpr.of(states[j].p, 0, ell), j});
    if (highly_periodic) period[j] = shortest_period(states[j].p.first(ell)).period;
  }
  FpIndex index(std::move(entries));
  if (stats) {
    stats->note_index(index.entry_count());
    ++stats->sweeps;
  }
  std::vector<detail::TailFingerprint> tail(s, detail::TailFingerprint(fpr, ell));
  for (std::size_t j = 0; j < s; ++j) tail[j].reset(states[j]);

  constexpr Position kNone = static_cast<Position>(-1);
  std::vector<Position> last_seen(index.key_count(), kNone);
  std::vector<Position> last_live(index.key_count(), kNone);
  detail::PrefixQueue queue;
  std::vector<std::uint32_t> pending(s, 0);
  std::vector<std::size_t> created(s, 0);

  const WindowPowers wp = fpr.window_powers(ell);
  Fingerprint h = fpr.of(text, 0, ell);
  for (Position i = 0;; ++i) {
    const std::size_t k = index.find(h);
    if (k != FpIndex::npos) {
      bool live = true;
      if (highly_periodic) {
        const Position prev = last_seen[k];
        live = prev == kNone || prev + period[index.ids_of(k).front()] != i;
        last_seen[k] = i;
      }
      if (live) {
        if (stats && last_live[k] != kNone && (highly_periodic ? 2 : 3) * (i - last_live[k]) <= ell)
          ++stats->spacing_violations;
        last_live[k] = i;
        for (auto j : index.ids_of(k)) {
          const detail::PrefixState& st = states[j];
          if (st.len >= st.p.size() || i > st.bound) continue;
          const Position at = i + st.len + 1 - ell;
          if (at > n - ell) continue;
          queue.push({at, j, st.len});
          detail::note_request(stats, pending, created, j, queue.size());
        }
      }
    }
    while (!queue.empty() && queue.top().at == i) {
      const detail::PrefixRequest rq = queue.top();
      queue.pop();
      --pending[rq.id];
      detail::PrefixState& st = states[rq.id];
      if (st.len != rq.expected_len) continue;
      if (h != tail[rq.id].value()) continue;
      if (stats && pending[rq.id] > 0) ++stats->extension_overlaps;
      detail::extend_prefix(text, st, i + ell - st.len - 1);
      tail[rq.id].follow(st);
    }
    if (i == n - ell) break;
    h = fpr.roll(h, text[i], text[i + ell], wp);
  }
  if (stats) stats->windows += n - ell + 1;
}

// Patterns with ell <= |P| < 4/3 ell that are not highly periodic. For each,
// `window[j]` = k_j is the start of a window P[k_j, k_j + ell) that is not
// highly periodic, with k_j <= ell/3, and P[0, k_j + ell) must occur (within
// the bound) at the state's witness, with states[j].len == k_j + ell.
// Two windows move together: the leading one finds P[k_j, k_j + ell) and the
// trailing one, ell/3 behind, checks the prefix and then its extensions.
inline void lp_general_sweep(const Fingerprinter& fpr, SymbolSpan text, std::size_t ell,
                             std::vector<detail::PrefixState>& states, const std::vector<std::size_t>& window,
                             MatchStats* stats = nullptr) {
  const std::size_t s = states.size();
  const std::size_t n = text.size();
  if (s == 0 || ell > n) return;
  const std::size_t gap = ell / 3;

  std::vector<std::pair<Fingerprint, FpIndex::Id>> entries;
  std::vector<Fingerprint> alpha(s);
  for (std::uint32_t j = 0; j < s; ++j) {
    if (window[j] > gap) throw std::invalid_argument("non-periodic window starts too far into the pattern");
    entries.push_back({fpr.of(states[j].p, window[j], ell), j});
    alpha[j] = fpr.of(states[j].p, 0, ell);
  }
  FpIndex index(std::move(entries));
  if (stats) {
    stats->note_index(index.entry_count() + s);
    ++stats->sweeps;
  }
  std::vector<detail::TailFingerprint> tail(s, detail::TailFingerprint(fpr, ell));
  for (std::size_t j = 0; j < s; ++j) tail[j].reset(states[j]);

  using Check = std::pair<Position, std::uint32_t>;  // type I: pattern start to verify
  std::priority_queue<Check, std::vector<Check>, std::greater<>> first;
  detail::PrefixQueue second;  // type II: extension windows
  std::vector<std::uint32_t> pending1(s, 0), pending2(s, 0);
  std::vector<std::size_t> created(s, 0);
  constexpr Position kNone = static_cast<Position>(-1);
  std::vector<Position> last_lead(index.key_count(), kNone);

  const WindowPowers wp = fpr.window_powers(ell);
  Fingerprint lead = fpr.of(text, 0, ell);
  Fingerprint trail = lead;
  const auto last = static_cast<std::int64_t>(n - ell);
  for (std::int64_t t = -static_cast<std::int64_t>(gap); t <= last; ++t) {
    const std::int64_t li = t + static_cast<std::int64_t>(gap);
    if (li <= last) {
      const auto lp = static_cast<Position>(li);
      if (li > 0) lead = fpr.roll(lead, text[lp - 1], text[lp - 1 + ell], wp);
      const std::size_t k = index.find(lead);
      if (k != FpIndex::npos) {
        if (stats && last_lead[k] != kNone && 3 * (lp - last_lead[k]) <= ell) ++stats->spacing_violations;
        last_lead[k] = lp;
        for (auto j : index.ids_of(k)) {
          const detail::PrefixState& st = states[j];
          if (window[j] > lp || st.len >= st.p.size()) continue;
          const Position start = lp - window[j];
          if (start > st.bound) continue;
          first.push({start, j});
          detail::note_request(stats, pending1, created, j, first.size() + second.size());
        }
      }
    }
    if (t < 0) continue;
    const auto tp = static_cast<Position>(t);
    if (tp > 0) trail = fpr.roll(trail, text[tp - 1], text[tp - 1 + ell], wp);
    while (!first.empty() && first.top().first == tp) {
      const std::uint32_t j = first.top().second;
      first.pop();
      --pending1[j];
      const detail::PrefixState& st = states[j];
      if (trail != alpha[j] || st.len >= st.p.size()) continue;
      const Position at = tp + st.len + 1 - ell;
      if (at > n - ell) continue;
      second.push({at, j, st.len});
      detail::note_request(stats, pending2, created, j, first.size() + second.size());
    }
    while (!second.empty() && second.top().at == tp) {
      const detail::PrefixRequest rq = second.top();
      second.pop();
      --pending2[rq.id];
      detail::PrefixState& st = states[rq.id];
      if (st.len != rq.expected_len || trail != tail[rq.id].value()) continue;
      if (stats && pending2[rq.id] > 0) ++stats->extension_overlaps;
      detail::extend_prefix(text, st, tp + ell - st.len - 1);
      tail[rq.id].follow(st);
    }
  }
  if (stats) stats->windows += 2 * (n - ell + 1);
}

namespace detail {

// Longest prefixes for patterns that all belong to one group, i.e. ell <=
// |P| < 4/3 ell, and whose prefix of length ell occurs within the bound at
// the state's witness.
inline void lp_group(const Fingerprinter& fpr, SymbolSpan text, std::size_t ell, std::vector<PrefixState>& states,
                     MatchStats* stats) {
  std::vector<std::uint32_t> nhp_ids, hp_ids, gen_ids;
  std::vector<PrefixState> nhp, hp, gen;
  std::vector<std::size_t> gen_window;
  std::vector<std::uint32_t> check_ids;
  std::vector<SymbolSpan> check_words;
  std::vector<std::size_t> check_window;
  for (std::uint32_t j = 0; j < states.size(); ++j) {
    const PrefixState& st = states[j];
    if (!is_highly_periodic(st.p.first(ell))) {
      nhp.push_back(st);
      nhp_ids.push_back(j);
    } else if (is_highly_periodic(st.p)) {
      hp.push_back(st);
      hp_ids.push_back(j);
    } else {
      const std::size_t k = find_nonperiodic_window(st.p, ell);
      check_ids.push_back(j);
      check_words.push_back(st.p.first(k + ell));
      check_window.push_back(k);
    }
  }
  // P[0, k + ell) ends with a window that is not highly periodic.
  if (!check_ids.empty()) {
    auto found = match_nhp_suffix_group(fpr, text, check_words, ell, stats);
    for (std::size_t c = 0; c < check_ids.size(); ++c) {
      PrefixState st = states[check_ids[c]];
      const std::size_t k = check_window[c];
      if (found[c].leftmost && *found[c].leftmost <= st.bound) {
        st.len = k + ell;
        st.witness = found[c].leftmost;
        if (st.len < st.p.size()) {
          gen.push_back(st);
          gen_window.push_back(k);
          gen_ids.push_back(check_ids[c]);
        } else {
          states[check_ids[c]] = st;
        }
      } else {
        st.p = st.p.first(k + ell - 1);
        hp.push_back(st);
        hp_ids.push_back(check_ids[c]);
      }
    }
  }
  lp_prefix_sweep(fpr, text, ell, nhp, false, stats);
  lp_prefix_sweep(fpr, text, ell, hp, true, stats);
  lp_general_sweep(fpr, text, ell, gen, gen_window, stats);
  for (std::size_t c = 0; c < nhp.size(); ++c) states[nhp_ids[c]] = nhp[c];
  for (std::size_t c = 0; c < hp.size(); ++c) states[hp_ids[c]] = hp[c];
  for (std::size_t c = 0; c < gen.size(); ++c) states[gen_ids[c]] = gen[c];
}

}  // namespace detail

// Longest prefix occurring in the text for every pattern. With bounds, only
// occurrences starting at or before bounds[j] count. Witnesses are starts of
// occurrences of the reported prefixes.
inline std::vector<PrefixMatch> longest_prefix_bounded(const Fingerprinter& fpr, SymbolSpan text,
                                                       const std::vector<SymbolSpan>& patterns,
                                                       std::span<const Position> bounds,
                                                       MatchStats* stats = nullptr) {
  const std::size_t s = patterns.size();
  const std::size_t n = text.size();
  if (!bounds.empty() && bounds.size() != s) throw std::invalid_argument("one bound per pattern expected");
  std::vector<PrefixMatch> ans(s);
  if (s == 0 || n == 0) return ans;
  const std::size_t thr = std::min(n, s);

  std::vector<detail::PrefixState> st(s);
  std::map<std::size_t, std::vector<std::uint32_t>> pending_groups;
  std::vector<std::uint32_t> shorts;
  for (std::uint32_t j = 0; j < s; ++j) {
    st[j].p = patterns[j].first(std::min(patterns[j].size(), n));
    st[j].bound = bounds.empty() ? kNoBound : bounds[j];
    if (st[j].p.empty()) continue;
    if (st[j].p.size() <= thr) {
      shorts.push_back(j);
    } else {
      pending_groups[group_of(st[j].p.size())].push_back(j);
    }
  }

  // Descending over groups: keep a pattern in group i only if its prefix of
  // length g_i occurs; otherwise cut it to g_i - 1 symbols.
  std::map<std::size_t, std::vector<std::uint32_t>> settled;
  while (!pending_groups.empty()) {
    auto it = std::prev(pending_groups.end());
    const std::size_t gi = it->first;
    std::vector<std::uint32_t> ids = std::move(it->second);
    pending_groups.erase(it);
    const std::size_t ell = group_length(gi);
    std::vector<Fingerprint> keys;
    std::vector<Position> bnd;
    for (auto j : ids) {
      keys.push_back(fpr.of(st[j].p, 0, ell));
      bnd.push_back(st[j].bound);
    }
    auto found = match_equal_fingerprints(fpr, text, ell, keys, {.bounds = bnd, .want_rightmost = false, .stats = stats});
    for (std::size_t c = 0; c < ids.size(); ++c) {
      detail::PrefixState& x = st[ids[c]];
      if (found[c].leftmost) {
        x.len = ell;
        x.witness = found[c].leftmost;
        settled[gi].push_back(ids[c]);
      } else {
        x.p = x.p.first(ell - 1);
        if (x.p.size() > thr) {
          pending_groups[group_of(x.p.size())].push_back(ids[c]);
        } else if (!x.p.empty()) {
          shorts.push_back(ids[c]);
        }
      }
    }
  }

  for (auto& [gi, ids] : settled) {
    std::vector<detail::PrefixState> group;
    for (auto j : ids) group.push_back(st[j]);
    detail::lp_group(fpr, text, group_length(gi), group, stats);
    for (std::size_t c = 0; c < ids.size(); ++c) ans[ids[c]] = {group[c].len, group[c].witness};
  }

  if (!shorts.empty()) {
    std::vector<SymbolSpan> words;
    std::vector<Position> bnd;
    for (auto j : shorts) {
      words.push_back(st[j].p);
      bnd.push_back(st[j].bound);
    }
    auto r = longest_prefix_short(fpr, text, words, thr, bounds.empty() ? std::span<const Position>() : bnd, stats);
    for (std::size_t c = 0; c < shorts.size(); ++c) ans[shorts[c]] = r[c];
  }
  return ans;
}

inline std::vector<PrefixMatch> longest_prefix_all(const Fingerprinter& fpr, SymbolSpan text,
                                                   const std::vector<SymbolSpan>& patterns,
                                                   MatchStats* stats = nullptr) {
  return longest_prefix_bounded(fpr, text, patterns, {}, stats);
}

}  // namespace krlz
