#include <gtest/gtest.h>

#include <random>

#include "krlz/longest_prefix.hpp"
#include "oracles.hpp"

using namespace krlz;

namespace {

Text periodic_mix(std::mt19937_64& rng, std::size_t n) {
  Text t;
  while (t.size() < n) {
    std::string unit;
    for (std::size_t k = 0, u = 1 + rng() % 3; k < u; ++k) unit.push_back(static_cast<char>('a' + rng() % 2));
    Text run = oracle::power_of(unit, 1 + rng() % 40);
    t.insert(t.end(), run.begin(), run.end());
  }
  t.resize(n);
  return t;
}

// Substrings of the text with their tails altered, so that the longest
// occurring prefix is long but not the whole pattern.
std::vector<Text> prefix_queries(std::mt19937_64& rng, const Text& t, std::size_t count, std::size_t max_len) {
  std::vector<Text> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t len = 1 + rng() % max_len;
    Text p;
    if (len <= t.size() && rng() % 5 != 0) {
      Position s = rng() % (t.size() - len + 1);
      p.assign(t.begin() + s, t.begin() + s + len);
      const unsigned kind = rng() % 3;
      if (kind == 1) p[len - 1 - rng() % std::max<std::size_t>(1, len / 4)] ^= 1;
      if (kind == 2) {
        Text tail = periodic_mix(rng, 1 + rng() % (len / 2 + 1));
        p.insert(p.end(), tail.begin(), tail.end());
      }
    } else {
      p = periodic_mix(rng, len);
    }
    out.push_back(std::move(p));
  }
  return out;
}

void check(const Fingerprinter& fpr, const Text& t, const std::vector<Text>& pats, const std::vector<Position>& bounds,
           MatchStats* stats = nullptr) {
  auto got = longest_prefix_bounded(fpr, t, oracle::spans(pats), bounds, stats);
  for (std::size_t j = 0; j < pats.size(); ++j) {
    const Position r = bounds.empty() ? kNoBound : bounds[j];
    ASSERT_EQ(got[j].length, oracle::longest_prefix(t, pats[j], r))
        << "pattern " << j << " '" << to_string(pats[j]) << "' in '" << to_string(t) << "'";
    ASSERT_EQ(got[j].witness.has_value(), got[j].length > 0);
    if (got[j].witness) {
      ASSERT_LE(*got[j].witness, r);
      ASSERT_TRUE(oracle::occurs_at(t, SymbolSpan(pats[j]).first(got[j].length), *got[j].witness));
    }
  }
}

}  // namespace

TEST(LongestPrefix, RandomTextsUnbounded) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 400; ++it) {
    auto fpr = Fingerprinter::production(it);
    Text t = it % 2 ? periodic_mix(rng, 1 + rng() % 400) : oracle::random_text(rng, 1 + rng() % 400, 1 + it % 3);
    auto pats = prefix_queries(rng, t, 1 + rng() % 12, 1 + rng() % 300);
    check(fpr, t, pats, {});
  }
}

TEST(LongestPrefix, RandomTextsBounded) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 400; ++it) {
    auto fpr = Fingerprinter::production(it);
    Text t = it % 2 ? periodic_mix(rng, 1 + rng() % 400) : oracle::random_text(rng, 1 + rng() % 400, 1 + it % 3);
    auto pats = prefix_queries(rng, t, 1 + rng() % 12, 1 + rng() % 300);
    std::vector<Position> bounds;
    for (std::size_t j = 0; j < pats.size(); ++j) bounds.push_back(rng() % (t.size() + 1));
    check(fpr, t, pats, bounds);
  }
}

TEST(LongestPrefix, ManyPatternsUseLongGroups) {
  // Few patterns relative to the text force the group machinery.
  std::mt19937_64 rng(3);
  MatchStats st;
  for (int it = 0; it < 100; ++it) {
    auto fpr = Fingerprinter::production(it);
    Text t = periodic_mix(rng, 2000);
    auto pats = prefix_queries(rng, t, 4, 600);
    std::vector<Position> bounds;
    if (it % 2)
      for (std::size_t j = 0; j < pats.size(); ++j) bounds.push_back(rng() % t.size());
    check(fpr, t, pats, bounds, &st);
  }
  EXPECT_EQ(st.spacing_violations, 0u);
  EXPECT_EQ(st.extension_overlaps, 0u);
  EXPECT_LE(st.peak_pending_per_pattern, 1u);
}

TEST(LongestPrefix, GeneralCaseDirect) {
  // Highly periodic start followed by a break: exercises the two-window sweep.
  std::mt19937_64 rng(4);
  for (int it = 0; it < 300; ++it) {
    auto fpr = Fingerprinter::production(it);
    const std::size_t ell = 9 + rng() % 60;
    Text t = periodic_mix(rng, 100 + rng() % 500);
    std::vector<Text> pats;
    for (int k = 0; k < 6; ++k) {
      Text p = oracle::power_of(rng() % 2 ? "ab" : "aab", ell + rng() % (ell / 3));
      p.back() = 'a' + 'b' - p.back();
      const std::size_t hi = (4 * ell - 1) / 3;
      while (p.size() < hi && rng() % 4) p.push_back('a' + rng() % 2);
      pats.push_back(std::move(p));
    }
    check(fpr, t, pats, {});
  }
}

TEST(LongestPrefix, EmptyAndOversized) {
  auto fpr = Fingerprinter::production();
  Text t = to_symbols("abab"), e, big = to_symbols("ababababab");
  auto got = longest_prefix_all(fpr, t, {SymbolSpan(e), SymbolSpan(big)});
  EXPECT_EQ(got[0].length, 0u);
  EXPECT_FALSE(got[0].witness);
  EXPECT_EQ(got[1].length, 4u);
  EXPECT_EQ(got[1].witness, MaybePosition(0));
}

namespace {

// Slow reference: binary search on the prefix length for all patterns at
// once, one dictionary-matching round per step.
std::vector<std::size_t> parallel_binary_search(const Fingerprinter& fpr, const Text& t, const std::vector<Text>& pats,
                                                const std::vector<Position>& bounds) {
  std::vector<std::size_t> lo(pats.size(), 0), hi(pats.size());
  for (std::size_t j = 0; j < pats.size(); ++j) hi[j] = std::min(pats[j].size(), t.size());
  for (;;) {
    std::vector<SymbolSpan> probe;
    std::vector<std::size_t> who;
    for (std::size_t j = 0; j < pats.size(); ++j) {
      if (lo[j] == hi[j]) continue;
      probe.push_back(SymbolSpan(pats[j]).first((lo[j] + hi[j] + 1) / 2));
      who.push_back(j);
    }
    if (probe.empty()) return lo;
    auto occ = match_dictionary(fpr, t, probe);
    for (std::size_t q = 0; q < who.size(); ++q) {
      const std::size_t j = who[q];
      const std::size_t mid = probe[q].size();
      if (occ[q] && *occ[q] <= bounds[j]) {
        lo[j] = mid;
      } else {
        hi[j] = mid - 1;
      }
    }
  }
}

}  // namespace

TEST(LongestPrefix, AgreesWithParallelBinarySearch) {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 100; ++it) {
    auto fpr = Fingerprinter::production(it + 500);
    Text t = it % 2 ? periodic_mix(rng, 1 + rng() % 600) : oracle::random_text(rng, 1 + rng() % 600, 1 + it % 3);
    auto pats = prefix_queries(rng, t, 1 + rng() % 20, 1 + rng() % 300);
    std::vector<Position> bounds;
    for (std::size_t j = 0; j < pats.size(); ++j) bounds.push_back(rng() % 2 ? kNoBound : rng() % t.size());
    auto got = longest_prefix_bounded(fpr, t, oracle::spans(pats), bounds);
    auto ref = parallel_binary_search(fpr, t, pats, bounds);
    for (std::size_t j = 0; j < pats.size(); ++j) ASSERT_EQ(got[j].length, ref[j]) << j;
  }
}
