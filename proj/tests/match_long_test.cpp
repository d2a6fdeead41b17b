#include <gtest/gtest.h>

#include <random>

#include "krlz/match_long.hpp"
#include "oracles.hpp"

using namespace krlz;

namespace {

// Texts and patterns with plenty of periodic structure.
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

std::vector<Text> long_patterns(std::mt19937_64& rng, const Text& t, std::size_t count, std::size_t min_len,
                                std::size_t max_len) {
  std::vector<Text> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t len = min_len + rng() % (max_len - min_len + 1);
    if (len <= t.size() && rng() % 4 != 0) {
      Position s = rng() % (t.size() - len + 1);
      Text p(t.begin() + s, t.begin() + s + len);
      if (rng() % 3 == 0) p[rng() % len] ^= 1;
      out.push_back(std::move(p));
    } else {
      out.push_back(periodic_mix(rng, len));
    }
  }
  return out;
}

}  // namespace

TEST(Groups, LengthsAreCeilingsOfPowers) {
  const auto& g = group_lengths();
  unsigned __int128 four = 1, three = 1;
  for (std::size_t i = 0; i < 60; ++i) {
    // g*3^i >= 4^i > (g-1)*3^i
    unsigned __int128 gi = g.at(i);
    ASSERT_GE(gi * three, four) << i;
    ASSERT_LT((gi - 1) * three, four) << i;
    four *= 4;
    three *= 3;
  }
  EXPECT_EQ(group_length(0), 1u);
  EXPECT_EQ(group_length(3), 3u);
  EXPECT_EQ(group_length(4), 4u);
}

TEST(Groups, GroupOfIsFloorLog) {
  for (std::size_t len = 1; len < 100000; len += 1 + len / 50) {
    const std::size_t i = group_of(len);
    ASSERT_LE(group_length(i), len);
    ASSERT_GT(group_length(i + 1), len);
    // Within a group, a pattern is at most 4/3 of the window length, plus one.
    ASSERT_LE(3 * len, 4 * group_length(i) + 3);
  }
}

TEST(Classify, AgainstBrutePeriods) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 3000; ++it) {
    Text p = rng() % 2 ? periodic_mix(rng, 3 + rng() % 40) : oracle::random_text(rng, 3 + rng() % 40, 2);
    const std::size_t ell = 1 + rng() % p.size();
    const bool hp_a = 3 * oracle::period(SymbolSpan(p).first(ell)) <= ell;
    const bool hp_b = 3 * oracle::period(SymbolSpan(p).last(ell)) <= ell;
    PatternShape sh = classify_pattern(SymbolSpan(p), ell);
    PatternClass want = !hp_a ? PatternClass::NonHPPrefix : !hp_b ? PatternClass::NonHPSuffix : PatternClass::HighlyPeriodic;
    ASSERT_EQ(sh.cls, want);
    if (hp_a) {
      ASSERT_EQ(sh.prefix_period, oracle::period(SymbolSpan(p).first(ell)));
    }
  }
}

TEST(LongGroups, EachClassAgainstOracle) {
  std::mt19937_64 rng(2);
  auto fpr = Fingerprinter::production(2);
  std::size_t seen[3] = {0, 0, 0};
  for (int it = 0; it < 400; ++it) {
    Text t = it % 2 ? periodic_mix(rng, 50 + rng() % 400) : oracle::random_text(rng, 50 + rng() % 400, 2);
    const std::size_t gi = 2 + rng() % 14;
    const std::size_t ell = group_length(gi);
    const std::size_t hi = group_length(gi + 1) - 1;
    auto pats = long_patterns(rng, t, 20, ell, hi);
    std::vector<SymbolSpan> cls[3];
    for (auto& p : pats) cls[static_cast<int>(classify_pattern(SymbolSpan(p), ell).cls)].push_back(p);
    for (int c = 0; c < 3; ++c) seen[c] += cls[c].size();
    MatchStats st;
    auto a = match_nhp_prefix_group(fpr, SymbolSpan(t), cls[0], ell, &st);
    auto b = match_nhp_suffix_group(fpr, SymbolSpan(t), cls[1], ell, &st);
    auto h = match_hp_group(fpr, SymbolSpan(t), cls[2], ell, &st, true);
    for (std::size_t k = 0; k < cls[0].size(); ++k) {
      ASSERT_EQ(a[k].leftmost, oracle::leftmost(t, cls[0][k]));
      ASSERT_EQ(a[k].rightmost, oracle::rightmost(t, cls[0][k]));
    }
    for (std::size_t k = 0; k < cls[1].size(); ++k) {
      ASSERT_EQ(b[k].leftmost, oracle::leftmost(t, cls[1][k]));
      ASSERT_EQ(b[k].rightmost, oracle::rightmost(t, cls[1][k]));
    }
    for (std::size_t k = 0; k < cls[2].size(); ++k) ASSERT_EQ(h[k].leftmost, oracle::leftmost(t, cls[2][k]));
    ASSERT_EQ(st.spacing_violations, 0u);
    ASSERT_LE(st.peak_pending_per_pattern, 2u);
  }
  EXPECT_GT(seen[0], 100u);
  EXPECT_GT(seen[1], 20u);
  EXPECT_GT(seen[2], 100u);
}

TEST(Dictionary, AgainstOracle) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 300; ++it) {
    auto fpr = Fingerprinter::production(100 + it);
    Text t = it % 3 == 0 ? periodic_mix(rng, 1 + rng() % 500) : oracle::random_text(rng, 1 + rng() % 500, 1 + it % 3);
    const std::size_t s = 1 + rng() % 60;
    std::vector<Text> pats = oracle::sample_patterns(rng, t, s / 2 + 1, 8, 1 + it % 3);
    auto more = long_patterns(rng, t, s / 2 + 1, 1, std::min<std::size_t>(t.size() + 3, 300));
    pats.insert(pats.end(), more.begin(), more.end());
    MatchStats st;
    auto got = match_dictionary(fpr, SymbolSpan(t), oracle::spans(pats), {.stats = &st, .las_vegas = true});
    for (std::size_t j = 0; j < pats.size(); ++j) ASSERT_EQ(got[j], oracle::leftmost(t, pats[j])) << it << " " << j;
    ASSERT_EQ(st.spacing_violations, 0u);
  }
}

TEST(Dictionary, HandExample) {
  auto fpr = Fingerprinter::production();
  Text t = to_symbols("abracadabra");
  std::vector<Text> p{to_symbols("abra"), to_symbols("cada")};
  auto got = match_dictionary(fpr, SymbolSpan(t), oracle::spans(p));
  EXPECT_EQ(got[0], MaybePosition(0));
  EXPECT_EQ(got[1], MaybePosition(4));
}

TEST(Dictionary, EdgeCases) {
  auto fpr = Fingerprinter::production();
  Text t = to_symbols("aaaa"), e, p5 = to_symbols("aaaaa"), p1 = to_symbols("a");
  EXPECT_THROW(match_dictionary(fpr, SymbolSpan(t), {SymbolSpan(e)}), std::invalid_argument);
  auto got = match_dictionary(fpr, SymbolSpan(t), {SymbolSpan(p5), SymbolSpan(p1)});
  EXPECT_FALSE(got[0]);
  EXPECT_EQ(got[1], MaybePosition(0));
  Text empty_text;
  got = match_dictionary(fpr, SymbolSpan(empty_text), {SymbolSpan(p1)});
  EXPECT_FALSE(got[0]);
}

TEST(HighlyPeriodic, LasVegasCheckCatchesCollisions) {
  // A tiny prime makes unrelated windows collide with a periodic prefix.
  std::mt19937_64 rng(4);
  std::size_t detected = 0;
  for (int it = 0; it < 100; ++it) {
    auto fpr = Fingerprinter::test_mode(5, it);
    Text t = oracle::random_text(rng, 400, 2);
    Text p = oracle::power_of("ab", 40);
    try {
      match_hp_group(fpr, SymbolSpan(t), {SymbolSpan(p)}, 30, nullptr, true);
    } catch (const verification_failure&) {
      ++detected;
    }
  }
  EXPECT_GT(detected, 0u);
}
