#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "krlz/oracles.hpp"
#include "krlz/lz77.hpp"
#include "krlz/verify.hpp"
#include "oracles.hpp"

using namespace krlz;

namespace {

std::vector<MaybePosition> leftmost_all(SymbolSpan t, const std::vector<SymbolSpan>& ps) {
  std::vector<MaybePosition> out;
  for (SymbolSpan p : ps) out.push_back(oracle::leftmost(t, p));
  return out;
}

}  // namespace

TEST(BlockPeriods, UnaryText) {
  Text t = oracle::power_of("a", 100);
  SymbolSpan s(t);
  auto table = build_block_period_table(s, 9);
  EXPECT_EQ(table.stride(), 3u);
  for (std::size_t k = 0; k < table.block_count(); ++k) {
    const auto& e = table.entry(k);
    EXPECT_TRUE(e.periodic);
    EXPECT_EQ(e.period, 1u);
    const Position lo = k * 3, hi = lo + 6;
    EXPECT_EQ(e.first, lo > 18 ? lo - 18 : 0);
    EXPECT_EQ(e.last, std::min<Position>(99, hi - 1 + 18));
  }
}

TEST(BlockPeriods, CountFormula) {
  Text t(100, 'a');
  SymbolSpan s(t);
  // Only blocks lying wholly inside the text are counted; this agrees with
  // ceil(3n/ell) - 1 whenever ell/3 divides n.
  for (std::size_t ell : {3, 6, 9, 30, 99, 100}) {
    auto table = build_block_period_table(s, ell);
    const std::size_t d = ell / 3;
    EXPECT_EQ(table.block_count(), t.size() / d - 1) << ell;
    if (ell % 3 == 0 && t.size() % d == 0) {
      EXPECT_EQ(table.block_count(), (3 * t.size() + ell - 1) / ell - 1) << ell;
    }
  }
  EXPECT_THROW(build_block_period_table(s, 2), std::invalid_argument);
}

TEST(BlockPeriods, RandomAgainstBrute) {
  std::mt19937_64 rng(5);
  for (int r = 0; r < 50; ++r) {
    Text t;
    while (t.size() < 200) {
      Text run = oracle::power_of(std::string(1 + rng() % 3, 'a').replace(0, 1, 1, static_cast<char>('a' + rng() % 2)),
                                  1 + rng() % 30);
      if (rng() % 2) run = oracle::random_text(rng, 1 + rng() % 8, 2);
      t.insert(t.end(), run.begin(), run.end());
    }
    SymbolSpan s(t);
    const std::size_t ell = 3 + rng() % 30;
    auto table = build_block_period_table(s, ell);
    const std::size_t d = ell / 3;
    for (std::size_t k = 0; k < table.block_count(); ++k) {
      const auto& e = table.entry(k);
      SymbolSpan block = s.subspan(k * d, 2 * d);
      const std::size_t p = oracles::brute_period(block);
      EXPECT_EQ(e.periodic, 2 * p <= block.size());
      if (!e.periodic) continue;
      EXPECT_EQ(e.period, p);
      // The period holds on [first, last] and stops (or is clamped) at both ends.
      for (Position i = e.first; i + p <= e.last; ++i) EXPECT_EQ(t[i], t[i + p]);
      const Position lo = k * d, hi = lo + 2 * d;
      if (e.first > 0 && e.first + 2 * ell > lo) {
        EXPECT_NE(t[e.first - 1], t[e.first - 1 + p]);
      }
      if (e.last + 1 < t.size() && e.last + 1 < hi + 2 * ell) {
        EXPECT_NE(t[e.last + 1], t[e.last + 1 - p]);
      }
    }
  }
}

TEST(HpFiltering, GenuineOccurrencesAreConsistent) {
  Text t = oracle::power_of("ab", 400);
  SymbolSpan s(t);
  const std::size_t ell = 30;
  auto table = build_block_period_table(s, ell);
  for (Position prev = 0; prev + 20 < 300; prev += 2)
    for (Position cur = prev + 2; cur <= prev + 14; cur += 2)
      EXPECT_EQ(verify_hp_filtering(table, 2, prev, cur), HpCheck::Consistent);
}

TEST(HpFiltering, ForgedOccurrenceFails) {
  Text t = oracle::power_of("ab", 100);
  t[61] = 'a';
  SymbolSpan s(t);
  const std::size_t ell = 30;
  auto table = build_block_period_table(s, ell);
  // Claimed occurrences of (ab)^15 at 40 and 50 would cover the broken spot.
  EXPECT_EQ(verify_hp_filtering(table, 2, 40, 50), HpCheck::Failure);
  EXPECT_EQ(verify_hp_filtering(table, 2, 0, 10), HpCheck::Consistent);
  // Wrong period claim.
  EXPECT_EQ(verify_hp_filtering(table, 3, 0, 10), HpCheck::Failure);
  // Too far apart for the table.
  EXPECT_EQ(verify_hp_filtering(table, 2, 0, 16), HpCheck::NotApplicable);
}

TEST(LeftmostCheck, DetectsPlantedAnswer) {
  Text t = to_symbols("abracadabra");
  std::vector<Text> ps{to_symbols("abra"), to_symbols("cad"), to_symbols("zz")};
  auto spans = oracle::spans(ps);
  std::vector<MaybePosition> ans{0, 4, std::nullopt};
  EXPECT_TRUE(verify_leftmost_naive(t, spans, ans).ok());
  ans[1] = 5;
  auto bad = verify_leftmost_naive(t, spans, ans);
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(*bad.false_positive, 1u);
  ans[1] = 10;  // runs past the end
  EXPECT_FALSE(verify_leftmost_naive(t, spans, ans).ok());
}

TEST(LeftmostCheck, HonestProductionRuns) {
  std::mt19937_64 rng(7);
  const auto fpr = Fingerprinter::production(7);
  for (int r = 0; r < 40; ++r) {
    Text t = oracle::random_text(rng, 1 + rng() % 400, 1 + rng() % 4);
    auto ps = oracle::sample_patterns(rng, t, 1 + rng() % 30, 1 + rng() % 60, 3);
    auto spans = oracle::spans(ps);
    auto ans = lv_match_dictionary(fpr, t, spans);
    EXPECT_EQ(ans, leftmost_all(t, spans));
  }
}

TEST(LeftmostCheck, TinyPrimeNeverReturnsWrongAnswers) {
  std::mt19937_64 rng(8);
  std::size_t failures = 0, raw_wrong = 0;
  for (int r = 0; r < 200; ++r) {
    const auto fpr = Fingerprinter::test_mode(5, 1000 + r);
    Text t = oracle::random_text(rng, 20 + rng() % 200, 2);
    auto ps = oracle::sample_patterns(rng, t, 1 + rng() % 20, 1 + rng() % 40, 2);
    auto spans = oracle::spans(ps);
    const auto truth = leftmost_all(t, spans);
    auto raw = match_dictionary(fpr, t, spans);
    if (raw != truth) ++raw_wrong;
    if (!verify_leftmost_naive(t, spans, raw).ok()) {
      EXPECT_NE(raw, truth);
    }
    try {
      EXPECT_EQ(lv_match_dictionary(fpr, t, spans), truth);
    } catch (const verification_failure&) {
      ++failures;
    }
  }
  EXPECT_GT(raw_wrong, 0u);
  EXPECT_GT(failures, 0u);
}

TEST(LvLongestPrefix, MatchesUnverifiedOnHonestRuns) {
  std::mt19937_64 rng(9);
  const auto fpr = Fingerprinter::production(9);
  for (int r = 0; r < 40; ++r) {
    Text t = oracle::random_text(rng, 1 + rng() % 400, 1 + rng() % 3);
    auto ps = oracle::sample_patterns(rng, t, 1 + rng() % 20, 1 + rng() % 80, 3);
    auto spans = oracle::spans(ps);
    std::vector<Position> bounds;
    for (std::size_t j = 0; j < ps.size(); ++j) bounds.push_back(rng() % t.size());
    auto plain = longest_prefix_bounded(fpr, t, spans, bounds);
    auto checked = lv_longest_prefix(fpr, t, spans, bounds);
    EXPECT_EQ(plain, checked);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      EXPECT_EQ(checked[j].length, oracles::brute_longest_prefix(t, spans[j], bounds[j]).length);
    }
    auto unbounded = lv_longest_prefix(fpr, t, spans);
    for (std::size_t j = 0; j < ps.size(); ++j)
      EXPECT_EQ(unbounded[j].length, oracles::brute_longest_prefix(t, spans[j]).length);
  }
}

TEST(LvLongestPrefix, WholePatternOccurs) {
  const auto fpr = Fingerprinter::production(3);
  Text t = to_symbols("mississippi");
  std::vector<Text> ps{to_symbols("ssi"), to_symbols("issip"), to_symbols("x")};
  auto res = lv_longest_prefix(fpr, t, oracle::spans(ps));
  EXPECT_EQ(res[0].length, 3u);
  EXPECT_EQ(res[1].length, 5u);
  EXPECT_EQ(res[2].length, 0u);
}

TEST(LvLongestPrefix, TinyPrimeSurfacesFailures) {
  std::mt19937_64 rng(10);
  std::size_t failures = 0;
  for (int r = 0; r < 200; ++r) {
    const auto fpr = Fingerprinter::test_mode(5, 2000 + r);
    Text t = oracle::random_text(rng, 20 + rng() % 200, 2);
    auto ps = oracle::sample_patterns(rng, t, 1 + rng() % 10, 1 + rng() % 60, 2);
    auto spans = oracle::spans(ps);
    try {
      auto res = lv_longest_prefix(fpr, t, spans);
      for (std::size_t j = 0; j < ps.size(); ++j)
        EXPECT_EQ(res[j].length, oracles::brute_longest_prefix(t, spans[j]).length);
    } catch (const verification_failure&) {
      ++failures;
    } catch (const invariant_violation&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0u);
}

TEST(Oracles, NaiveMatchAgreesWithSecondImplementation) {
  std::mt19937_64 rng(12);
  for (int r = 0; r < 100; ++r) {
    Text t = oracle::random_text(rng, 1 + rng() % 100, 1 + rng() % 3);
    auto ps = oracle::sample_patterns(rng, t, 10, 12, 3);
    auto spans = oracle::spans(ps);
    auto res = oracles::naive_multi_match(t, spans);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      EXPECT_EQ(res[j].all, oracle::all_occurrences(t, spans[j]));
      EXPECT_EQ(res[j].leftmost, oracle::leftmost(t, spans[j]));
      EXPECT_EQ(res[j].rightmost, oracle::rightmost(t, spans[j]));
    }
    // Reversal maps occurrences i to n - i - |P|.
    Text rt(t.rbegin(), t.rend());
    std::vector<Text> rps;
    for (const Text& p : ps) rps.emplace_back(p.rbegin(), p.rend());
    auto rres = oracles::naive_multi_match(rt, oracle::spans(rps));
    for (std::size_t j = 0; j < ps.size(); ++j) {
      ASSERT_EQ(rres[j].all.size(), res[j].all.size());
      if (res[j].leftmost) {
        EXPECT_EQ(*rres[j].rightmost, t.size() - *res[j].leftmost - ps[j].size());
      }
    }
  }
}

TEST(Oracles, Periods) {
  EXPECT_EQ(oracles::brute_period(to_symbols("abab")), 2u);
  EXPECT_EQ(oracles::brute_period(to_symbols("aab")), 3u);
  EXPECT_EQ(oracles::brute_period(to_symbols("a")), 1u);
}

TEST(Oracles, PeriodicityLemma) {
  // Exhaustive over binary words up to length 12.
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Text w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = 'a' + ((mask >> i) & 1);
      std::vector<std::size_t> periods;
      for (std::size_t p = 1; p <= n; ++p) {
        bool ok = true;
        for (std::size_t i = 0; i + p < n && ok; ++i) ok = w[i] == w[i + p];
        if (ok) periods.push_back(p);
      }
      EXPECT_EQ(periods.front(), oracles::brute_period(w));
      for (std::size_t p : periods)
        for (std::size_t q : periods)
          if (p + q <= n) {
            const std::size_t g = std::gcd(p, q);
            EXPECT_TRUE(std::find(periods.begin(), periods.end(), g) != periods.end());
          }
    }
  }
}

TEST(Oracles, BruteLz77AgreesWithExact) {
  std::mt19937_64 rng(13);
  for (int r = 0; r < 100; ++r) {
    Text t = oracle::random_text(rng, 1 + rng() % 300, 1 + rng() % 4);
    EXPECT_EQ(oracles::brute_exact_lz77(t), exact_lz77(t));
  }
  EXPECT_EQ(oracles::brute_exact_lz77(to_symbols("aaaa")).size(), 2u);
}
