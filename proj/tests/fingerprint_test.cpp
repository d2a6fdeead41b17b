#include <gtest/gtest.h>

#include <random>

#include "krlz/fingerprint.hpp"
#include "oracles.hpp"

using namespace krlz;

TEST(Fingerprint, HandExample) {
  auto fpr = Fingerprinter::with_channel(101, 3);
  Text w = to_symbols("aba");
  // 97 + 98*3 + 97*9 = 1264 = 12*101 + 52
  EXPECT_EQ(fpr.of(SymbolSpan(w)).residue[0], 52u);
}

TEST(Fingerprint, MatchesDirectSumOnRandomWords) {
  std::mt19937_64 rng(7);
  auto fpr = Fingerprinter::production(11);
  for (int it = 0; it < 200; ++it) {
    Text w = oracle::random_text(rng, rng() % 300, 26);
    Fingerprint f = fpr.of(SymbolSpan(w));
    for (std::size_t c = 0; c < fpr.channel_count(); ++c) {
      const Channel& ch = fpr.channel(c);
      EXPECT_EQ(f.residue[c], oracle::direct_fingerprint(w, ch.prime, ch.base));
    }
    EXPECT_EQ(f.length, w.size());
  }
}

TEST(Fingerprint, RollAgreesWithRecomputation) {
  std::mt19937_64 rng(8);
  for (auto fpr : {Fingerprinter::production(3), Fingerprinter::test_mode(10007, 5)}) {
    Text t = oracle::random_text(rng, 2000, 4);
    for (std::size_t len : {1u, 2u, 5u, 64u, 777u}) {
      WindowPowers wp = fpr.window_powers(len);
      Fingerprint h = fpr.of(t, 0, len);
      for (Position i = 0; i + len < t.size(); ++i) {
        h = fpr.roll(h, t[i], t[i + len], wp);
        ASSERT_EQ(h, fpr.of(t, i + 1, len));
      }
    }
  }
}

TEST(Fingerprint, ConcatAndSubstring) {
  std::mt19937_64 rng(9);
  auto fpr = Fingerprinter::production(4);
  Text t = oracle::random_text(rng, 500, 3);
  PrefixFingerprints pf(fpr, SymbolSpan(t));
  for (int it = 0; it < 500; ++it) {
    Position a = rng() % 500, b = rng() % 500;
    if (a > b) std::swap(a, b);
    Position m = a + (b > a ? rng() % (b - a) : 0);
    EXPECT_EQ(pf.substring(a, b - a), fpr.of(t, a, b - a));
    EXPECT_EQ(fpr.concat(pf.substring(a, m - a), pf.substring(m, b - m)), pf.substring(a, b - a));
  }
  EXPECT_EQ(substring_fp(pf, 1, 3), fpr.of(t, 0, 3));
  EXPECT_THROW(substring_fp(pf, 0, 3), std::out_of_range);
  EXPECT_THROW(pf.substring(499, 2), std::out_of_range);
}

TEST(Fingerprint, EqualWordsEqualFingerprintsAcrossModes) {
  std::mt19937_64 rng(10);
  Text t = oracle::power_of("abcab", 400);
  for (auto fpr : {Fingerprinter::production(1), Fingerprinter::test_mode(5, 2)}) {
    for (int it = 0; it < 300; ++it) {
      Position i = rng() % 300, j = rng() % 300;
      std::size_t len = 1 + rng() % 90;
      if (std::equal(t.begin() + i, t.begin() + i + len, t.begin() + j)) {
        EXPECT_EQ(fpr.of(t, i, len), fpr.of(t, j, len));
      }
    }
  }
}

TEST(Fingerprint, SmallPrimeCollides) {
  auto fpr = Fingerprinter::test_mode(5, 1);
  std::mt19937_64 rng(12);
  bool collided = false;
  for (int it = 0; it < 200 && !collided; ++it) {
    Text a = oracle::random_text(rng, 8, 4), b = oracle::random_text(rng, 8, 4);
    collided = a != b && fpr.of(SymbolSpan(a)) == fpr.of(SymbolSpan(b));
  }
  EXPECT_TRUE(collided);
}

TEST(Fingerprint, SeedDeterminesBases) {
  auto a = Fingerprinter::production(42), b = Fingerprinter::production(42), c = Fingerprinter::production(43);
  EXPECT_EQ(a.channel(0).base, b.channel(0).base);
  EXPECT_NE(a.channel(0).base, c.channel(0).base);
  EXPECT_EQ(a.channel_count(), 2u);
  EXPECT_EQ(a.channel(0).prime, kMersenne61);
}

TEST(Fingerprint, RejectsBadParameters) {
  EXPECT_THROW(Fingerprinter::production(1, kMersenne61), std::invalid_argument);
  EXPECT_THROW(Fingerprinter::test_mode(100), std::invalid_argument);
  EXPECT_THROW(Fingerprinter::with_channel(101, 0), std::invalid_argument);
  auto fpr = Fingerprinter::production(1, 4);
  Text bad{0, 1, 9};
  EXPECT_THROW(fpr.of(SymbolSpan(bad)), std::out_of_range);
}

TEST(Fingerprint, PrimalityTest) {
  for (std::uint64_t n = 0; n < 2000; ++n) {
    bool brute = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && brute; ++d) brute = n % d != 0;
    EXPECT_EQ(is_prime(n), brute) << n;
  }
  EXPECT_TRUE(is_prime(kMersenne61));
  EXPECT_FALSE(is_prime(kMersenne61 - 2));
}

TEST(FpIndex, GroupsEqualKeys) {
  auto fpr = Fingerprinter::production(1);
  Text a = to_symbols("abc"), b = to_symbols("xyz");
  FpIndex idx({{fpr.of(SymbolSpan(a)), 0}, {fpr.of(SymbolSpan(b)), 1}, {fpr.of(SymbolSpan(a)), 2}});
  EXPECT_EQ(idx.key_count(), 2u);
  EXPECT_EQ(idx.entry_count(), 3u);
  EXPECT_EQ(lookup_fp(idx, fpr.of(SymbolSpan(a))), (std::vector<FpIndex::Id>{0, 2}));
  Text c = to_symbols("abd");
  EXPECT_TRUE(idx.lookup(fpr.of(SymbolSpan(c))).empty());
  EXPECT_EQ(idx.find(fpr.of(SymbolSpan(c))), FpIndex::npos);
}

TEST(Fingerprint, FreeFunctionsMatchMembers) {
  const auto fpr = init_fingerprinter(7, 256);
  EXPECT_EQ(fpr.channel_count(), 2u);
  Text w = to_symbols("fingerprint");
  EXPECT_EQ(fingerprint_of(fpr, w), fpr.of(SymbolSpan(w)));
  EXPECT_THROW(fingerprint_of(fpr, Text{300}), std::out_of_range);
}
