#include <gtest/gtest.h>

#include <random>

#include "krlz/periodicity.hpp"
#include "oracles.hpp"

using namespace krlz;

namespace {

Text binary(std::uint32_t bits, std::size_t len) {
  Text w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = 'a' + ((bits >> i) & 1);
  return w;
}

}  // namespace

TEST(Period, ExhaustiveBinary) {
  for (std::size_t len = 1; len <= 14; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      Text w = binary(bits, len);
      const std::size_t p = oracle::period(w);
      PeriodInfo pi = shortest_period(SymbolSpan(w));
      ASSERT_EQ(pi.periodic, 2 * p <= len) << to_string(w);
      if (pi.periodic) {
        ASSERT_EQ(pi.period, p) << to_string(w);
      }
      ASSERT_EQ(is_highly_periodic(SymbolSpan(w)), 3 * p <= len) << to_string(w);
    }
  }
}

TEST(TwoWay, ExhaustiveSmall) {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::uint32_t pb = 0; pb < (1u << m); ++pb) {
      Text x = binary(pb, m);
      for (std::size_t n = m; n <= 10; n += 3) {
        for (std::uint32_t tb = 0; tb < (1u << n); tb += 1 + (tb % 5)) {
          Text y = binary(tb, n);
          auto occ = oracle::all_occurrences(y, x);
          for (Position from = 0; from <= n; from += 2) {
            MaybePosition want;
            for (Position o : occ)
              if (o >= from) {
                want = o;
                break;
              }
            ASSERT_EQ(find_first_occurrence(SymbolSpan(x), SymbolSpan(y), from), want)
                << to_string(x) << " in " << to_string(y) << " from " << from;
          }
        }
      }
    }
  }
}

TEST(TwoWay, RandomLarger) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 2000; ++it) {
    Symbol sigma = 1 + rng() % 3;
    Text y = oracle::random_text(rng, 1 + rng() % 200, sigma);
    Text x;
    if (rng() % 2) {
      x = oracle::power_of(to_string(oracle::random_text(rng, 1 + rng() % 4, sigma)), 1 + rng() % 30);
    } else {
      x = oracle::random_text(rng, 1 + rng() % 12, sigma);
    }
    ASSERT_EQ(find_first_occurrence(SymbolSpan(x), SymbolSpan(y)), oracle::leftmost(y, x));
  }
  Text e;
  Text y = to_symbols("abc");
  EXPECT_THROW(find_first_occurrence(SymbolSpan(e), SymbolSpan(y)), std::invalid_argument);
}

TEST(NonPeriodicWindow, HandExample) {
  Text w = to_symbols("aaaaab");
  EXPECT_EQ(find_nonperiodic_window(SymbolSpan(w), 3), 3u);
}

TEST(NonPeriodicWindow, ExhaustiveBinary) {
  for (std::size_t len = 3; len <= 13; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      Text w = binary(bits, len);
      const bool hp = 3 * oracle::period(w) <= len;
      for (std::size_t ell = 3; ell <= len; ++ell) {
        Position i = 0;
        if (hp) {
          // Highly periodic words are outside the contract; a window may
          // still be reported, but it must be genuine.
          try {
            i = find_nonperiodic_window(SymbolSpan(w), ell);
          } catch (const std::invalid_argument&) {
            continue;
          }
        } else {
          i = find_nonperiodic_window(SymbolSpan(w), ell);
        }
        ASSERT_LE(i + ell, len);
        SymbolSpan win(w.data() + i, ell);
        ASSERT_GT(3 * oracle::period(win), ell) << to_string(w) << " ell=" << ell;
      }
    }
  }
}

TEST(NonPeriodicWindow, RejectsBadInput) {
  Text w = to_symbols("abcabc");
  EXPECT_THROW(find_nonperiodic_window(SymbolSpan(w), 2), std::invalid_argument);
  EXPECT_THROW(find_nonperiodic_window(SymbolSpan(w), 7), std::invalid_argument);
}

TEST(PeriodTransfer, Inequality) {
  static_assert(period_transfer_check(5, 5, 8, 2));
  static_assert(!period_transfer_check(4, 5, 8, 2));
}
