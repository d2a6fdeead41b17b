#pragma once

// Las Vegas wrappers: answers are checked so that a fingerprint collision
// surfaces as a verification_failure instead of a wrong result.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krlz/fingerprint.hpp"
#include "krlz/longest_prefix.hpp"
#include "krlz/match_long.hpp"
#include "krlz/stats.hpp"
#include "krlz/types.hpp"

namespace krlz {

struct LeftmostCheck {
  std::optional<std::size_t> false_positive;  // first pattern whose reported occurrence is wrong

  bool ok() const { return !false_positive; }
};

// Compares every reported occurrence symbol by symbol.
inline LeftmostCheck verify_leftmost_naive(SymbolSpan text, const std::vector<SymbolSpan>& patterns,
                                           std::span<const MaybePosition> answers) {
  if (patterns.size() != answers.size()) throw std::invalid_argument("one answer per pattern expected");
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    if (!answers[j]) continue;
    const Position i = *answers[j];
    const SymbolSpan p = patterns[j];
    if (i + p.size() > text.size() || !std::equal(p.begin(), p.end(), text.begin() + static_cast<std::ptrdiff_t>(i)))
      return {j};
  }
  return {};
}

// Leftmost occurrences with every answer verified.
inline std::vector<MaybePosition> lv_match_dictionary(const Fingerprinter& fpr, SymbolSpan text,
                                                      const std::vector<SymbolSpan>& patterns,
                                                      MatchStats* stats = nullptr) {
  auto ans = match_dictionary(fpr, text, patterns, {.stats = stats, .las_vegas = true});
  auto check = verify_leftmost_naive(text, patterns, ans);
  if (!check.ok())
    throw verification_failure("false positive reported for pattern " + std::to_string(*check.false_positive));
  return ans;
}

// Longest prefixes (bounded if `bounds` is non-empty), then verified: the
// reported prefix must occur at its witness, within the bound, and the
// prefix one symbol longer must not occur within the bound.
inline std::vector<PrefixMatch> lv_longest_prefix(const Fingerprinter& fpr, SymbolSpan text,
                                                  const std::vector<SymbolSpan>& patterns,
                                                  std::span<const Position> bounds = {}, MatchStats* stats = nullptr) {
  auto res = longest_prefix_bounded(fpr, text, patterns, bounds, stats);
  auto bound_of = [&](std::size_t j) { return bounds.empty() ? kNoBound : bounds[j]; };
  std::vector<SymbolSpan> longer;
  std::vector<std::size_t> owner;
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const SymbolSpan p = patterns[j];
    const PrefixMatch& r = res[j];
    if (r.length > p.size()) throw verification_failure("prefix longer than its pattern");
    if (r.length > 0) {
      if (!r.witness || *r.witness > bound_of(j) || *r.witness + r.length > text.size() ||
          !std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(r.length),
                      text.begin() + static_cast<std::ptrdiff_t>(*r.witness)))
        throw verification_failure("reported prefix does not occur for pattern " + std::to_string(j));
    }
    if (r.length < p.size()) {
      longer.push_back(p.first(r.length + 1));
      owner.push_back(j);
    }
  }
  auto occ = lv_match_dictionary(fpr, text, longer, stats);
  for (std::size_t q = 0; q < longer.size(); ++q) {
    if (occ[q] && *occ[q] <= bound_of(owner[q]))
      throw verification_failure("a longer prefix occurs for pattern " + std::to_string(owner[q]));
  }
  return res;
}

}  // namespace krlz
