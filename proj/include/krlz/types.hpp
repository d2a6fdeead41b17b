#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace krlz {

// Symbols are integer codes. Byte texts use codes 0..255; code 256 is
// reserved for padding and terminators.
using Symbol = std::uint32_t;
using SymbolSpan = std::span<const Symbol>;
using Text = std::vector<Symbol>;

// All positions inside the library are 0-based.
using Position = std::size_t;
using MaybePosition = std::optional<Position>;

inline constexpr Symbol kSentinel = 256;
inline constexpr Symbol kByteAlphabet = 257;

// Thrown by the Las Vegas paths when a fingerprint false positive is
// detected. Never thrown by the Monte Carlo paths.
class verification_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an internal invariant that should hold under the
// no-false-positive assumption is violated.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Text to_symbols(std::string_view s) {
  Text t;
  t.reserve(s.size());
  for (unsigned char c : s) t.push_back(c);
  return t;
}

inline std::string to_string(SymbolSpan s) {
  std::string out;
  out.reserve(s.size());
  for (Symbol c : s) out.push_back(static_cast<char>(c));
  return out;
}

// Read-only views used by the sliding-window matchers. A view is anything
// with size() and operator[](Position) returning a Symbol.
template <typename V>
concept SymbolView = requires(const V& v, Position i) {
  { v.size() } -> std::convertible_to<std::size_t>;
  { v[i] } -> std::convertible_to<Symbol>;
};

// Mirror image of a span; position i maps to size()-1-i.
class ReversedView {
 public:
  explicit ReversedView(SymbolSpan s) : s_(s) {}
  std::size_t size() const { return s_.size(); }
  Symbol operator[](Position i) const { return s_[s_.size() - 1 - i]; }

 private:
  SymbolSpan s_;
};

// A span followed by `padded_size - s.size()` copies of a pad symbol.
class PaddedView {
 public:
  PaddedView(SymbolSpan s, std::size_t padded_size, Symbol pad)
      : s_(s), size_(padded_size), pad_(pad) {}
  std::size_t size() const { return size_; }
  Symbol operator[](Position i) const { return i < s_.size() ? s_[i] : pad_; }

 private:
  SymbolSpan s_;
  std::size_t size_;
  Symbol pad_;
};

// A window [start, start+len) of another view.
template <SymbolView V>
class SliceView {
 public:
  SliceView(const V& base, Position start, std::size_t len)
      : base_(&base), start_(start), len_(len) {}
  std::size_t size() const { return len_; }
  Symbol operator[](Position i) const { return (*base_)[start_ + i]; }

 private:
  const V* base_;
  Position start_;
  std::size_t len_;
};

}  // namespace krlz
