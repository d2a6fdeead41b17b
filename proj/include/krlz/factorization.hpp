#pragma once

// Phrase lists, decoding, validation, and the TSV file format.

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "krlz/types.hpp"

namespace krlz {

// A phrase copies `length` symbols from `source` (source < start, overlap
// allowed), or is a single symbol that does not occur earlier.
struct Phrase {
  Position start = 0;
  std::size_t length = 0;
  MaybePosition source;
  Symbol literal = 0;  // meaningful when !source

  bool is_literal() const { return !source.has_value(); }
  friend bool operator==(const Phrase&, const Phrase&) = default;
};

struct Factorization {
  std::size_t n = 0;
  std::vector<Phrase> phrases;

  std::size_t size() const { return phrases.size(); }
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Builds phrases without sources from consecutive lengths.
inline Factorization from_lengths(const std::vector<std::size_t>& lengths) {
  Factorization f;
  for (std::size_t len : lengths) {
    f.phrases.push_back({f.n, len, std::nullopt, 0});
    f.n += len;
  }
  return f;
}

inline bool tiles(const Factorization& f) {
  Position at = 0;
  for (const Phrase& p : f.phrases) {
    if (p.start != at || p.length == 0) return false;
    at += p.length;
  }
  return at == f.n;
}

// Reconstructs the text by left-to-right copying.
inline Text decode_factorization(const Factorization& f) {
  if (!tiles(f)) throw std::invalid_argument("phrases do not tile the text");
  Text out;
  out.reserve(f.n);
  for (const Phrase& p : f.phrases) {
    if (p.is_literal()) {
      if (p.length != 1) throw std::invalid_argument("literal phrase longer than one symbol");
      out.push_back(p.literal);
      continue;
    }
    if (*p.source >= p.start) throw std::invalid_argument("phrase source does not precede the phrase");
    for (std::size_t k = 0; k < p.length; ++k) out.push_back(out[*p.source + k]);
  }
  return out;
}

// Checks tiling, that every copy matches, and that literals are fresh.
// Returns an empty string when valid, otherwise a description.
inline std::string validate_factorization(SymbolSpan text, const Factorization& f) {
  if (f.n != text.size()) return "length mismatch";
  if (!tiles(f)) return "phrases do not tile the text";
  for (std::size_t k = 0; k < f.phrases.size(); ++k) {
    const Phrase& p = f.phrases[k];
    if (p.is_literal()) {
      if (p.length != 1) return "phrase " + std::to_string(k) + ": literal longer than one symbol";
      if (text[p.start] != p.literal) return "phrase " + std::to_string(k) + ": wrong literal";
      for (Position i = 0; i < p.start; ++i)
        if (text[i] == p.literal) return "phrase " + std::to_string(k) + ": literal occurs earlier";
      continue;
    }
    if (*p.source >= p.start) return "phrase " + std::to_string(k) + ": source does not precede it";
    for (std::size_t i = 0; i < p.length; ++i)
      if (text[*p.source + i] != text[p.start + i]) return "phrase " + std::to_string(k) + ": copy mismatch";
  }
  return {};
}

// TSV with a header line; positions are 1-based.
inline void write_factorization(std::ostream& os, const Factorization& f, const std::string& mode) {
  os << "#lz77 n=" << f.n << " phrases=" << f.size() << " mode=" << mode << '\n';
  for (const Phrase& p : f.phrases) {
    os << p.start + 1 << '\t' << p.length << '\t';
    if (p.is_literal()) {
      os << "L:" << p.literal;
    } else {
      os << *p.source + 1;
    }
    os << '\n';
  }
}

struct FactorizationFile {
  Factorization f;
  std::string mode;
};

inline FactorizationFile read_factorization(std::istream& is) {
  auto parse_num = [](std::string_view s, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument(std::string("bad ") + what);
    return v;
  };
  FactorizationFile out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("#lz77 ", 0) != 0) throw std::invalid_argument("missing #lz77 header");
  std::optional<std::size_t> n, count;
  std::istringstream hs(line.substr(6));
  for (std::string kv; hs >> kv;) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad header field");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (key == "n") n = parse_num(val, "n");
    else if (key == "phrases") count = parse_num(val, "phrase count");
    else if (key == "mode") out.mode = val;
  }
  if (!n || !count) throw std::invalid_argument("header lacks n or phrases");
  out.f.n = *n;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw std::invalid_argument("phrase line needs three fields");
    Phrase p;
    const std::size_t start = parse_num(std::string_view(line).substr(0, t1), "start");
    if (start == 0) throw std::invalid_argument("positions are 1-based");
    p.start = start - 1;
    p.length = parse_num(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), "length");
    std::string_view src = std::string_view(line).substr(t2 + 1);
    if (src.rfind("L:", 0) == 0) {
      p.literal = static_cast<Symbol>(parse_num(src.substr(2), "literal"));
    } else {
      const std::size_t s = parse_num(src, "source");
      if (s == 0) throw std::invalid_argument("positions are 1-based");
      p.source = s - 1;
    }
    out.f.phrases.push_back(p);
  }
  if (out.f.phrases.size() != *count) throw std::invalid_argument("phrase count does not match the header");
  return out;
}

}  // namespace krlz
