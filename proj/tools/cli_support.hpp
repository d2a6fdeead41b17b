#pragma once

// Input handling for the command-line tool.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "krlz/fingerprint.hpp"
#include "krlz/types.hpp"

namespace krlz::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kVerification = 3, kInvariant = 4 };

// Unreadable files and malformed input data.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or flag values.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("cannot read " + path);
  return data;
}

inline Text bytes_to_text(std::string_view s) { return to_symbols(s); }

inline std::string text_to_bytes(const Text& t) {
  std::string out;
  out.reserve(t.size());
  for (Symbol c : t) {
    if (c > 255) throw io_error("symbol " + std::to_string(c) + " does not fit in a byte");
    out.push_back(static_cast<char>(c));
  }
  return out;
}

// One pattern per line; \n, \t and \\ are the only escapes. A final newline
// does not start another pattern; empty patterns are rejected.
inline std::vector<Text> parse_patterns(std::string_view data) {
  std::vector<Text> out;
  std::size_t line_no = 0;
  std::size_t at = 0;
  while (at < data.size()) {
    std::size_t end = data.find('\n', at);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(at, end - at);
    at = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    Text p;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const unsigned char c = static_cast<unsigned char>(line[i]);
      if (c != '\\') {
        p.push_back(c);
        continue;
      }
      if (i + 1 == line.size()) throw io_error("line " + std::to_string(line_no) + ": dangling backslash");
      switch (line[++i]) {
        case 'n': p.push_back('\n'); break;
        case 't': p.push_back('\t'); break;
        case '\\': p.push_back('\\'); break;
        default: throw io_error("line " + std::to_string(line_no) + ": unknown escape");
      }
    }
    if (p.empty()) throw io_error("line " + std::to_string(line_no) + ": empty pattern");
    out.push_back(std::move(p));
  }
  return out;
}

inline std::size_t parse_size(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw io_error("bad " + what + ": '" + std::string(s) + "'");
  return v;
}

// Lines "offset<TAB>length" selecting patterns from a binary blob.
inline std::vector<Text> parse_manifest(std::string_view manifest, std::string_view blob) {
  std::vector<Text> out;
  std::istringstream in{std::string(manifest)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw io_error("manifest line " + std::to_string(line_no) + ": expected offset<TAB>length");
    const std::size_t off = parse_size(std::string_view(line).substr(0, tab), "offset");
    const std::size_t len = parse_size(std::string_view(line).substr(tab + 1), "length");
    if (len == 0) throw io_error("manifest line " + std::to_string(line_no) + ": empty pattern");
    if (off > blob.size() || len > blob.size() - off)
      throw io_error("manifest line " + std::to_string(line_no) + ": range outside the blob");
    out.push_back(to_symbols(blob.substr(off, len)));
  }
  return out;
}

// One 1-based position per line; returned 0-based.
inline std::vector<Position> parse_bounds(std::string_view data) {
  std::vector<Position> out;
  std::istringstream in{std::string(data)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t v = parse_size(line, "bound");
    if (v == 0) throw io_error("bounds are 1-based");
    out.push_back(v - 1);
  }
  return out;
}

// "production" or "test:<prime>".
inline Fingerprinter make_fingerprinter(const std::string& mode, std::uint64_t seed, std::uint64_t sigma) {
  if (mode == "production") return Fingerprinter::production(seed, sigma);
  if (mode.rfind("test:", 0) == 0) {
    std::uint64_t p = 0;
    const std::string v = mode.substr(5);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), p);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) throw usage_error("bad test prime: " + v);
    try {
      return Fingerprinter::test_mode(p, seed, sigma);
    } catch (const std::invalid_argument& e) {
      throw usage_error(e.what());
    }
  }
  throw usage_error("fingerprint mode must be 'production' or 'test:<prime>'");
}

// Seed from the flag, else KRLZ_SEED, else the built-in default.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env) {
  if (flag) return *flag;
  if (env && *env) {
    std::uint64_t v = 0;
    std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw usage_error("KRLZ_SEED is not an unsigned integer");
    return v;
  }
  return kDefaultSeed;
}

}  // namespace krlz::cli
