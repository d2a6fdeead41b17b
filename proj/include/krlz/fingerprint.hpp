#pragma once

// Karp-Rabin fingerprints: Phi(w[i..j]) = w[i] + w[i+1] x + ... + w[j] x^(j-i)
// mod p, evaluated over one or two independent channels.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "krlz/types.hpp"

namespace krlz {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
inline constexpr std::uint64_t kDefaultSeed = 0x5eedf00dULL;
inline constexpr std::size_t kMaxChannels = 2;

struct Channel {
  std::uint64_t prime = kMersenne61;
  std::uint64_t base = 1;
  std::uint64_t base_inv = 1;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    const unsigned __int128 m = static_cast<unsigned __int128>(a) * b;
    if (prime == kMersenne61) {
      std::uint64_t r = static_cast<std::uint64_t>(m & kMersenne61) +
                        static_cast<std::uint64_t>(m >> 61);
      if (r >= kMersenne61) r -= kMersenne61;
      return r;
    }
    return static_cast<std::uint64_t>(m % prime);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t r = a + b;
    return r >= prime ? r - prime : r;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + prime - b;
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % prime;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t reduce(Symbol s) const { return s % prime; }
};

struct Fingerprint {
  std::array<std::uint64_t, kMaxChannels> residue{};
  std::size_t length = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

// x^(len-1) per channel, cached for a fixed window length.
struct WindowPowers {
  std::array<std::uint64_t, kMaxChannels> top{};
  std::size_t length = 0;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % d == 0) return n == d;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

class Fingerprinter {
 public:
  // Production mode: two channels over 2^61-1 with independently drawn bases.
  static Fingerprinter production(std::uint64_t seed = kDefaultSeed, std::uint64_t sigma = kByteAlphabet) {
    if (sigma < 1) throw std::invalid_argument("alphabet size must be positive");
    if (sigma >= kMersenne61) throw std::invalid_argument("alphabet does not fit below the fingerprint prime");
    std::mt19937_64 rng(seed);
    std::vector<Channel> ch;
    for (std::size_t c = 0; c < kMaxChannels; ++c) ch.push_back(draw(kMersenne61, rng));
    return Fingerprinter(std::move(ch), sigma, seed);
  }

  // Test mode: a single channel over a small prime. Symbols are reduced
  // modulo the prime, so collisions between distinct words are common.
  static Fingerprinter test_mode(std::uint64_t prime, std::uint64_t seed = kDefaultSeed, std::uint64_t sigma = kByteAlphabet) {
    if (!is_prime(prime)) throw std::invalid_argument("test-mode modulus must be prime");
    std::mt19937_64 rng(seed);
    return Fingerprinter({draw(prime, rng)}, sigma, seed);
  }

  // Fixed channel, for hand-checkable examples.
  static Fingerprinter with_channel(std::uint64_t prime, std::uint64_t base, std::uint64_t sigma = kByteAlphabet) {
    if (!is_prime(prime)) throw std::invalid_argument("modulus must be prime");
    if (base == 0 || base >= prime) throw std::invalid_argument("base must lie in [1, p-1]");
    Channel c{prime, base, 0};
    c.base_inv = c.pow(base, prime - 2);
    return Fingerprinter({c}, sigma, 0);
  }

  std::size_t channel_count() const { return count_; }
  const Channel& channel(std::size_t c) const { return ch_[c]; }
  std::uint64_t sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }

  template <SymbolView V>
  Fingerprint of(const V& w, Position start, std::size_t len) const {
    Fingerprint f;
    f.length = len;
    for (std::size_t c = 0; c < count_; ++c) {
      const Channel& k = ch_[c];
      std::uint64_t h = 0;
      for (std::size_t i = len; i-- > 0;) h = k.add(k.mul(h, k.base), k.reduce(w[start + i]));
      f.residue[c] = h;
    }
    return f;
  }

  Fingerprint of(SymbolSpan w) const {
    for (Symbol s : w) {
      if (s >= sigma_) throw std::out_of_range("symbol outside the alphabet");
    }
    return of(w, 0, w.size());
  }

  WindowPowers window_powers(std::size_t len) const {
    WindowPowers wp;
    wp.length = len;
    for (std::size_t c = 0; c < count_; ++c) wp.top[c] = len == 0 ? 0 : ch_[c].pow(ch_[c].base, len - 1);
    return wp;
  }

  // Phi(w[i+1..i+len]) from Phi(w[i..i+len-1]), w[i] and w[i+len].
  Fingerprint roll(const Fingerprint& fp, Symbol out_sym, Symbol in_sym, const WindowPowers& wp) const {
    Fingerprint r;
    r.length = fp.length;
    for (std::size_t c = 0; c < count_; ++c) {
      const Channel& k = ch_[c];
      std::uint64_t h = k.mul(k.sub(fp.residue[c], k.reduce(out_sym)), k.base_inv);
      r.residue[c] = k.add(h, k.mul(k.reduce(in_sym), wp.top[c]));
    }
    return r;
  }

  Fingerprint roll_window(const Fingerprint& fp, Symbol out_sym, Symbol in_sym, std::size_t window_len) const {
    return roll(fp, out_sym, in_sym, window_powers(window_len));
  }

  // Phi(uv) from Phi(u) and Phi(v).
  Fingerprint concat(const Fingerprint& u, const Fingerprint& v) const {
    Fingerprint r;
    r.length = u.length + v.length;
    for (std::size_t c = 0; c < count_; ++c) {
      const Channel& k = ch_[c];
      r.residue[c] = k.add(u.residue[c], k.mul(v.residue[c], k.pow(k.base, u.length)));
    }
    return r;
  }

 private:
  Fingerprinter(std::vector<Channel> ch, std::uint64_t sigma, std::uint64_t seed)
      : count_(ch.size()), sigma_(sigma), seed_(seed) {
    for (std::size_t c = 0; c < count_; ++c) ch_[c] = ch[c];
  }

  template <typename Rng>
  static Channel draw(std::uint64_t prime, Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(1, prime - 1);
    Channel c{prime, dist(rng), 0};
    c.base_inv = c.pow(c.base, prime - 2);
    return c;
  }

  std::array<Channel, kMaxChannels> ch_{};
  std::size_t count_ = 0;
  std::uint64_t sigma_ = kByteAlphabet;
  std::uint64_t seed_ = 0;
};

inline Fingerprinter init_fingerprinter(std::uint64_t seed, std::uint64_t sigma) {
  return Fingerprinter::production(seed, sigma);
}

inline Fingerprint fingerprint_of(const Fingerprinter& fpr, SymbolSpan w) { return fpr.of(w); }

// Fingerprints of all prefixes of a word, with O(1) substring queries.
class PrefixFingerprints {
 public:
  template <SymbolView V>
  PrefixFingerprints(const Fingerprinter& fpr, const V& w) : fpr_(&fpr), n_(w.size()) {
    const std::size_t k = fpr.channel_count();
    prefix_.assign(k, std::vector<std::uint64_t>(n_ + 1, 0));
    inv_pow_.assign(k, std::vector<std::uint64_t>(n_ + 1, 0));
    for (std::size_t c = 0; c < k; ++c) {
      const Channel& ch = fpr.channel(c);
      std::uint64_t pw = 1 % ch.prime;
      std::uint64_t ipw = 1 % ch.prime;
      for (std::size_t i = 0; i < n_; ++i) {
        prefix_[c][i + 1] = ch.add(prefix_[c][i], ch.mul(ch.reduce(w[i]), pw));
        inv_pow_[c][i] = ipw;
        pw = ch.mul(pw, ch.base);
        ipw = ch.mul(ipw, ch.base_inv);
      }
      inv_pow_[c][n_] = ipw;
    }
  }

  std::size_t size() const { return n_; }

  // Fingerprint of the prefix of length k.
  Fingerprint prefix(std::size_t k) const {
    Fingerprint f;
    f.length = k;
    for (std::size_t c = 0; c < prefix_.size(); ++c) f.residue[c] = prefix_[c][k];
    return f;
  }

  // Fingerprint of w[start, start+len).
  Fingerprint substring(Position start, std::size_t len) const {
    if (start + len > n_) throw std::out_of_range("substring outside the table");
    Fingerprint f;
    f.length = len;
    for (std::size_t c = 0; c < prefix_.size(); ++c) {
      const Channel& ch = fpr_->channel(c);
      f.residue[c] = ch.mul(ch.sub(prefix_[c][start + len], prefix_[c][start]), inv_pow_[c][start]);
    }
    return f;
  }

 private:
  const Fingerprinter* fpr_;
  std::size_t n_;
  std::vector<std::vector<std::uint64_t>> prefix_;
  std::vector<std::vector<std::uint64_t>> inv_pow_;
};

inline PrefixFingerprints prefix_table(const Fingerprinter& fpr, SymbolSpan w) { return PrefixFingerprints(fpr, w); }

// 1-based inclusive range, as in Phi(w[i..j]).
inline Fingerprint substring_fp(const PrefixFingerprints& t, std::size_t i, std::size_t j) {
  if (i < 1 || i > j || j > t.size()) throw std::out_of_range("substring_fp: need 1 <= i <= j <= n");
  return t.substring(i - 1, j - i + 1);
}

// Sorted fingerprint -> ids map. Lookups are binary searches.
class FpIndex {
 public:
  using Id = std::uint32_t;

  FpIndex() = default;
  explicit FpIndex(std::vector<std::pair<Fingerprint, Id>> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, id] : entries) {
      if (keys_.empty() || keys_.back() != key) {
        keys_.push_back(key);
        offsets_.push_back(static_cast<Id>(ids_.size()));
      }
      ids_.push_back(id);
    }
    offsets_.push_back(static_cast<Id>(ids_.size()));
  }

  std::size_t key_count() const { return keys_.size(); }
  std::size_t entry_count() const { return ids_.size(); }
  bool empty() const { return keys_.empty(); }

  // Index of the key, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const Fingerprint& key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return npos;
    return static_cast<std::size_t>(it - keys_.begin());
  }

  std::span<const Id> ids_of(std::size_t key_idx) const {
    return std::span<const Id>(ids_).subspan(offsets_[key_idx], offsets_[key_idx + 1] - offsets_[key_idx]);
  }

  std::span<const Id> lookup(const Fingerprint& key) const {
    std::size_t k = find(key);
    if (k == npos) return {};
    return ids_of(k);
  }

 private:
  std::vector<Fingerprint> keys_;
  std::vector<Id> offsets_;
  std::vector<Id> ids_;
};

inline FpIndex build_fp_index(std::vector<std::pair<Fingerprint, FpIndex::Id>> entries) {
  return FpIndex(std::move(entries));
}

inline std::vector<FpIndex::Id> lookup_fp(const FpIndex& index, const Fingerprint& key) {
  auto ids = index.lookup(key);
  return {ids.begin(), ids.end()};
}

}  // namespace krlz
