#pragma once

// Bit-packed words over GF(2), generator-matrix linear codes, and the
// exhaustive decoding oracles used as ground truth by the higher modules.

#include "walklift/errors.hpp"
#include "walklift/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace walklift {

/// Fixed-length binary word, bit i stored at limb i/64, position i%64.
class word {
 public:
  word() = default;
  explicit word(std::size_t n) : n_(n), limbs_((n + 63) / 64, 0) {}

  /// Builds from a string of '0'/'1' characters, leftmost char = position 0.
  static word from_string(const std::string& bits);
  /// Interprets the low n bits of x, bit i of x = position i.
  static word from_index(std::uint64_t x, std::size_t n);

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const { return (limbs_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (i & 63);
    if (v) limbs_[i >> 6] |= mask; else limbs_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) { limbs_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  word& operator^=(const word& other);
  friend word operator^(word a, const word& b) { a ^= b; return a; }

  /// Bitwise complement (flips every position).
  word complemented() const;

  std::size_t weight() const;
  std::string to_string() const;
  /// Packs positions into an integer, position i = bit i; requires n <= 64.
  std::uint64_t to_index() const;

  bool operator==(const word&) const = default;
  /// Lexicographic by position (position 0 most significant), for sorted lists.
  bool lex_less(const word& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> limbs_;
};

/// |E_i (-1)^{w_i}| = |n - 2 weight| / n, exact.
rational bias(const word& w);

/// Relative Hamming distance |{i : a_i != b_i}| / n, exact.
rational relative_distance(const word& a, const word& b);

/// Linear code given by a generator matrix (rows = basis words of length n).
/// Enumeration-based operations refuse dimensions above the cap.
class linear_code {
 public:
  linear_code(std::vector<word> generator_rows, std::size_t block_length);

  std::size_t dimension() const { return rows_.size(); }
  std::size_t block_length() const { return n_; }
  const std::vector<word>& generator() const { return rows_; }

  /// Encodes a message of `dimension()` bits.
  word encode(const word& message) const;
  /// Codeword for the message with index bits `m` (bit i = row i), m < 2^D.
  word codeword(std::uint64_t m) const;
  std::uint64_t num_codewords() const { return std::uint64_t(1) << rows_.size(); }

  /// Visits all codewords in Gray-code order as (message index, codeword).
  template <typename F>
  void for_each_codeword(F&& visit) const {
    word cw(n_);
    std::uint64_t gray = 0;
    visit(std::uint64_t(0), cw);
    for (std::uint64_t k = 1; k < num_codewords(); ++k) {
      std::uint64_t next = k ^ (k >> 1);
      unsigned bit = 0;
      std::uint64_t diff = next ^ gray;
      while (!((diff >> bit) & 1)) ++bit;
      cw ^= rows_[bit];
      gray = next;
      visit(gray, cw);
    }
  }

 private:
  std::vector<word> rows_;
  std::size_t n_;
};

inline constexpr std::size_t default_enumeration_cap = 24;

/// Exact max bias over the 2^D - 1 nonzero codewords.
rational code_bias(const linear_code& c,
                   std::size_t enumeration_cap = default_enumeration_cap);

/// Exact min relative distance between distinct codewords (= min nonzero weight / n).
rational code_distance(const linear_code& c,
                       std::size_t enumeration_cap = default_enumeration_cap);

/// All codewords z with relative_distance(z, y) <= radius, sorted
/// lexicographically.
std::vector<word> brute_force_list_decode(
    const linear_code& c, const word& y, const rational& radius,
    std::size_t enumeration_cap = default_enumeration_cap);

/// The unique codeword within relative radius d(C)/2 of y; empty when no
/// codeword is that close or when two are (tie exactly at the radius).
std::optional<word> brute_force_unique_decode(
    const linear_code& c, const word& y,
    std::size_t enumeration_cap = default_enumeration_cap);

/// Seeded rejection sampling over random generator matrices until the code is
/// eps0-balanced; deterministic given seed.  Throws search_exhausted when the
/// attempt budget runs out.
linear_code random_balanced_code(std::size_t dim, std::size_t len,
                                 const rational& eps0, std::uint64_t seed,
                                 unsigned max_attempts = 4096,
                                 std::size_t enumeration_cap = default_enumeration_cap);

}  // namespace walklift
