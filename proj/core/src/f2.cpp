#include "walklift/f2.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace walklift {

word word::from_string(const std::string& bits) {
  word w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    char c = bits[i];
    require(c == '0' || c == '1', errc::precondition_violated,
            "word string must consist of 0/1 characters");
    if (c == '1') w.set(i, true);
  }
  return w;
}

word word::from_index(std::uint64_t x, std::size_t n) {
  require(n <= 64, errc::precondition_violated, "from_index needs n <= 64");
  word w(n);
  if (n > 0) w.limbs_[0] = (n == 64) ? x : (x & ((std::uint64_t(1) << n) - 1));
  return w;
}

word& word::operator^=(const word& other) {
  require(n_ == other.n_, errc::length_mismatch, "word lengths differ");
  for (std::size_t i = 0; i < limbs_.size(); ++i) limbs_[i] ^= other.limbs_[i];
  return *this;
}

word word::complemented() const {
  word w(*this);
  for (auto& limb : w.limbs_) limb = ~limb;
  if (n_ & 63) w.limbs_.back() &= (std::uint64_t(1) << (n_ & 63)) - 1;
  return w;
}

std::size_t word::weight() const {
  std::size_t total = 0;
  for (auto limb : limbs_) total += std::size_t(std::popcount(limb));
  return total;
}

std::string word::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::uint64_t word::to_index() const {
  require(n_ <= 64, errc::precondition_violated, "to_index needs n <= 64");
  return limbs_.empty() ? 0 : limbs_[0];
}

bool word::lex_less(const word& other) const {
  require(n_ == other.n_, errc::length_mismatch, "word lengths differ");
  for (std::size_t i = 0; i < n_; ++i) {
    bool a = get(i), b = other.get(i);
    if (a != b) return b;
  }
  return false;
}

rational bias(const word& w) {
  require(w.size() > 0, errc::precondition_violated, "bias of empty word");
  bigint n(w.size());
  bigint diff = n - 2 * bigint(w.weight());
  if (diff < 0) diff = -diff;
  return rational(diff, n);
}

rational relative_distance(const word& a, const word& b) {
  require(a.size() == b.size(), errc::length_mismatch, "word lengths differ");
  require(a.size() > 0, errc::precondition_violated, "distance of empty words");
  word d = a;
  d ^= b;
  return rational(bigint(d.weight()), bigint(a.size()));
}

namespace {

std::size_t first_set_position(const word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.get(i)) return i;
  return w.size();
}

void check_enumerable(const linear_code& c, std::size_t cap) {
  require(c.dimension() <= cap, errc::dimension_too_large,
          "code dimension " + std::to_string(c.dimension()) +
              " exceeds enumeration cap " + std::to_string(cap));
}

}  // namespace

linear_code::linear_code(std::vector<word> generator_rows, std::size_t block_length)
    : rows_(std::move(generator_rows)), n_(block_length) {
  require(n_ > 0, errc::precondition_violated, "block length must be positive");
  require(rows_.size() <= n_, errc::precondition_violated,
          "dimension exceeds block length");
  for (const auto& row : rows_)
    require(row.size() == n_, errc::length_mismatch,
            "generator row length differs from block length");
  // Row-reduce a copy to confirm the rows form a basis.
  std::vector<word> basis;
  for (const auto& row : rows_) {
    word r = row;
    for (const auto& b : basis) {
      std::size_t lead = first_set_position(b);
      if (lead < n_ && r.get(lead)) r ^= b;
    }
    require(r.weight() > 0, errc::precondition_violated,
            "generator rows are linearly dependent");
    basis.push_back(r);
    std::sort(basis.begin(), basis.end(), [](const word& a, const word& b) {
      return first_set_position(a) < first_set_position(b);
    });
  }
}

word linear_code::encode(const word& message) const {
  require(message.size() == rows_.size(), errc::length_mismatch,
          "message length differs from code dimension");
  word out(n_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (message.get(i)) out ^= rows_[i];
  return out;
}

word linear_code::codeword(std::uint64_t m) const {
  word out(n_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if ((m >> i) & 1) out ^= rows_[i];
  return out;
}

rational code_bias(const linear_code& c, std::size_t enumeration_cap) {
  check_enumerable(c, enumeration_cap);
  rational best(0);
  c.for_each_codeword([&](std::uint64_t m, const word& cw) {
    if (m == 0) return;
    rational b = bias(cw);
    if (b > best) best = b;
  });
  return best;
}

rational code_distance(const linear_code& c, std::size_t enumeration_cap) {
  check_enumerable(c, enumeration_cap);
  require(c.dimension() > 0, errc::precondition_violated,
          "distance of the zero-dimensional code");
  std::size_t best = c.block_length() + 1;
  c.for_each_codeword([&](std::uint64_t m, const word& cw) {
    if (m == 0) return;
    best = std::min(best, cw.weight());
  });
  return rational(bigint(best), bigint(c.block_length()));
}

std::vector<word> brute_force_list_decode(const linear_code& c, const word& y,
                                          const rational& radius,
                                          std::size_t enumeration_cap) {
  check_enumerable(c, enumeration_cap);
  require(y.size() == c.block_length(), errc::length_mismatch,
          "received word length differs from block length");
  std::vector<word> hits;
  c.for_each_codeword([&](std::uint64_t, const word& cw) {
    if (relative_distance(cw, y) <= radius) hits.push_back(cw);
  });
  std::sort(hits.begin(), hits.end(),
            [](const word& a, const word& b) { return a.lex_less(b); });
  return hits;
}

std::optional<word> brute_force_unique_decode(const linear_code& c, const word& y,
                                              std::size_t enumeration_cap) {
  rational radius = code_distance(c, enumeration_cap) / 2;
  std::vector<word> hits = brute_force_list_decode(c, y, radius, enumeration_cap);
  if (hits.size() == 1) return hits.front();
  return std::nullopt;
}

linear_code random_balanced_code(std::size_t dim, std::size_t len,
                                 const rational& eps0, std::uint64_t seed,
                                 unsigned max_attempts,
                                 std::size_t enumeration_cap) {
  require(dim > 0 && dim <= enumeration_cap, errc::dimension_too_large,
          "dimension outside (0, enumeration cap]");
  require(dim <= len, errc::precondition_violated, "dimension exceeds length");
  std::mt19937_64 rng(seed);
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<word> rows;
    rows.reserve(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      word row(len);
      for (std::size_t i = 0; i < len; ++i)
        if (rng() & 1) row.set(i, true);
      rows.push_back(std::move(row));
    }
    try {
      linear_code candidate(rows, len);
      if (code_bias(candidate, enumeration_cap) <= eps0) return candidate;
    } catch (const error&) {
      // dependent rows: rejected like any other failed attempt
    }
  }
  fail(errc::search_exhausted,
       "no balanced code found in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace walklift
