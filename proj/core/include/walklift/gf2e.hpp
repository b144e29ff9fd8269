#pragma once

// Arithmetic in GF(2^l) for the small-bias powering construction.  The
// reduction polynomial is the lexicographically smallest irreducible of the
// requested degree, found at construction (degrees up to 16).

#include "walklift/errors.hpp"

#include <cstdint>

namespace walklift {

/// True iff `poly` (bit i = coefficient of x^i) is irreducible over GF(2).
bool gf2_poly_irreducible(std::uint64_t poly);

class gf2e {
 public:
  explicit gf2e(unsigned degree);

  unsigned degree() const { return l_; }
  std::uint32_t field_size() const { return std::uint32_t(1) << l_; }
  std::uint32_t reduction_polynomial() const { return reduction_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

 private:
  unsigned l_;
  std::uint32_t reduction_;
};

}  // namespace walklift
