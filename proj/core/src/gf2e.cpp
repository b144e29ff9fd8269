#include "walklift/gf2e.hpp"

#include <bit>

namespace walklift {

namespace {

unsigned poly_degree(std::uint64_t p) {
  return p == 0 ? 0 : 63 - unsigned(std::countl_zero(p));
}

std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  std::uint64_t prod = 0;
  while (b) {
    if (b & 1) prod ^= a;
    b >>= 1;
    a <<= 1;
  }
  unsigned md = poly_degree(mod);
  for (unsigned d = poly_degree(prod); prod && d >= md; d = poly_degree(prod)) {
    prod ^= mod << (d - md);
    if (prod == 0) break;
  }
  return prod;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    unsigned db = poly_degree(b);
    while (a && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
    std::uint64_t t = a;
    a = b;
    b = t;
  }
  return a;
}

// x^(2^iters) mod f, by repeated squaring of x.
std::uint64_t frobenius_power(std::uint64_t f, unsigned iters) {
  std::uint64_t v = 2;  // the polynomial x
  for (unsigned i = 0; i < iters; ++i) v = poly_mulmod(v, v, f);
  return v;
}

}  // namespace

bool gf2_poly_irreducible(std::uint64_t poly) {
  unsigned l = poly_degree(poly);
  if (l == 0) return false;
  // f irreducible of degree l iff x^(2^l) = x mod f and, for every prime
  // divisor p of l, gcd(x^(2^(l/p)) - x, f) = 1.
  if (frobenius_power(poly, l) != 2) return false;
  unsigned rest = l;
  for (unsigned p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    if (poly_gcd(frobenius_power(poly, l / p) ^ 2, poly) != 1) return false;
  }
  if (rest > 1 && rest < l)
    if (poly_gcd(frobenius_power(poly, l / rest) ^ 2, poly) != 1) return false;
  if (rest == l && l > 1)
    if (poly_gcd(frobenius_power(poly, 1) ^ 2, poly) != 1) return false;
  return true;
}

gf2e::gf2e(unsigned degree) : l_(degree) {
  require(degree >= 1 && degree <= 16, errc::too_large,
          "field degree must be in [1, 16]");
  for (std::uint32_t tail = 1;; tail += 2) {
    std::uint64_t candidate = (std::uint64_t(1) << l_) | tail;
    if (gf2_poly_irreducible(candidate)) {
      reduction_ = std::uint32_t(candidate);
      return;
    }
    require(tail + 2 < (std::uint32_t(1) << l_) || l_ == 1,
            errc::convergence_failure, "no irreducible polynomial found");
  }
}

std::uint32_t gf2e::mul(std::uint32_t a, std::uint32_t b) const {
  return std::uint32_t(poly_mulmod(a, b, reduction_));
}

std::uint32_t gf2e::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t result = 1;
  std::uint32_t base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

}  // namespace walklift
