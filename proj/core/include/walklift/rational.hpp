#pragma once

// Exact rational arithmetic.  All combinatorial quantities (bias, distance,
// operator entries used in bit-exact comparisons) are rationals; floating
// point appears only in the spectra module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace walklift {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline rational make_rational(std::int64_t num, std::int64_t den) {
  return rational(bigint(num), bigint(den));
}

/// Parses "p/q", "p", or a decimal like "0.25" into an exact rational.
rational parse_rational(const std::string& text);

/// Formats as "p/q" (or "p" when q = 1).
std::string format_rational(const rational& value);

double to_double(const rational& value);

}  // namespace walklift
