#pragma once

// Parameter engine: the recursive parameter function Gamma and the four
// construction rounds, with bias and rate certification carried out in the
// log2 domain.  Quantities that are exact powers of two are kept as integer
// log2 values; everything else is tracked as doubles with 1e-9 test
// tolerances.
//
// Two modes: paper mode treats the parameters as pure numbers (the inner
// degree d2 = s^(4 s^2 Q) is astronomically large at s = 128) and enforces
// the asymptotic-regime gates; desk mode relaxes the gates so that tiny
// instantiable parameter sets can be produced and checked against real
// graphs.

#include "walklift/errors.hpp"
#include "walklift/rational.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace walklift {

enum class param_mode { paper, desk };

struct param_set {
  param_mode mode = param_mode::paper;

  rational alpha;                  // 1/s
  std::uint64_t s = 0;             // width; a power of two
  std::uint64_t q = 0;             // degree multiplier: d2 = s^(4 s^2 q)
  std::uint64_t dim = 0;           // message dimension
  std::uint64_t log2_inv_eps = 0;  // target bias 2^-x

  std::uint64_t log2_d2 = 0;       // 4 s^2 q log2(s), exact
  std::uint64_t b2 = 0;            // 4 s log2(d2), exact
  double log2_lambda2 = 0;         // log2(b2) - log2(d2)/2
  std::int64_t log2_eps0 = 0;      // -2 log2(d2), exact
  double log2_theta = 0;           // 4 log2(lambda2) - log2(6)
  std::uint64_t log2_d1 = 0;       // 4 log2(d2), exact
  double log2_lambda1_bound = 0;   // log2(3) - log2(d1)/2

  std::uint64_t t = 0;             // walk vertex count; 0 when the rule is insoluble
  bool round_two_t_rule = false;   // extra (1 - 2 alpha) factor in the exponent

  std::uint64_t ell = 0;           // cascade depth (0 until the round-II adjustment)
  rational zeta_ratio;             // t / s^(ell-1)
  std::uint64_t p = 0;             // last-level arity factor, in [q, s q]
  std::uint64_t t_prime = 0;       // adjusted total vertex count p s^(ell-1)

  double log2_n = 0;               // base-code support size
  double log2_big_n = 0;           // block length of the final lift
  rational rate_exponent_bound;    // 2 + 26 alpha, or 2 + 40 alpha after round II
};

/// 1/alpha as an integer, requiring it to be a power of two >= 2.
std::uint64_t alpha_to_s(const rational& alpha);

/// Truth of x * alpha^5 >= 4 * log2(1/alpha) for eps = 2^-x, evaluated in
/// exact integer arithmetic.
bool alpha_feasible(const rational& alpha, std::uint64_t log2_inv_eps);

/// Fills a parameter set from the dimension, the target bias 2^-x, alpha,
/// and the degree multiplier q.  Paper mode requires alpha <= 1/128 and
/// alpha_feasible; desk mode relaxes both gates and leaves t = 0 when the
/// walk-length rule has no solution.  round_two_t_rule inserts the extra
/// (1 - 2 alpha) exponent factor.
param_set gamma(std::uint64_t dim, std::uint64_t log2_inv_eps,
                const rational& alpha, std::uint64_t q,
                param_mode mode = param_mode::paper,
                bool round_two_t_rule = false);

struct walk_length_certificate {
  bool bound_holds = false;  // (lambda2^2)^{f (t-1)} <= eps
  bool minimal = false;      // (lambda2^2)^{f (1-alpha) (t-1)} >= eps
  double exponent_lhs = 0;   // log2 of the lift-bias bound
  double exponent_rhs = 0;   // -x
};

/// Checks the defining inequality of the walk-length rule and its
/// minimality counterpart in the log2 domain.
walk_length_certificate certify_walk_length(const param_set& p);

struct rate_certificate {
  bool walk_term_ok = false;    // d2^{2(t-1)} <= (1/eps)^{2(1+10 alpha)}
  bool degree_term_ok = false;  // d2^{1-2 alpha} <= 1/sigma2(H^2)
  bool pass = false;
  rational rate_exponent;       // 2 + 26 alpha
};

/// Log-domain verification of the rate chain; pass = both links hold.
rate_certificate rate_certify(const param_set& p);

/// Rounds the walk length up to the cascade grid: ell smallest with
/// s^ell >= t, then the last level gets arity p in [q, s q] with
/// 0 <= p/q - zeta <= 1/q for zeta = t/s^(ell-1), giving t' = p s^(ell-1).
/// Requires t > s; asserts the sandwich
/// t-1 <= (t'-1)/q <= (1+2 alpha)(t-1) and raises the rate exponent to
/// 2 + 40 alpha.
param_set round_two_adjust(const param_set& p);

/// Log-domain check of (lambda2')^q <= lambda2^(1-2 alpha) across the two
/// engine invocations of round II (first with multiplier q, second with 1).
bool round_two_lambda_check(const param_set& first, const param_set& second);

struct round_three_result {
  param_set params;
  double beta = 0;            // 26 alpha
  bool recursive_base = true; // the base code itself comes from round II
};

/// Round III: s = smallest power of two >= (log2(1/eps))^(1/6), then the
/// round-II pipeline with the base code marked as recursively constructed.
round_three_result round_three(std::uint64_t dim, std::uint64_t log2_inv_eps,
                               param_mode mode = param_mode::paper);

struct round_four_result {
  std::uint64_t log2_inv_eta = 0;  // eta = 2^-j
  double radius = 0;               // 1/2 - sqrt(eta)
};

/// Largest list-decoding radius parameter eta = 2^-j of the 2^(-c s) form
/// satisfying s >= log2(1/eta) and the splittability constraint
/// eta^8 / (s^2 2^(2 s^2)) >= 2 s^(-s^2), i.e.
/// j = min(floor(c s), floor((s^2 log2 s - 2 s^2 - 2 log2 s - 1)/8)).
/// Requires s >= 4; Infeasible when no j >= 1 exists.
round_four_result round_four_radius(std::uint64_t s, double c = 1.0);

inline constexpr double default_framework_constant = 1073741824.0;  // 2^30

struct threshold_set {
  double k0 = 0;        // 2 (1 + ln(1/eta)/ln(4/3))
  double k0_prime = 0;  // 2 (1 + ln(1/eta)/ln(16/15))
  double log2_tau0 = 0; // log2(eta^8 / (K k 2^(4k)))
  double log2_l = 0;    // log2(K' k^4 2^(4k) / eta^32)
  double k_constant = default_framework_constant;
  double k_prime_constant = default_framework_constant;
  bool splittability_gate = false;  // s^2 (s/16)^(-s^2) <= eta^8 / (4 K)
};

/// Framework thresholds for list-decoding a tau-splittable lift at radius
/// 1/2 - sqrt(eta) with walk arity k; the splittability gate is evaluated
/// for the given width s (0 skips the gate).
threshold_set thresholds(double eta, std::uint64_t k, std::uint64_t s = 0,
                         double k_constant = default_framework_constant,
                         double k_prime_constant = default_framework_constant);

/// Flat key=value rendering of a parameter set, one entry per line, for the
/// CLI report and the run manifests.
std::vector<std::pair<std::string, std::string>> describe(const param_set& p);

}  // namespace walklift
