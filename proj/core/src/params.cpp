#include "walklift/params.hpp"

#include <cmath>
#include <cstdio>

namespace walklift {

namespace {

bool is_power_of_two(const bigint& v) { return v > 0 && (v & (v - 1)) == 0; }

std::uint64_t integer_log2(std::uint64_t v) {
  std::uint64_t r = 0;
  while (v > 1) {
    v >>= 1;
    ++r;
  }
  return r;
}

std::uint64_t to_u64(const bigint& v, const char* what) {
  require(v >= 0 && v <= bigint(std::uint64_t(-1)), errc::too_large, what);
  return v.convert_to<std::uint64_t>();
}

// comparison slack that scales with the magnitudes involved; the log2
// quantities reach ~1e12, where double arithmetic keeps ~1e-4 absolute
double slack(double a, double b) {
  return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::uint64_t alpha_to_s(const rational& alpha) {
  require(alpha > 0 && alpha <= rational(1, 2), errc::bad_alpha,
          "alpha must lie in (0, 1/2]");
  require(numerator(alpha) == 1, errc::bad_alpha, "1/alpha must be an integer");
  bigint s = denominator(alpha);
  require(is_power_of_two(s), errc::bad_alpha, "1/alpha must be a power of two");
  return to_u64(s, "1/alpha");
}

bool alpha_feasible(const rational& alpha, std::uint64_t log2_inv_eps) {
  std::uint64_t s = alpha_to_s(alpha);
  bigint rhs = bigint(4) * integer_log2(s) * pow(bigint(s), 5);
  return bigint(log2_inv_eps) >= rhs;
}

param_set gamma(std::uint64_t dim, std::uint64_t log2_inv_eps,
                const rational& alpha, std::uint64_t q, param_mode mode,
                bool round_two_t_rule) {
  std::uint64_t s = alpha_to_s(alpha);
  require(q >= 1, errc::precondition_violated, "degree multiplier q >= 1");
  require(dim >= 1, errc::precondition_violated, "dimension must be positive");
  require(log2_inv_eps >= 1, errc::precondition_violated,
          "target bias must be below 1/2");
  if (mode == param_mode::paper) {
    require(s >= 128, errc::infeasible, "asymptotic regime needs alpha <= 1/128");
    require(alpha_feasible(alpha, log2_inv_eps), errc::infeasible,
            "alpha infeasible for this bias target");
  }

  param_set p;
  p.mode = mode;
  p.alpha = alpha;
  p.s = s;
  p.q = q;
  p.dim = dim;
  p.log2_inv_eps = log2_inv_eps;
  p.round_two_t_rule = round_two_t_rule;

  std::uint64_t log2_s = integer_log2(s);
  p.log2_d2 = to_u64(bigint(4) * s * s * q * log2_s, "log2(d2)");
  p.b2 = to_u64(bigint(4) * s * p.log2_d2, "b2");
  p.log2_lambda2 = std::log2(double(p.b2)) - double(p.log2_d2) / 2;
  require(p.log2_d2 <= std::uint64_t(1) << 62, errc::too_large, "log2(eps0)");
  p.log2_eps0 = -2 * std::int64_t(p.log2_d2);
  p.log2_theta = 4 * p.log2_lambda2 - std::log2(6.0);
  p.log2_d1 = to_u64(bigint(4) * p.log2_d2, "log2(d1)");
  p.log2_lambda1_bound = std::log2(3.0) - double(p.log2_d1) / 2;

  // walk-length rule: smallest t with (lambda2^2)^{f (t-1)} <= eps
  rational factor = (rational(1) - 5 * alpha) * (rational(1) - alpha);
  if (round_two_t_rule) factor *= rational(1) - 2 * alpha;
  p.t = 0;
  if (factor > 0 && p.log2_lambda2 < 0) {
    double denom = to_double(factor) * 2 * (-p.log2_lambda2);
    double raw = double(log2_inv_eps) / denom;
    require(raw < 9e18, errc::too_large, "walk length");
    std::uint64_t t_minus_1 = std::uint64_t(std::ceil(raw));
    if (t_minus_1 < 1) t_minus_1 = 1;
    p.t = t_minus_1 + 1;
  }
  if (mode == param_mode::paper) {
    require(p.t >= 2, errc::infeasible, "walk-length rule insoluble");
    require(p.t - 1 >= s * s, errc::infeasible,
            "walk length below the s^2 floor");
  }

  p.log2_n = std::log2(double(dim)) + 2.001 * (2.0 * double(p.log2_d2));
  p.log2_big_n = p.log2_n + double(s) * double(p.log2_d1);
  if (p.t >= 2)
    p.log2_big_n += 2.0 * double(p.t - 1) * double(p.log2_d2);
  p.rate_exponent_bound = rational(2) + 26 * alpha;
  return p;
}

walk_length_certificate certify_walk_length(const param_set& p) {
  require(p.t >= 2, errc::precondition_violated, "walk length not set");
  rational factor = (rational(1) - 5 * p.alpha) * (rational(1) - p.alpha);
  if (p.round_two_t_rule) factor *= rational(1) - 2 * p.alpha;
  walk_length_certificate cert;
  cert.exponent_lhs = to_double(factor) * double(p.t - 1) * 2 * p.log2_lambda2;
  cert.exponent_rhs = -double(p.log2_inv_eps);
  double tol = slack(cert.exponent_lhs, cert.exponent_rhs);
  cert.bound_holds = cert.exponent_lhs <= cert.exponent_rhs + tol;
  double minimal_lhs = cert.exponent_lhs * to_double(rational(1) - p.alpha);
  cert.minimal = minimal_lhs >= cert.exponent_rhs - tol;
  return cert;
}

rate_certificate rate_certify(const param_set& p) {
  require(p.t >= 2, errc::precondition_violated, "walk length not set");
  rate_certificate cert;
  double walk_lhs = 2.0 * double(p.t - 1) * double(p.log2_d2);
  double walk_rhs =
      2.0 * to_double(rational(1) + 10 * p.alpha) * double(p.log2_inv_eps);
  cert.walk_term_ok = walk_lhs <= walk_rhs + slack(walk_lhs, walk_rhs);
  double deg_lhs = to_double(rational(1) - 2 * p.alpha) * double(p.log2_d2);
  double deg_rhs = 2.0 * (-p.log2_lambda2);
  cert.degree_term_ok = deg_lhs <= deg_rhs + slack(deg_lhs, deg_rhs);
  cert.pass = cert.walk_term_ok && cert.degree_term_ok;
  cert.rate_exponent = rational(2) + 26 * p.alpha;
  return cert;
}

param_set round_two_adjust(const param_set& p) {
  require(p.t > p.s, errc::infeasible,
          "walk vertex count must exceed the width");
  param_set out = p;
  bigint power = p.s;  // s^ell
  out.ell = 1;
  while (power < p.t) {
    power *= p.s;
    ++out.ell;
  }
  bigint s_lm1 = power / p.s;  // s^(ell-1)

  if (power == p.t) {
    // already on the cascade grid: keep everything
    out.zeta_ratio = rational(bigint(p.s));
    out.p = p.s;
    out.t_prime = p.t;
  } else {
    rational zeta(bigint(p.t), s_lm1);
    bigint pick = (bigint(p.t) * p.q + s_lm1 - 1) / s_lm1;  // ceil(zeta q)
    require(pick >= p.q && pick <= bigint(p.s) * p.q, errc::infeasible,
            "arity factor escaped [q, s q]");
    rational offset = rational(pick, bigint(p.q)) - zeta;
    require(offset >= 0 && offset <= rational(1, bigint(p.q)), errc::infeasible,
            "arity factor misses the 1/q window");
    out.zeta_ratio = zeta;
    out.p = to_u64(pick, "arity factor");
    out.t_prime = to_u64(pick * s_lm1, "adjusted vertex count");

    rational left = rational(bigint(p.t) - 1) * p.q;
    rational mid = rational(bigint(out.t_prime) - 1);
    rational right =
        (rational(1) + 2 * p.alpha) * (rational(bigint(p.t)) - 1) * p.q;
    require(left <= mid && mid <= right, errc::infeasible,
            "adjusted walk count escaped the sandwich");
  }

  out.rate_exponent_bound = rational(2) + 40 * p.alpha;
  out.log2_big_n = p.log2_n + double(p.s) * double(p.log2_d1) +
                   2.0 * double(out.t_prime - 1) * double(p.log2_d2);
  return out;
}

bool round_two_lambda_check(const param_set& first, const param_set& second) {
  require(second.q == 1, errc::precondition_violated,
          "second invocation must use multiplier 1");
  double lhs = double(first.q) * second.log2_lambda2;
  double rhs = to_double(rational(1) - 2 * first.alpha) * first.log2_lambda2;
  return lhs <= rhs + slack(lhs, rhs);
}

round_three_result round_three(std::uint64_t dim, std::uint64_t log2_inv_eps,
                               param_mode mode) {
  require(log2_inv_eps >= 2, errc::infeasible, "bias target too weak");
  double root = std::pow(double(log2_inv_eps), 1.0 / 6.0);
  std::uint64_t s = 1;
  while (double(s) < root) s <<= 1;
  if (s < 2) s = 2;

  round_three_result out;
  out.params = gamma(dim, log2_inv_eps, rational(1, bigint(s)), s, mode,
                     /*round_two_t_rule=*/true);
  out.beta = 26.0 / double(s);
  out.recursive_base = true;
  return out;
}

round_four_result round_four_radius(std::uint64_t s, double c) {
  require(s >= 4, errc::precondition_violated, "width must be at least 4");
  require(c > 0, errc::precondition_violated, "radius constant must be positive");
  double log2_s = std::log2(double(s));
  double s2 = double(s) * double(s);
  double cap_form = std::floor(c * double(s));
  double cap_split = std::floor((s2 * log2_s - 2 * s2 - 2 * log2_s - 1) / 8);
  double j = std::min(cap_form, cap_split);
  require(j >= 1, errc::infeasible, "no feasible list-decoding radius");
  round_four_result out;
  out.log2_inv_eta = std::uint64_t(j);
  out.radius = 0.5 - std::exp2(-double(out.log2_inv_eta) / 2);
  return out;
}

threshold_set thresholds(double eta, std::uint64_t k, std::uint64_t s,
                         double k_constant, double k_prime_constant) {
  require(eta > 0 && eta < 1, errc::precondition_violated,
          "eta must lie in (0, 1)");
  require(k >= 1, errc::precondition_violated, "arity must be positive");
  threshold_set out;
  out.k_constant = k_constant;
  out.k_prime_constant = k_prime_constant;
  double ln_inv_eta = std::log(1.0 / eta);
  out.k0 = 2 * (1 + ln_inv_eta / std::log(4.0 / 3.0));
  out.k0_prime = 2 * (1 + ln_inv_eta / std::log(16.0 / 15.0));
  out.log2_tau0 = 8 * std::log2(eta) - std::log2(k_constant) -
                  std::log2(double(k)) - 4.0 * double(k);
  out.log2_l = std::log2(k_prime_constant) + 4 * std::log2(double(k)) +
               4.0 * double(k) - 32 * std::log2(eta);
  if (s > 0) {
    double log2_s = std::log2(double(s));
    double lhs = 2 * log2_s - double(s) * double(s) * (log2_s - 4);
    double rhs = 8 * std::log2(eta) - 2 - std::log2(k_constant);
    out.splittability_gate = lhs <= rhs + slack(lhs, rhs);
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> describe(const param_set& p) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("mode", p.mode == param_mode::paper ? "paper" : "desk");
  kv.emplace_back("alpha", format_rational(p.alpha));
  kv.emplace_back("s", std::to_string(p.s));
  kv.emplace_back("q", std::to_string(p.q));
  kv.emplace_back("dim", std::to_string(p.dim));
  kv.emplace_back("log2_inv_eps", std::to_string(p.log2_inv_eps));
  kv.emplace_back("log2_d2", std::to_string(p.log2_d2));
  kv.emplace_back("b2", std::to_string(p.b2));
  kv.emplace_back("log2_lambda2", fmt_double(p.log2_lambda2));
  kv.emplace_back("log2_eps0", std::to_string(p.log2_eps0));
  kv.emplace_back("log2_theta", fmt_double(p.log2_theta));
  kv.emplace_back("log2_d1", std::to_string(p.log2_d1));
  kv.emplace_back("log2_lambda1_bound", fmt_double(p.log2_lambda1_bound));
  kv.emplace_back("t", std::to_string(p.t));
  kv.emplace_back("round_two_t_rule", p.round_two_t_rule ? "1" : "0");
  kv.emplace_back("ell", std::to_string(p.ell));
  kv.emplace_back("zeta_ratio", format_rational(p.zeta_ratio));
  kv.emplace_back("p", std::to_string(p.p));
  kv.emplace_back("t_prime", std::to_string(p.t_prime));
  kv.emplace_back("log2_n", fmt_double(p.log2_n));
  kv.emplace_back("log2_N", fmt_double(p.log2_big_n));
  kv.emplace_back("rate_exponent_bound", format_rational(p.rate_exponent_bound));
  return kv;
}

}  // namespace walklift
