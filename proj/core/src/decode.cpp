#include "walklift/decode.hpp"

#include "walklift/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>

namespace walklift {

bool within_list_radius(const word& a, const word& b, const rational& eta) {
  rational d = relative_distance(a, b);
  rational half(1, 2);
  if (d > half) return false;
  rational gap = half - d;
  return gap * gap >= eta;
}

support_ensemble::support_ensemble(std::vector<word> support,
                                   std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  require(!support_.empty(), errc::empty_list, "ensemble support is empty");
  require(weights_.size() == support_.size(), errc::length_mismatch,
          "one weight per support word");
  double total = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require(support_[i].size() == support_[0].size(), errc::length_mismatch,
            "support words must share one length");
    require(weights_[i] > 0, errc::precondition_violated,
            "support weights must be positive");
    total += weights_[i];
  }
  for (double& w : weights_) w /= total;
}

std::size_t support_ensemble::num_variables() const { return support_[0].size(); }

std::vector<std::pair<std::uint64_t, double>> support_ensemble::query(
    const std::vector<std::uint64_t>& variables) const {
  require(variables.size() <= 63, errc::too_large, "query tuple too long");
  for (std::uint64_t v : variables)
    require(v < num_variables(), errc::index_out_of_range, "ensemble variable");
  std::map<std::uint64_t, double> acc;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < variables.size(); ++j)
      if (support_[i].get(variables[j])) key |= std::uint64_t(1) << j;
    acc[key] += weights_[i];
  }
  return {acc.begin(), acc.end()};
}

std::unique_ptr<local_ensemble> support_ensemble::condition(
    const std::vector<std::uint64_t>& variables, const word& values) const {
  require(values.size() == variables.size(), errc::length_mismatch,
          "one observed value per conditioned variable");
  for (std::uint64_t v : variables)
    require(v < num_variables(), errc::index_out_of_range, "ensemble variable");
  std::vector<word> kept;
  std::vector<double> w;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < variables.size() && match; ++j)
      match = support_[i].get(variables[j]) == values.get(j);
    if (match) {
      kept.push_back(support_[i]);
      w.push_back(weights_[i]);
    }
  }
  require(!kept.empty(), errc::empty_list,
          "conditioning on a zero-probability assignment");
  return std::make_unique<support_ensemble>(std::move(kept), std::move(w));
}

std::unique_ptr<local_ensemble> support_ensemble::clone() const {
  return std::make_unique<support_ensemble>(*this);
}

projected_ensemble::projected_ensemble(std::unique_ptr<local_ensemble> inner,
                                       std::vector<std::uint64_t> projection)
    : inner_(std::move(inner)), projection_(std::move(projection)) {
  require(inner_ != nullptr, errc::precondition_violated,
          "projected ensemble needs an underlying ensemble");
  for (std::uint64_t p : projection_)
    require(p < inner_->num_variables(), errc::index_out_of_range,
            "projection entry out of range");
}

std::vector<std::pair<std::uint64_t, double>> projected_ensemble::query(
    const std::vector<std::uint64_t>& variables) const {
  std::vector<std::uint64_t> mapped;
  mapped.reserve(variables.size());
  for (std::uint64_t v : variables) {
    require(v < projection_.size(), errc::index_out_of_range, "view variable");
    mapped.push_back(projection_[v]);
  }
  return inner_->query(mapped);
}

std::unique_ptr<local_ensemble> projected_ensemble::condition(
    const std::vector<std::uint64_t>& variables, const word& values) const {
  std::vector<std::uint64_t> mapped;
  mapped.reserve(variables.size());
  for (std::uint64_t v : variables) {
    require(v < projection_.size(), errc::index_out_of_range, "view variable");
    mapped.push_back(projection_[v]);
  }
  return std::make_unique<projected_ensemble>(inner_->condition(mapped, values),
                                              projection_);
}

std::unique_ptr<local_ensemble> projected_ensemble::clone() const {
  return std::make_unique<projected_ensemble>(inner_->clone(), projection_);
}

support_ensemble brute_force_ensemble(const linear_code& code,
                                      const walk_collection& w,
                                      const word& received, const rational& eta) {
  require(w.base_size == code.block_length(), errc::length_mismatch,
          "collection base size must match the code length");
  require(received.size() == w.count(), errc::length_mismatch,
          "received word length must match the walk count");
  require(code.dimension() <= default_enumeration_cap, errc::dimension_too_large,
          "code too large to enumerate");
  std::vector<word> support;
  code.for_each_codeword([&](std::uint64_t, const word& z) {
    if (within_list_radius(direct_sum_lift(z, w), received, eta))
      support.push_back(z);
  });
  require(!support.empty(), errc::empty_list, "no codeword within the list radius");
  std::vector<double> weights(support.size(), 1.0);
  return support_ensemble(std::move(support), std::move(weights));
}

projected_ensemble cloud_view(const local_ensemble& base_vars,
                              const std::vector<std::uint64_t>& projection) {
  return projected_ensemble(base_vars.clone(), projection);
}

namespace {

std::uint64_t sample_assignment(const std::vector<std::pair<std::uint64_t, double>>& dist,
                                double r) {
  double acc = 0;
  for (const auto& [key, p] : dist) {
    acc += p;
    if (r < acc) return key;
  }
  return dist.back().first;
}

}  // namespace

rounding_result propagation_rounding(const local_ensemble& ens,
                                     const walk_collection& w,
                                     unsigned locality_budget,
                                     std::uint64_t seed) {
  w.validate();
  unsigned k = w.arity;
  require(locality_budget >= k, errc::locality_too_small,
          "locality budget must cover one tuple");
  require(ens.locality() >= std::size_t(locality_budget) + 2 * k,
          errc::locality_too_small, "ensemble locality insufficient");
  require(ens.num_variables() == w.base_size, errc::length_mismatch,
          "ensemble variables must match the collection's base positions");

  std::mt19937_64 rng(seed);
  unsigned m = std::uniform_int_distribution<unsigned>(1, locality_budget / k)(rng);
  std::uniform_int_distribution<std::uint64_t> pick(0, w.count() - 1);
  std::vector<std::uint64_t> s;
  for (unsigned j = 0; j < m; ++j) {
    std::uint64_t t = pick(rng);
    for (unsigned i = 0; i < k; ++i) s.push_back(w.base_position(t, i));
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  auto joint = ens.query(s);
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::uint64_t picked = sample_assignment(joint, r);
  word sigma(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    sigma.set(i, (picked >> i) & 1);

  rounding_result out;
  out.conditioned = ens.condition(s, sigma);
  out.conditioned_set = s;
  out.conditioned_values = sigma;
  out.num_walks = m;
  out.assignment = word(ens.num_variables());
  for (std::size_t i = 0; i < ens.num_variables(); ++i) {
    auto marginal = out.conditioned->query({i});
    double p1 = 0;
    for (const auto& [key, p] : marginal)
      if (key & 1) p1 += p;
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    out.assignment.set(i, u < p1);
  }
  return out;
}

namespace {

// dense joint distribution over the 2^|vars| packed assignments
std::vector<double> dense_joint(const local_ensemble& ens,
                                const std::vector<std::uint64_t>& vars) {
  require(vars.size() <= 24, errc::too_large, "tuple too long for a dense joint");
  std::vector<double> out(std::size_t(1) << vars.size(), 0.0);
  for (const auto& [key, p] : ens.query(vars)) out[key] += p;
  return out;
}

std::vector<std::uint64_t> tuple_variables(const walk_collection& w,
                                           std::uint64_t t) {
  std::vector<std::uint64_t> vars(w.arity);
  for (unsigned i = 0; i < w.arity; ++i) vars[i] = w.base_position(t, i);
  return vars;
}

}  // namespace

double tensoriality_defect(const local_ensemble& ens, const walk_collection& w) {
  w.validate();
  require(ens.num_variables() == w.base_size, errc::length_mismatch,
          "ensemble variables must match the collection's base positions");
  require(ens.locality() >= w.arity, errc::locality_too_small,
          "ensemble locality below the tuple arity");
  double total = 0;
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    std::vector<std::uint64_t> vars = tuple_variables(w, t);
    std::vector<double> joint = dense_joint(ens, vars);
    std::vector<double> p1(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      p1[i] = 0;
      for (const auto& [key, p] : ens.query({vars[i]}))
        if (key & 1) p1[i] += p;
    }
    double l1 = 0;
    for (std::uint64_t a = 0; a < joint.size(); ++a) {
      double prod = 1;
      for (std::size_t i = 0; i < vars.size(); ++i)
        prod *= ((a >> i) & 1) ? p1[i] : 1 - p1[i];
      l1 += std::abs(joint[a] - prod);
    }
    total += l1;
  }
  return total / double(w.count());
}

double two_step_defect(const local_ensemble& ens, const walk_collection& w,
                       std::uint64_t pair_cap) {
  w.validate();
  require(ens.num_variables() == w.base_size, errc::length_mismatch,
          "ensemble variables must match the collection's base positions");
  require(ens.locality() >= 2 * std::size_t(w.arity), errc::locality_too_small,
          "ensemble locality below twice the tuple arity");
  require(w.count() <= pair_cap / w.count(), errc::too_many_walks,
          "too many tuple pairs");
  unsigned k = w.arity;
  double total = 0;
  for (std::uint64_t t1 = 0; t1 < w.count(); ++t1) {
    std::vector<std::uint64_t> vars1 = tuple_variables(w, t1);
    std::vector<double> q1 = dense_joint(ens, vars1);
    for (std::uint64_t t2 = 0; t2 < w.count(); ++t2) {
      std::vector<std::uint64_t> vars = vars1;
      std::vector<std::uint64_t> vars2 = tuple_variables(w, t2);
      vars.insert(vars.end(), vars2.begin(), vars2.end());
      std::vector<double> joint = dense_joint(ens, vars);
      std::vector<double> q2 = dense_joint(ens, vars2);
      double l1 = 0;
      for (std::uint64_t a = 0; a < joint.size(); ++a)
        l1 += std::abs(joint[a] - q1[a & ((std::uint64_t(1) << k) - 1)] * q2[a >> k]);
      total += l1;
    }
  }
  return total / (double(w.count()) * double(w.count()));
}

bool conditional_covariance_psd(const local_ensemble& ens,
                                const std::vector<std::uint64_t>& variables,
                                double tol) {
  std::size_t n = variables.size();
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p1 = 0;
    for (const auto& [key, p] : ens.query({variables[i]}))
      if (key & 1) p1 += p;
    mean[i] = 1 - 2 * p1;
  }
  matrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double e = 0;
      for (const auto& [key, p] : ens.query({variables[i], variables[j]})) {
        double xi = (key & 1) ? -1 : 1;
        double xj = (key & 2) ? -1 : 1;
        e += p * xi * xj;
      }
      cov(i, j) = cov(j, i) = e - mean[i] * mean[j];
    }
  Eigen::SelfAdjointEigenSolver<matrix> solver(cov);
  return solver.eigenvalues().minCoeff() >= -tol;
}

word majority_vote(const local_ensemble& ens) {
  word out(ens.num_variables());
  for (std::size_t i = 0; i < ens.num_variables(); ++i) {
    double p1 = 0;
    for (const auto& [key, p] : ens.query({i}))
      if (key & 1) p1 += p;
    out.set(i, p1 > 0.5);
  }
  return out;
}

decoder_config make_decoder_config(const rational& eta0, const rational& eta) {
  require(eta > 0 && eta < eta0 && eta0 < rational(1, 4),
          errc::precondition_violated, "need 0 < eta < eta0 < 1/4");
  return {eta0, eta, rational(1, 8) - eta0 / 8};
}

decode_list brute_force_backend::decode(const linear_code& code,
                                        const walk_collection& w,
                                        const word& received,
                                        const rational& eta) const {
  require(code.dimension() <= default_enumeration_cap, errc::dimension_too_large,
          "code too large to enumerate");
  require(w.base_size == code.block_length(), errc::length_mismatch,
          "collection base size must match the code length");
  require(received.size() == w.count(), errc::length_mismatch,
          "received word length must match the walk count");
  decode_list out;
  for (std::uint64_t m = 0; m < code.num_codewords(); ++m) {
    word z = code.codeword(m);
    word lifted = direct_sum_lift(z, w);
    if (within_list_radius(lifted, received, eta))
      out.push_back({std::move(z), std::move(lifted)});
  }
  return out;
}

decode_list brute_force_backend::cover(const linear_code& code,
                                       const walk_collection& w,
                                       const word& received, const rational& eta,
                                       const rational& zeta) const {
  (void)zeta;  // the full list is a cover for every zeta
  return decode(code, w, received, eta);
}

decode_list list_decode_level(const list_decoder_backend& backend,
                              const linear_code& code, const walk_collection& w,
                              const word& received, const rational& eta) {
  return backend.decode(code, w, received, eta);
}

std::optional<decode_entry> unique_decode_level(const list_decoder_backend& backend,
                                                const linear_code& code,
                                                const walk_collection& w,
                                                const word& received,
                                                const rational& eta,
                                                const rational& eta0) {
  require(eta < eta0 && eta < rational(1, 16), errc::precondition_violated,
          "unique decoding needs eta < min(eta0, 1/16)");
  decode_list list = backend.decode(code, w, received, eta);
  if (list.empty()) return std::nullopt;
  std::size_t best = 0;
  rational best_d = relative_distance(list[0].lifted, received);
  for (std::size_t i = 1; i < list.size(); ++i) {
    rational d = relative_distance(list[i].lifted, received);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return list[best];
}

namespace {

word encode_to_level(const cascade& c, const word& base, unsigned level) {
  word cur = base;
  for (unsigned j = 1; j <= level; ++j) cur = c.encode_level(j, cur);
  return cur;
}

std::optional<word> pick_closest_reencoding(const cascade& c,
                                            const std::vector<word>& candidates,
                                            const word& target, unsigned level) {
  if (candidates.empty()) return std::nullopt;
  std::size_t best = 0;
  rational best_d = relative_distance(encode_to_level(c, candidates[0], level), target);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    rational d = relative_distance(encode_to_level(c, candidates[i], level), target);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return candidates[best];
}

}  // namespace

std::optional<word> cascade_unique_decode(const cascade& c,
                                          const list_decoder_backend& backend,
                                          const word& received,
                                          const decoder_config& config) {
  require(config.eta < config.eta0 && config.eta < rational(1, 16),
          errc::precondition_violated,
          "unique decoding needs eta < min(eta0, 1/16)");
  require(received.size() == c.level_length(c.depth()), errc::length_mismatch,
          "received word length must match the top code");

  std::vector<linear_code> below;  // below[j] = code lifted by level j+1
  for (unsigned j = 0; j < c.depth(); ++j) below.push_back(c.level_code(j));

  std::function<std::optional<word>(unsigned, const word&)> rec =
      [&](unsigned level, const word& y) -> std::optional<word> {
    decode_list list = backend.decode(below[level - 1],
                                      c.levels()[level - 1].collection, y,
                                      config.eta);
    std::vector<word> candidates;
    for (const decode_entry& e : list) {
      if (level == 1) {
        candidates.push_back(e.base);
      } else if (auto r = rec(level - 1, e.base)) {
        candidates.push_back(*r);
      }
    }
    return pick_closest_reencoding(c, candidates, y, level);
  };
  return rec(c.depth(), received);
}

decode_list zeta_cover_prune(const decode_list& entries, const rational& zeta,
                             const rational& eta) {
  require(zeta > 0 && zeta < 1, errc::precondition_violated,
          "zeta must lie in (0, 1)");
  require(eta > 0 && eta < 1, errc::precondition_violated,
          "eta must lie in (0, 1)");
  rational threshold = rational(1) - 2 * zeta;
  decode_list kept;
  for (const decode_entry& e : entries) {
    bool independent = true;
    for (const decode_entry& k : kept)
      if (bias(e.base ^ k.base) > threshold) {
        independent = false;
        break;
      }
    if (independent) kept.push_back(e);
  }
  return kept;
}

std::optional<word> fixed_poly_decode(const cascade& c,
                                      const list_decoder_backend& backend,
                                      const word& received,
                                      const decoder_config& config,
                                      fixed_poly_stats* stats) {
  require(config.eta < config.eta0 && config.eta < rational(1, 16),
          errc::precondition_violated,
          "unique decoding needs eta < min(eta0, 1/16)");
  require(received.size() == c.level_length(c.depth()), errc::length_mismatch,
          "received word length must match the top code");

  std::vector<linear_code> below;
  for (unsigned j = 0; j < c.depth(); ++j) below.push_back(c.level_code(j));

  fixed_poly_stats local;
  fixed_poly_stats& st = stats ? *stats : local;
  st.nodes = 0;

  std::function<std::optional<word>(unsigned, const word&)> rec =
      [&](unsigned level, const word& y) -> std::optional<word> {
    ++st.nodes;
    if (level == 0) {
      // snap to the closest base codeword
      std::optional<word> best;
      rational best_d;
      below[0].for_each_codeword([&](std::uint64_t, const word& cw) {
        rational d = relative_distance(cw, y);
        if (!best || d < best_d) {
          best = cw;
          best_d = d;
        }
      });
      return best;
    }
    decode_list cov = backend.cover(below[level - 1],
                                    c.levels()[level - 1].collection, y,
                                    config.eta, config.zeta);
    decode_list pruned = zeta_cover_prune(cov, config.zeta, config.eta);
    std::vector<word> candidates;
    for (const decode_entry& e : pruned)
      for (const word& next : {e.base, e.base.complemented()})
        if (auto r = rec(level - 1, next)) candidates.push_back(*r);
    return pick_closest_reencoding(c, candidates, y, level);
  };
  return rec(c.depth(), received);
}

multilinear_poly multilinear_poly::zero(unsigned n) {
  require(n <= 20, errc::too_large, "too many multilinear variables");
  multilinear_poly p;
  p.n = n;
  p.coefficients.assign(std::size_t(1) << n, rational(0));
  return p;
}

unsigned multilinear_poly::degree() const {
  unsigned deg = 0;
  for (std::size_t mask = 0; mask < coefficients.size(); ++mask)
    if (coefficients[mask] != 0)
      deg = std::max(deg, unsigned(__builtin_popcountll(mask)));
  return deg;
}

rational product_expectation(const multilinear_poly& poly,
                             const std::vector<rational>& means,
                             unsigned degree_cap) {
  require(means.size() == poly.n, errc::length_mismatch,
          "one mean per variable");
  require(poly.coefficients.size() == std::size_t(1) << poly.n,
          errc::length_mismatch, "coefficient table size");
  for (std::size_t mask = 0; mask < poly.coefficients.size(); ++mask)
    if (poly.coefficients[mask] != 0)
      require(unsigned(__builtin_popcountll(mask)) <= degree_cap,
              errc::degree_too_high, "monomial degree exceeds the cap");
  // fold one variable at a time: E[f] = E[f|z_i=+1](1+mu)/2 + ... reduces to
  // substituting the mean for the variable in the multilinear expansion
  std::vector<rational> c = poly.coefficients;
  for (unsigned i = 0; i < poly.n; ++i) {
    std::size_t bit = std::size_t(1) << i;
    for (std::size_t mask = 0; mask < c.size(); ++mask)
      if (!(mask & bit)) c[mask] += means[i] * c[mask | bit];
    for (std::size_t mask = 0; mask < c.size(); ++mask)
      if (mask & bit) c[mask] = 0;
  }
  return c[0];
}

multilinear_poly multilinear_product(const multilinear_poly& a,
                                     const multilinear_poly& b) {
  require(a.n == b.n, errc::length_mismatch,
          "polynomials must share a variable set");
  multilinear_poly out = multilinear_poly::zero(a.n);
  for (std::size_t m1 = 0; m1 < a.coefficients.size(); ++m1) {
    if (a.coefficients[m1] == 0) continue;
    for (std::size_t m2 = 0; m2 < b.coefficients.size(); ++m2) {
      if (b.coefficients[m2] == 0) continue;
      out.coefficients[m1 ^ m2] += a.coefficients[m1] * b.coefficients[m2];
    }
  }
  return out;
}

word derandomized_round(const multilinear_poly& a_poly,
                        const multilinear_poly& b_poly,
                        const std::vector<rational>& means, const rational& a,
                        const rational& beta, const rational& delta,
                        std::vector<rational>* trajectory) {
  require(a_poly.n == b_poly.n, errc::length_mismatch,
          "polynomials must share a variable set");
  require(means.size() == a_poly.n, errc::length_mismatch,
          "one mean per variable");
  require(delta > 0, errc::precondition_violated, "delta must be positive");
  rational threshold = a * (rational(1) - beta);
  require(threshold > 0, errc::precondition_violated,
          "a(1 - beta) must be positive");

  unsigned k = 1;
  if (threshold < 1) {
    double raw = std::log(1.0 / to_double(threshold)) / (2 * to_double(delta));
    k = unsigned(std::ceil(raw)) + 1;
  }
  require(k <= 64, errc::too_large, "amplification exponent too large");

  // objective = a_poly * b_poly^{2k}, reduced multilinearly
  multilinear_poly b_power = multilinear_poly::zero(a_poly.n);
  b_power.coefficients[0] = 1;
  multilinear_poly square = multilinear_product(b_poly, b_poly);
  unsigned e = k;
  multilinear_poly pow2 = square;  // square^{2^j} as j advances
  while (e > 0) {
    if (e & 1) b_power = multilinear_product(b_power, pow2);
    e >>= 1;
    if (e > 0) pow2 = multilinear_product(pow2, pow2);
  }
  multilinear_poly objective = multilinear_product(a_poly, b_power);

  std::vector<rational> cur = means;
  rational phi = product_expectation(objective, cur, a_poly.n);
  require(phi >= threshold, errc::premise_violated,
          "initial expectation below a(1 - beta)");
  if (trajectory) trajectory->push_back(phi);

  word out(a_poly.n);
  for (unsigned i = 0; i < a_poly.n; ++i) {
    cur[i] = rational(1);
    rational plus = product_expectation(objective, cur, a_poly.n);
    cur[i] = rational(-1);
    rational minus = product_expectation(objective, cur, a_poly.n);
    if (plus >= minus) {
      cur[i] = rational(1);
      phi = plus;
      out.set(i, false);
    } else {
      phi = minus;
      out.set(i, true);
    }
    require(phi >= threshold, errc::premise_violated,
            "conditional expectation dropped below a(1 - beta)");
    if (trajectory) trajectory->push_back(phi);
  }
  return out;
}

}  // namespace walklift
