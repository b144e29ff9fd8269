#pragma once

// Decoding stack: local ensembles with conditioning, propagation rounding,
// tensoriality measurement, pluggable list-decoder backends with a
// brute-force oracle, cascade unique decoding, cover pruning, the fixed
// branching-factor decoder, and derandomized rounding of product
// distributions.

#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/lifting.hpp"
#include "walklift/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace walklift {

/// True iff relative_distance(a, b) <= 1/2 - sqrt(eta), decided in exact
/// rational arithmetic: d <= 1/2 and (1/2 - d)^2 >= eta.
bool within_list_radius(const word& a, const word& b, const rational& eta);

/// A family of consistent joint distributions over small variable subsets,
/// closed under conditioning.  Queries take a tuple of variable indices
/// (repeats allowed) and return the sparse joint distribution over packed
/// assignments (bit i of the key = value of the i-th queried position);
/// assignments conflicting on repeated variables carry probability zero.
class local_ensemble {
 public:
  virtual ~local_ensemble() = default;

  virtual std::size_t num_variables() const = 0;
  /// Largest supported query size; SIZE_MAX for exhaustive ensembles.
  virtual std::size_t locality() const = 0;
  virtual std::vector<std::pair<std::uint64_t, double>> query(
      const std::vector<std::uint64_t>& variables) const = 0;
  /// Conditions on observed values (bit i of `values` = value of
  /// variables[i]); locality drops by the subset size.
  virtual std::unique_ptr<local_ensemble> condition(
      const std::vector<std::uint64_t>& variables, const word& values) const = 0;
  virtual std::unique_ptr<local_ensemble> clone() const = 0;
};

/// Exhaustive ensemble: an explicit weighted support of full assignments.
class support_ensemble final : public local_ensemble {
 public:
  support_ensemble(std::vector<word> support, std::vector<double> weights);

  std::size_t num_variables() const override;
  std::size_t locality() const override { return std::size_t(-1); }
  std::vector<std::pair<std::uint64_t, double>> query(
      const std::vector<std::uint64_t>& variables) const override;
  std::unique_ptr<local_ensemble> condition(
      const std::vector<std::uint64_t>& variables, const word& values) const override;
  std::unique_ptr<local_ensemble> clone() const override;

  const std::vector<word>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<word> support_;
  std::vector<double> weights_;
};

/// View of an ensemble through an index map: variable v of the view is
/// variable projection[v] of the underlying ensemble (the cloud-consistent
/// walk-position view of a vertex ensemble).  Conditioning passes through to
/// the underlying variables.
class projected_ensemble final : public local_ensemble {
 public:
  projected_ensemble(std::unique_ptr<local_ensemble> inner,
                     std::vector<std::uint64_t> projection);

  std::size_t num_variables() const override { return projection_.size(); }
  std::size_t locality() const override { return inner_->locality(); }
  std::vector<std::pair<std::uint64_t, double>> query(
      const std::vector<std::uint64_t>& variables) const override;
  std::unique_ptr<local_ensemble> condition(
      const std::vector<std::uint64_t>& variables, const word& values) const override;
  std::unique_ptr<local_ensemble> clone() const override;

 private:
  std::unique_ptr<local_ensemble> inner_;
  std::vector<std::uint64_t> projection_;
};

/// Uniform distribution over the codewords whose lift lies within the list
/// radius 1/2 - sqrt(eta) of the received word; throws empty_list when no
/// codeword qualifies.  Variables are base-code positions.
support_ensemble brute_force_ensemble(const linear_code& code,
                                      const walk_collection& w,
                                      const word& received, const rational& eta);

/// The walk-position view of a base-variable ensemble, via the collection's
/// ground-set projection.
projected_ensemble cloud_view(const local_ensemble& base_vars,
                              const std::vector<std::uint64_t>& projection);

struct rounding_result {
  word assignment;                              // one bit per base variable
  std::unique_ptr<local_ensemble> conditioned;  // the ensemble after step 5
  std::vector<std::uint64_t> conditioned_set;   // S, sorted
  word conditioned_values;                      // sampled sigma on S
  unsigned num_walks = 0;                       // m
};

/// Propagation rounding: draw m uniform in {1..L/k}, sample m i.i.d. walks,
/// condition on a sample of the union of their variables, then round each
/// variable independently from its conditional marginal.  Deterministic for
/// a fixed seed.
rounding_result propagation_rounding(const local_ensemble& ens,
                                     const walk_collection& w,
                                     unsigned locality_budget,
                                     std::uint64_t seed);

/// E over tuples of || joint over the tuple - product of its singleton
/// marginals ||_1, with variables read through the collection's projection.
double tensoriality_defect(const local_ensemble& ens, const walk_collection& w);

/// Same for pairs of independent tuples: || joint over both - product of the
/// two tuple-joints ||_1, averaged over ordered pairs.
double two_step_defect(const local_ensemble& ens, const walk_collection& w,
                       std::uint64_t pair_cap = default_walk_cap);

/// Smallest eigenvalue of the +-1 covariance matrix of the queried variables
/// is >= -tol.
bool conditional_covariance_psd(const local_ensemble& ens,
                                const std::vector<std::uint64_t>& variables,
                                double tol = 1e-9);

/// Per-variable argmax of the 1-marginals; ties go to 0.
word majority_vote(const local_ensemble& ens);

struct decode_entry {
  word base;    // codeword of the level below
  word lifted;  // its direct-sum lift
};
using decode_list = std::vector<decode_entry>;

struct decoder_config {
  rational eta0;
  rational eta;
  rational zeta;  // 1/8 - eta0/8
};

/// Validates eta < eta0 < 1/4 and fills zeta = 1/8 - eta0/8.
decoder_config make_decoder_config(const rational& eta0, const rational& eta);

/// List decoder for one lifting level: given the code being lifted and the
/// collection, return every codeword whose lift is within 1/2 - sqrt(eta)
/// of the received word.
class list_decoder_backend {
 public:
  virtual ~list_decoder_backend() = default;

  virtual decode_list decode(const linear_code& code, const walk_collection& w,
                             const word& received, const rational& eta) const = 0;
  /// A zeta-cover of the list (possibly smaller than the full list).
  virtual decode_list cover(const linear_code& code, const walk_collection& w,
                            const word& received, const rational& eta,
                            const rational& zeta) const = 0;
};

/// Exhaustive oracle backend: enumerates the code, returns exactly the walks
/// within the radius (message order); cover() returns the full list.
class brute_force_backend final : public list_decoder_backend {
 public:
  decode_list decode(const linear_code& code, const walk_collection& w,
                     const word& received, const rational& eta) const override;
  decode_list cover(const linear_code& code, const walk_collection& w,
                    const word& received, const rational& eta,
                    const rational& zeta) const override;
};

decode_list list_decode_level(const list_decoder_backend& backend,
                              const linear_code& code, const walk_collection& w,
                              const word& received, const rational& eta);

/// Closest list entry, first-minimal tie break; nullopt on an empty list.
/// Requires eta < min(eta0, 1/16) so the list radius exceeds 1/4.
std::optional<decode_entry> unique_decode_level(const list_decoder_backend& backend,
                                                const linear_code& code,
                                                const walk_collection& w,
                                                const word& received,
                                                const rational& eta,
                                                const rational& eta0);

/// Top-down cascade decoding: list-decode the top level, recurse on every
/// entry, re-encode the surviving base codewords, and return the one whose
/// top encoding is closest to the received word; nullopt when every branch
/// dies out.
std::optional<word> cascade_unique_decode(const cascade& c,
                                          const list_decoder_backend& backend,
                                          const word& received,
                                          const decoder_config& config);

/// Greedy maximal independent set (by list index) of the graph joining
/// entries whose base words differ with bias strictly above 1 - 2 zeta.
decode_list zeta_cover_prune(const decode_list& entries, const rational& zeta,
                             const rational& eta);

struct fixed_poly_stats {
  std::uint64_t nodes = 0;  // recursion tree size
};

/// Cover-and-prune cascade decoding with branching at most 2/eta per level:
/// per level take a zeta-cover, prune it, and recurse on the pruned entries
/// and their complements; candidates are snapped to the base code at the
/// bottom.
std::optional<word> fixed_poly_decode(const cascade& c,
                                      const list_decoder_backend& backend,
                                      const word& received,
                                      const decoder_config& config,
                                      fixed_poly_stats* stats = nullptr);

/// Multilinear polynomial in n {+-1}-valued variables: coefficient per
/// monomial, indexed by the monomial's variable-set mask.
struct multilinear_poly {
  unsigned n = 0;
  std::vector<rational> coefficients;  // size 2^n

  static multilinear_poly zero(unsigned n);
  /// Largest monomial degree with a nonzero coefficient.
  unsigned degree() const;
};

/// E[poly] under the product distribution with the given coordinate means,
/// exact: sum over monomials of coefficient * prod of means.  Refuses
/// monomials above the degree cap.
rational product_expectation(const multilinear_poly& poly,
                             const std::vector<rational>& means,
                             unsigned degree_cap = 24);

/// Pointwise product reduced by z_i^2 = 1 (XOR-convolution of coefficients).
multilinear_poly multilinear_product(const multilinear_poly& a,
                                     const multilinear_poly& b);

/// Derandomized rounding: fixes coordinates one at a time, each time
/// choosing the sign maximizing the conditional expectation of
/// objective = a_poly * b_poly^{2k} with k = ceil(ln(1/(a(1-beta)))/(2 delta)) + 1.
/// Output word encodes omega_i = -1 as bit 1.  The conditional expectation
/// trajectory (initial value plus one entry per coordinate) is appended to
/// *trajectory when given; premise_violated if any value drops below
/// a(1-beta).
word derandomized_round(const multilinear_poly& a_poly,
                        const multilinear_poly& b_poly,
                        const std::vector<rational>& means, const rational& a,
                        const rational& beta, const rational& delta,
                        std::vector<rational>* trajectory = nullptr);

}  // namespace walklift
