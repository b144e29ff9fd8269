#pragma once

// The tweaked s-wide replacement product: coordinate rotations Rot_i, step
// operators (I (x) A_H) G_i (I (x) A_H), lazy walk spaces keyed by
// (start vertex, step digits), sign-operator bias formulas, and the spectral
// identities tying the product to plain outer-graph walks.

#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/graphs.hpp"
#include "walklift/spectra.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace walklift {

inline constexpr std::uint64_t default_walk_cap = 1000000;

class wide_replacement_product {
 public:
  /// G: outer graph, degree d1, locally invertible.  H: inner graph on
  /// exactly d1^s vertices (vertex h encodes the coordinate tuple
  /// (a_0, ..., a_{s-1}) in little-endian base d1), degree d2.
  wide_replacement_product(rotation_graph outer, rotation_graph inner, unsigned s);

  unsigned width() const { return s_; }
  const rotation_graph& outer() const { return outer_; }
  const rotation_graph& inner() const { return inner_; }
  std::size_t outer_size() const { return outer_.num_vertices(); }
  std::size_t cloud_size() const { return inner_.num_vertices(); }
  std::size_t num_vertices() const { return outer_size() * cloud_size(); }
  std::size_t outer_degree() const { return outer_.degree(); }
  std::size_t inner_degree() const { return inner_.degree(); }

  std::uint64_t vertex_index(std::uint32_t v, std::uint64_t h) const {
    return std::uint64_t(v) * cloud_size() + h;
  }
  std::uint32_t outer_component(std::uint64_t pv) const {
    return std::uint32_t(pv / cloud_size());
  }
  std::uint64_t cloud_component(std::uint64_t pv) const {
    return pv % cloud_size();
  }
  std::uint32_t cloud_coordinate(std::uint64_t h, unsigned i) const;

  /// Rot_i: crosses to the neighbor selected by cloud coordinate i and
  /// replaces that coordinate by the return label; an involution.
  std::pair<std::uint32_t, std::uint64_t> rot_i(unsigned i, std::uint32_t v,
                                                std::uint64_t h) const;
  /// rot_i on packed product-vertex indices.
  std::uint64_t g_permutation(unsigned i, std::uint64_t pv) const;

  /// One tweaked step with operator index i and digit (alpha, beta):
  /// H-edge alpha, then the G_i crossing, then H-edge beta.
  std::uint64_t walk_step(unsigned i, std::uint64_t pv, std::uint32_t alpha,
                          std::uint32_t beta) const;

  /// Number of digit pairs (alpha, beta) stepping `from` to `to` under
  /// operator index i (entries of d2^2 * step_operator(i), exact).
  std::uint32_t step_multiplicity(unsigned i, std::uint64_t from,
                                  std::uint64_t to) const;

  // Dense linear algebra on R^{V(G) x V(H)} (column = function value).
  vec apply_cloud(const vec& x) const;                    // I (x) A_H
  vec apply_g_permutation(unsigned i, const vec& x) const;
  vec apply_step(unsigned i, const vec& x) const;         // the tweaked step
  matrix step_operator(unsigned i, std::size_t cap = default_dim_cap) const;

 private:
  rotation_graph outer_, inner_;
  unsigned s_;
  std::size_t d1_;
  std::vector<std::uint64_t> coordinate_stride_;  // d1^i for i in [0, s]
};

/// The walk set W[k1, k2]: all (k2 - k1 + 1)-vertex tweaked walks whose step
/// at time tau uses operator index tau mod s.  Walks are keyed by
/// (start vertex, digit string) and ranked lexicographically, start vertex
/// most significant, digits big-endian; nothing is materialized.
class walk_space {
 public:
  walk_space(const wide_replacement_product& product, unsigned k1, unsigned k2,
             std::uint64_t walk_cap = default_walk_cap);

  const wide_replacement_product& product() const { return *product_; }
  unsigned k1() const { return k1_; }
  unsigned k2() const { return k2_; }
  unsigned num_steps() const { return k2_ - k1_; }
  unsigned arity() const { return num_steps() + 1; }
  std::uint64_t count() const { return count_; }
  std::uint64_t digit_base() const { return digit_base_; }  // d2^2

  std::uint64_t start_vertex(std::uint64_t rank) const;
  std::uint64_t digit(std::uint64_t rank, unsigned tau) const;  // tau in [k1, k2)
  /// All product vertices visited, in time order.
  std::vector<std::uint64_t> vertices(std::uint64_t rank) const;
  std::uint64_t end_vertex(std::uint64_t rank) const;

  /// Rank of the walk with the given start vertex and digit string.
  std::uint64_t rank_of(std::uint64_t start, const std::vector<std::uint32_t>& digits) const;

 private:
  const wide_replacement_product* product_;
  unsigned k1_, k2_;
  std::uint64_t digit_base_, count_;
  std::vector<std::uint64_t> digit_stride_;
};

walk_space enumerate_walks(const wide_replacement_product& product, unsigned k1,
                           unsigned k2, std::uint64_t walk_cap = default_walk_cap);

/// |<1, P_z prod_{i=0}^{t-2} (I (x) A_H) G_{i mod s} (I (x) A_H) P_z 1>| with
/// the sign operator interleaved at every visited vertex and inner products
/// under the uniform measure; equals the bias of the t-vertex walk lift of z.
double exact_lift_bias(const wide_replacement_product& product, const word& z,
                       unsigned t, std::size_t cap = default_dim_cap);

/// Closed-form tweaked-walk bias bound
/// (x^{s-1} + (s-1) x^{s-2} + (s-1)^2 x^{s-4})^{floor((t-1)/s)} where x is
/// the second singular value of the squared inner graph; s >= 5.
double bias_upper_bound(double sigma2_h_squared, unsigned s, unsigned t);

/// Companion per-block factor for plain (untweaked) walk blocks:
/// x^s + s x^{s-1} + s^2 x^{s-3} with x = sigma2(H); s >= 3.
double untweaked_block_bound(double sigma2_h, unsigned s);

/// Checks the walk-to-outer-graph transfer identity
///   <v (x) 1, prod_{i=k1}^{k2} G_i (I (x) A_H) P_z (w (x) 1)>
///     = <v, (A_G M_z)^{k2-k1+1} w>
/// on one input tuple; requires the inner graph to be a Cayley translation
/// scheme on F_2^{s log2 d1} (d1 a power of two) and 0 <= k1 <= k2 < s.
bool pseudorandomness_identity_check(const wide_replacement_product& product,
                                     const word& z, unsigned k1, unsigned k2,
                                     const vec& v, const vec& w,
                                     double tol = 1e-10);

struct zigzag_report {
  double sigma_g = 0, sigma_h = 0;
  std::vector<double> step_sigma;   // per operator index
  double coarse_bound = 0;          // sigma_g + 2 sigma_h + sigma_h^2
  bool refined_applicable = false;  // sigma_g <= sigma_h
  double refined_bound = 0;         // 2 sigma_h
};

/// Measures every step operator's sigma2 against the zig-zag bounds; throws
/// bound_violated if any measured value exceeds a bound by more than 1e-9.
zigzag_report zigzag_spectral_checks(const wide_replacement_product& product,
                                     std::size_t cap = default_dim_cap);

struct sign_product_report {
  double premise_lhs = 0;  // bias(z) + 2 theta + 2 sigma2(G)
  double premise_rhs = 0;  // sigma2(H)^2
  bool premise_holds = false;
  double norm = 0;         // ||prod_{i=0}^{s-1} P_z G_i (I (x) A_H)||
  double bound = 0;        // untweaked_block_bound(sigma2(H), s)
  bool pass = false;       // premise_holds implies norm <= bound + 1e-9
};

/// Operator-norm check for one block of the untweaked sign-interleaved walk
/// product; s >= 3.
sign_product_report sign_product_norm_check(const wide_replacement_product& product,
                                            const word& z, double theta = 0.0,
                                            std::size_t cap = default_dim_cap);

}  // namespace walklift
