#pragma once

// Direct-sum lifting over tuple collections, parity-sampling measurement,
// split/swap operators with their tensor decomposition, splitting trees and
// splittability certificates, and the code cascade built on top of the wide
// replacement product.

#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/graphs.hpp"
#include "walklift/rational.hpp"
#include "walklift/rpp.hpp"
#include "walklift/spectra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace walklift {

/// A multiset of k-tuples over a ground set, with a projection sending
/// ground-set elements to base-word positions (for product walks the ground
/// set is product vertices and the projection keeps the outer component;
/// lifted bits never depend on the cloud component).
struct walk_collection {
  enum class provenance : unsigned char {
    explicit_list,
    product_walks,
    swap_walks,
    graph_walks,
    cascade_level,
  };

  std::size_t ground_size = 0;
  std::size_t base_size = 0;
  unsigned arity = 0;
  std::vector<std::uint64_t> tuples;      // row-major, count() * arity entries
  std::vector<std::uint64_t> projection;  // ground_size entries into [0, base_size)
  provenance origin = provenance::explicit_list;

  std::uint64_t count() const { return arity == 0 ? 0 : tuples.size() / arity; }
  std::uint64_t entry(std::uint64_t tuple_index, unsigned position) const {
    return tuples[tuple_index * arity + position];
  }
  std::uint64_t base_position(std::uint64_t tuple_index, unsigned position) const {
    return projection[entry(tuple_index, position)];
  }

  /// Checks nonemptiness, entry bounds, and projection bounds.
  void validate() const;
};

/// Identity-projection collection over an explicit tuple list.
walk_collection explicit_collection(std::size_t ground_size, unsigned arity,
                                    std::vector<std::uint64_t> tuples);

/// Bit per tuple = XOR of z over the tuple's base positions; linear in z.
word direct_sum_lift(const word& z, const walk_collection& w);

/// All t-vertex walks on a rotation graph, ground set = vertices, identity
/// projection; count n * d^{t-1}.
walk_collection expander_walk_collection(const rotation_graph& g, unsigned t,
                                         std::uint64_t walk_cap = default_walk_cap);

/// Materializes W[k1, k2] on the product; projection = outer component.
walk_collection product_walk_collection(const wide_replacement_product& p,
                                        unsigned k1, unsigned k2,
                                        std::uint64_t walk_cap = default_walk_cap);

/// max over words z with bias(z) <= eps0 of bias(direct_sum_lift(z, w)) —
/// exhaustive over all 2^base_size words (base_size <= 20), computed from a
/// Walsh-Hadamard transform of the tuple parity-mask counts; exact.
rational parity_sampling_measure(const walk_collection& w, const rational& eps0);

/// Same maximum restricted to a supplied word list.
rational parity_sampling_measure(const walk_collection& w, const rational& eps0,
                                 const std::vector<word>& words);

/// (eps0 + 2 gamma)^{floor((t-1)/2)}: the walk parity-sampling bound, with
/// gamma = sigma2 of the relevant walk operator.
double walk_bias_bound(double eps0, double gamma, unsigned t);

/// The split operator S[k1, k2, k3]: rows indexed by W[k1, k2], columns by
/// W[k2+1, k3]; entry = (binding digit pairs joining row end to column start)
/// / d2^{2(k3-k2)}.  Row sums are exactly 1.  Keeps references to the product.
class split_operator {
 public:
  split_operator(const wide_replacement_product& p, unsigned k1, unsigned k2,
                 unsigned k3, std::size_t dim_cap = default_dim_cap,
                 std::uint64_t walk_cap = default_walk_cap);

  const wide_replacement_product& product() const { return *product_; }
  unsigned k1() const { return k1_; }
  unsigned k2() const { return k2_; }
  unsigned k3() const { return k3_; }
  const walk_space& rows() const { return rows_; }
  const walk_space& cols() const { return cols_; }

  /// d2^{2(k3-k2)}
  std::uint64_t denominator() const { return denominator_; }
  /// Binding multiplicity: digit pairs delta with step(row end, delta) =
  /// column start; the exact entry is numerator/denominator.
  std::uint32_t numerator(std::uint64_t row, std::uint64_t col) const;
  std::uint64_t row_end(std::uint64_t row) const { return row_end_[row]; }

  const matrix& dense() const { return dense_; }

 private:
  const wide_replacement_product* product_;
  unsigned k1_, k2_, k3_;
  walk_space rows_, cols_;
  std::uint64_t denominator_;
  std::vector<std::uint64_t> row_end_;
  matrix dense_;
};

/// S[0, r, 2r+1]; requires r = -1 mod width so the binding step reuses
/// operator index width-1 and rows/columns range over equal-size walk sets.
split_operator swap_operator(const wide_replacement_product& p, unsigned r,
                             std::size_t dim_cap = default_dim_cap,
                             std::uint64_t walk_cap = default_walk_cap);

struct tensor_structure_report {
  bool class_sizes_uniform = false;  // equally many row walks end at each vertex
  bool entries_match = false;        // exact integer multiplicity comparison
  double sigma2_split = 0;           // whitened split operator
  double sigma2_step = 0;            // step operator at index k2 mod width
  bool pass = false;                 // both structural checks hold
};

/// Checks that sorting rows by final vertex and columns by initial vertex
/// turns the split operator into step_operator(k2 mod s) (x) J/d2^{2(k3-k2-1)}
/// — entrywise in exact arithmetic, against an independent enumeration of the
/// joint walk space W[k1, k3] — and reports both sigma2 values.
tensor_structure_report verify_tensor_structure(const split_operator& s,
                                                std::uint64_t walk_cap = default_walk_cap);

/// T-hat[i][j] = sqrt(row_measure[i]) * t[i][j] / sqrt(col_measure[j]):
/// rescales a (conditional-probability) operator between two finite
/// probability spaces so plain singular values equal the measured ones.
matrix measured_whitening(const matrix& t, const std::vector<double>& row_measure,
                          const std::vector<double>& col_measure);

/// Adjoint with respect to the two measures:
/// adj[j][i] = row_measure[i] * t[i][j] / col_measure[j].
matrix adjoint_operator(const matrix& t, const std::vector<double>& row_measure,
                        const std::vector<double>& col_measure);

/// U(S) = [[0, S], [adj, 0]] on the disjoint union of the two spaces.
matrix symmetrized_operator(const matrix& t, const matrix& adj);

/// Second singular value after measured whitening.
double measured_sigma2(const matrix& t, const std::vector<double>& row_measure,
                       const std::vector<double>& col_measure,
                       std::size_t cap = default_dim_cap);

/// Conditional-probability split of a generic collection restricted to
/// positions [k1, k3], split after position k2: rows = distinct restrictions
/// to [k1, k2], columns = distinct restrictions to [k2+1, k3], entry =
/// Pr[suffix | prefix] over the tuple multiset.
struct collection_split {
  matrix op;
  std::vector<double> row_measure, col_measure;  // marginals, sum to 1
  std::vector<std::vector<std::uint64_t>> row_labels, col_labels;
};

collection_split split_collection(const walk_collection& w, unsigned k1,
                                  unsigned k2, unsigned k3,
                                  std::size_t dim_cap = default_dim_cap);

struct split_node {
  unsigned k1 = 0, k2 = 0, k3 = 0;  // splits [k1, k3] after k2
};

/// Binary interval-splitting tree on k leaf positions; internal nodes stored
/// in preorder, root covering [0, k-1].
struct splitting_tree {
  unsigned leaves = 0;
  std::vector<split_node> internal;
};

/// Splits at floor((k1+k3)/2), rounded down to the nearest index equal to
/// residue_modulus - 1 mod residue_modulus when a positive modulus is given
/// (and the rounded value stays inside the interval).
splitting_tree balanced_splitting_tree(unsigned k, unsigned residue_modulus = 0);

/// Right child of every internal node is a leaf.
splitting_tree left_linear_splitting_tree(unsigned k);

/// Validates an explicit node list: every internal node splits its interval,
/// children intervals are present exactly when they are not single positions,
/// and the root covers [0, k-1].
splitting_tree make_splitting_tree(unsigned k, std::vector<split_node> internal);

struct node_certificate {
  split_node node;
  double sigma2 = 0;
};

struct splittability_certificate_t {
  double tau = 0;  // max over internal nodes (0 for arity-1 collections)
  std::vector<node_certificate> nodes;
};

/// Measured sigma2 of the conditional split at every internal node of the
/// tree, over the collection's own tuple distribution.
splittability_certificate_t splittability_certificate(
    const walk_collection& w, const splitting_tree& tree,
    std::size_t dim_cap = default_dim_cap);

/// One cascade level: tuples over the previous level's ground set (walk
/// ranks), covering vertices_per_tuple consecutive product-walk vertices.
struct cascade_level {
  walk_collection collection;
  unsigned vertices_per_tuple = 0;
};

/// The code cascade: level 1 lifts the base code over W[0, s-1]; levels
/// 2..depth-1 lift the previous level over s-block walks; the top level uses
/// top_arity blocks, so the top code equals the direct lift of the base code
/// over all (top_arity * s^{depth-1})-vertex product walks.
class cascade {
 public:
  cascade(linear_code base, wide_replacement_product product, unsigned depth,
          unsigned top_arity, std::uint64_t walk_cap = default_walk_cap);

  const linear_code& base() const { return base_; }
  const wide_replacement_product& product() const { return product_; }
  unsigned width() const { return product_.width(); }
  unsigned depth() const { return depth_; }
  unsigned top_arity() const { return top_arity_; }
  unsigned total_vertices() const { return total_vertices_; }  // t'
  const std::vector<cascade_level>& levels() const { return levels_; }

  /// Length of level j codewords (j = 0 gives the base block length).
  std::uint64_t level_length(unsigned j) const;
  /// Lifts a level j-1 word one level up.
  word encode_level(unsigned j, const word& lower) const;
  /// Composes all levels: the top codeword of base word z.
  word encode_base(const word& z) const;
  /// Generator-by-generator lift of the base code up to level j.
  linear_code level_code(unsigned j) const;

 private:
  linear_code base_;
  wide_replacement_product product_;
  unsigned depth_, top_arity_, total_vertices_;
  std::vector<cascade_level> levels_;
};

cascade build_cascade(linear_code base, wide_replacement_product product,
                      unsigned depth, unsigned top_arity,
                      std::uint64_t walk_cap = default_walk_cap);

/// Streaming direct lift of z over all t-vertex product walks (the cascade
/// equivalence oracle); bit per walk rank without materializing tuples.
word direct_walk_lift(const wide_replacement_product& p, const word& z,
                      unsigned t, std::uint64_t walk_cap = default_walk_cap);

}  // namespace walklift
