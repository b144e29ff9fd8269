#pragma once

// Regular graphs presented by rotation maps, Cayley-graph constructors over
// Z_n and F_2^m, the small-bias generator-set construction with exhaustive
// certification, and local-invertibility recovery.

#include "walklift/errors.hpp"
#include "walklift/rational.hpp"
#include "walklift/spectra.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace walklift {

/// d-regular (multi)graph given by its rotation map: an involution on
/// (vertex, edge-label) pairs.  rot(v, j) = (the j-th neighbor of v, the
/// label under which v appears from there).
class rotation_graph {
 public:
  /// rot(v, j) = (rot_vertex[v*d + j], rot_label[v*d + j]); must be an
  /// involution.  `phi` is the local-inversion map when the rotation is
  /// locally invertible (label output independent of the vertex).
  rotation_graph(std::size_t n_vertices, std::size_t degree,
                 std::vector<std::uint32_t> rot_vertex,
                 std::vector<std::uint32_t> rot_label,
                 std::optional<std::vector<std::uint32_t>> phi = std::nullopt);

  std::size_t num_vertices() const { return n_; }
  std::size_t degree() const { return d_; }

  std::pair<std::uint32_t, std::uint32_t> rot(std::size_t v, std::size_t j) const {
    return {rot_vertex_[v * d_ + j], rot_label_[v * d_ + j]};
  }
  std::uint32_t neighbor(std::size_t v, std::size_t j) const {
    return rot_vertex_[v * d_ + j];
  }

  const std::optional<std::vector<std::uint32_t>>& phi() const { return phi_; }

  /// Symmetric row-stochastic walk matrix; entry (u, v) = multiplicity(u,v)/d.
  matrix normalized_adjacency(std::size_t cap = default_dim_cap) const;
  /// Second singular value of the normalized adjacency.
  double sigma2(std::size_t cap = default_dim_cap) const;

 private:
  std::size_t n_, d_;
  std::vector<std::uint32_t> rot_vertex_, rot_label_;
  std::optional<std::vector<std::uint32_t>> phi_;
};

/// Cayley graph on Z_n with an ordered generator multiset (must be closed
/// under negation mod n); rot((v, j)) = (v + g_j, phi(j)) with g_{phi(j)}
/// = -g_j, phi built by first-fit pairing of inverse generators.
rotation_graph cayley_zn(std::size_t n, const std::vector<std::uint32_t>& gens);

/// Cayley graph on F_2^m with bit-packed generators (every element is its own
/// inverse, so phi is the identity); rot((v, j)) = (v xor g_j, j).
rotation_graph cayley_f2m(unsigned m, const std::vector<std::uint32_t>& gens);

/// Generator multiset in F_2^m whose Cayley graph is a beta-expander.
struct biased_set {
  unsigned m = 0;
  std::vector<std::uint32_t> generators;  // bit-packed, multiset
  rational certified_bias;                // exact max character average
};

/// Exact max over nonempty S of |E_{a in A} (-1)^{<S,a>}|, via an integer
/// Walsh-Hadamard transform of the generator counts; m <= 16.
rational verify_small_bias(unsigned m, const std::vector<std::uint32_t>& gens);

/// Small-bias set of size (m/beta)^2 via the polynomial-evaluation (powering)
/// scheme over GF(m/beta); requires m/beta a power of two.  The returned set
/// is certified exhaustively; a construction exceeding beta throws.
biased_set aghp_generators(unsigned m, const rational& beta);

/// Recovers phi when rot's label output depends only on the label; nullopt
/// otherwise.
std::optional<std::vector<std::uint32_t>> local_invertibility_check(
    const rotation_graph& g);

}  // namespace walklift
