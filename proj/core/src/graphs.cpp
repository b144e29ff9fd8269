#include "walklift/graphs.hpp"

#include "walklift/gf2e.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace walklift {

rotation_graph::rotation_graph(std::size_t n_vertices, std::size_t degree,
                               std::vector<std::uint32_t> rot_vertex,
                               std::vector<std::uint32_t> rot_label,
                               std::optional<std::vector<std::uint32_t>> phi)
    : n_(n_vertices),
      d_(degree),
      rot_vertex_(std::move(rot_vertex)),
      rot_label_(std::move(rot_label)),
      phi_(std::move(phi)) {
  require(n_ > 0 && d_ > 0, errc::precondition_violated,
          "graph needs at least one vertex and positive degree");
  require(rot_vertex_.size() == n_ * d_ && rot_label_.size() == n_ * d_,
          errc::length_mismatch, "rotation tables must have n*d entries");
  for (std::size_t v = 0; v < n_; ++v)
    for (std::size_t j = 0; j < d_; ++j) {
      auto [u, jj] = rot(v, j);
      require(u < n_ && jj < d_, errc::index_out_of_range,
              "rotation image out of range");
      auto [w, jjj] = rot(u, jj);
      require(w == v && jjj == j, errc::precondition_violated,
              "rotation map is not an involution");
    }
  if (phi_) {
    require(phi_->size() == d_, errc::length_mismatch,
            "phi must have one entry per edge label");
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t j = 0; j < d_; ++j)
        require(rot(v, j).second == (*phi_)[j], errc::precondition_violated,
                "phi does not match the rotation map");
  }
}

matrix rotation_graph::normalized_adjacency(std::size_t cap) const {
  require(n_ <= cap, errc::too_large,
          "graph has " + std::to_string(n_) + " vertices, cap " + std::to_string(cap));
  matrix a = matrix::Zero(n_, n_);
  double step = 1.0 / double(d_);
  for (std::size_t v = 0; v < n_; ++v)
    for (std::size_t j = 0; j < d_; ++j) a(neighbor(v, j), v) += step;
  return a;
}

double rotation_graph::sigma2(std::size_t cap) const {
  return second_singular_value(normalized_adjacency(cap), cap);
}

rotation_graph cayley_zn(std::size_t n, const std::vector<std::uint32_t>& gens) {
  require(n > 0, errc::precondition_violated, "empty group");
  const std::size_t d = gens.size();
  require(d > 0, errc::precondition_violated, "empty generator multiset");
  for (auto g : gens)
    require(g < n, errc::index_out_of_range, "generator outside Z_n");

  // First-fit pairing of each generator with an inverse occurrence.
  std::vector<std::uint32_t> phi(d, std::uint32_t(d));
  for (std::size_t j = 0; j < d; ++j) {
    if (phi[j] != d) continue;
    std::uint32_t inverse = std::uint32_t((n - gens[j]) % n);
    std::size_t partner = d;
    for (std::size_t k = j; k < d; ++k)
      if (phi[k] == d && gens[k] == inverse) {
        partner = k;
        break;
      }
    require(partner != d, errc::not_closed_under_inverse,
            "generator multiset is not closed under negation mod n");
    phi[j] = std::uint32_t(partner);
    phi[partner] = std::uint32_t(j);
  }

  std::vector<std::uint32_t> rv(n * d), rl(n * d);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < d; ++j) {
      rv[v * d + j] = std::uint32_t((v + gens[j]) % n);
      rl[v * d + j] = phi[j];
    }
  return rotation_graph(n, d, std::move(rv), std::move(rl), std::move(phi));
}

rotation_graph cayley_f2m(unsigned m, const std::vector<std::uint32_t>& gens) {
  require(m >= 1 && m <= 26, errc::too_large, "F_2^m vertex set too large");
  const std::size_t n = std::size_t(1) << m;
  const std::size_t d = gens.size();
  require(d > 0, errc::precondition_violated, "empty generator multiset");
  require(n * d <= (std::size_t(1) << 28), errc::too_large,
          "rotation table too large");
  for (auto g : gens)
    require(g < n, errc::index_out_of_range, "generator outside F_2^m");

  std::vector<std::uint32_t> rv(n * d), rl(n * d);
  std::vector<std::uint32_t> phi(d);
  for (std::size_t j = 0; j < d; ++j) phi[j] = std::uint32_t(j);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < d; ++j) {
      rv[v * d + j] = std::uint32_t(v) ^ gens[j];
      rl[v * d + j] = std::uint32_t(j);
    }
  return rotation_graph(n, d, std::move(rv), std::move(rl), std::move(phi));
}

rational verify_small_bias(unsigned m, const std::vector<std::uint32_t>& gens) {
  require(m >= 1 && m <= 16, errc::too_large,
          "exhaustive character check limited to m <= 16");
  require(!gens.empty(), errc::precondition_violated, "empty generator multiset");
  const std::size_t size = std::size_t(1) << m;
  std::vector<std::int64_t> counts(size, 0);
  for (auto g : gens) {
    require(g < size, errc::index_out_of_range, "generator outside F_2^m");
    ++counts[g];
  }
  // In-place integer Walsh-Hadamard transform: counts[S] becomes the
  // character sum over the multiset.
  for (std::size_t half = 1; half < size; half <<= 1)
    for (std::size_t block = 0; block < size; block += half << 1)
      for (std::size_t i = block; i < block + half; ++i) {
        std::int64_t a = counts[i], b = counts[i + half];
        counts[i] = a + b;
        counts[i + half] = a - b;
      }
  std::int64_t worst = 0;
  for (std::size_t s = 1; s < size; ++s)
    worst = std::max(worst, std::int64_t(std::abs(counts[s])));
  return rational(bigint(worst), bigint(gens.size()));
}

biased_set aghp_generators(unsigned m, const rational& beta) {
  require(m >= 1 && m <= 16, errc::too_large,
          "exhaustive certification limited to m <= 16");
  require(beta > 0, errc::precondition_violated, "beta must be positive");
  rational q_exact = rational(m) / beta;
  require(boost::multiprecision::denominator(q_exact) == 1,
          errc::not_power_of_two, "m/beta is not an integer");
  bigint q_big = boost::multiprecision::numerator(q_exact);
  require(q_big > 1 && (q_big & (q_big - 1)) == 0, errc::not_power_of_two,
          "m/beta is not a power of two");
  std::uint32_t q = q_big.convert_to<std::uint32_t>();
  unsigned l = unsigned(std::countr_zero(q));

  // Element a(x, y) has bit i = <bits(x^i), bits(y)> over GF(2).  Any
  // nontrivial character becomes a root count of a degree < m polynomial
  // over GF(q), so the bias is at most (m-1)/q < beta.
  gf2e field(l);
  std::vector<std::uint32_t> gens;
  gens.reserve(std::size_t(q) * q);
  std::vector<std::uint32_t> powers(m);
  for (std::uint32_t x = 0; x < q; ++x) {
    powers[0] = 1;
    for (unsigned i = 1; i < m; ++i) powers[i] = field.mul(powers[i - 1], x);
    for (std::uint32_t y = 0; y < q; ++y) {
      std::uint32_t element = 0;
      for (unsigned i = 0; i < m; ++i)
        element |= std::uint32_t(std::popcount(powers[i] & y) & 1) << i;
      gens.push_back(element);
    }
  }

  biased_set out;
  out.m = m;
  out.generators = std::move(gens);
  out.certified_bias = verify_small_bias(m, out.generators);
  require(out.certified_bias <= beta, errc::bias_certification_failed,
          "constructed set exceeds the requested bias");
  return out;
}

std::optional<std::vector<std::uint32_t>> local_invertibility_check(
    const rotation_graph& g) {
  std::vector<std::uint32_t> phi(g.degree());
  for (std::size_t j = 0; j < g.degree(); ++j) {
    phi[j] = g.rot(0, j).second;
    for (std::size_t v = 1; v < g.num_vertices(); ++v)
      if (g.rot(v, j).second != phi[j]) return std::nullopt;
  }
  return phi;
}

}  // namespace walklift
