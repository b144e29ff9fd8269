#include "walklift/rpp.hpp"

#include "walklift/lifting.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

using namespace walklift;

namespace {

// Outer K5 with cyclic clouds of size 4 (width 1).
wide_replacement_product k5_c4() {
  return wide_replacement_product(cayley_zn(5, {1, 4, 2, 3}),
                                  cayley_zn(4, {1, 3}), 1);
}

// Width-2 product with binary-field clouds, suitable for the walk-to-outer
// transfer identity (degree 4 outer, clouds on 16 points).
wide_replacement_product translation_product() {
  return wide_replacement_product(cayley_zn(12, {1, 11, 5, 7}),
                                  cayley_f2m(4, {1, 2, 4, 8}), 2);
}

}  // namespace

TEST_CASE("product vertex indexing round-trips") {
  wide_replacement_product p = translation_product();
  CHECK(p.width() == 2);
  CHECK(p.outer_size() == 12);
  CHECK(p.cloud_size() == 16);
  CHECK(p.num_vertices() == 192);
  CHECK(p.outer_degree() == 4);
  CHECK(p.inner_degree() == 4);

  for (std::uint32_t v : {0u, 3u, 11u})
    for (std::uint64_t h : {0ull, 7ull, 15ull}) {
      std::uint64_t pv = p.vertex_index(v, h);
      CHECK(p.outer_component(pv) == v);
      CHECK(p.cloud_component(pv) == h);
    }

  // Cloud coordinates are little-endian base-d1 digits.
  CHECK(p.cloud_coordinate(7, 0) == 3);
  CHECK(p.cloud_coordinate(7, 1) == 1);
  CHECK(p.cloud_coordinate(13, 0) == 1);
  CHECK(p.cloud_coordinate(13, 1) == 3);
}

TEST_CASE("coordinate rotations are involutions that cross one edge") {
  wide_replacement_product p = k5_c4();
  // On the complete outer graph with generators (1,4,2,3), crossing from
  // vertex 0 along the first label lands on vertex 1 with return label 1.
  CHECK(p.rot_i(0, 0, 0) ==
        std::pair<std::uint32_t, std::uint64_t>{1, 1});

  wide_replacement_product q = translation_product();
  for (const wide_replacement_product* prod : {&p, &q})
    for (unsigned i = 0; i < prod->width(); ++i)
      for (std::uint64_t pv = 0; pv < prod->num_vertices(); ++pv) {
        std::uint64_t back = prod->g_permutation(i, prod->g_permutation(i, pv));
        CHECK(back == pv);
      }

  CHECK_THROWS_AS((void)p.rot_i(1, 0, 0), error);  // width is 1
}

TEST_CASE("step operators are doubly stochastic with bounded spectrum") {
  wide_replacement_product p = translation_product();
  std::uint64_t d2sq = p.inner_degree() * p.inner_degree();
  for (unsigned i = 0; i < p.width(); ++i) {
    matrix m = p.step_operator(i);
    CHECK(is_row_stochastic(m));
    CHECK(is_row_stochastic(m.transpose()));
    CHECK(operator_norm(m) == doctest::Approx(1.0).epsilon(1e-9));

    // Dense entries are exactly the digit-pair multiplicities over d2^2.
    std::uint64_t n = p.num_vertices();
    for (std::uint64_t from = 0; from < n; from += 37)
      for (std::uint64_t to = 0; to < n; ++to)
        CHECK(m(to, from) ==
              doctest::Approx(double(p.step_multiplicity(i, from, to)) / d2sq)
                  .epsilon(1e-12));

    // Each start point has exactly d2^2 outgoing digit pairs.
    for (std::uint64_t from = 0; from < n; from += 23) {
      std::uint64_t total = 0;
      for (std::uint64_t to = 0; to < n; ++to)
        total += p.step_multiplicity(i, from, to);
      CHECK(total == d2sq);
    }
  }

  zigzag_report report = zigzag_spectral_checks(p);
  CHECK(report.step_sigma.size() == p.width());
  CHECK(report.coarse_bound ==
        doctest::Approx(report.sigma_g + 2 * report.sigma_h +
                        report.sigma_h * report.sigma_h)
            .epsilon(1e-12));
  CHECK(report.refined_applicable == (report.sigma_g <= report.sigma_h));
  for (double s : report.step_sigma) CHECK(s <= report.coarse_bound + 1e-9);
}

TEST_CASE("uniform clouds reduce the step to the outer walk") {
  // Inner graph = complete with a self-loop on Z_3, so its walk operator is
  // the rank-one averaging J/3 and the step spectrum collapses to the outer
  // spectrum.
  wide_replacement_product p(cayley_zn(4, {1, 3, 2}), cayley_zn(3, {0, 1, 2}),
                             1);
  double outer_sigma = p.outer().sigma2();
  double step_sigma = second_singular_value(p.step_operator(0));
  CHECK(step_sigma <= outer_sigma + 1e-9);
  CHECK(step_sigma == doctest::Approx(outer_sigma).epsilon(1e-7));
}

TEST_CASE("walk spaces enumerate exactly the closed-form count") {
  wide_replacement_product p = k5_c4();
  walk_space w = enumerate_walks(p, 0, 2);
  CHECK(w.count() == 320);  // 5 * 4 * 2^4
  CHECK(w.arity() == 3);
  CHECK(w.digit_base() == 4);

  walk_space single = enumerate_walks(p, 1, 1);
  CHECK(single.count() == 20);
  CHECK(single.arity() == 1);

  CHECK_THROWS_AS((void)enumerate_walks(p, 0, 2, 100), error);

  // Ranks round-trip through (start vertex, digit string), and consecutive
  // vertices are joined by a positive-multiplicity step.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint64_t rank = rng() % w.count();
    std::vector<std::uint32_t> digits;
    for (unsigned tau = w.k1(); tau < w.k2(); ++tau)
      digits.push_back(std::uint32_t(w.digit(rank, tau)));
    CHECK(w.rank_of(w.start_vertex(rank), digits) == rank);

    std::vector<std::uint64_t> path = w.vertices(rank);
    REQUIRE(path.size() == w.arity());
    CHECK(path.front() == w.start_vertex(rank));
    CHECK(path.back() == w.end_vertex(rank));
    for (unsigned tau = 0; tau + 1 < path.size(); ++tau)
      CHECK(p.step_multiplicity(tau % p.width(), path[tau], path[tau + 1]) >=
            1);
  }
}

TEST_CASE("operator bias formula matches hand-derived values") {
  wide_replacement_product p = k5_c4();
  for (unsigned t : {1u, 2u, 3u, 5u})
    CHECK(exact_lift_bias(p, word(5), t) == doctest::Approx(1.0).epsilon(1e-12));

  // Balanced word on a bipartite 4-cycle with uniform clouds: the signed
  // walk sums cancel exactly from two vertices on.
  wide_replacement_product q(cayley_zn(4, {1, 3}), cayley_zn(2, {0, 1}), 1);
  word z = word::from_string("0011");
  for (unsigned t : {2u, 3u, 4u}) {
    CHECK(exact_lift_bias(q, z, t) == doctest::Approx(0.0).epsilon(1e-12));
    walk_collection walks = product_walk_collection(q, 0, t - 1);
    CHECK(bias(direct_sum_lift(z, walks)) == rational(0));
  }
}

TEST_CASE("closed-form block bounds evaluate as specified") {
  CHECK(bias_upper_bound(0.0, 5, 6) == doctest::Approx(0.0));
  CHECK(bias_upper_bound(0.0, 5, 11) == doctest::Approx(0.0));
  // Walks shorter than one full block give the empty product.
  CHECK(bias_upper_bound(0.0, 5, 3) == doctest::Approx(1.0));
  CHECK(bias_upper_bound(1.0, 5, 6) == doctest::Approx(21.0));
  CHECK(bias_upper_bound(1.0, 5, 11) == doctest::Approx(441.0));
  CHECK(bias_upper_bound(0.1, 5, 6) == doctest::Approx(1.6041).epsilon(1e-9));

  CHECK(untweaked_block_bound(0.5, 3) == doctest::Approx(9.875).epsilon(1e-12));

  CHECK_THROWS_AS((void)bias_upper_bound(0.1, 4, 6), error);
  CHECK_THROWS_AS((void)untweaked_block_bound(0.5, 2), error);
}

TEST_CASE("walk-to-outer transfer identity on translation clouds") {
  wide_replacement_product p = translation_product();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&](std::size_t n) {
    vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };

  vec v = random_vec(12), w = random_vec(12);
  CHECK(pseudorandomness_identity_check(p, word(12), 0, 0, v, w));
  for (int trial = 0; trial < 5; ++trial) {
    word z = word::from_index(rng() & 0xfff, 12);
    CHECK(pseudorandomness_identity_check(p, z, 0, 1, random_vec(12),
                                          random_vec(12)));
  }

  // Cyclic clouds are not translation schemes over binary tuples.
  wide_replacement_product cyc(cayley_zn(12, {1, 11}), cayley_zn(4, {1, 3}), 2);
  CHECK_THROWS_AS(
      (void)pseudorandomness_identity_check(cyc, word(12), 0, 0, v, w), error);
  // The operator interval must stay inside one width block.
  CHECK_THROWS_AS((void)pseudorandomness_identity_check(p, word(12), 0, 2, v, w),
                  error);
}

TEST_CASE("sign-interleaved block norm report is internally consistent") {
  // Strong outer expander (K5), bipartite-spectrum clouds: the premise of
  // the block bound holds and the norm stays within it.
  wide_replacement_product p(cayley_zn(5, {1, 4, 2, 3}),
                             cayley_f2m(6, {1, 2, 4, 8, 16, 32}), 3);
  word z = word::from_string("00011");
  sign_product_report rep = sign_product_norm_check(p, z);
  double sigma_g = p.outer().sigma2();
  double sigma_h = p.inner().sigma2();
  CHECK(rep.premise_lhs ==
        doctest::Approx(to_double(bias(z)) + 2 * sigma_g).epsilon(1e-9));
  CHECK(rep.premise_rhs == doctest::Approx(sigma_h * sigma_h).epsilon(1e-9));
  CHECK(rep.premise_holds);
  CHECK(rep.bound == doctest::Approx(untweaked_block_bound(sigma_h, 3)));
  CHECK(rep.norm <= 1.0 + 1e-9);
  CHECK(rep.pass);
}
