#include "walklift/lifting.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

using namespace walklift;

namespace {

wide_replacement_product product8() {
  return wide_replacement_product(cayley_zn(8, {1, 7}), cayley_f2m(2, {1, 2}),
                                  2);
}

std::vector<std::uint64_t> all_ordered_pairs(std::uint64_t n) {
  std::vector<std::uint64_t> tuples;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) {
      tuples.push_back(i);
      tuples.push_back(j);
    }
  return tuples;
}

}  // namespace

TEST_CASE("direct-sum lifting XORs the projected positions") {
  walk_collection w = explicit_collection(3, 2, {0, 1, 1, 2, 0, 2});
  CHECK(w.count() == 3);
  CHECK(direct_sum_lift(word::from_string("101"), w) ==
        word::from_string("110"));
  CHECK(direct_sum_lift(word(3), w) == word(3));

  // The lift is linear over F2.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    word x = word::from_index(rng() & 7, 3);
    word y = word::from_index(rng() & 7, 3);
    CHECK(direct_sum_lift(x ^ y, w) ==
          (direct_sum_lift(x, w) ^ direct_sum_lift(y, w)));
  }

  CHECK_THROWS_AS((void)direct_sum_lift(word(4), w), error);
  CHECK_THROWS_AS((void)explicit_collection(2, 1, {5}), error);
  CHECK_THROWS_AS((void)explicit_collection(2, 1, {}), error);
}

TEST_CASE("parity-sampling measure is exact over small ground sets") {
  walk_collection pairs = explicit_collection(4, 2, all_ordered_pairs(4));

  // Weight-one input: 2*1*3 = 6 of the 16 ordered pairs see odd parity.
  CHECK(bias(direct_sum_lift(word::from_string("0001"), pairs)) ==
        rational(1, 4));
  // Over all inputs of bias <= 1/2 (weights 1..3), the worst lift bias is 1/4.
  CHECK(parity_sampling_measure(pairs, rational(1, 2)) == rational(1, 4));
  CHECK(parity_sampling_measure(pairs, rational(0)) == rational(0));

  // Arity-one identity collection: lifting does nothing, so the measure is
  // exactly the input bias budget realized at weight one.
  walk_collection ident = explicit_collection(4, 1, {0, 1, 2, 3});
  CHECK(parity_sampling_measure(ident, rational(1, 2)) == rational(1, 2));

  // Restricted word list: high-bias words are excluded from the maximum.
  std::vector<word> words = {word::from_string("0001"),
                             word::from_string("0011"),
                             word::from_string("0000")};
  CHECK(parity_sampling_measure(pairs, rational(1, 2), words) ==
        rational(1, 4));
  CHECK_THROWS_AS(
      (void)parity_sampling_measure(pairs, rational(1, 2), {word(5)}), error);

  walk_collection big = explicit_collection(21, 1, {0});
  CHECK_THROWS_AS((void)parity_sampling_measure(big, rational(1, 2)), error);

  CHECK(walk_bias_bound(0.5, 0.25, 5) == doctest::Approx(1.0));
  CHECK(walk_bias_bound(0.25, 0.125, 7) == doctest::Approx(0.125));
}

TEST_CASE("expander walk collections follow the edge structure") {
  rotation_graph k4 = cayley_zn(4, {1, 3, 2});
  walk_collection singles = expander_walk_collection(k4, 1);
  CHECK(singles.count() == 4);
  CHECK(singles.arity == 1);

  walk_collection paths = expander_walk_collection(k4, 2);
  CHECK(paths.count() == 12);  // 4 * 3
  for (std::uint64_t t = 0; t < paths.count(); ++t) {
    std::uint64_t a = paths.entry(t, 0), b = paths.entry(t, 1);
    bool adjacent = false;
    for (std::size_t j = 0; j < k4.degree(); ++j)
      adjacent = adjacent || (k4.neighbor(std::uint32_t(a), j) == b);
    CHECK(adjacent);
  }
  CHECK(expander_walk_collection(k4, 3).count() == 36);
  CHECK_THROWS_AS((void)expander_walk_collection(k4, 3, 10), error);
}

TEST_CASE("product walk collections mirror the lazy walk space") {
  wide_replacement_product p = product8();
  walk_space ws = enumerate_walks(p, 0, 2);
  walk_collection col = product_walk_collection(p, 0, 2);
  col.validate();
  CHECK(col.count() == ws.count());
  CHECK(col.arity == 3);
  CHECK(col.ground_size == p.num_vertices());
  CHECK(col.base_size == p.outer_size());
  for (std::uint64_t pv = 0; pv < p.num_vertices(); ++pv)
    CHECK(col.projection[pv] == p.outer_component(pv));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::uint64_t rank = rng() % col.count();
    std::vector<std::uint64_t> path = ws.vertices(rank);
    for (unsigned i = 0; i < col.arity; ++i) CHECK(col.entry(rank, i) == path[i]);
  }
}

TEST_CASE("split operators are exact conditional-probability tables") {
  wide_replacement_product p = product8();
  split_operator s(p, 0, 0, 1);
  CHECK(s.rows().count() == 32);
  CHECK(s.cols().count() == 32);
  CHECK(s.denominator() == 4);
  const matrix& m = s.dense();
  for (std::uint64_t r = 0; r < 32; ++r) {
    std::uint64_t total = 0;
    for (std::uint64_t c = 0; c < 32; ++c) {
      std::uint32_t num = s.numerator(r, c);
      total += num;
      CHECK(m(Eigen::Index(r), Eigen::Index(c)) ==
            doctest::Approx(double(num) / 4.0).epsilon(1e-12));
    }
    CHECK(total == s.denominator());
    CHECK(s.row_end(r) == s.rows().end_vertex(r));
  }

  CHECK_THROWS_AS((void)split_operator(p, 1, 0, 2), error);

  split_operator swap = swap_operator(p, 1);
  CHECK(swap.k1() == 0);
  CHECK(swap.k2() == 1);
  CHECK(swap.k3() == 3);
  CHECK(swap.rows().count() == swap.cols().count());

  try {
    (void)swap_operator(p, 2);
    FAIL("expected a residue error");
  } catch (const error& e) {
    CHECK(e.kind() == errc::bad_residue);
  }
}

TEST_CASE("swap operators factor through the step operator") {
  wide_replacement_product p = product8();
  tensor_structure_report rep = verify_tensor_structure(swap_operator(p, 1));
  CHECK(rep.class_sizes_uniform);
  CHECK(rep.entries_match);
  CHECK(rep.pass);
  CHECK(rep.sigma2_split ==
        doctest::Approx(rep.sigma2_step).epsilon(1e-9));
}

TEST_CASE("measured adjoints satisfy the inner-product identity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  matrix t(3, 4);
  for (int i = 0; i < 3; ++i) {
    double row_total = 0;
    for (int j = 0; j < 4; ++j) {
      t(i, j) = unif(rng);
      row_total += t(i, j);
    }
    for (int j = 0; j < 4; ++j) t(i, j) /= row_total;
  }
  std::vector<double> rho = {0.5, 0.3, 0.2};
  std::vector<double> mu(4, 0.0);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 3; ++i) mu[j] += rho[i] * t(i, j);

  matrix adj = adjoint_operator(t, rho, mu);
  for (int trial = 0; trial < 10; ++trial) {
    vec f(3), g(4);
    for (int i = 0; i < 3; ++i) f[i] = unif(rng) - 0.5;
    for (int j = 0; j < 4; ++j) g[j] = unif(rng) - 0.5;
    double lhs = 0, rhs = 0;
    vec tg = t * g, af = adj * f;
    for (int i = 0; i < 3; ++i) lhs += rho[i] * f[i] * tg[i];
    for (int j = 0; j < 4; ++j) rhs += mu[j] * af[j] * g[j];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  // With consistent marginals the whitened operator has top singular value 1,
  // and the symmetrized form exposes the measured sigma2 as an eigenvalue.
  matrix white = measured_whitening(t, rho, mu);
  CHECK(operator_norm(white) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(measured_sigma2(t, rho, mu) ==
        doctest::Approx(second_singular_value(white)).epsilon(1e-12));
  matrix sym = symmetrized_operator(white, matrix(white.transpose()));
  CHECK(second_largest_eigenvalue(sym) ==
        doctest::Approx(second_singular_value(white)).epsilon(1e-9));

  CHECK_THROWS_AS((void)adjoint_operator(t, rho, {0.25, 0.25, 0.25}), error);
  CHECK_THROWS_AS((void)measured_whitening(t, rho, {0.5, 0.5, 0.0, 0.0}),
                  error);
}

TEST_CASE("collection splits recover hand-computed conditionals") {
  walk_collection w = explicit_collection(2, 2, {0, 1, 0, 1, 1, 0});
  collection_split cs = split_collection(w, 0, 0, 1);
  REQUIRE(cs.row_labels.size() == 2);
  REQUIRE(cs.col_labels.size() == 2);

  auto row_of = [&](std::uint64_t v) {
    for (std::size_t i = 0; i < cs.row_labels.size(); ++i)
      if (cs.row_labels[i] == std::vector<std::uint64_t>{v}) return i;
    FAIL("missing row label");
    return std::size_t(0);
  };
  auto col_of = [&](std::uint64_t v) {
    for (std::size_t j = 0; j < cs.col_labels.size(); ++j)
      if (cs.col_labels[j] == std::vector<std::uint64_t>{v}) return j;
    FAIL("missing column label");
    return std::size_t(0);
  };

  CHECK(cs.row_measure[row_of(0)] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(cs.row_measure[row_of(1)] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(cs.col_measure[col_of(1)] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  // Each prefix determines its suffix, so conditionals are 0/1 and the
  // measured correlation is total.
  CHECK(cs.op(Eigen::Index(row_of(0)), Eigen::Index(col_of(1))) ==
        doctest::Approx(1.0));
  CHECK(cs.op(Eigen::Index(row_of(1)), Eigen::Index(col_of(0))) ==
        doctest::Approx(1.0));
  CHECK(is_row_stochastic(cs.op));
  CHECK(measured_sigma2(cs.op, cs.row_measure, cs.col_measure) ==
        doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS((void)split_collection(w, 0, 1, 1), error);
}

TEST_CASE("splitting trees cover intervals exactly once") {
  splitting_tree leaf = balanced_splitting_tree(1);
  CHECK(leaf.leaves == 1);
  CHECK(leaf.internal.empty());

  splitting_tree bal = balanced_splitting_tree(4, 2);
  REQUIRE(bal.internal.size() == 3);
  CHECK(bal.internal[0].k1 == 0);
  CHECK(bal.internal[0].k2 == 1);
  CHECK(bal.internal[0].k3 == 3);
  CHECK(bal.internal[1].k1 == 0);
  CHECK(bal.internal[1].k2 == 0);
  CHECK(bal.internal[1].k3 == 1);
  CHECK(bal.internal[2].k1 == 2);
  CHECK(bal.internal[2].k2 == 2);
  CHECK(bal.internal[2].k3 == 3);

  splitting_tree lin = left_linear_splitting_tree(4);
  REQUIRE(lin.internal.size() == 3);
  CHECK(lin.internal[0].k2 == 2);
  for (const split_node& n : lin.internal) CHECK(n.k2 + 1 == n.k3);

  // An explicit node list must tile the interval tree exactly.
  CHECK(make_splitting_tree(4, {{0, 1, 3}, {0, 0, 1}, {2, 2, 3}}).leaves == 4);
  CHECK_THROWS_AS((void)make_splitting_tree(4, {{0, 1, 3}, {0, 0, 1}}), error);
  CHECK_THROWS_AS(
      (void)make_splitting_tree(4, {{0, 1, 3}, {0, 0, 1}, {1, 1, 2}}), error);
}

TEST_CASE("splittability certificates bound every internal node") {
  wide_replacement_product p = product8();

  walk_collection single = explicit_collection(4, 1, {0, 1, 2, 3});
  splittability_certificate_t trivial =
      splittability_certificate(single, balanced_splitting_tree(1));
  CHECK(trivial.tau == 0.0);
  CHECK(trivial.nodes.empty());

  walk_collection block = product_walk_collection(p, 0, 1);
  splittability_certificate_t cert =
      splittability_certificate(block, balanced_splitting_tree(2));
  REQUIRE(cert.nodes.size() == 1);
  CHECK(cert.tau == cert.nodes[0].sigma2);
  zigzag_report zz = zigzag_spectral_checks(p);
  CHECK(cert.tau <= zz.coarse_bound + 1e-9);

  // All five shapes of a four-leaf tree certify the same arity-4 collection,
  // and shared intervals get identical measurements.
  walk_collection quad = product_walk_collection(p, 0, 3);
  std::vector<splitting_tree> trees = {
      make_splitting_tree(4, {{0, 1, 3}, {0, 0, 1}, {2, 2, 3}}),
      make_splitting_tree(4, {{0, 2, 3}, {0, 1, 2}, {0, 0, 1}}),
      make_splitting_tree(4, {{0, 2, 3}, {0, 0, 2}, {1, 1, 2}}),
      make_splitting_tree(4, {{0, 0, 3}, {1, 2, 3}, {1, 1, 2}}),
      make_splitting_tree(4, {{0, 0, 3}, {1, 1, 3}, {2, 2, 3}}),
  };
  std::vector<splittability_certificate_t> certs;
  for (const splitting_tree& tree : trees) {
    certs.push_back(splittability_certificate(quad, tree));
    const splittability_certificate_t& c = certs.back();
    REQUIRE(c.nodes.size() == 3);
    double worst = 0;
    for (const node_certificate& n : c.nodes) worst = std::max(worst, n.sigma2);
    CHECK(c.tau == doctest::Approx(worst).epsilon(1e-15));
  }
  for (const splittability_certificate_t& a : certs)
    for (const splittability_certificate_t& b : certs)
      for (const node_certificate& na : a.nodes)
        for (const node_certificate& nb : b.nodes)
          if (na.node.k1 == nb.node.k1 && na.node.k2 == nb.node.k2 &&
              na.node.k3 == nb.node.k3)
            CHECK(na.sigma2 == doctest::Approx(nb.sigma2).epsilon(1e-12));

  CHECK_THROWS_AS(
      (void)splittability_certificate(quad, balanced_splitting_tree(3)), error);
}

TEST_CASE("cascades compose level lifts into the full walk lift") {
  wide_replacement_product p = product8();
  linear_code base({word::from_string("10000000"), word::from_string("01000000")},
                   8);

  cascade one = build_cascade(base, p, 1, 2);
  CHECK(one.total_vertices() == 2);
  CHECK(one.levels().size() == 1);
  CHECK(one.level_length(0) == 8);
  CHECK(one.level_length(1) == 128);  // 32 * 4^1 two-vertex walks
  walk_collection block = product_walk_collection(p, 0, 1);
  for (std::uint64_t m = 0; m < base.num_codewords(); ++m) {
    word z = base.codeword(m);
    CHECK(one.encode_base(z) == direct_sum_lift(z, block));
  }

  cascade two = build_cascade(base, p, 2, 3);
  CHECK(two.total_vertices() == 6);
  CHECK(two.levels().size() == 2);
  CHECK(two.levels()[0].vertices_per_tuple == 2);
  CHECK(two.levels()[1].vertices_per_tuple == 6);
  CHECK(two.level_length(2) == 32768);  // 32 * 4^5 six-vertex walks

  word z = base.codeword(3);
  word top = two.encode_base(z);
  CHECK(top == direct_walk_lift(p, z, 6));
  CHECK(top == two.encode_level(2, two.encode_level(1, z)));

  linear_code top_code = two.level_code(2);
  CHECK(top_code.dimension() == base.dimension());
  CHECK(top_code.block_length() == 32768);
  CHECK(top_code.codeword(3) == top);

  CHECK_THROWS_AS((void)build_cascade(base, p, 2, 1), error);  // below width
  CHECK_THROWS_AS((void)build_cascade(base, p, 2, 5), error);  // above width^2
  linear_code short_base({word::from_string("10")}, 2);
  CHECK_THROWS_AS((void)build_cascade(short_base, p, 1, 2), error);
}
