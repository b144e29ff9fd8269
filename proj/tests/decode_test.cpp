#include "walklift/decode.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

using namespace walklift;

namespace {

support_ensemble correlated_pair() {
  return support_ensemble({word::from_string("00"), word::from_string("11")},
                          {0.5, 0.5});
}

support_ensemble product_pair() {
  return support_ensemble(
      {word::from_string("00"), word::from_string("01"),
       word::from_string("10"), word::from_string("11")},
      {0.25, 0.25, 0.25, 0.25});
}

double prob_of(const std::vector<std::pair<std::uint64_t, double>>& dist,
               std::uint64_t key) {
  double p = 0;
  for (const auto& [k, v] : dist)
    if (k == key) p += v;
  return p;
}

}  // namespace

TEST_CASE("list radius is decided in exact arithmetic") {
  word a(16), b(16);
  for (unsigned i = 0; i < 4; ++i) b.flip(i);
  CHECK(within_list_radius(a, b, rational(1, 16)));  // d = 1/4, boundary
  b.flip(4);                                         // d = 5/16
  CHECK_FALSE(within_list_radius(a, b, rational(1, 16)));
  CHECK_THROWS_AS((void)within_list_radius(a, word(8), rational(1, 16)), error);
}

TEST_CASE("support ensembles answer consistent sparse queries") {
  support_ensemble ens =
      support_ensemble({word::from_string("000"), word::from_string("111")},
                       {0.5, 0.5});
  CHECK(ens.num_variables() == 3);

  auto joint = ens.query({0, 1});
  CHECK(prob_of(joint, 0) == doctest::Approx(0.5));
  CHECK(prob_of(joint, 3) == doctest::Approx(0.5));
  CHECK(prob_of(joint, 1) == doctest::Approx(0.0));

  // Repeated variables admit only self-consistent assignments.
  auto repeated = ens.query({0, 0});
  CHECK(prob_of(repeated, 0) == doctest::Approx(0.5));
  CHECK(prob_of(repeated, 3) == doctest::Approx(0.5));
  CHECK(prob_of(repeated, 1) + prob_of(repeated, 2) == doctest::Approx(0.0));

  // Marginalizing the pair query over the second variable gives the
  // singleton query.
  auto single = ens.query({0});
  CHECK(prob_of(joint, 0) + prob_of(joint, 2) ==
        doctest::Approx(prob_of(single, 0)));

  // Conditioning on one variable collapses the perfectly correlated support.
  word one(1);
  one.set(0, true);
  auto cond = ens.condition({0}, one);
  CHECK(prob_of(cond->query({1}), 1) == doctest::Approx(1.0));

  CHECK(conditional_covariance_psd(ens, {0, 1, 2}));
  CHECK(conditional_covariance_psd(product_pair(), {0, 1}));

  CHECK_THROWS_AS((void)ens.condition({0, 1}, word::from_string("10")), error);
  CHECK_THROWS_AS((void)ens.query({5}), error);
  CHECK_THROWS_AS(support_ensemble({}, {}), error);
  CHECK_THROWS_AS(
      support_ensemble({word::from_string("00")}, {0.5, 0.5}), error);
  CHECK_THROWS_AS(support_ensemble({word::from_string("00")}, {0.0}), error);
}

TEST_CASE("projected views read variables through the ground projection") {
  support_ensemble base = correlated_pair();
  projected_ensemble view = cloud_view(base, {0, 0, 1, 1});
  CHECK(view.num_variables() == 4);
  auto pair = view.query({0, 2});
  CHECK(prob_of(pair, 0) == doctest::Approx(0.5));
  CHECK(prob_of(pair, 3) == doctest::Approx(0.5));

  word one(1);
  one.set(0, true);
  auto cond = view.condition({1}, one);  // ground 1 projects to base var 0
  CHECK(prob_of(cond->query({2}), 1) == doctest::Approx(1.0));
}

TEST_CASE("majority vote follows the conditional marginals") {
  CHECK(majority_vote(support_ensemble({word::from_string("111")}, {1.0})) ==
        word::from_string("111"));
  // Exact ties round to zero.
  CHECK(majority_vote(correlated_pair()) == word::from_string("00"));
  CHECK(majority_vote(support_ensemble(
            {word::from_string("000"), word::from_string("111")},
            {0.9, 0.1})) == word::from_string("000"));
  CHECK(majority_vote(support_ensemble(
            {word::from_string("000"), word::from_string("111")},
            {0.1, 0.9})) == word::from_string("111"));
}

TEST_CASE("tensoriality defects separate product from correlated ensembles") {
  walk_collection pair_tuple = explicit_collection(2, 2, {0, 1});
  CHECK(tensoriality_defect(product_pair(), pair_tuple) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tensoriality_defect(correlated_pair(), pair_tuple) ==
        doctest::Approx(1.0).epsilon(1e-12));

  walk_collection singles = explicit_collection(2, 1, {0, 1});
  support_ensemble point =
      support_ensemble({word::from_string("01")}, {1.0});
  CHECK(two_step_defect(point, singles) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(two_step_defect(correlated_pair(), singles) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Tuple pairs include the diagonal, where repeated variables make even a
  // product ensemble non-tensorial.
  CHECK(two_step_defect(product_pair(), singles) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("propagation rounding is seeded and respects the budget") {
  support_ensemble ens =
      support_ensemble({word::from_string("000"), word::from_string("111")},
                       {0.5, 0.5});
  walk_collection w = explicit_collection(3, 3, {0, 1, 2});

  try {
    (void)propagation_rounding(ens, w, 2, 1);
    FAIL("expected a locality error");
  } catch (const error& e) {
    CHECK(e.kind() == errc::locality_too_small);
  }

  // A point-mass ensemble always rounds to its support.
  support_ensemble point = support_ensemble({word::from_string("010")}, {1.0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    rounding_result r = propagation_rounding(point, w, 3, seed);
    CHECK(r.assignment == word::from_string("010"));
    CHECK(r.num_walks == 1);
  }

  // Deterministic for a fixed seed.
  rounding_result r1 = propagation_rounding(ens, w, 3, 42);
  rounding_result r2 = propagation_rounding(ens, w, 3, 42);
  CHECK(r1.assignment == r2.assignment);
  CHECK(r1.conditioned_set == r2.conditioned_set);
  CHECK(r1.conditioned_values == r2.conditioned_values);
  CHECK(r1.num_walks == r2.num_walks);

  // Conditioning on the single full walk collapses the correlated ensemble,
  // so the rounded word is one of the two support words, each about half
  // the time over seeds.
  unsigned zeros = 0, total = 2000;
  for (unsigned seed = 0; seed < total; ++seed) {
    rounding_result r = propagation_rounding(ens, w, 3, seed);
    bool is_zero = r.assignment == word::from_string("000");
    bool is_one = r.assignment == word::from_string("111");
    CHECK((is_zero || is_one));
    CHECK(std::is_sorted(r.conditioned_set.begin(), r.conditioned_set.end()));
    if (is_zero) ++zeros;
  }
  double freq = double(zeros) / total;
  CHECK(freq > 0.445);
  CHECK(freq < 0.555);
}

TEST_CASE("level list decoding matches the exhaustive lifted-code oracle") {
  linear_code base({word::from_string("100"), word::from_string("010")}, 3);
  walk_collection w =
      explicit_collection(3, 2, {0, 1, 1, 2, 0, 2, 2, 1, 1, 0, 2, 0});
  linear_code lifted(
      {direct_sum_lift(base.generator()[0], w),
       direct_sum_lift(base.generator()[1], w)},
      w.count());

  brute_force_backend backend;
  rational eta(1, 25);  // list radius 1/2 - 1/5 = 3/10
  for (std::uint64_t r = 0; r < 64; ++r) {
    word received = word::from_index(r, 6);
    decode_list list = list_decode_level(backend, base, w, received, eta);
    std::vector<word> got;
    for (const decode_entry& e : list) {
      CHECK(e.lifted == direct_sum_lift(e.base, w));
      got.push_back(e.lifted);
    }
    std::sort(got.begin(), got.end(),
              [](const word& x, const word& y) { return x.lex_less(y); });
    CHECK(got == brute_force_list_decode(lifted, received, rational(3, 10)));
  }
}

TEST_CASE("unique level decoding returns the closest entry inside the radius") {
  linear_code rep7({word::from_string("1111111")}, 7);
  walk_collection ident = explicit_collection(7, 1, {0, 1, 2, 3, 4, 5, 6});
  brute_force_backend backend;

  word received = word::from_string("1111100");  // distance 2/7 from all-ones
  auto hit = unique_decode_level(backend, rep7, ident, received, rational(1, 25),
                                 rational(1, 5));
  REQUIRE(hit.has_value());
  CHECK(hit->base == word::from_string("1111111"));

  // Every codeword is outside the 3/10 radius here.
  auto miss = unique_decode_level(backend, rep7, ident,
                                  word::from_string("1110000"), rational(1, 25),
                                  rational(1, 5));
  CHECK_FALSE(miss.has_value());

  CHECK_THROWS_AS((void)unique_decode_level(backend, rep7, ident, received,
                                            rational(1, 16), rational(1, 5)),
                  error);
  CHECK_THROWS_AS((void)unique_decode_level(backend, rep7, ident, received,
                                            rational(1, 10), rational(1, 5)),
                  error);
}

TEST_CASE("decoder configuration validates the parameter chain") {
  decoder_config cfg = make_decoder_config(rational(1, 5), rational(1, 25));
  CHECK(cfg.eta0 == rational(1, 5));
  CHECK(cfg.eta == rational(1, 25));
  CHECK(cfg.zeta == rational(1, 10));  // 1/8 - eta0/8

  CHECK_THROWS_AS((void)make_decoder_config(rational(1, 3), rational(1, 25)),
                  error);
  CHECK_THROWS_AS((void)make_decoder_config(rational(1, 5), rational(1, 5)),
                  error);
  CHECK_THROWS_AS((void)make_decoder_config(rational(1, 5), rational(0)),
                  error);
}

TEST_CASE("cascade decoders invert the encoding under light corruption") {
  wide_replacement_product p(cayley_zn(8, {1, 7}), cayley_f2m(2, {1, 2}), 2);
  linear_code base(
      {word::from_string("10000000"), word::from_string("01000000")}, 8);
  cascade c = build_cascade(base, p, 1, 2);
  brute_force_backend backend;
  decoder_config cfg = make_decoder_config(rational(1, 5), rational(1, 25));

  for (std::uint64_t m = 0; m < base.num_codewords(); ++m) {
    word z = base.codeword(m);
    word received = c.encode_base(z);
    for (unsigned i = 0; i < 5; ++i) received.flip(i);

    auto unique = cascade_unique_decode(c, backend, received, cfg);
    REQUIRE(unique.has_value());
    CHECK(*unique == z);

    fixed_poly_stats stats;
    auto poly = fixed_poly_decode(c, backend, received, cfg, &stats);
    REQUIRE(poly.has_value());
    CHECK(*poly == z);
    CHECK(stats.nodes >= 1);
  }

  CHECK_THROWS_AS(
      (void)cascade_unique_decode(c, backend, word(10), cfg), error);
  decoder_config wide_cfg = make_decoder_config(rational(1, 5), rational(1, 15));
  CHECK_THROWS_AS(
      (void)cascade_unique_decode(c, backend, word(128), wide_cfg), error);
}

TEST_CASE("cover pruning keeps one representative per close cluster") {
  word z = word::from_string("10101010");
  decode_entry e1{z, word(4)};
  decode_entry e2{z, word(4)};
  decode_entry e3{z.complemented(), word(4)};
  decode_list pruned =
      zeta_cover_prune({e1, e2, e3}, rational(1, 10), rational(1, 25));
  REQUIRE(pruned.size() == 1);
  CHECK(pruned[0].base == z);

  // At zeta = 1/8 the threshold is 3/4; a weight-one difference has bias
  // exactly 3/4, which is not strictly above it, so both entries survive.
  word near = z;
  near.flip(0);
  decode_list kept =
      zeta_cover_prune({{z, word(4)}, {near, word(4)}}, rational(1, 8),
                       rational(1, 25));
  CHECK(kept.size() == 2);

  CHECK_THROWS_AS((void)zeta_cover_prune({e1}, rational(0), rational(1, 25)),
                  error);
  CHECK_THROWS_AS((void)zeta_cover_prune({e1}, rational(1, 10), rational(1)),
                  error);
}

TEST_CASE("multilinear algebra stays exact") {
  multilinear_poly z0 = multilinear_poly::zero(2);
  CHECK(z0.coefficients.size() == 4);
  CHECK(z0.degree() == 0);

  multilinear_poly a = multilinear_poly::zero(1);
  a.coefficients[0] = 1;
  a.coefficients[1] = 1;  // 1 + z_1
  CHECK(a.degree() == 1);
  multilinear_poly sq = multilinear_product(a, a);  // z^2 = 1 reduction
  CHECK(sq.coefficients[0] == rational(2));
  CHECK(sq.coefficients[1] == rational(2));

  CHECK(product_expectation(a, {rational(1, 3)}) == rational(4, 3));

  // Normalized inner product with a fixed sign vector, squared: expectation
  // 1/4 under unbiased coordinates, 1 under fully aligned ones.
  multilinear_poly q = multilinear_poly::zero(4);
  for (unsigned i = 0; i < 4; ++i)
    q.coefficients[std::size_t(1) << i] = rational(1, 4);
  multilinear_poly q2 = multilinear_product(q, q);
  CHECK(q2.degree() == 2);
  std::vector<rational> zero_means(4, rational(0));
  std::vector<rational> one_means(4, rational(1));
  CHECK(product_expectation(q2, zero_means) == rational(1, 4));
  CHECK(product_expectation(q2, one_means) == rational(1));

  multilinear_poly cubic = multilinear_poly::zero(3);
  cubic.coefficients[7] = 1;
  CHECK_THROWS_AS((void)product_expectation(cubic, {rational(0), rational(0),
                                                    rational(0)},
                                            2),
                  error);
  CHECK_THROWS_AS((void)multilinear_poly::zero(21), error);
  CHECK_THROWS_AS((void)product_expectation(a, {}), error);
}

TEST_CASE("derandomized rounding improves the objective monotonically") {
  // a_poly = (1 + z_1)/2, b_poly = 1: the only coordinate is pushed to +1.
  multilinear_poly a_poly = multilinear_poly::zero(1);
  a_poly.coefficients[0] = rational(1, 2);
  a_poly.coefficients[1] = rational(1, 2);
  multilinear_poly b_poly = multilinear_poly::zero(1);
  b_poly.coefficients[0] = 1;

  std::vector<rational> trajectory;
  word out = derandomized_round(a_poly, b_poly, {rational(0)}, rational(1, 4),
                                rational(1, 2), rational(1), &trajectory);
  CHECK_FALSE(out.get(0));  // omega_1 = +1
  REQUIRE(trajectory.size() == 2);
  CHECK(trajectory[0] == rational(1, 2));
  CHECK(trajectory[1] == rational(1));

  // Larger instance: trajectory is monotone and never dips below a(1-beta).
  multilinear_poly q = multilinear_poly::zero(4);
  for (unsigned i = 0; i < 4; ++i)
    q.coefficients[std::size_t(1) << i] = rational(1, 4);
  multilinear_poly one4 = multilinear_poly::zero(4);
  one4.coefficients[0] = 1;
  std::vector<rational> means = {rational(1, 2), rational(1, 2), rational(1, 2),
                                 rational(1, 2)};
  trajectory.clear();
  word rounded =
      derandomized_round(one4, q, means, rational(1, 64), rational(1, 2),
                         rational(1, 4), &trajectory);
  REQUIRE(trajectory.size() == 5);
  rational threshold = rational(1, 64) * (rational(1) - rational(1, 2));
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    CHECK(trajectory[i] >= threshold);
    if (i > 0) CHECK(trajectory[i] >= trajectory[i - 1]);
  }
  CHECK(rounded.size() == 4);

  // An objective starting below a(1-beta) is rejected.
  multilinear_poly flat = multilinear_poly::zero(1);
  try {
    (void)derandomized_round(flat, b_poly, {rational(0)}, rational(1, 4),
                             rational(1, 2), rational(1));
    FAIL("expected a premise failure");
  } catch (const error& e) {
    CHECK(e.kind() == errc::premise_violated);
    CHECK(is_certification_failure(e.kind()));
    CHECK(e.exit_code() == 3);
  }

  CHECK_THROWS_AS(
      (void)derandomized_round(a_poly, b_poly, {rational(0)}, rational(1, 4),
                               rational(1, 2), rational(1, 1000)),
      error);  // amplification exponent overflows the cap
}
