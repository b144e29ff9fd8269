#include "walklift/graphs.hpp"

#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <vector>

using namespace walklift;

namespace {

void check_involution(const rotation_graph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (std::size_t j = 0; j < g.degree(); ++j) {
      auto [u, jj] = g.rot(v, j);
      auto [w, jjj] = g.rot(u, jj);
      CHECK(w == v);
      CHECK(jjj == j);
    }
}

std::vector<std::uint32_t> all_group_elements(unsigned m) {
  std::vector<std::uint32_t> gens(std::size_t(1) << m);
  std::iota(gens.begin(), gens.end(), 0u);
  return gens;
}

}  // namespace

TEST_CASE("cyclic cayley graphs pair inverse generators") {
  rotation_graph k5 = cayley_zn(5, {1, 4, 2, 3});
  CHECK(k5.num_vertices() == 5);
  CHECK(k5.degree() == 4);
  REQUIRE(k5.phi().has_value());
  CHECK(*k5.phi() == std::vector<std::uint32_t>{1, 0, 3, 2});
  CHECK(k5.rot(0, 0) == std::pair<std::uint32_t, std::uint32_t>{1, 1});
  CHECK(k5.rot(2, 1) == std::pair<std::uint32_t, std::uint32_t>{1, 0});
  check_involution(k5);
  CHECK(k5.sigma2() == doctest::Approx(0.25).epsilon(1e-9));

  rotation_graph c4 = cayley_zn(4, {1, 3});
  REQUIRE(c4.phi().has_value());
  CHECK(*c4.phi() == std::vector<std::uint32_t>{1, 0});
  CHECK(c4.sigma2() == doctest::Approx(1.0).epsilon(1e-9));  // bipartite
  check_involution(c4);

  CHECK_THROWS_AS((void)cayley_zn(5, {1, 2}), error);  // 4 and 3 missing
}

TEST_CASE("binary cayley graphs are self-paired") {
  rotation_graph k4 = cayley_f2m(2, {1, 2, 3});
  CHECK(k4.num_vertices() == 4);
  REQUIRE(k4.phi().has_value());
  CHECK(*k4.phi() == std::vector<std::uint32_t>{0, 1, 2});
  check_involution(k4);

  matrix a = k4.normalized_adjacency();
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      CHECK(a(u, v) == doctest::Approx(u == v ? 0.0 : 1.0 / 3));
  CHECK(k4.sigma2() == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("rotation maps must be involutions with matching phi") {
  // A swap with asymmetric labels is not an involution.
  CHECK_THROWS_AS(rotation_graph(2, 2, {1, 1, 0, 0}, {0, 0, 1, 1}), error);
  // Valid rotation but wrong phi.
  CHECK_THROWS_AS(
      rotation_graph(2, 1, {1, 0}, {0, 0}, std::vector<std::uint32_t>{1}),
      error);
}

TEST_CASE("character sums certify small bias exactly") {
  CHECK(verify_small_bias(3, all_group_elements(3)) == rational(0));
  CHECK(verify_small_bias(2, {0}) == rational(1));
  CHECK(verify_small_bias(2, {0, 1, 2, 3}) == rational(0));
  CHECK(verify_small_bias(2, {1, 2, 3}) == make_rational(1, 3));

  // The walk spectrum of a binary Cayley graph is its character spectrum.
  std::vector<std::uint32_t> gens = {1, 2, 4, 7, 5};
  rotation_graph g = cayley_f2m(3, gens);
  CHECK(g.sigma2() ==
        doctest::Approx(to_double(verify_small_bias(3, gens))).epsilon(1e-9));
}

TEST_CASE("powering construction meets its bias target") {
  biased_set small = aghp_generators(4, make_rational(1, 2));
  CHECK(small.m == 4);
  CHECK(small.generators.size() == 64);  // (m/beta)^2
  CHECK(small.certified_bias <= make_rational(1, 2));
  CHECK(verify_small_bias(4, small.generators) == small.certified_bias);
  CHECK(cayley_f2m(4, small.generators).sigma2() <=
        to_double(small.certified_bias) + 1e-9);

  biased_set vacuous = aghp_generators(2, rational(1));
  CHECK(vacuous.generators.size() == 4);

  biased_set large = aghp_generators(8, make_rational(1, 4));
  CHECK(large.generators.size() == 1024);
  CHECK(large.certified_bias <= make_rational(1, 4));

  CHECK_THROWS_AS((void)aghp_generators(3, make_rational(1, 3)), error);
  CHECK_THROWS_AS((void)aghp_generators(4, make_rational(1, 3)), error);
}

TEST_CASE("local inversion is recovered exactly when labels are global") {
  rotation_graph k5 = cayley_zn(5, {1, 4, 2, 3});
  auto phi = local_invertibility_check(k5);
  REQUIRE(phi.has_value());
  CHECK(*phi == *k5.phi());

  // Return labels that depend on the vertex defeat local inversion.
  rotation_graph mixed(4, 2,
                       {1, 1, 0, 0, 3, 3, 2, 2},   // neighbors
                       {0, 1, 0, 1, 1, 0, 1, 0});  // labels swapped on 2,3
  CHECK(!local_invertibility_check(mixed).has_value());
}
