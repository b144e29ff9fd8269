#include "walklift/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace walklift;

namespace {

matrix complete_graph_walk(int n) {
  matrix a = matrix::Constant(n, n, 1.0 / (n - 1));
  a.diagonal().setZero();
  return a;
}

matrix seeded_random(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("singular values of benchmark operators") {
  CHECK(second_singular_value(complete_graph_walk(4)) ==
        doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(second_singular_value(matrix::Constant(5, 5, 0.2)) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(second_singular_value(matrix::Identity(4, 4)) ==
        doctest::Approx(1.0).epsilon(1e-9));

  CHECK(operator_norm(matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(operator_norm(matrix::Zero(3, 3)) == doctest::Approx(0.0));
  matrix sign = matrix::Zero(2, 2);
  sign(0, 0) = -1;
  sign(1, 1) = 1;
  CHECK(operator_norm(sign) == doctest::Approx(1.0));

  // Second-largest eigenvalue is by value, not magnitude.
  CHECK(second_largest_eigenvalue(complete_graph_walk(4)) ==
        doctest::Approx(-1.0 / 3).epsilon(1e-9));

  CHECK_THROWS_AS((void)second_singular_value(matrix::Zero(8, 8), 4), error);
}

TEST_CASE("the full-SVD and iterative paths agree") {
  matrix m = seeded_random(24, 17, 91);
  auto direct = top_singular_values(m, 3);
  auto iterative = top_singular_values(m, 3, default_dim_cap, true);
  REQUIRE(direct.size() == 3);
  REQUIRE(iterative.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(direct[i] == doctest::Approx(iterative[i]).epsilon(1e-9));
  CHECK(direct[0] >= direct[1]);
  CHECK(direct[1] >= direct[2]);
}

TEST_CASE("sigma2 is invariant under row and column permutations") {
  matrix m = seeded_random(12, 12, 17);
  double base = second_singular_value(m);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<int> rows(12), cols(12);
    for (int i = 0; i < 12; ++i) rows[i] = cols[i] = i;
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    matrix p(12, 12);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) p(i, j) = m(rows[i], cols[j]);
    CHECK(second_singular_value(p) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("tensor products multiply singular values") {
  matrix i4 = kronecker(matrix::Identity(2, 2), matrix::Identity(2, 2));
  CHECK((i4 - matrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

  matrix j4 = kronecker(matrix::Constant(2, 2, 0.5), matrix::Constant(2, 2, 0.5));
  CHECK((j4 - matrix::Constant(4, 4, 0.25)).norm() == doctest::Approx(0.0));

  // Tensoring with a rank-one stochastic block keeps sigma2.
  matrix a = complete_graph_walk(4);
  matrix t = kronecker(a, matrix::Constant(3, 3, 1.0 / 3));
  CHECK(second_singular_value(t) ==
        doctest::Approx(second_singular_value(a)).epsilon(1e-9));

  matrix b = seeded_random(5, 5, 23);
  CHECK(operator_norm(kronecker(a, b)) ==
        doctest::Approx(operator_norm(a) * operator_norm(b)).epsilon(1e-9));

  CHECK_THROWS_AS((void)kronecker(matrix::Zero(70, 70), matrix::Zero(70, 70)),
                  error);
}

TEST_CASE("row stochasticity and uniform whitening") {
  CHECK(is_row_stochastic(complete_graph_walk(6)));
  CHECK(!is_row_stochastic(matrix::Identity(3, 3) * 0.5));

  // A uniform-measure conditional operator whitens to operator norm one.
  matrix flat = matrix::Constant(2, 4, 0.25);
  CHECK(operator_norm(whiten_uniform(flat)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("entropy potential of product marginals") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
  CHECK(binary_entropy(1.0) == doctest::Approx(0.0));
  CHECK(binary_entropy(0.5, std::exp(1.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  std::vector<double> uniform_measure(4, 0.25);
  CHECK(entropy_potential({1.0, 0.0, 1.0, 0.0}, uniform_measure) ==
        doctest::Approx(0.0));
  CHECK(entropy_potential({0.5, 0.5, 0.5, 0.5}, uniform_measure) ==
        doctest::Approx(1.0));
  CHECK(entropy_potential({0.5, 0.0, 1.0, 0.0}, uniform_measure) ==
        doctest::Approx(0.25));

  CHECK_THROWS_AS(
      (void)entropy_potential({0.5, 0.5}, {0.3, 0.3}), error);  // mass != 1
}
