#pragma once

// Real operator algebra: singular values / eigenvalues of normalized walk
// operators, Kronecker products, and the entropy potential.  Dense matrices
// up to a desk cap; full SVD for small dimensions, seeded subspace iteration
// with Rayleigh-Ritz extraction above.

#include "walklift/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace walklift {

using matrix = Eigen::MatrixXd;
using vec = Eigen::VectorXd;

inline constexpr std::size_t default_dim_cap = 4096;

/// Largest k singular values, descending.  `force_iterative` bypasses the
/// small-dimension full-SVD path (used to cross-check the two code paths).
std::vector<double> top_singular_values(const matrix& m, unsigned k,
                                        std::size_t cap = default_dim_cap,
                                        bool force_iterative = false);

/// Second-largest singular value (0 when min(rows, cols) < 2).
double second_singular_value(const matrix& m, std::size_t cap = default_dim_cap);

/// Largest singular value.
double operator_norm(const matrix& m, std::size_t cap = default_dim_cap);

/// Second-largest eigenvalue (by value, not magnitude) of a symmetric matrix.
double second_largest_eigenvalue(const matrix& m, std::size_t cap = default_dim_cap);

/// Standard tensor product; singular values multiply pairwise.
matrix kronecker(const matrix& a, const matrix& b, std::size_t cap = default_dim_cap);

bool is_row_stochastic(const matrix& m, double tol = 1e-12);

/// Rescales an operator between two uniform probability spaces so that plain
/// singular values equal the measured ones: multiplies by sqrt(cols/rows).
matrix whiten_uniform(const matrix& m);

/// E_{i ~ vertex_measure} H(Y_i) where H is binary entropy in the given base
/// and prob_one[i] = Pr[Y_i = 1].  vertex_measure must sum to 1 (1e-9).
double entropy_potential(const std::vector<double>& prob_one,
                         const std::vector<double>& vertex_measure,
                         double base = 2.0);

/// Binary entropy of p in the given base (0 log 0 = 0).
double binary_entropy(double p, double base = 2.0);

}  // namespace walklift
