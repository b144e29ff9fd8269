#include "walklift/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace walklift {

namespace {

constexpr std::size_t full_svd_threshold = 512;
constexpr unsigned max_power_iterations = 100000;
constexpr double ritz_tol = 1e-12;

void check_cap(const matrix& m, std::size_t cap) {
  require(std::size_t(m.rows()) <= cap && std::size_t(m.cols()) <= cap,
          errc::too_large,
          "operator dimensions " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()) + " exceed cap " + std::to_string(cap));
}

std::vector<double> full_svd_values(const matrix& m, unsigned k) {
  Eigen::BDCSVD<matrix> svd(m);
  const auto& sv = svd.singularValues();
  std::vector<double> out;
  for (unsigned i = 0; i < k; ++i)
    out.push_back(i < unsigned(sv.size()) ? sv(i) : 0.0);
  return out;
}

// Subspace iteration on the Gram matrix of the thin side, with Rayleigh-Ritz
// value extraction each sweep.  Deterministic: fixed-seed start block.
std::vector<double> iterative_singular_values(const matrix& m, unsigned k) {
  // Work with the wide orientation so the iterated block lives on the smaller
  // side: want cols <= rows for A^T A to be the small Gram matrix.
  const matrix& a = m;
  bool transposed = a.cols() > a.rows();
  matrix work = transposed ? matrix(a.transpose()) : a;
  const Eigen::Index q = work.cols();
  if (q == 0 || work.rows() == 0) return std::vector<double>(k, 0.0);

  const unsigned block = std::min<Eigen::Index>(q, std::max<unsigned>(k + 4, 8));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  matrix x(q, block);
  for (Eigen::Index i = 0; i < q; ++i)
    for (unsigned j = 0; j < block; ++j) x(i, j) = gauss(rng);
  {
    Eigen::HouseholderQR<matrix> qr(x);
    x = qr.householderQ() * matrix::Identity(q, block);
  }

  std::vector<double> prev(k, -1.0);
  std::vector<double> current(k, 0.0);
  for (unsigned iter = 0; iter < max_power_iterations; ++iter) {
    matrix b = work * x;                       // rows x block
    matrix t = b.transpose() * b;              // block x block, PSD
    Eigen::SelfAdjointEigenSolver<matrix> es(t);
    // Ritz values descending; rotate the block onto the Ritz directions.
    matrix v = es.eigenvectors();
    vec vals = es.eigenvalues();
    for (unsigned i = 0; i < k; ++i) {
      Eigen::Index idx = vals.size() - 1 - i;
      current[i] = idx >= 0 ? std::sqrt(std::max(0.0, vals(idx))) : 0.0;
    }
    bool done = true;
    for (unsigned i = 0; i < k; ++i)
      if (std::abs(current[i] - prev[i]) > ritz_tol) done = false;
    if (done && iter > 2) return current;
    prev = current;

    matrix y = work.transpose() * b;           // q x block
    // Rotate toward Ritz directions (descending order) before re-orthonormalizing.
    matrix rotated(q, block);
    for (unsigned j = 0; j < block; ++j)
      rotated.col(j) = y * v.col(v.cols() - 1 - j);
    Eigen::HouseholderQR<matrix> qr(rotated);
    x = qr.householderQ() * matrix::Identity(q, block);
  }
  fail(errc::convergence_failure,
       "singular value iteration did not converge within " +
           std::to_string(max_power_iterations) + " sweeps");
}

}  // namespace

std::vector<double> top_singular_values(const matrix& m, unsigned k,
                                        std::size_t cap, bool force_iterative) {
  check_cap(m, cap);
  if (k == 0) return {};
  if (!force_iterative &&
      std::size_t(std::max(m.rows(), m.cols())) <= full_svd_threshold)
    return full_svd_values(m, k);
  return iterative_singular_values(m, k);
}

double second_singular_value(const matrix& m, std::size_t cap) {
  if (std::min(m.rows(), m.cols()) < 2) return 0.0;
  return top_singular_values(m, 2, cap)[1];
}

double operator_norm(const matrix& m, std::size_t cap) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return top_singular_values(m, 1, cap)[0];
}

double second_largest_eigenvalue(const matrix& m, std::size_t cap) {
  check_cap(m, cap);
  require(m.rows() == m.cols(), errc::precondition_violated,
          "eigenvalues of a non-square matrix");
  require(m.rows() >= 2, errc::precondition_violated,
          "second eigenvalue needs dimension >= 2");
  if (std::size_t(m.rows()) <= full_svd_threshold) {
    Eigen::SelfAdjointEigenSolver<matrix> es(m);
    return es.eigenvalues()(m.rows() - 2);
  }
  // Shift to positive definite so the top of the spectrum dominates, then
  // reuse the singular-value machinery (matrix is symmetric PSD after shift).
  double shift = m.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  matrix shifted = m + shift * matrix::Identity(m.rows(), m.cols());
  auto vals = top_singular_values(shifted, 2, cap, true);
  return vals[1] - shift;
}

matrix kronecker(const matrix& a, const matrix& b, std::size_t cap) {
  std::size_t rows = std::size_t(a.rows()) * std::size_t(b.rows());
  std::size_t cols = std::size_t(a.cols()) * std::size_t(b.cols());
  require(rows <= cap && cols <= cap, errc::too_large,
          "kronecker product dimensions exceed cap");
  matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_row_stochastic(const matrix& m, double tol) {
  if (m.minCoeff() < -tol) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::abs(m.row(i).sum() - 1.0) > tol) return false;
  return true;
}

matrix whiten_uniform(const matrix& m) {
  require(m.rows() > 0 && m.cols() > 0, errc::precondition_violated,
          "whitening an empty operator");
  return std::sqrt(double(m.cols()) / double(m.rows())) * m;
}

double binary_entropy(double p, double base) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h / std::log(base);
}

double entropy_potential(const std::vector<double>& prob_one,
                         const std::vector<double>& vertex_measure, double base) {
  require(prob_one.size() == vertex_measure.size(), errc::length_mismatch,
          "marginal and measure vectors differ in length");
  double total_mass = 0.0;
  for (double w : vertex_measure) total_mass += w;
  require(std::abs(total_mass - 1.0) <= 1e-9, errc::precondition_violated,
          "vertex measure must sum to 1");
  double value = 0.0;
  for (std::size_t i = 0; i < prob_one.size(); ++i) {
    double p = prob_one[i];
    require(!std::isnan(p), errc::missing_marginal,
            "no marginal for vertex " + std::to_string(i));
    require(p >= -1e-12 && p <= 1.0 + 1e-12, errc::precondition_violated,
            "marginal outside [0,1]");
    value += vertex_measure[i] * binary_entropy(std::clamp(p, 0.0, 1.0), base);
  }
  return value;
}

}  // namespace walklift
