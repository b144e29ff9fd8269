#include "walklift/rpp.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace walklift {

namespace {

// base^exp, or nullopt on overflow / when exceeding limit
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp,
                                         std::uint64_t limit) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && out > limit / base) return std::nullopt;
    out *= base;
    if (out > limit) return std::nullopt;
  }
  return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::uint64_t(-1) / a) return std::uint64_t(-1);
  return a * b;
}

vec signs_of(const word& z, std::size_t cloud) {
  vec s(z.size() * cloud);
  for (std::size_t v = 0; v < z.size(); ++v) {
    double sv = z.get(v) ? -1.0 : 1.0;
    for (std::size_t h = 0; h < cloud; ++h) s[v * cloud + h] = sv;
  }
  return s;
}

}  // namespace

wide_replacement_product::wide_replacement_product(rotation_graph outer,
                                                   rotation_graph inner,
                                                   unsigned s)
    : outer_(std::move(outer)), inner_(std::move(inner)), s_(s) {
  require(s_ >= 1, errc::precondition_violated, "width must be at least 1");
  d1_ = outer_.degree();
  require(d1_ >= 2, errc::precondition_violated,
          "outer degree must be at least 2");
  require(outer_.phi().has_value(), errc::precondition_violated,
          "outer graph must be locally invertible");
  auto cloud = checked_pow(d1_, s_, std::uint64_t(1) << 40);
  require(cloud.has_value() && *cloud == inner_.num_vertices(),
          errc::precondition_violated,
          "inner graph must have (outer degree)^width vertices");
  coordinate_stride_.resize(s_ + 1);
  coordinate_stride_[0] = 1;
  for (unsigned i = 0; i < s_; ++i)
    coordinate_stride_[i + 1] = coordinate_stride_[i] * d1_;
}

std::uint32_t wide_replacement_product::cloud_coordinate(std::uint64_t h,
                                                         unsigned i) const {
  require(i < s_, errc::index_out_of_range, "coordinate index");
  return std::uint32_t((h / coordinate_stride_[i]) % d1_);
}

std::pair<std::uint32_t, std::uint64_t> wide_replacement_product::rot_i(
    unsigned i, std::uint32_t v, std::uint64_t h) const {
  require(i < s_, errc::index_out_of_range, "operator index");
  std::uint64_t a = (h / coordinate_stride_[i]) % d1_;
  auto [v_next, a_next] = outer_.rot(v, std::size_t(a));
  std::uint64_t h_next = h + (std::uint64_t(a_next) - a) * coordinate_stride_[i];
  return {v_next, h_next};
}

std::uint64_t wide_replacement_product::g_permutation(unsigned i,
                                                      std::uint64_t pv) const {
  auto [v, h] = std::pair<std::uint32_t, std::uint64_t>{outer_component(pv),
                                                        cloud_component(pv)};
  auto [v_next, h_next] = rot_i(i, v, h);
  return vertex_index(v_next, h_next);
}

std::uint64_t wide_replacement_product::walk_step(unsigned i, std::uint64_t pv,
                                                  std::uint32_t alpha,
                                                  std::uint32_t beta) const {
  require(alpha < inner_degree() && beta < inner_degree(),
          errc::index_out_of_range, "step digit");
  std::uint32_t v = outer_component(pv);
  std::uint64_t h = inner_.neighbor(cloud_component(pv), alpha);
  std::uint64_t mid = g_permutation(i, vertex_index(v, h));
  return vertex_index(outer_component(mid),
                      inner_.neighbor(cloud_component(mid), beta));
}

std::uint32_t wide_replacement_product::step_multiplicity(unsigned i,
                                                          std::uint64_t from,
                                                          std::uint64_t to) const {
  std::uint32_t count = 0;
  std::uint32_t d2 = std::uint32_t(inner_degree());
  for (std::uint32_t alpha = 0; alpha < d2; ++alpha)
    for (std::uint32_t beta = 0; beta < d2; ++beta)
      if (walk_step(i, from, alpha, beta) == to) ++count;
  return count;
}

vec wide_replacement_product::apply_cloud(const vec& x) const {
  require(std::size_t(x.size()) == num_vertices(), errc::length_mismatch,
          "vector length must match product size");
  std::size_t c = cloud_size(), d2 = inner_degree();
  vec out = vec::Zero(x.size());
  for (std::size_t v = 0; v < outer_size(); ++v) {
    std::size_t base = v * c;
    for (std::size_t h = 0; h < c; ++h) {
      double acc = 0;
      for (std::size_t j = 0; j < d2; ++j)
        acc += x[base + inner_.neighbor(h, j)];
      out[base + h] = acc / double(d2);
    }
  }
  return out;
}

vec wide_replacement_product::apply_g_permutation(unsigned i, const vec& x) const {
  require(std::size_t(x.size()) == num_vertices(), errc::length_mismatch,
          "vector length must match product size");
  vec out(x.size());
  for (std::uint64_t pv = 0; pv < std::uint64_t(x.size()); ++pv)
    out[pv] = x[g_permutation(i, pv)];
  return out;
}

vec wide_replacement_product::apply_step(unsigned i, const vec& x) const {
  return apply_cloud(apply_g_permutation(i, apply_cloud(x)));
}

matrix wide_replacement_product::step_operator(unsigned i, std::size_t cap) const {
  require(i < s_, errc::index_out_of_range, "operator index");
  std::size_t n = num_vertices();
  require(n <= cap, errc::dimension_too_large,
          "product has " + std::to_string(n) + " vertices, cap " +
              std::to_string(cap));
  matrix m(n, n);
  vec e = vec::Zero(n);
  for (std::size_t col = 0; col < n; ++col) {
    e[col] = 1;
    m.col(col) = apply_step(i, e);
    e[col] = 0;
  }
  return m;
}

walk_space::walk_space(const wide_replacement_product& product, unsigned k1,
                       unsigned k2, std::uint64_t walk_cap)
    : product_(&product), k1_(k1), k2_(k2) {
  require(k1 <= k2, errc::bad_indices, "walk interval must satisfy k1 <= k2");
  std::uint64_t d2 = product.inner_degree();
  digit_base_ = d2 * d2;
  unsigned steps = k2_ - k1_;
  digit_stride_.resize(steps + 1);
  digit_stride_[steps] = 1;  // stride for an imaginary digit past the end
  std::uint64_t acc = 1;
  for (unsigned tau = steps; tau-- > 0;) {
    acc = saturating_mul(acc, digit_base_);
    digit_stride_[tau] = acc;
  }
  count_ = saturating_mul(product.num_vertices(), acc);
  require(count_ != std::uint64_t(-1), errc::too_many_walks,
          "walk count overflows");
  require(count_ <= walk_cap, errc::too_many_walks,
          "walk space needs " + std::to_string(count_) + " walks, cap " +
              std::to_string(walk_cap));
}

std::uint64_t walk_space::start_vertex(std::uint64_t rank) const {
  require(rank < count_, errc::index_out_of_range, "walk rank");
  return rank / digit_stride_[0];
}

std::uint64_t walk_space::digit(std::uint64_t rank, unsigned tau) const {
  require(rank < count_, errc::index_out_of_range, "walk rank");
  require(tau >= k1_ && tau < k2_, errc::index_out_of_range, "step time");
  return (rank / digit_stride_[tau - k1_ + 1]) % digit_base_;
}

std::vector<std::uint64_t> walk_space::vertices(std::uint64_t rank) const {
  require(rank < count_, errc::index_out_of_range, "walk rank");
  std::vector<std::uint64_t> out;
  out.reserve(arity());
  std::uint64_t pv = start_vertex(rank);
  out.push_back(pv);
  std::uint64_t d2 = product_->inner_degree();
  for (unsigned tau = k1_; tau < k2_; ++tau) {
    std::uint64_t delta = digit(rank, tau);
    pv = product_->walk_step(tau % product_->width(), pv,
                             std::uint32_t(delta / d2), std::uint32_t(delta % d2));
    out.push_back(pv);
  }
  return out;
}

std::uint64_t walk_space::end_vertex(std::uint64_t rank) const {
  return vertices(rank).back();
}

std::uint64_t walk_space::rank_of(std::uint64_t start,
                                  const std::vector<std::uint32_t>& digits) const {
  require(start < product_->num_vertices(), errc::index_out_of_range,
          "start vertex");
  require(digits.size() == num_steps(), errc::length_mismatch,
          "digit string length");
  std::uint64_t rank = start;
  for (unsigned tau = 0; tau < num_steps(); ++tau) {
    require(digits[tau] < digit_base_, errc::index_out_of_range, "step digit");
    rank = rank * digit_base_ + digits[tau];
  }
  return rank;
}

walk_space enumerate_walks(const wide_replacement_product& product, unsigned k1,
                           unsigned k2, std::uint64_t walk_cap) {
  return walk_space(product, k1, k2, walk_cap);
}

double exact_lift_bias(const wide_replacement_product& product, const word& z,
                       unsigned t, std::size_t cap) {
  require(z.size() == product.outer_size(), errc::length_mismatch,
          "word length must match the outer vertex count");
  require(t >= 1, errc::precondition_violated, "walk length must be at least 1");
  require(product.num_vertices() <= cap, errc::dimension_too_large,
          "product too large for dense evaluation");
  vec signs = signs_of(z, product.cloud_size());
  vec w = vec::Ones(product.num_vertices());
  for (unsigned tau = 0; tau + 1 < t; ++tau) {
    w = w.cwiseProduct(signs);
    w = product.apply_step(tau % product.width(), w);
  }
  w = w.cwiseProduct(signs);
  return std::abs(w.mean());
}

double bias_upper_bound(double sigma2_h_squared, unsigned s, unsigned t) {
  require(s >= 5, errc::width_too_small,
          "bias bound requires width at least 5");
  require(t >= 1, errc::precondition_violated, "walk length must be at least 1");
  require(sigma2_h_squared >= 0.0 && sigma2_h_squared <= 1.0,
          errc::precondition_violated, "sigma2 must lie in [0, 1]");
  double x = sigma2_h_squared;
  double factor = std::pow(x, s - 1) + (s - 1) * std::pow(x, s - 2) +
                  double(s - 1) * (s - 1) * std::pow(x, s - 4);
  return std::pow(factor, double((t - 1) / s));
}

double untweaked_block_bound(double sigma2_h, unsigned s) {
  require(s >= 3, errc::width_too_small,
          "block bound requires width at least 3");
  require(sigma2_h >= 0.0 && sigma2_h <= 1.0, errc::precondition_violated,
          "sigma2 must lie in [0, 1]");
  double x = sigma2_h;
  return std::pow(x, s) + double(s) * std::pow(x, s - 1) +
         double(s) * s * std::pow(x, s - 3);
}

namespace {

bool inner_is_translation_scheme(const wide_replacement_product& p) {
  std::size_t d1 = p.outer_degree();
  if (d1 & (d1 - 1)) return false;  // needs a power-of-two outer degree
  const rotation_graph& h = p.inner();
  std::size_t c = h.num_vertices();
  if (c & (c - 1)) return false;
  for (std::size_t j = 0; j < h.degree(); ++j) {
    std::uint64_t gen = h.neighbor(0, j);
    for (std::size_t v = 0; v < c; ++v) {
      auto [u, back] = h.rot(v, j);
      if (u != (v ^ gen) || back != j) return false;
    }
  }
  return true;
}

}  // namespace

bool pseudorandomness_identity_check(const wide_replacement_product& product,
                                     const word& z, unsigned k1, unsigned k2,
                                     const vec& v, const vec& w, double tol) {
  std::size_t n = product.outer_size();
  require(z.size() == n, errc::length_mismatch,
          "word length must match the outer vertex count");
  require(std::size_t(v.size()) == n && std::size_t(w.size()) == n,
          errc::length_mismatch, "test vectors must live on the outer graph");
  require(k1 <= k2 && k2 < product.width(), errc::bad_indices,
          "operator interval must satisfy k1 <= k2 < width");
  require(inner_is_translation_scheme(product), errc::precondition_violated,
          "identity requires a translation-scheme inner graph on F_2^m");

  std::size_t c = product.cloud_size();
  std::size_t big = product.num_vertices();
  vec signs = signs_of(z, c);

  vec x(big);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t h = 0; h < c; ++h) x[u * c + h] = w[u];
  for (unsigned i = k1; i <= k2; ++i) {
    x = x.cwiseProduct(signs);
    x = product.apply_cloud(x);
    x = product.apply_g_permutation(i, x);
  }
  double lhs = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t h = 0; h < c; ++h) lhs += v[u] * x[u * c + h];
  lhs /= double(big);

  matrix walk = product.outer().normalized_adjacency();
  vec r = w;
  for (unsigned rep = 0; rep <= k2 - k1; ++rep) {
    for (std::size_t u = 0; u < n; ++u) r[u] *= z.get(u) ? -1.0 : 1.0;
    r = walk * r;
  }
  double rhs = v.dot(r) / double(n);

  return std::abs(lhs - rhs) <= tol;
}

zigzag_report zigzag_spectral_checks(const wide_replacement_product& product,
                                     std::size_t cap) {
  zigzag_report rep;
  rep.sigma_g = product.outer().sigma2(cap);
  rep.sigma_h = product.inner().sigma2(cap);
  rep.coarse_bound = rep.sigma_g + 2 * rep.sigma_h + rep.sigma_h * rep.sigma_h;
  rep.refined_applicable = rep.sigma_g <= rep.sigma_h;
  rep.refined_bound = 2 * rep.sigma_h;
  for (unsigned i = 0; i < product.width(); ++i) {
    double sigma = second_singular_value(product.step_operator(i, cap), cap);
    rep.step_sigma.push_back(sigma);
    require(sigma <= rep.coarse_bound + 1e-9, errc::bound_violated,
            "step operator " + std::to_string(i) +
                " exceeds the zig-zag bound");
    if (rep.refined_applicable)
      require(sigma <= rep.refined_bound + 1e-9, errc::bound_violated,
              "step operator " + std::to_string(i) +
                  " exceeds the refined zig-zag bound");
  }
  return rep;
}

sign_product_report sign_product_norm_check(const wide_replacement_product& product,
                                            const word& z, double theta,
                                            std::size_t cap) {
  require(product.width() >= 3, errc::width_too_small,
          "norm check requires width at least 3");
  require(z.size() == product.outer_size(), errc::length_mismatch,
          "word length must match the outer vertex count");
  std::size_t big = product.num_vertices();
  require(big <= cap, errc::dimension_too_large,
          "product too large for dense evaluation");

  sign_product_report rep;
  double sigma_g = product.outer().sigma2(cap);
  double sigma_h = product.inner().sigma2(cap);
  rep.premise_lhs = to_double(bias(z)) + 2 * theta + 2 * sigma_g;
  rep.premise_rhs = sigma_h * sigma_h;
  rep.premise_holds = rep.premise_lhs <= rep.premise_rhs;

  vec signs = signs_of(z, product.cloud_size());
  matrix m = matrix::Identity(big, big);
  for (unsigned i = 0; i < product.width(); ++i) {
    for (std::size_t col = 0; col < big; ++col) {
      vec x = m.col(col);
      x = product.apply_cloud(x);
      x = product.apply_g_permutation(i, x);
      m.col(col) = x.cwiseProduct(signs);
    }
  }
  rep.norm = operator_norm(m, cap);
  rep.bound = untweaked_block_bound(sigma_h, product.width());
  rep.pass = !rep.premise_holds || rep.norm <= rep.bound + 1e-9;
  return rep;
}

}  // namespace walklift
