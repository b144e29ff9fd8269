#include "walklift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace walklift {

void walk_collection::validate() const {
  require(arity >= 1, errc::precondition_violated, "collection arity must be >= 1");
  require(!tuples.empty(), errc::precondition_violated, "collection must be nonempty");
  require(tuples.size() % arity == 0, errc::precondition_violated,
          "tuple buffer length must be a multiple of the arity");
  require(projection.size() == ground_size, errc::length_mismatch,
          "projection must cover the ground set");
  for (std::uint64_t e : tuples)
    require(e < ground_size, errc::index_out_of_range, "tuple entry out of range");
  for (std::uint64_t p : projection)
    require(p < base_size, errc::index_out_of_range, "projection entry out of range");
}

walk_collection explicit_collection(std::size_t ground_size, unsigned arity,
                                    std::vector<std::uint64_t> tuples) {
  walk_collection w;
  w.ground_size = ground_size;
  w.base_size = ground_size;
  w.arity = arity;
  w.tuples = std::move(tuples);
  w.projection.resize(ground_size);
  std::iota(w.projection.begin(), w.projection.end(), std::uint64_t(0));
  w.origin = walk_collection::provenance::explicit_list;
  w.validate();
  return w;
}

word direct_sum_lift(const word& z, const walk_collection& w) {
  require(z.size() == w.base_size, errc::length_mismatch,
          "word length must match the collection's base size");
  word out(w.count());
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    bool bit = false;
    for (unsigned i = 0; i < w.arity; ++i)
      bit ^= z.get(w.base_position(t, i));
    out.set(t, bit);
  }
  return out;
}

walk_collection expander_walk_collection(const rotation_graph& g, unsigned t,
                                         std::uint64_t walk_cap) {
  require(t >= 1, errc::precondition_violated, "walks need at least one vertex");
  std::uint64_t count = g.num_vertices();
  for (unsigned i = 0; i + 1 < t; ++i) {
    require(count <= walk_cap / g.degree(), errc::too_many_walks,
            "walk count exceeds the cap");
    count *= g.degree();
  }
  require(count <= walk_cap, errc::too_many_walks, "walk count exceeds the cap");

  walk_collection w;
  w.ground_size = g.num_vertices();
  w.base_size = g.num_vertices();
  w.arity = t;
  w.origin = walk_collection::provenance::graph_walks;
  w.projection.resize(w.ground_size);
  std::iota(w.projection.begin(), w.projection.end(), std::uint64_t(0));
  w.tuples.reserve(count * t);
  std::uint64_t labels = count / g.num_vertices();  // d^{t-1}
  for (std::uint64_t v = 0; v < g.num_vertices(); ++v) {
    for (std::uint64_t code = 0; code < labels; ++code) {
      std::uint32_t u = std::uint32_t(v);
      w.tuples.push_back(u);
      // labels big-endian: first step in the highest-order position
      for (unsigned step = 1; step < t; ++step) {
        std::uint64_t divisor = 1;
        for (unsigned rest = step + 1; rest < t; ++rest) divisor *= g.degree();
        std::uint64_t label = (code / divisor) % g.degree();
        u = g.neighbor(u, label);
        w.tuples.push_back(u);
      }
    }
  }
  return w;
}

walk_collection product_walk_collection(const wide_replacement_product& p,
                                        unsigned k1, unsigned k2,
                                        std::uint64_t walk_cap) {
  walk_space ws(p, k1, k2, walk_cap);
  walk_collection w;
  w.ground_size = p.num_vertices();
  w.base_size = p.outer_size();
  w.arity = ws.arity();
  w.origin = walk_collection::provenance::product_walks;
  w.projection.resize(w.ground_size);
  for (std::uint64_t pv = 0; pv < w.ground_size; ++pv)
    w.projection[pv] = p.outer_component(pv);
  w.tuples.reserve(ws.count() * w.arity);
  for (std::uint64_t rank = 0; rank < ws.count(); ++rank)
    for (std::uint64_t pv : ws.vertices(rank)) w.tuples.push_back(pv);
  return w;
}

namespace {

// in-place integer Walsh-Hadamard transform
void walsh_hadamard(std::vector<std::int64_t>& a) {
  for (std::size_t len = 1; len < a.size(); len <<= 1)
    for (std::size_t block = 0; block < a.size(); block += 2 * len)
      for (std::size_t i = block; i < block + len; ++i) {
        std::int64_t u = a[i], v = a[i + len];
        a[i] = u + v;
        a[i + len] = u - v;
      }
}

rational index_bias(std::uint64_t z, unsigned n) {
  std::int64_t w = std::int64_t(__builtin_popcountll(z));
  std::int64_t num = std::int64_t(n) - 2 * w;
  return rational(bigint(num < 0 ? -num : num), bigint(n));
}

}  // namespace

rational parity_sampling_measure(const walk_collection& w, const rational& eps0) {
  w.validate();
  require(w.base_size <= 20, errc::ground_set_too_large,
          "exhaustive certification handles at most 20 base positions");
  unsigned n = unsigned(w.base_size);
  std::vector<std::int64_t> counts(std::size_t(1) << n, 0);
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    std::uint64_t mask = 0;
    for (unsigned i = 0; i < w.arity; ++i)
      mask ^= std::uint64_t(1) << w.base_position(t, i);
    ++counts[mask];
  }
  walsh_hadamard(counts);
  std::int64_t best = 0;
  for (std::uint64_t z = 0; z < counts.size(); ++z) {
    if (index_bias(z, n) > eps0) continue;
    std::int64_t v = counts[z] < 0 ? -counts[z] : counts[z];
    best = std::max(best, v);
  }
  return rational(bigint(best), bigint(w.count()));
}

rational parity_sampling_measure(const walk_collection& w, const rational& eps0,
                                 const std::vector<word>& words) {
  w.validate();
  rational best(0);
  for (const word& z : words) {
    require(z.size() == w.base_size, errc::length_mismatch,
            "tested word length must match the collection's base size");
    if (bias(z) > eps0) continue;
    rational b = bias(direct_sum_lift(z, w));
    if (b > best) best = b;
  }
  return best;
}

double walk_bias_bound(double eps0, double gamma, unsigned t) {
  require(t >= 1, errc::precondition_violated, "walks need at least one vertex");
  return std::pow(eps0 + 2 * gamma, double((t - 1) / 2));
}

split_operator::split_operator(const wide_replacement_product& p, unsigned k1,
                               unsigned k2, unsigned k3, std::size_t dim_cap,
                               std::uint64_t walk_cap)
    : product_(&p),
      k1_(k1),
      k2_(k2),
      k3_(k3),
      rows_(p, k1, k2, walk_cap),
      cols_(p, k2 + 1, k3, walk_cap) {
  require(k1 <= k2 && k2 < k3, errc::bad_indices,
          "split indices must satisfy k1 <= k2 < k3");
  require(rows_.count() <= dim_cap && cols_.count() <= dim_cap, errc::too_large,
          "split operator dimensions exceed the cap");
  std::uint64_t d2 = p.inner_degree();
  denominator_ = 1;
  for (unsigned i = 0; i < k3 - k2; ++i) {
    require(denominator_ <= std::uint64_t(-1) / (d2 * d2), errc::too_large,
            "split denominator overflows");
    denominator_ *= d2 * d2;
  }
  row_end_.resize(rows_.count());
  for (std::uint64_t r = 0; r < rows_.count(); ++r)
    row_end_[r] = rows_.end_vertex(r);

  std::uint64_t suffixes_per_start = cols_.count() / p.num_vertices();
  dense_ = matrix::Zero(Eigen::Index(rows_.count()), Eigen::Index(cols_.count()));
  std::vector<std::uint32_t> mult(p.num_vertices(), 0);
  std::vector<std::uint64_t> touched;
  unsigned op_index = k2 % p.width();
  std::uint32_t deg = std::uint32_t(d2);
  for (std::uint64_t r = 0; r < rows_.count(); ++r) {
    touched.clear();
    for (std::uint32_t alpha = 0; alpha < deg; ++alpha)
      for (std::uint32_t beta = 0; beta < deg; ++beta) {
        std::uint64_t u = p.walk_step(op_index, row_end_[r], alpha, beta);
        if (mult[u]++ == 0) touched.push_back(u);
      }
    for (std::uint64_t u : touched) {
      double value = double(mult[u]) / double(denominator_);
      dense_.block(Eigen::Index(r), Eigen::Index(u * suffixes_per_start), 1,
                   Eigen::Index(suffixes_per_start))
          .setConstant(value);
      mult[u] = 0;
    }
  }
}

std::uint32_t split_operator::numerator(std::uint64_t row, std::uint64_t col) const {
  return product_->step_multiplicity(k2_ % product_->width(), row_end_[row],
                                     cols_.start_vertex(col));
}

split_operator swap_operator(const wide_replacement_product& p, unsigned r,
                             std::size_t dim_cap, std::uint64_t walk_cap) {
  require((r + 1) % p.width() == 0, errc::bad_residue,
          "swap index must be -1 mod the product width");
  return split_operator(p, 0, r, 2 * r + 1, dim_cap, walk_cap);
}

tensor_structure_report verify_tensor_structure(const split_operator& s,
                                                std::uint64_t walk_cap) {
  const wide_replacement_product& p = s.product();
  tensor_structure_report rep;

  // independent joint enumeration: count (prefix, suffix) incidence
  walk_space joint(p, s.k1(), s.k3(), walk_cap);
  std::uint64_t rows = s.rows().count(), cols = s.cols().count();
  std::uint64_t b = joint.digit_base();
  unsigned prefix_steps = s.k2() - s.k1();
  std::vector<std::uint32_t> counts(rows * cols, 0);
  for (std::uint64_t rank = 0; rank < joint.count(); ++rank) {
    std::vector<std::uint64_t> verts = joint.vertices(rank);
    std::uint64_t prefix = joint.start_vertex(rank);
    for (unsigned tau = s.k1(); tau < s.k2(); ++tau)
      prefix = prefix * b + joint.digit(rank, tau);
    std::uint64_t suffix = verts[s.k2() + 1 - s.k1()];
    for (unsigned tau = s.k2() + 1; tau < s.k3(); ++tau)
      suffix = suffix * b + joint.digit(rank, tau);
    ++counts[prefix * cols + suffix];
  }

  // class sizes: equally many prefix walks must end at each product vertex
  std::vector<std::uint64_t> per_end(p.num_vertices(), 0);
  for (std::uint64_t r = 0; r < rows; ++r) ++per_end[s.row_end(r)];
  rep.class_sizes_uniform = true;
  for (std::uint64_t c : per_end)
    if (c != rows / p.num_vertices()) rep.class_sizes_uniform = false;

  // exact entry comparison against the binding-step multiplicities
  unsigned op_index = s.k2() % p.width();
  std::uint64_t suffixes_per_start = cols / p.num_vertices();
  std::vector<std::uint32_t> mult(p.num_vertices(), 0);
  rep.entries_match = true;
  for (std::uint64_t r = 0; r < rows && rep.entries_match; ++r) {
    std::fill(mult.begin(), mult.end(), 0);
    std::uint32_t deg = std::uint32_t(p.inner_degree());
    for (std::uint32_t alpha = 0; alpha < deg; ++alpha)
      for (std::uint32_t beta = 0; beta < deg; ++beta)
        ++mult[p.walk_step(op_index, s.row_end(r), alpha, beta)];
    for (std::uint64_t c = 0; c < cols; ++c)
      if (counts[r * cols + c] != mult[c / suffixes_per_start]) {
        rep.entries_match = false;
        break;
      }
  }

  rep.sigma2_split = second_singular_value(whiten_uniform(s.dense()));
  rep.sigma2_step = second_singular_value(p.step_operator(op_index));
  rep.pass = rep.class_sizes_uniform && rep.entries_match;
  return rep;
}

namespace {

void check_measures(const matrix& t, const std::vector<double>& row_measure,
                    const std::vector<double>& col_measure) {
  require(std::size_t(t.rows()) == row_measure.size() &&
              std::size_t(t.cols()) == col_measure.size(),
          errc::length_mismatch, "measure lengths must match operator shape");
  for (double m : row_measure)
    require(m > 0, errc::precondition_violated, "row measure must be positive");
  for (double m : col_measure)
    require(m > 0, errc::precondition_violated, "column measure must be positive");
}

}  // namespace

matrix measured_whitening(const matrix& t, const std::vector<double>& row_measure,
                          const std::vector<double>& col_measure) {
  check_measures(t, row_measure, col_measure);
  matrix out(t.rows(), t.cols());
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      out(i, j) = std::sqrt(row_measure[i]) * t(i, j) / std::sqrt(col_measure[j]);
  return out;
}

matrix adjoint_operator(const matrix& t, const std::vector<double>& row_measure,
                        const std::vector<double>& col_measure) {
  check_measures(t, row_measure, col_measure);
  matrix out(t.cols(), t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      out(j, i) = row_measure[i] * t(i, j) / col_measure[j];
  return out;
}

matrix symmetrized_operator(const matrix& t, const matrix& adj) {
  require(t.rows() == adj.cols() && t.cols() == adj.rows(), errc::length_mismatch,
          "adjoint shape must be the transpose of the operator shape");
  Eigen::Index n = t.rows() + t.cols();
  matrix out = matrix::Zero(n, n);
  out.block(0, t.rows(), t.rows(), t.cols()) = t;
  out.block(t.rows(), 0, t.cols(), t.rows()) = adj;
  return out;
}

double measured_sigma2(const matrix& t, const std::vector<double>& row_measure,
                       const std::vector<double>& col_measure, std::size_t cap) {
  return second_singular_value(measured_whitening(t, row_measure, col_measure), cap);
}

collection_split split_collection(const walk_collection& w, unsigned k1,
                                  unsigned k2, unsigned k3, std::size_t dim_cap) {
  w.validate();
  require(k1 <= k2 && k2 < k3 && k3 < w.arity, errc::bad_indices,
          "split positions must satisfy k1 <= k2 < k3 < arity");

  using key = std::vector<std::uint64_t>;
  std::map<key, std::size_t> prefix_index, suffix_index;
  auto restriction = [&](std::uint64_t t, unsigned a, unsigned b) {
    key k;
    k.reserve(b - a + 1);
    for (unsigned i = a; i <= b; ++i) k.push_back(w.entry(t, i));
    return k;
  };
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    prefix_index.emplace(restriction(t, k1, k2), 0);
    suffix_index.emplace(restriction(t, k2 + 1, k3), 0);
  }
  require(prefix_index.size() <= dim_cap && suffix_index.size() <= dim_cap,
          errc::too_large, "split dimensions exceed the cap");

  collection_split out;
  out.row_labels.reserve(prefix_index.size());
  for (auto& [k, idx] : prefix_index) {
    idx = out.row_labels.size();
    out.row_labels.push_back(k);
  }
  out.col_labels.reserve(suffix_index.size());
  for (auto& [k, idx] : suffix_index) {
    idx = out.col_labels.size();
    out.col_labels.push_back(k);
  }

  std::size_t nr = out.row_labels.size(), nc = out.col_labels.size();
  std::vector<std::uint64_t> joint(nr * nc, 0), row_count(nr, 0), col_count(nc, 0);
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    std::size_t i = prefix_index[restriction(t, k1, k2)];
    std::size_t j = suffix_index[restriction(t, k2 + 1, k3)];
    ++joint[i * nc + j];
    ++row_count[i];
    ++col_count[j];
  }

  out.op = matrix::Zero(Eigen::Index(nr), Eigen::Index(nc));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      out.op(Eigen::Index(i), Eigen::Index(j)) =
          double(joint[i * nc + j]) / double(row_count[i]);
  double total = double(w.count());
  out.row_measure.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) out.row_measure[i] = double(row_count[i]) / total;
  out.col_measure.resize(nc);
  for (std::size_t j = 0; j < nc; ++j) out.col_measure[j] = double(col_count[j]) / total;
  return out;
}

namespace {

void build_balanced(unsigned k1, unsigned k3, unsigned residue_modulus,
                    std::vector<split_node>& out) {
  if (k1 == k3) return;
  unsigned mid = (k1 + k3) / 2;
  unsigned k2 = mid;
  if (residue_modulus > 0) {
    unsigned target = residue_modulus - 1;
    // largest value <= mid congruent to target mod the modulus
    unsigned offset = (mid % residue_modulus + residue_modulus - target) % residue_modulus;
    if (mid >= offset && mid - offset >= k1) k2 = mid - offset;
  }
  out.push_back({k1, k2, k3});
  build_balanced(k1, k2, residue_modulus, out);
  build_balanced(k2 + 1, k3, residue_modulus, out);
}

}  // namespace

splitting_tree balanced_splitting_tree(unsigned k, unsigned residue_modulus) {
  require(k >= 1, errc::precondition_violated, "tree needs at least one leaf");
  splitting_tree t;
  t.leaves = k;
  build_balanced(0, k - 1, residue_modulus, t.internal);
  return t;
}

splitting_tree left_linear_splitting_tree(unsigned k) {
  require(k >= 1, errc::precondition_violated, "tree needs at least one leaf");
  splitting_tree t;
  t.leaves = k;
  for (unsigned k3 = k - 1; k3 >= 1; --k3) t.internal.push_back({0, k3 - 1, k3});
  return t;
}

splitting_tree make_splitting_tree(unsigned k, std::vector<split_node> internal) {
  require(k >= 1, errc::precondition_violated, "tree needs at least one leaf");
  require(internal.size() == std::size_t(k) - 1, errc::bad_indices,
          "a tree on k leaves has exactly k-1 internal nodes");
  std::map<std::pair<unsigned, unsigned>, unsigned> split_at;
  for (const split_node& n : internal) {
    require(n.k1 <= n.k2 && n.k2 < n.k3, errc::bad_indices,
            "internal node must split its interval");
    bool fresh = split_at.emplace(std::make_pair(n.k1, n.k3), n.k2).second;
    require(fresh, errc::bad_indices, "duplicate internal node interval");
  }
  splitting_tree t;
  t.leaves = k;
  std::vector<std::pair<unsigned, unsigned>> stack{{0, k - 1}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (a == b) continue;
    auto it = split_at.find({a, b});
    require(it != split_at.end(), errc::bad_indices,
            "missing internal node for interval");
    unsigned m = it->second;
    t.internal.push_back({a, m, b});
    split_at.erase(it);
    stack.push_back({m + 1, b});
    stack.push_back({a, m});
  }
  require(split_at.empty(), errc::bad_indices,
          "internal node not reachable from the root");
  return t;
}

splittability_certificate_t splittability_certificate(const walk_collection& w,
                                                      const splitting_tree& tree,
                                                      std::size_t dim_cap) {
  w.validate();
  require(tree.leaves == w.arity, errc::bad_indices,
          "tree leaf count must equal the collection arity");
  splittability_certificate_t cert;
  for (const split_node& n : tree.internal) {
    collection_split s = split_collection(w, n.k1, n.k2, n.k3, dim_cap);
    double sigma = measured_sigma2(s.op, s.row_measure, s.col_measure, dim_cap);
    cert.nodes.push_back({n, sigma});
    cert.tau = std::max(cert.tau, sigma);
  }
  return cert;
}

cascade::cascade(linear_code base, wide_replacement_product product,
                 unsigned depth, unsigned top_arity, std::uint64_t walk_cap)
    : base_(std::move(base)), product_(std::move(product)), depth_(depth),
      top_arity_(top_arity) {
  unsigned s = product_.width();
  require(depth_ >= 1, errc::precondition_violated, "cascade depth must be >= 1");
  require(top_arity_ >= s && top_arity_ <= s * s, errc::precondition_violated,
          "top arity must lie in [width, width^2]");
  require(base_.block_length() == product_.outer_size(), errc::length_mismatch,
          "base code length must equal the outer vertex count");

  std::uint64_t block = 1;  // s^{j-1}: product-walk vertices per ground element
  std::uint64_t prev_count = 0;
  for (unsigned j = 1; j <= depth_; ++j) {
    unsigned arity = (j < depth_) ? s : top_arity_;
    std::uint64_t vertices = block * arity;
    require(vertices <= 1u << 24, errc::too_large, "cascade walks too long");
    walk_space ws(product_, 0, unsigned(vertices) - 1, walk_cap);

    walk_collection col;
    col.arity = arity;
    col.origin = walk_collection::provenance::cascade_level;
    if (j == 1) {
      col.ground_size = product_.num_vertices();
      col.base_size = product_.outer_size();
      col.projection.resize(col.ground_size);
      for (std::uint64_t pv = 0; pv < col.ground_size; ++pv)
        col.projection[pv] = product_.outer_component(pv);
    } else {
      col.ground_size = prev_count;
      col.base_size = prev_count;
      col.projection.resize(prev_count);
      std::iota(col.projection.begin(), col.projection.end(), std::uint64_t(0));
    }

    std::uint64_t b = ws.digit_base();
    std::uint64_t d2 = product_.inner_degree();
    col.tuples.reserve(ws.count() * arity);
    for (std::uint64_t rank = 0; rank < ws.count(); ++rank) {
      std::uint64_t pv = ws.start_vertex(rank);
      for (unsigned blk = 0; blk < arity; ++blk) {
        std::uint64_t sub_rank = pv;
        for (std::uint64_t i = 0; i + 1 < block; ++i) {
          unsigned tau = unsigned(blk * block + i);
          std::uint64_t delta = ws.digit(rank, tau);
          sub_rank = sub_rank * b + delta;
          pv = product_.walk_step(tau % s, pv, std::uint32_t(delta / d2),
                                  std::uint32_t(delta % d2));
        }
        col.tuples.push_back(sub_rank);
        if (blk + 1 < arity) {
          unsigned tau = unsigned((blk + 1) * block - 1);
          std::uint64_t delta = ws.digit(rank, tau);
          pv = product_.walk_step(tau % s, pv, std::uint32_t(delta / d2),
                                  std::uint32_t(delta % d2));
        }
      }
    }
    // level-1 tuples are product vertices; higher levels index walk ranks
    levels_.push_back({std::move(col), unsigned(vertices)});
    prev_count = ws.count();
    block *= s;
  }
  total_vertices_ = levels_.back().vertices_per_tuple;
}

std::uint64_t cascade::level_length(unsigned j) const {
  require(j <= depth_, errc::index_out_of_range, "cascade level");
  if (j == 0) return base_.block_length();
  return levels_[j - 1].collection.count();
}

word cascade::encode_level(unsigned j, const word& lower) const {
  require(j >= 1 && j <= depth_, errc::index_out_of_range, "cascade level");
  return direct_sum_lift(lower, levels_[j - 1].collection);
}

word cascade::encode_base(const word& z) const {
  word cur = z;
  for (unsigned j = 1; j <= depth_; ++j) cur = encode_level(j, cur);
  return cur;
}

linear_code cascade::level_code(unsigned j) const {
  require(j <= depth_, errc::index_out_of_range, "cascade level");
  if (j == 0) return base_;
  std::vector<word> rows = base_.generator();
  for (unsigned lvl = 1; lvl <= j; ++lvl)
    for (word& r : rows) r = encode_level(lvl, r);
  return linear_code(std::move(rows), level_length(j));
}

cascade build_cascade(linear_code base, wide_replacement_product product,
                      unsigned depth, unsigned top_arity, std::uint64_t walk_cap) {
  return cascade(std::move(base), std::move(product), depth, top_arity, walk_cap);
}

word direct_walk_lift(const wide_replacement_product& p, const word& z,
                      unsigned t, std::uint64_t walk_cap) {
  require(z.size() == p.outer_size(), errc::length_mismatch,
          "word length must match the outer vertex count");
  require(t >= 1, errc::precondition_violated, "walks need at least one vertex");
  walk_space ws(p, 0, t - 1, walk_cap);
  std::uint64_t d2 = p.inner_degree();
  word out(ws.count());
  for (std::uint64_t rank = 0; rank < ws.count(); ++rank) {
    std::uint64_t pv = ws.start_vertex(rank);
    bool bit = z.get(p.outer_component(pv));
    for (unsigned tau = 0; tau + 1 < t; ++tau) {
      std::uint64_t delta = ws.digit(rank, tau);
      pv = p.walk_step(tau % p.width(), pv, std::uint32_t(delta / d2),
                       std::uint32_t(delta % d2));
      bit ^= z.get(p.outer_component(pv));
    }
    out.set(rank, bit);
  }
  return out;
}

}  // namespace walklift
