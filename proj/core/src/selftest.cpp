#include "walklift/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "walklift/decode.hpp"
#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/graphs.hpp"
#include "walklift/io.hpp"
#include "walklift/lifting.hpp"
#include "walklift/params.hpp"
#include "walklift/rpp.hpp"
#include "walklift/spectra.hpp"

namespace walklift {
namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

std::string error_text(const error& e) {
  return std::string(errc_name(e.kind())) + ": " + e.what();
}

/// Accumulates named expectations; keeps the first few failure messages.
struct checker {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::string first_failures;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (ok) return;
    ++failed;
    if (failed <= 4) {
      if (!first_failures.empty()) first_failures += "; ";
      first_failures += what;
    }
  }

  bool pass() const { return failed == 0; }

  std::string failure_text() const {
    std::ostringstream out;
    out << failed << "/" << total << " checks failed: " << first_failures;
    if (failed > 4) out << "; ...";
    return out.str();
  }
};

criterion_result finish(const checker& ck, const std::string& pass_detail) {
  criterion_result r;
  r.pass = ck.pass();
  r.detail = ck.pass() ? pass_detail : ck.failure_text();
  return r;
}

std::vector<std::uint32_t> complete_zn_gens(std::size_t n) {
  std::vector<std::uint32_t> gens;
  for (std::size_t g = 1; g < n; ++g) gens.push_back(std::uint32_t(g));
  return gens;
}

/// degree/2 random inverse-closed pairs (g, n-g); degree must be even.
std::vector<std::uint32_t> random_zn_gens(std::size_t n, unsigned degree,
                                          std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(1, std::uint32_t(n - 1));
  std::vector<std::uint32_t> gens;
  while (gens.size() < degree) {
    std::uint32_t g = pick(rng);
    gens.push_back(g);
    gens.push_back(std::uint32_t((n - g) % n));
  }
  return gens;
}

std::vector<std::uint32_t> random_f2m_gens(unsigned m, unsigned degree,
                                           std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << m) - 1);
  std::vector<std::uint32_t> gens;
  for (unsigned i = 0; i < degree; ++i) gens.push_back(pick(rng));
  return gens;
}

/// Every nonzero element of F_2^m once, plus `loops` zero generators.
std::vector<std::uint32_t> complete_f2m_gens(unsigned m, unsigned loops) {
  std::vector<std::uint32_t> gens;
  for (std::uint32_t g = 1; g < (1u << m); ++g) gens.push_back(g);
  for (unsigned i = 0; i < loops; ++i) gens.push_back(0);
  return gens;
}

// ---------------------------------------------------------------------------
// Shared fixture: a battery of replacement products with measured spectra.

struct zigzag_case {
  std::string label;
  bool ok = false;
  std::string err;
  zigzag_report report;
};

double max_step_sigma(const zigzag_report& r) {
  return *std::max_element(r.step_sigma.begin(), r.step_sigma.end());
}

const std::vector<zigzag_case>& zigzag_cases() {
  static const std::vector<zigzag_case> cases = [] {
    std::mt19937_64 rng(20260816u);
    std::vector<zigzag_case> out;

    auto inner_aghp = [](unsigned m, const rational& beta) {
      return cayley_f2m(m, aghp_generators(m, beta).generators);
    };
    auto add = [&out](std::string label, unsigned s, rotation_graph outer,
                      rotation_graph inner) {
      zigzag_case c;
      c.label = std::move(label);
      try {
        wide_replacement_product product(std::move(outer), std::move(inner), s);
        c.report = zigzag_spectral_checks(product);
        c.ok = true;
      } catch (const error& e) {
        c.err = error_text(e);
      }
      out.push_back(std::move(c));
    };

    const rational half(1, 2), quarter(1, 4);
    const rational three_quarters(3, 4), three_eighths(3, 8);

    // Width 1, outer degree 16 (inner alphabet F_2^4).
    add("s1 K17 a(4,1/2)", 1, cayley_zn(17, complete_zn_gens(17)),
        inner_aghp(4, half));
    add("s1 zn20 a(4,1/2)", 1, cayley_zn(20, random_zn_gens(20, 16, rng)),
        inner_aghp(4, half));
    add("s1 K17 a(4,1/4)", 1, cayley_zn(17, complete_zn_gens(17)),
        inner_aghp(4, quarter));
    add("s1 f2m4 a(4,1/4)", 1, cayley_f2m(4, random_f2m_gens(4, 16, rng)),
        inner_aghp(4, quarter));
    // Width 1, outer degree 256 (inner alphabet F_2^8).
    {
      std::vector<std::uint32_t> reps;
      for (int i = 0; i < 64; ++i) {
        reps.push_back(1);
        reps.push_back(4);
        reps.push_back(2);
        reps.push_back(3);
      }
      add("s1 zn5x64 a(8,1/2)", 1, cayley_zn(5, reps), inner_aghp(8, half));
    }
    // Width 2, outer degree 4.
    add("s2 K5 a(4,1/2)", 2, cayley_zn(5, {1, 2, 3, 4}), inner_aghp(4, half));
    add("s2 zn8 a(4,1/2)", 2, cayley_zn(8, {1, 7, 2, 6}), inner_aghp(4, half));
    add("s2 zn64 a(4,1/2)", 2, cayley_zn(64, random_zn_gens(64, 4, rng)),
        inner_aghp(4, half));
    add("s2 K5 a(4,1/4)", 2, cayley_zn(5, {1, 2, 3, 4}), inner_aghp(4, quarter));
    add("s2 f2m2 a(4,1/4)", 2, cayley_f2m(2, {1, 2, 3, 3}),
        inner_aghp(4, quarter));
    add("s2 zn32 a(4,1/4)", 2, cayley_zn(32, random_zn_gens(32, 4, rng)),
        inner_aghp(4, quarter));
    // Width 2, outer degree 8 (inner alphabet F_2^6).
    add("s2 K9 a(6,3/4)", 2, cayley_zn(9, complete_zn_gens(9)),
        inner_aghp(6, three_quarters));
    add("s2 zn24 a(6,3/4)", 2, cayley_zn(24, random_zn_gens(24, 8, rng)),
        inner_aghp(6, three_quarters));
    add("s2 K9 a(6,3/8)", 2, cayley_zn(9, complete_zn_gens(9)),
        inner_aghp(6, three_eighths));
    // Width 2, outer degree 16 (inner alphabet F_2^8).
    add("s2 zn6 a(8,1/2)", 2, cayley_zn(6, random_zn_gens(6, 16, rng)),
        inner_aghp(8, half));
    // Width 3, outer degree 4 (inner alphabet F_2^6).
    add("s3 K5 a(6,3/4)", 3, cayley_zn(5, {1, 2, 3, 4}),
        inner_aghp(6, three_quarters));
    add("s3 zn12 a(6,3/4)", 3, cayley_zn(12, random_zn_gens(12, 4, rng)),
        inner_aghp(6, three_quarters));
    add("s3 K5 a(6,3/8)", 3, cayley_zn(5, {1, 2, 3, 4}),
        inner_aghp(6, three_eighths));
    add("s3 zn16 a(6,3/8)", 3, cayley_zn(16, random_zn_gens(16, 4, rng)),
        inner_aghp(6, three_eighths));
    add("s3 f2m2 a(6,3/4)", 3, cayley_f2m(2, {1, 2, 3, 3}),
        inner_aghp(6, three_quarters));
    add("s1 zn64 a(4,1/2)", 1, cayley_zn(64, random_zn_gens(64, 16, rng)),
        inner_aghp(4, half));
    add("s2 f2m3 a(6,3/4)", 2, cayley_f2m(3, random_f2m_gens(3, 8, rng)),
        inner_aghp(6, three_quarters));
    // Exact-spectrum inners whose sigma2 dominates the outer one, so the
    // two-sided refined bound is exercised away from its trivial range.
    add("s1 K17 K16", 1, cayley_zn(17, complete_zn_gens(17)),
        cayley_f2m(4, complete_f2m_gens(4, 0)));
    add("s2 K5 K16+7", 2, cayley_zn(5, {1, 2, 3, 4}),
        cayley_f2m(4, complete_f2m_gens(4, 7)));
    return out;
  }();
  return cases;
}

// ---------------------------------------------------------------------------
// Shared fixture: a desk-scale cascade with planted decoding trials.

struct decoding_fixture {
  cascade casc;
  linear_code top;
  decoder_config config;
  std::uint64_t top_distance_bits = 0;
  rational eta;
  bool encode_consistent = false;
  bool radius_covers_half_distance = false;
  std::size_t inside_count = 0;
  std::size_t outside_count = 0;
  std::vector<word> received;
  std::vector<std::optional<word>> expected;
  std::vector<std::optional<word>> unique_out;
};

const decoding_fixture& get_decoding_fixture() {
  static const decoding_fixture fx = [] {
    linear_code base = random_balanced_code(3, 8, rational(1, 2), 11);
    wide_replacement_product product(cayley_zn(8, {1, 7}),
                                     cayley_f2m(2, {1, 2}), 2);
    cascade casc = build_cascade(base, product, 2, 2);
    linear_code top = casc.level_code(2);
    const std::size_t n = top.block_length();  // 2048

    rational dist = code_distance(top);
    rational bits = dist * rational(bigint(n));
    std::uint64_t d_bits = numerator(bits).convert_to<std::uint64_t>();

    rational gap = rational(1, 2) - rational(bigint(d_bits - 1), bigint(2 * n));
    rational eta = gap * gap;
    const rational eta_cap(63, 1024);  // (1/16)(63/64)
    if (eta > eta_cap) eta = eta_cap;
    decoder_config config = make_decoder_config(rational(1, 5), eta);

    bool consistent = true;
    std::vector<word> codewords;
    for (std::uint64_t m = 0; m < top.num_codewords(); ++m) {
      codewords.push_back(top.codeword(m));
      if (casc.encode_base(casc.base().codeword(m)) != codewords.back())
        consistent = false;
    }

    std::mt19937_64 rng(777);
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = std::uint32_t(i);
    const std::uint64_t e_max = (d_bits - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> pick_errors(0, e_max);

    std::vector<word> received;
    std::vector<std::optional<word>> expected;
    const std::size_t inside = 1000, outside = 100;
    for (std::size_t trial = 0; trial < inside; ++trial) {
      std::uint64_t m = rng() & 7;
      word y = codewords[m];
      std::uint64_t e = pick_errors(rng);
      for (std::uint64_t i = 0; i < e; ++i) {
        std::uniform_int_distribution<std::size_t> pos(i, n - 1);
        std::swap(idx[i], idx[pos(rng)]);
        y.flip(idx[i]);
      }
      received.push_back(std::move(y));
      expected.emplace_back(casc.base().codeword(m));
    }
    for (std::size_t trial = 0; trial < outside; ++trial) {
      word y(n);
      bool far = false;
      while (!far) {
        for (std::size_t i = 0; i < n; ++i) y.set(i, rng() & 1);
        far = true;
        for (const word& cw : codewords)
          if (within_list_radius(cw, y, eta)) {
            far = false;
            break;
          }
      }
      received.push_back(std::move(y));
      expected.emplace_back(std::nullopt);
    }

    brute_force_backend backend;
    std::vector<std::optional<word>> unique_out;
    unique_out.reserve(received.size());
    for (const word& y : received)
      unique_out.push_back(cascade_unique_decode(casc, backend, y, config));

    bool covers = gap >= 0 && gap * gap >= eta;
    decoding_fixture out{std::move(casc),
                         std::move(top),
                         config,
                         d_bits,
                         eta,
                         consistent,
                         covers,
                         inside,
                         outside,
                         std::move(received),
                         std::move(expected),
                         std::move(unique_out)};
    return out;
  }();
  return fx;
}

// ---------------------------------------------------------------------------
// Criterion bodies.

criterion_result crit_spectral_zigzag() {
  checker ck;
  const auto& cases = zigzag_cases();
  ck.expect(cases.size() >= 20, "needs at least 20 product instances");
  double min_margin = 1e300;
  for (const auto& c : cases) {
    ck.expect(c.ok, c.label + " -> " + c.err);
    if (!c.ok) continue;
    double top = max_step_sigma(c.report);
    ck.expect(top <= c.report.coarse_bound + 1e-7,
              c.label + " step sigma2 " + fmt(top) + " above coarse bound " +
                  fmt(c.report.coarse_bound));
    min_margin = std::min(min_margin, c.report.coarse_bound - top);
  }
  std::ostringstream d;
  d << cases.size() << " replacement products; min coarse-bound margin "
    << fmt(min_margin);
  return finish(ck, d.str());
}

criterion_result crit_spectral_refined() {
  checker ck;
  const auto& cases = zigzag_cases();
  unsigned applicable = 0;
  double min_margin = 1e300;
  for (const auto& c : cases) {
    if (!c.ok) {
      ck.expect(false, c.label + " -> " + c.err);
      continue;
    }
    if (!c.report.refined_applicable) continue;
    ++applicable;
    double top = max_step_sigma(c.report);
    ck.expect(top <= c.report.refined_bound + 1e-7,
              c.label + " step sigma2 " + fmt(top) + " above refined bound " +
                  fmt(c.report.refined_bound));
    min_margin = std::min(min_margin, c.report.refined_bound - top);
  }
  ck.expect(applicable >= 2, "too few instances with sigma(G) <= sigma(H)");
  std::ostringstream d;
  d << applicable << " instances with sigma(G) <= sigma(H); min refined margin "
    << fmt(min_margin);
  return finish(ck, d.str());
}

criterion_result crit_split_tensor() {
  checker ck;
  wide_replacement_product p1(cayley_zn(4, {1, 3}), cayley_f2m(2, {1, 2, 3}),
                              2);
  wide_replacement_product p2(cayley_zn(2, {1, 1}), cayley_f2m(3, {1, 2}), 3);
  wide_replacement_product p3(cayley_zn(6, {1, 5}), cayley_f2m(1, {1}), 1);
  wide_replacement_product p4(cayley_zn(5, {1, 4, 2, 3}),
                              cayley_f2m(4, {1, 2, 4, 8, 15}), 2);

  std::size_t split_cases = 0;
  double max_gap = 0;
  auto run_case = [&](const split_operator& sp, const std::string& label) {
    tensor_structure_report rep = verify_tensor_structure(sp);
    ck.expect(rep.class_sizes_uniform, label + " class sizes");
    ck.expect(rep.entries_match, label + " entries");
    ck.expect(rep.pass, label + " structure");
    double gap = std::fabs(rep.sigma2_split - rep.sigma2_step);
    ck.expect(gap <= 1e-7, label + " sigma2 gap " + fmt(gap));
    max_gap = std::max(max_gap, gap);
    ++split_cases;
  };
  auto sweep = [&](const wide_replacement_product& p, const char* tag,
                   unsigned max_k1, unsigned max_len) {
    const std::uint64_t b =
        std::uint64_t(p.inner_degree()) * p.inner_degree();
    for (unsigned k1 = 0; k1 <= max_k1; ++k1)
      for (unsigned len = 1; len <= max_len; ++len) {
        unsigned k3 = k1 + len;
        std::uint64_t joint = p.num_vertices();
        for (unsigned i = 0; i < len; ++i) joint *= b;
        if (joint > 100000) continue;
        for (unsigned k2 = k1; k2 < k3; ++k2) {
          std::ostringstream label;
          label << tag << " S[" << k1 << "," << k2 << "," << k3 << "]";
          run_case(split_operator(p, k1, k2, k3), label.str());
        }
      }
  };
  sweep(p1, "p1", 2, 3);
  sweep(p2, "p2", 2, 4);
  sweep(p3, "p3", 1, 3);
  sweep(p4, "p4", 1, 2);
  run_case(swap_operator(p1, 1), "p1 swap r=1");
  run_case(swap_operator(p2, 2), "p2 swap r=2");
  run_case(swap_operator(p3, 0), "p3 swap r=0");

  std::ostringstream d;
  d << split_cases << " split operators over 4 products (3 via the swap "
    << "constructor); max sigma2 gap " << fmt(max_gap);
  return finish(ck, d.str());
}

criterion_result crit_parity_sampling() {
  checker ck;
  double min_margin = 1e300;
  std::size_t bound_checks = 0;
  const rational eps_list[2] = {rational(1, 8), rational(1, 4)};

  // Plain expander walks against (eps0 + 2 sigma)^floor((t-1)/2).
  struct graph_case {
    const char* tag;
    rotation_graph g;
    std::vector<unsigned> ts;
  };
  std::vector<graph_case> gcases;
  gcases.push_back({"K16", cayley_zn(16, complete_zn_gens(16)), {3, 5}});
  gcases.push_back({"K9", cayley_zn(9, complete_zn_gens(9)), {3, 4, 5, 6}});
  gcases.push_back({"F16", cayley_f2m(4, complete_f2m_gens(4, 0)), {3}});
  for (const auto& gc : gcases) {
    double sigma = gc.g.sigma2();
    for (unsigned t : gc.ts) {
      walk_collection w = expander_walk_collection(gc.g, t);
      for (const rational& e0 : eps_list) {
        double measured = to_double(parity_sampling_measure(w, e0));
        double bound = walk_bias_bound(to_double(e0), sigma, t);
        std::ostringstream label;
        label << gc.tag << " t=" << t << " eps0=" << format_rational(e0)
              << " measured " << fmt(measured) << " bound " << fmt(bound);
        ck.expect(measured <= bound + 1e-9, label.str());
        min_margin = std::min(min_margin, bound - measured);
        ++bound_checks;
      }
    }
  }

  // Tweaked product walks against the same form with the measured max step
  // sigma2 in place of the graph's.
  double product_measured = 0, product_bound = 0;
  {
    wide_replacement_product p5(cayley_zn(5, {1, 4}),
                                cayley_f2m(3, {1, 2, 4, 3}), 3);
    zigzag_report rep = zigzag_spectral_checks(p5);
    double tau = max_step_sigma(rep);
    const rational e0(1, 4);
    double m2 =
        to_double(parity_sampling_measure(product_walk_collection(p5, 0, 1), e0));
    double m3 =
        to_double(parity_sampling_measure(product_walk_collection(p5, 0, 2), e0));
    ck.expect(m2 <= walk_bias_bound(0.25, tau, 2) + 1e-9,
              "two-vertex product walks above bound");
    ck.expect(m3 <= walk_bias_bound(0.25, tau, 3) + 1e-9,
              "three-vertex product walks above bound");
    ck.expect(m2 <= 1.0 - 1e-6, "two-vertex product lift does not mix");
    ck.expect(m3 <= 1.0 - 1e-6, "three-vertex product lift does not mix");
    product_measured = m3;
    product_bound = walk_bias_bound(0.25, tau, 3);
    bound_checks += 2;
  }

  // Composed swap walks: three two-vertex blocks joined by the swap
  // operator, against (block bias + 2 sigma2(swap))^1.
  double composed_measured = 0, composed_bound = 0;
  {
    wide_replacement_product p6(cayley_zn(3, {1, 2}), cayley_f2m(2, {1, 2, 3}),
                                2);
    const rational e0(1, 3);
    double eps1 =
        to_double(parity_sampling_measure(product_walk_collection(p6, 0, 1), e0));
    double sw = verify_tensor_structure(swap_operator(p6, 1)).sigma2_split;
    double composed =
        to_double(parity_sampling_measure(product_walk_collection(p6, 0, 5), e0));
    composed_bound = walk_bias_bound(eps1, sw, 3);
    ck.expect(composed <= composed_bound + 1e-9,
              "composed swap walks above block bound");
    ck.expect(composed <= 1.0 - 1e-6, "composed lift does not mix");
    composed_measured = composed;
    ++bound_checks;
  }

  std::ostringstream d;
  d << bound_checks << " sampling bounds; min expander margin "
    << fmt(min_margin) << "; product walk " << fmt(product_measured) << " <= "
    << fmt(product_bound) << "; composed " << fmt(composed_measured) << " <= "
    << fmt(composed_bound);
  return finish(ck, d.str());
}

criterion_result crit_lift_bias() {
  checker ck;
  struct pcase {
    const char* tag;
    wide_replacement_product p;
    std::vector<unsigned> ts;
  };
  std::vector<pcase> cases;
  cases.push_back({"p1",
                   wide_replacement_product(cayley_zn(4, {1, 3}),
                                            cayley_f2m(2, {1, 2, 3}), 2),
                   {1, 2, 3}});
  cases.push_back({"p2",
                   wide_replacement_product(cayley_zn(2, {1, 1}),
                                            cayley_f2m(3, {1, 2}), 3),
                   {1, 2, 3, 4, 5}});
  cases.push_back({"p4",
                   wide_replacement_product(cayley_zn(5, {1, 4, 2, 3}),
                                            cayley_f2m(4, {1, 2, 4, 8, 15}), 2),
                   {1, 2}});
  double max_err = 0;
  std::size_t count = 0;
  for (const auto& c : cases) {
    std::size_t n = c.p.outer_size();
    for (unsigned t : c.ts)
      for (std::uint64_t zi = 0; zi < (std::uint64_t(1) << n); ++zi) {
        word z = word::from_index(zi, n);
        double enumerated = to_double(bias(direct_walk_lift(c.p, z, t)));
        double operator_value = exact_lift_bias(c.p, z, t);
        double err = std::fabs(enumerated - operator_value);
        std::ostringstream label;
        label << c.tag << " t=" << t << " z=" << zi << " err " << fmt(err);
        ck.expect(err <= 1e-10, label.str());
        max_err = std::max(max_err, err);
        ++count;
      }
  }
  std::ostringstream d;
  d << count << " (z, t) pairs on 3 products; max |enumerated - operator| = "
    << fmt(max_err);
  return finish(ck, d.str());
}

criterion_result crit_transfer_identity() {
  checker ck;
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t trials_run = 0;
  auto run = [&](const wide_replacement_product& p, const char* tag,
                 unsigned trials) {
    const std::size_t n = p.outer_size();
    const unsigned s = p.width();
    for (unsigned i = 0; i < trials; ++i) {
      word z = word::from_index(rng() & ((std::uint64_t(1) << n) - 1), n);
      unsigned k1 = unsigned(rng() % s);
      unsigned k2 = k1 + unsigned(rng() % (s - k1));
      vec v(n), w(n);
      for (std::size_t j = 0; j < n; ++j) {
        v[Eigen::Index(j)] = gauss(rng);
        w[Eigen::Index(j)] = gauss(rng);
      }
      std::ostringstream label;
      label << tag << " trial " << i << " k=[" << k1 << "," << k2 << "]";
      ck.expect(pseudorandomness_identity_check(p, z, k1, k2, v, w),
                label.str());
      ++trials_run;
    }
  };
  wide_replacement_product q1(cayley_zn(12, random_zn_gens(12, 4, rng)),
                              cayley_f2m(4, {1, 2, 4, 8}), 2);
  wide_replacement_product q2(cayley_zn(7, {1, 6, 2, 5, 3, 4, 1, 6}),
                              cayley_f2m(9, {1, 2, 4, 8}), 3);
  run(q1, "q1", 60);
  run(q2, "q2", 50);
  std::ostringstream d;
  d << trials_run
    << " random (z, interval, vectors) tuples on widths 2 and 3";
  return finish(ck, d.str());
}

criterion_result crit_cascade_equivalence() {
  checker ck;
  linear_code base({word::from_string("100"), word::from_string("010")}, 3);
  wide_replacement_product pa(cayley_zn(3, {1, 2}), cayley_f2m(2, {1, 2}), 2);
  wide_replacement_product pc(cayley_zn(3, {1, 2}), cayley_f2m(3, {1, 2}), 3);
  const std::uint64_t big_cap = std::uint64_t(1) << 21;

  std::vector<unsigned> tprimes;
  auto check = [&](const cascade& c, const wide_replacement_product& p,
                   const char* tag, std::uint64_t cap) {
    unsigned expected_t = c.top_arity();
    for (unsigned j = 1; j < c.depth(); ++j) expected_t *= c.width();
    ck.expect(c.total_vertices() == expected_t,
              std::string(tag) + " vertex count");
    tprimes.push_back(c.total_vertices());

    for (std::uint64_t m = 0; m < base.num_codewords(); ++m) {
      word z = base.codeword(m);
      word top = c.encode_base(z);
      word oracle = direct_walk_lift(p, z, c.total_vertices(), cap);
      std::ostringstream label;
      label << tag << " message " << m;
      ck.expect(top == oracle, label.str());
    }
    linear_code top_code = c.level_code(c.depth());
    ck.expect(top_code.block_length() == c.level_length(c.depth()),
              std::string(tag) + " top length");
    for (std::size_t i = 0; i < base.dimension(); ++i) {
      word oracle =
          direct_walk_lift(p, base.generator()[i], c.total_vertices(), cap);
      std::ostringstream label;
      label << tag << " generator " << i;
      ck.expect(top_code.generator()[i] == oracle, label.str());
    }
  };

  check(build_cascade(base, pa, 2, 2), pa, "depth2-arity2", default_walk_cap);
  check(build_cascade(base, pa, 3, 2), pa, "depth3-arity2", default_walk_cap);
  check(build_cascade(base, pc, 2, 3, big_cap), pc, "width3-arity3", big_cap);

  std::ostringstream d;
  d << "3 cascades (t' = ";
  for (std::size_t i = 0; i < tprimes.size(); ++i)
    d << (i ? ", " : "") << tprimes[i];
  d << ") equal the streaming direct lifts on every message and generator";
  return finish(ck, d.str());
}

criterion_result crit_unique_decoding() {
  checker ck;
  const decoding_fixture& fx = get_decoding_fixture();
  ck.expect(fx.encode_consistent, "cascade encoding disagrees with top code");
  ck.expect(fx.top_distance_bits >= 16, "top code distance degenerate");
  ck.expect(fx.radius_covers_half_distance,
            "list radius misses half the minimum distance");
  for (std::size_t i = 0; i < fx.received.size(); ++i) {
    bool ok = fx.unique_out[i] == fx.expected[i];
    if (!ok) {
      std::ostringstream label;
      label << (i < fx.inside_count ? "corrupted trial " : "far trial ") << i;
      ck.expect(false, label.str());
    } else {
      ck.expect(true, "");
    }
  }
  std::ostringstream d;
  d << fx.inside_count << " corrupted codewords recovered and "
    << fx.outside_count << " outside-radius words rejected; top distance "
    << fx.top_distance_bits << "/" << fx.top.block_length() << ", eta = "
    << format_rational(fx.eta);
  return finish(ck, d.str());
}

criterion_result crit_cover_prune() {
  checker ck;
  // Complete 5-tuple collection over a 12-point ground set: the lift bias of
  // z is exactly bias(z)^5, so the measure has a closed form.
  std::vector<std::uint64_t> tuples;
  tuples.reserve(248832ull * 5);
  for (std::uint64_t a = 0; a < 12; ++a)
    for (std::uint64_t b = 0; b < 12; ++b)
      for (std::uint64_t c = 0; c < 12; ++c)
        for (std::uint64_t d = 0; d < 12; ++d)
          for (std::uint64_t e = 0; e < 12; ++e) {
            tuples.push_back(a);
            tuples.push_back(b);
            tuples.push_back(c);
            tuples.push_back(d);
            tuples.push_back(e);
          }
  walk_collection w5 = explicit_collection(12, 5, std::move(tuples));
  rational premise = parity_sampling_measure(w5, rational(3, 4));
  ck.expect(premise == rational(32, 243),
            "complete 5-tuple measure is (2/3)^5, got " +
                format_rational(premise));
  ck.expect(premise <= rational(1, 4), "sampling premise");

  const rational zeta(1, 8), eta(1, 4);
  const rational threshold = rational(1) - 2 * zeta;

  // Three well-separated clusters; inside each, the satellites sit within
  // the 2 zeta ball of the center (one of them through its complement).
  std::vector<word> centers = {word(12), word::from_string("111111000000"),
                               word::from_string("111000111000")};
  decode_list entries;
  for (const word& c : centers) {
    word x1 = c;
    x1.flip(0);
    word x2 = c;
    x2.flip(1);
    x2 = x2.complemented();
    for (const word& b : {c, x1, x2})
      entries.push_back({b, direct_sum_lift(b, w5)});
  }

  for (unsigned k = 1; k <= 3; ++k) {
    decode_list sub(entries.begin(), entries.begin() + 3 * k);
    decode_list kept = zeta_cover_prune(sub, zeta, eta);
    std::ostringstream tag;
    tag << k << "-cluster list";
    ck.expect(kept.size() == k,
              tag.str() + " kept " + std::to_string(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        ck.expect(bias(kept[i].base ^ kept[j].base) <= threshold,
                  tag.str() + " kept entries still joined");
    for (const decode_entry& e : sub) {
      bool covered = false;
      for (const decode_entry& r : kept)
        if (e.base == r.base || bias(e.base ^ r.base) > threshold) {
          covered = true;
          break;
        }
      ck.expect(covered, tag.str() + " entry left uncovered");
    }
  }
  return finish(ck,
                "closed-form measure matches; greedy prune keeps exactly one "
                "entry per cluster (1, 2, 3) and covers every pruned entry");
}

criterion_result crit_fixed_branching() {
  checker ck;
  const decoding_fixture& fx = get_decoding_fixture();
  brute_force_backend backend;
  const double node_cap = std::pow(2.0 / to_double(fx.eta), 2.0);
  std::uint64_t max_nodes = 0;
  for (std::size_t i = 0; i < fx.received.size(); ++i) {
    fixed_poly_stats stats;
    std::optional<word> got =
        fixed_poly_decode(fx.casc, backend, fx.received[i], fx.config, &stats);
    if (got != fx.unique_out[i]) {
      std::ostringstream label;
      label << "disagrees with exhaustive cascade decoding on trial " << i;
      ck.expect(false, label.str());
    } else {
      ck.expect(true, "");
    }
    ck.expect(double(stats.nodes) <= node_cap, "branching tree too large");
    max_nodes = std::max(max_nodes, stats.nodes);
  }
  std::ostringstream d;
  d << "agrees with exhaustive cascade decoding on all "
    << fx.received.size() << " received words; max recursion nodes "
    << max_nodes << " <= " << fmt(node_cap);
  return finish(ck, d.str());
}

criterion_result crit_small_bias() {
  checker ck;
  struct acase {
    unsigned m;
    rational beta;
  };
  const acase cases[4] = {{4, rational(1, 2)},
                          {4, rational(1, 4)},
                          {8, rational(1, 2)},
                          {8, rational(1, 4)}};
  rational worst_ratio(0);
  std::ostringstream sizes;
  for (const acase& c : cases) {
    std::ostringstream tag;
    tag << "m=" << c.m << " beta=" << format_rational(c.beta);
    biased_set bs = aghp_generators(c.m, c.beta);
    rational q = rational(bigint(c.m)) / c.beta;
    bigint expected_size = numerator(q) * numerator(q);
    ck.expect(denominator(q) == 1 && bigint(bs.generators.size()) == expected_size,
              tag.str() + " generator count");
    rational certified = verify_small_bias(c.m, bs.generators);
    ck.expect(certified == bs.certified_bias, tag.str() + " stored certificate");
    ck.expect(certified <= c.beta, tag.str() + " bias above target");
    double sigma = cayley_f2m(c.m, bs.generators).sigma2();
    ck.expect(sigma <= to_double(c.beta) + 1e-9, tag.str() + " graph sigma2");
    ck.expect(std::fabs(sigma - to_double(certified)) <= 1e-9,
              tag.str() + " sigma2 differs from exact character maximum");
    rational ratio = certified / c.beta;
    if (ratio > worst_ratio) worst_ratio = ratio;
    sizes << (sizes.tellp() > 0 ? ", " : "") << bs.generators.size();
  }
  std::ostringstream d;
  d << "4 generator families (sizes " << sizes.str()
    << "); worst certified bias / target = " << fmt(to_double(worst_ratio));
  return finish(ck, d.str());
}

criterion_result crit_parameter_certificates() {
  checker ck;

  // Asymptotic-regime chains: walk-length bound + minimality + rate.
  struct pcase {
    std::uint64_t s;
    std::uint64_t x;
  };
  const pcase paper_grid[5] = {{128, 962072674304ull},
                               {128, 1000000000000ull},
                               {128, std::uint64_t(1) << 40},
                               {256, std::uint64_t(1) << 45},
                               {256, 100000000000000ull}};
  for (const pcase& c : paper_grid) {
    std::ostringstream tag;
    tag << "s=" << c.s << " x=" << c.x;
    param_set p = gamma(std::uint64_t(1) << 20, c.x, rational(1, bigint(c.s)),
                        1, param_mode::paper);
    walk_length_certificate wc = certify_walk_length(p);
    rate_certificate rc = rate_certify(p);
    ck.expect(wc.bound_holds, tag.str() + " walk-length bound");
    ck.expect(wc.minimal, tag.str() + " walk-length minimality");
    ck.expect(rc.walk_term_ok && rc.degree_term_ok && rc.pass,
              tag.str() + " rate certificate");
    ck.expect(rc.rate_exponent == rational(2) + rational(26, bigint(c.s)),
              tag.str() + " rate exponent");
  }

  // Desk-scale widths: the walk-length certificate and the degree-side rate
  // term stay checkable even where the walk-side rate term cannot hold.
  const pcase desk_grid[6] = {{8, 10000},   {8, 100000},  {8, 1000000},
                              {16, 100000}, {16, 1000000}, {32, 1000000}};
  for (const pcase& c : desk_grid) {
    std::ostringstream tag;
    tag << "desk s=" << c.s << " x=" << c.x;
    param_set p = gamma(1024, c.x, rational(1, bigint(c.s)), 1,
                        param_mode::desk);
    ck.expect(p.t >= 2, tag.str() + " walk length unset");
    walk_length_certificate wc = certify_walk_length(p);
    ck.expect(wc.bound_holds && wc.minimal, tag.str() + " walk-length");
    ck.expect(rate_certify(p).degree_term_ok, tag.str() + " degree term");
  }

  // Gates: weak targets are rejected in the asymptotic regime; the width-4
  // walk rule has no solution and is reported as t = 0 at desk scale.
  bool threw = false;
  try {
    gamma(1024, 1000000, rational(1, 128), 1, param_mode::paper);
  } catch (const error& e) {
    threw = e.kind() == errc::infeasible;
  }
  ck.expect(threw, "weak bias target accepted in asymptotic mode");
  ck.expect(gamma(1024, 1000, rational(1, 4), 1, param_mode::desk).t == 0,
            "width-4 walk rule unexpectedly soluble");

  // Cascade-arity adjustment: randomized exact sandwich.
  std::mt19937_64 rng(99);
  const std::uint64_t widths[5] = {2, 4, 8, 16, 32};
  for (unsigned i = 0; i < 1000; ++i) {
    std::uint64_t s = widths[rng() % 5];
    std::uniform_int_distribution<std::uint64_t> pick(s + 1, s * s * s);
    std::uint64_t t = pick(rng);
    param_set p{};
    p.alpha = rational(1, bigint(s));
    p.s = s;
    p.q = s;
    p.t = t;
    param_set adj = round_two_adjust(p);
    std::ostringstream tag;
    tag << "adjust s=" << s << " t=" << t;

    std::uint64_t s_pow = s;
    unsigned ell = 1;
    while (s_pow < t) {
      s_pow *= s;
      ++ell;
    }
    ck.expect(adj.ell == ell, tag.str() + " depth");
    if (s_pow == t) {
      ck.expect(adj.t_prime == t && adj.p == s, tag.str() + " grid point");
    } else {
      rational lo = rational(bigint(s)) * rational(bigint(t) - 1);
      rational mid(bigint(adj.t_prime) - 1);
      rational hi = (rational(1) + 2 * p.alpha) * rational(bigint(t) - 1) *
                    rational(bigint(s));
      ck.expect(lo <= mid && mid <= hi, tag.str() + " sandwich");
      ck.expect(adj.p >= s && adj.p <= s * s, tag.str() + " arity range");
      rational off = rational(bigint(adj.p), bigint(s)) -
                     rational(bigint(t), bigint(s_pow / s));
      ck.expect(off >= 0 && off <= rational(1, bigint(s)),
                tag.str() + " arity window");
    }
  }
  {
    param_set p{};
    p.alpha = rational(1, 2);
    p.s = 2;
    p.q = 2;
    p.t = 6;
    param_set adj = round_two_adjust(p);
    ck.expect(adj.ell == 3 && adj.p == 3 && adj.t_prime == 12 &&
                  adj.zeta_ratio == rational(3, 2),
              "t=6 adjustment");
  }
  {
    param_set p{};
    p.alpha = rational(1, 2);
    p.s = 2;
    p.q = 1;
    p.t = 8;
    param_set adj = round_two_adjust(p);
    ck.expect(adj.ell == 3 && adj.p == 2 && adj.t_prime == 8,
              "on-grid walk count must stay unchanged");
  }

  // Width selection from the bias target, and the amplified chain.
  ck.expect(round_three(1024, 64, param_mode::desk).params.s == 2,
            "width for x=64");
  ck.expect(round_three(1024, 1000000, param_mode::desk).params.s == 16,
            "width for x=10^6");
  {
    round_three_result rt =
        round_three(std::uint64_t(1) << 20, 1000000000000ull, param_mode::paper);
    const param_set& p = rt.params;
    ck.expect(p.s == 128 && p.q == 128, "amplified width and multiplier");
    ck.expect(std::fabs(rt.beta - 26.0 / 128.0) <= 1e-15, "amplification beta");
    ck.expect(rt.recursive_base, "recursive base flag");
    walk_length_certificate wc = certify_walk_length(p);
    rate_certificate rc = rate_certify(p);
    ck.expect(wc.bound_holds && wc.minimal && rc.pass, "amplified chain");
    ck.expect(rc.rate_exponent == rational(2) + rational(26, bigint(128)),
              "amplified rate exponent");
    param_set adj = round_two_adjust(p);
    ck.expect(adj.ell >= 2 && adj.t_prime >= p.t, "amplified cascade fields");
    ck.expect(adj.rate_exponent_bound == rational(2) + rational(40, bigint(128)),
              "adjusted rate exponent bound");
    param_set single = gamma(std::uint64_t(1) << 20, 1000000000000ull,
                             rational(1, 128), 1, param_mode::paper, true);
    ck.expect(round_two_lambda_check(p, single),
              "amplified lambda comparison");
  }

  // List-radius feasibility across widths.
  bool radius_threw = false;
  try {
    round_four_radius(4);
  } catch (const error& e) {
    radius_threw = e.kind() == errc::infeasible;
  }
  ck.expect(radius_threw, "width 4 must have no feasible radius");
  round_four_result r8 = round_four_radius(8);
  ck.expect(r8.log2_inv_eta == 7, "width-8 eta exponent");
  ck.expect(std::fabs(r8.radius - (0.5 - std::pow(2.0, -3.5))) <= 1e-12,
            "width-8 radius");
  ck.expect(round_four_radius(128).log2_inv_eta == 128,
            "width-128 eta exponent");

  // Framework thresholds.
  threshold_set th = thresholds(0.01, 64, 128);
  ck.expect(std::fabs(th.k0 - 34.02) <= 0.01, "base arity threshold");
  ck.expect(std::fabs(th.k0_prime - 144.71) <= 0.01, "refined arity threshold");
  ck.expect(std::fabs(std::round(th.k0_prime * 10.0) / 10.0 - 144.7) <= 1e-12,
            "refined arity threshold rounds to 144.7");
  ck.expect(th.splittability_gate, "splittability gate at width 128");
  ck.expect(!thresholds(0.01, 64, 8).splittability_gate,
            "splittability gate must fail at width 8");
  ck.expect(th.log2_tau0 < 0 && th.log2_l > 0, "threshold scales");

  return finish(ck,
                "5 asymptotic chains, 6 desk walk-length certificates, 1000 "
                "exact arity sandwiches, radius and threshold spot checks");
}

multilinear_poly make_poly(
    unsigned n,
    std::initializer_list<std::pair<std::uint64_t, rational>> terms) {
  multilinear_poly p = multilinear_poly::zero(n);
  for (const auto& t : terms) p.coefficients[t.first] += t.second;
  return p;
}

/// Evaluates at the +-1 point where bit i of minus_mask says z_i = -1.
rational eval_signs(const multilinear_poly& p, std::uint64_t minus_mask) {
  rational total(0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << p.n); ++mask) {
    const rational& c = p.coefficients[mask];
    if (c == 0) continue;
    total += (__builtin_popcountll(mask & minus_mask) & 1) ? -c : c;
  }
  return total;
}

rational rational_pow(rational base, unsigned e) {
  rational out(1);
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

criterion_result crit_derandomized_rounding() {
  checker ck;
  std::ostringstream traits;

  auto run_instance = [&](const char* tag, const multilinear_poly& a_poly,
                          const multilinear_poly& b_poly,
                          const std::vector<rational>& means, const rational& a,
                          const rational& beta, const rational& delta) {
    std::vector<rational> trajectory;
    word omega =
        derandomized_round(a_poly, b_poly, means, a, beta, delta, &trajectory);
    const unsigned n = a_poly.n;
    const std::uint64_t minus_mask = omega.to_index();
    const rational floor_value = a * (rational(1) - beta);
    rational value_a = eval_signs(a_poly, minus_mask);
    rational value_b = eval_signs(b_poly, minus_mask);
    rational abs_b = value_b < 0 ? -value_b : value_b;
    std::string t(tag);
    ck.expect(value_a >= floor_value, t + " witness weight");
    ck.expect(abs_b >= rational(1) - delta, t + " witness bias");
    ck.expect(trajectory.size() == n + 1, t + " trajectory length");
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < trajectory.size(); ++i)
      if (trajectory[i + 1] < trajectory[i]) monotone = false;
    ck.expect(monotone, t + " conditional expectations decreased");
    ck.expect(trajectory.front() >= floor_value, t + " premise value");

    const unsigned k =
        unsigned(std::ceil(std::log(1.0 / to_double(floor_value)) /
                           (2.0 * to_double(delta)))) +
        1;
    rational final_objective = value_a * rational_pow(value_b, 2 * k);
    ck.expect(trajectory.back() == final_objective,
              t + " endpoint is not the evaluated objective");
    rational best(-1);
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
      rational obj =
          eval_signs(a_poly, x) * rational_pow(eval_signs(b_poly, x), 2 * k);
      if (obj > best) best = obj;
    }
    ck.expect(final_objective <= best, t + " endpoint above exhaustive max");
    ck.expect(final_objective >= floor_value, t + " endpoint below threshold");
    traits << (traits.tellp() > 0 ? "; " : "") << tag << " |B| = "
           << fmt(to_double(abs_b)) << " >= " << fmt(1.0 - to_double(delta));
  };

  {
    multilinear_poly b = make_poly(4, {{0b0011, rational(1, 3)},
                                       {0b1100, rational(1, 3)},
                                       {0b0101, rational(1, 3)}});
    multilinear_poly a = make_poly(4, {{0, rational(1, 2)},
                                       {0b0011, rational(1, 2)}});
    run_instance("uniform", a, b, std::vector<rational>(4, rational(0)),
                 rational(1, 16), rational(1, 2), rational(1, 4));
  }
  {
    multilinear_poly b = make_poly(6, {{0b000011, rational(1, 4)},
                                       {0b001110, rational(1, 4)},
                                       {0b110000, rational(1, 4)},
                                       {0b100001, rational(1, 4)}});
    multilinear_poly a = make_poly(6, {{0, rational(1, 2)},
                                       {0b000001, rational(1, 2)}});
    std::vector<rational> means = {rational(1, 2),  rational(0), rational(0),
                                   rational(-1, 2), rational(0), rational(1, 2)};
    run_instance("biased-means", a, b, means, rational(1, 64), rational(1, 4),
                 rational(1, 8));
  }
  {
    multilinear_poly b = make_poly(8, {{0b00000011, rational(2, 5)},
                                       {0b00001011, rational(1, 5)},
                                       {0b00010011, rational(1, 5)},
                                       {0b01100011, rational(1, 5)}});
    multilinear_poly a = make_poly(8, {{0, rational(1, 2)},
                                       {0b00000100, rational(1, 2)}});
    run_instance("wide", a, b, std::vector<rational>(8, rational(0)),
                 rational(1, 128), rational(1, 2), rational(1, 4));
  }

  // A target weight the polynomial cannot reach must be rejected up front.
  {
    multilinear_poly b = make_poly(4, {{0b0011, rational(1, 3)},
                                       {0b1100, rational(1, 3)},
                                       {0b0101, rational(1, 3)}});
    multilinear_poly a = make_poly(4, {{0, rational(1, 2)},
                                       {0b0011, rational(1, 2)}});
    bool threw = false;
    try {
      derandomized_round(a, b, std::vector<rational>(4, rational(0)),
                         rational(1, 2), rational(1, 2), rational(1, 4));
    } catch (const error& e) {
      threw = e.kind() == errc::premise_violated;
    }
    ck.expect(threw, "unreachable premise accepted");
  }

  return finish(ck, "3 instances rounded to near-unit bias (" + traits.str() +
                        "); unreachable premise rejected");
}

}  // namespace

std::vector<criterion_result> run_acceptance_criteria(const std::string& filter) {
  struct entry {
    const char* name;
    criterion_result (*fn)();
    double budget_seconds;  // 0 = no budget
  };
  static const entry table[] = {
      {"spectral-zigzag-bound", crit_spectral_zigzag, 60.0},
      {"spectral-refined-bound", crit_spectral_refined, 0.0},
      {"split-tensor-structure", crit_split_tensor, 0.0},
      {"parity-sampling-closed-forms", crit_parity_sampling, 300.0},
      {"lift-bias-enumeration", crit_lift_bias, 0.0},
      {"walk-transfer-identity", crit_transfer_identity, 0.0},
      {"cascade-lift-equivalence", crit_cascade_equivalence, 0.0},
      {"unique-decoding-trials", crit_unique_decoding, 0.0},
      {"cover-prune-compactness", crit_cover_prune, 0.0},
      {"fixed-branching-agreement", crit_fixed_branching, 0.0},
      {"small-bias-certification", crit_small_bias, 0.0},
      {"parameter-certificates", crit_parameter_certificates, 10.0},
      {"derandomized-rounding", crit_derandomized_rounding, 0.0},
  };

  std::vector<criterion_result> out;
  for (const entry& e : table) {
    if (!filter.empty() &&
        std::string(e.name).find(filter) == std::string::npos)
      continue;
    criterion_result r;
    auto start = std::chrono::steady_clock::now();
    try {
      r = e.fn();
    } catch (const error& ex) {
      r.pass = false;
      r.detail = error_text(ex);
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = ex.what();
    }
    r.name = e.name;
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (e.budget_seconds > 0 && r.seconds > e.budget_seconds) {
      r.pass = false;
      if (!r.detail.empty()) r.detail += "; ";
      r.detail += "exceeded the " + fmt(e.budget_seconds) + "s time budget";
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_criterion_line(const criterion_result& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  ("
      << std::fixed << std::setprecision(2) << r.seconds << "s)";
  if (!r.detail.empty()) out << "  -- " << r.detail;
  return out.str();
}

}  // namespace walklift
