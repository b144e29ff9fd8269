// Command-line front end: construction, certification, encoding, and
// decoding as reproducible runs.  Every command writes a manifest into the
// output directory so a run can be replayed from its artifacts alone.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "walklift/decode.hpp"
#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/graphs.hpp"
#include "walklift/io.hpp"
#include "walklift/lifting.hpp"
#include "walklift/params.hpp"
#include "walklift/rpp.hpp"
#include "walklift/selftest.hpp"
#include "walklift/spectra.hpp"

namespace {

using namespace walklift;

constexpr const char* cli_version = "0.1.0";

struct global_opts {
  std::uint64_t seed = 0;
  std::uint64_t cap_walks = default_walk_cap;
  std::uint64_t cap_dim = default_dim_cap;
  std::string out = ".";
};

using kv_list = std::vector<std::pair<std::string, std::string>>;

std::string out_path(const global_opts& g, const std::string& name) {
  return (std::filesystem::path(g.out) / name).string();
}

/// manifest.txt: command, flags, seed, artifact paths, library version.
void write_manifest(const global_opts& g, const std::string& command,
                    const kv_list& flags,
                    const std::vector<std::string>& artifacts) {
  std::filesystem::create_directories(g.out);
  kv_list kv;
  kv.emplace_back("command", command);
  for (const auto& f : flags) kv.emplace_back(f);
  kv.emplace_back("seed", std::to_string(g.seed));
  kv.emplace_back("cap_walks", std::to_string(g.cap_walks));
  kv.emplace_back("cap_dim", std::to_string(g.cap_dim));
  for (std::size_t i = 0; i < artifacts.size(); ++i)
    kv.emplace_back("artifact_" + std::to_string(i), artifacts[i]);
  kv.emplace_back("version", cli_version);
  save_config(out_path(g, "manifest.txt"), kv);
}

void print_kv(const kv_list& kv) {
  for (const auto& [k, v] : kv) std::cout << k << " = " << v << "\n";
}

/// Accepts "2^-x" or a bare exponent x.
std::uint64_t parse_eps_exponent(const std::string& text) {
  std::string digits = text;
  if (digits.rfind("2^-", 0) == 0) digits = digits.substr(3);
  require(!digits.empty() &&
              std::all_of(digits.begin(), digits.end(),
                          [](unsigned char c) { return std::isdigit(c); }),
          errc::io_failure, "bias target must be 2^-x or a bare exponent");
  return std::stoull(digits);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// --- params ---------------------------------------------------------------

struct params_opts {
  std::uint64_t dim = 1024;
  std::string eps;
  std::string round = "I";
  std::string alpha = "1/8";
  std::uint64_t big_q = 1;
  std::string mode = "desk";
};

int cmd_params(const global_opts& g, const params_opts& o) {
  const std::uint64_t x = parse_eps_exponent(o.eps);
  const rational alpha = parse_rational(o.alpha);
  const param_mode mode =
      o.mode == "paper" ? param_mode::paper : param_mode::desk;

  kv_list report;
  auto append_certificates = [&report](const param_set& p) {
    kv_list kv = describe(p);
    report.insert(report.end(), kv.begin(), kv.end());
    if (p.t >= 2) {
      walk_length_certificate wc = certify_walk_length(p);
      rate_certificate rc = rate_certify(p);
      report.emplace_back("walk_bound_holds", wc.bound_holds ? "1" : "0");
      report.emplace_back("walk_minimal", wc.minimal ? "1" : "0");
      report.emplace_back("rate_walk_term_ok", rc.walk_term_ok ? "1" : "0");
      report.emplace_back("rate_degree_term_ok", rc.degree_term_ok ? "1" : "0");
      report.emplace_back("rate_pass", rc.pass ? "1" : "0");
      report.emplace_back("rate_exponent", format_rational(rc.rate_exponent));
    } else {
      report.emplace_back("walk_rule_soluble", "0");
    }
  };

  if (o.round == "I") {
    append_certificates(gamma(o.dim, x, alpha, o.big_q, mode, false));
  } else if (o.round == "II") {
    param_set p = gamma(o.dim, x, alpha, o.big_q, mode, true);
    if (p.t > p.s) p = round_two_adjust(p);
    append_certificates(p);
  } else if (o.round == "III") {
    round_three_result rt = round_three(o.dim, x, mode);
    append_certificates(rt.params);
    report.emplace_back("beta", fmt_double(rt.beta));
    report.emplace_back("recursive_base", rt.recursive_base ? "1" : "0");
  } else if (o.round == "IV") {
    require(denominator(alpha) != 0 && numerator(alpha) == 1,
            errc::precondition_violated,
            "round IV reads the width from alpha = 1/s");
    std::uint64_t s = denominator(alpha).convert_to<std::uint64_t>();
    round_four_result r = round_four_radius(s);
    report.emplace_back("s", std::to_string(s));
    report.emplace_back("log2_inv_eta", std::to_string(r.log2_inv_eta));
    report.emplace_back("radius", fmt_double(r.radius));
  } else {
    fail(errc::io_failure, "round must be I, II, III, or IV");
  }

  std::filesystem::create_directories(g.out);
  save_config(out_path(g, "params.txt"), report);
  print_kv(report);
  write_manifest(g, "params",
                 {{"dim", std::to_string(o.dim)},
                  {"eps", "2^-" + std::to_string(x)},
                  {"round", o.round},
                  {"alpha", o.alpha},
                  {"Q", std::to_string(o.big_q)},
                  {"mode", o.mode}},
                 {out_path(g, "params.txt")});
  return 0;
}

// --- build ------------------------------------------------------------------

int cmd_build(const global_opts& g, const std::string& config_path) {
  cascade_bundle bundle =
      cascade_from_config(load_config(config_path), g.cap_walks);
  kv_list manifest;
  manifest.emplace_back("command", "build");
  manifest.emplace_back("config", config_path);
  manifest.emplace_back("seed", std::to_string(g.seed));
  manifest.emplace_back("cap_walks", std::to_string(g.cap_walks));
  manifest.emplace_back("cap_dim", std::to_string(g.cap_dim));
  manifest.emplace_back("version", cli_version);
  write_cascade_dir(g.out, bundle, manifest);
  const cascade& c = bundle.lifted;
  std::cout << "cascade written to " << g.out << "\n"
            << "levels = " << c.depth() << ", width = " << c.width()
            << ", top arity = " << c.top_arity() << "\n"
            << "top length = " << c.level_length(c.depth())
            << ", dimension = " << c.base().dimension() << "\n";
  return 0;
}

// --- encode -----------------------------------------------------------------

int cmd_encode(const global_opts& g, const std::string& cascade_dir,
               const std::string& message_path, const std::string& out_name) {
  cascade_bundle bundle = load_cascade_dir(cascade_dir, g.cap_walks);
  const cascade& c = bundle.lifted;
  word message = load_word(message_path);
  require(message.size() == c.base().dimension(), errc::length_mismatch,
          "message length must equal the base dimension");
  word base_codeword = c.base().encode(message);
  word top = c.encode_base(base_codeword);
  std::filesystem::create_directories(g.out);
  const std::string path = out_path(g, out_name);
  save_word(path, top);
  std::cout << "codeword of length " << top.size() << " written to " << path
            << "\n";
  write_manifest(g, "encode",
                 {{"cascade", cascade_dir}, {"message", message_path}},
                 {path});
  return 0;
}

// --- decode -----------------------------------------------------------------

struct decode_opts {
  std::string cascade_dir;
  std::string word_path;
  std::string mode = "unique";
  std::string eta = "1/32";
  std::string eta0 = "1/5";
};

int cmd_decode(const global_opts& g, const decode_opts& o) {
  cascade_bundle bundle = load_cascade_dir(o.cascade_dir, g.cap_walks);
  const cascade& c = bundle.lifted;
  word received = load_word(o.word_path);
  require(received.size() == c.level_length(c.depth()), errc::length_mismatch,
          "received word length must equal the top code length");
  decoder_config config =
      make_decoder_config(parse_rational(o.eta0), parse_rational(o.eta));
  brute_force_backend backend;

  std::filesystem::create_directories(g.out);
  std::ofstream trace(out_path(g, "trace.jsonl"));

  // Greedy walk down the cascade purely for the trace: list sizes per level
  // along the closest-entry path.
  {
    word cur = received;
    for (unsigned j = c.depth(); j >= 1; --j) {
      const walk_collection& w = c.levels()[j - 1].collection;
      linear_code lower = c.level_code(j - 1);
      decode_list entries =
          list_decode_level(backend, lower, w, cur, config.eta);
      trace << "{\"level\": " << j << ", \"length\": " << cur.size()
            << ", \"list_size\": " << entries.size() << "}\n";
      if (entries.empty()) break;
      std::size_t best = 0;
      rational best_dist = relative_distance(entries[0].lifted, cur);
      for (std::size_t i = 1; i < entries.size(); ++i) {
        rational d = relative_distance(entries[i].lifted, cur);
        if (d < best_dist) {
          best_dist = d;
          best = i;
        }
      }
      cur = entries[best].base;
    }
  }

  std::optional<word> decoded;
  if (o.mode == "unique") {
    decoded = cascade_unique_decode(c, backend, received, config);
  } else if (o.mode == "fixedpoly") {
    fixed_poly_stats stats;
    decoded = fixed_poly_decode(c, backend, received, config, &stats);
    trace << "{\"nodes\": " << stats.nodes << "}\n";
  } else if (o.mode == "list") {
    const walk_collection& w = c.levels()[c.depth() - 1].collection;
    linear_code lower = c.level_code(c.depth() - 1);
    decode_list entries =
        list_decode_level(backend, lower, w, received, config.eta);
    std::vector<word> bases;
    for (const decode_entry& e : entries) bases.push_back(e.base);
    save_words(out_path(g, "list.txt"), bases);
    std::cout << "top-level list of " << entries.size() << " entries written"
              << " to " << out_path(g, "list.txt") << "\n";
    write_manifest(g, "decode",
                   {{"cascade", o.cascade_dir},
                    {"word", o.word_path},
                    {"mode", o.mode},
                    {"eta", o.eta},
                    {"eta0", o.eta0}},
                   {out_path(g, "list.txt"), out_path(g, "trace.jsonl")});
    return 0;
  } else {
    fail(errc::io_failure, "mode must be unique, fixedpoly, or list");
  }

  std::vector<std::string> artifacts = {out_path(g, "trace.jsonl")};
  if (decoded) {
    save_word(out_path(g, "decoded.txt"), *decoded);
    artifacts.push_back(out_path(g, "decoded.txt"));
    std::cout << "decoded base codeword written to "
              << out_path(g, "decoded.txt") << "\n";
    // Recover the message by enumeration (desk-scale dimensions).
    const linear_code& base = c.base();
    if (base.dimension() <= 24) {
      for (std::uint64_t m = 0; m < base.num_codewords(); ++m)
        if (base.codeword(m) == *decoded) {
          word message = word::from_index(m, base.dimension());
          save_word(out_path(g, "message.txt"), message);
          artifacts.push_back(out_path(g, "message.txt"));
          std::cout << "message written to " << out_path(g, "message.txt")
                    << "\n";
          break;
        }
    }
  } else {
    std::cout << "decoding failed: no codeword within the list radius\n";
  }
  write_manifest(g, "decode",
                 {{"cascade", o.cascade_dir},
                  {"word", o.word_path},
                  {"mode", o.mode},
                  {"eta", o.eta},
                  {"eta0", o.eta0}},
                 artifacts);
  return decoded ? 0 : 3;
}

// --- spectra ----------------------------------------------------------------

struct spectra_opts {
  std::string product_path;
  std::string check = "zigzag";
  std::string z_bits;
  unsigned t = 3;
  unsigned trials = 25;
};

int cmd_spectra(const global_opts& g, const spectra_opts& o) {
  wide_replacement_product p = load_product(o.product_path);
  kv_list report;
  if (o.check == "zigzag") {
    zigzag_report rep = zigzag_spectral_checks(p, g.cap_dim);
    report.emplace_back("sigma2_outer", fmt_double(rep.sigma_g));
    report.emplace_back("sigma2_inner", fmt_double(rep.sigma_h));
    for (std::size_t i = 0; i < rep.step_sigma.size(); ++i)
      report.emplace_back("sigma2_step_" + std::to_string(i),
                          fmt_double(rep.step_sigma[i]));
    report.emplace_back("coarse_bound", fmt_double(rep.coarse_bound));
    report.emplace_back("refined_applicable",
                        rep.refined_applicable ? "1" : "0");
    if (rep.refined_applicable)
      report.emplace_back("refined_bound", fmt_double(rep.refined_bound));
  } else if (o.check == "blockbound") {
    require(!o.z_bits.empty(), errc::precondition_violated,
            "blockbound needs --z");
    word z = parse_word(o.z_bits);
    double x = to_double(bias(z));
    double measured = exact_lift_bias(p, z, o.t, g.cap_dim);
    double bound = bias_upper_bound(x, p.width(), o.t);
    report.emplace_back("base_bias", fmt_double(x));
    report.emplace_back("walk_vertices", std::to_string(o.t));
    report.emplace_back("lift_bias", fmt_double(measured));
    report.emplace_back("bound", fmt_double(bound));
    report.emplace_back("block_bound", fmt_double(untweaked_block_bound(x, p.width())));
    require(measured <= bound + 1e-9, errc::bound_violated,
            "lift bias exceeds the closed-form bound");
  } else if (o.check == "transfer") {
    std::mt19937_64 rng(g.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = p.outer_size();
    require(n <= 63, errc::too_large, "outer graph too large for random z");
    for (unsigned i = 0; i < o.trials; ++i) {
      word z = word::from_index(rng() & ((std::uint64_t(1) << n) - 1), n);
      unsigned k1 = unsigned(rng() % p.width());
      unsigned k2 = k1 + unsigned(rng() % (p.width() - k1));
      vec v(n), w(n);
      for (std::size_t j = 0; j < n; ++j) {
        v[Eigen::Index(j)] = gauss(rng);
        w[Eigen::Index(j)] = gauss(rng);
      }
      require(pseudorandomness_identity_check(p, z, k1, k2, v, w),
              errc::bound_violated,
              "walk transfer identity failed on trial " + std::to_string(i));
    }
    report.emplace_back("trials", std::to_string(o.trials));
    report.emplace_back("identity_holds", "1");
  } else {
    fail(errc::io_failure, "check must be zigzag, blockbound, or transfer");
  }
  std::filesystem::create_directories(g.out);
  save_config(out_path(g, "spectra.txt"), report);
  print_kv(report);
  write_manifest(g, "spectra",
                 {{"product", o.product_path},
                  {"check", o.check},
                  {"t", std::to_string(o.t)},
                  {"trials", std::to_string(o.trials)}},
                 {out_path(g, "spectra.txt")});
  return 0;
}

// --- certify-splittability ---------------------------------------------------

int cmd_certify_splittability(const global_opts& g,
                              const std::string& collection_path,
                              const std::string& tree_spec, double tau_cap) {
  walk_collection w = load_collection(collection_path);
  splitting_tree tree;
  if (tree_spec == "balanced") {
    tree = balanced_splitting_tree(w.arity);
  } else if (tree_spec.rfind("explicit:", 0) == 0) {
    std::ifstream in(tree_spec.substr(9));
    require(in.good(), errc::io_failure, "cannot open the tree file");
    std::vector<split_node> nodes;
    split_node nd;
    while (in >> nd.k1 >> nd.k2 >> nd.k3) nodes.push_back(nd);
    tree = make_splitting_tree(w.arity, std::move(nodes));
  } else {
    fail(errc::io_failure, "tree must be balanced or explicit:<file>");
  }
  splittability_certificate_t cert =
      splittability_certificate(w, tree, g.cap_dim);
  kv_list report;
  report.emplace_back("arity", std::to_string(w.arity));
  report.emplace_back("walks", std::to_string(w.count()));
  report.emplace_back("tau", fmt_double(cert.tau));
  for (const node_certificate& nc : cert.nodes) {
    std::ostringstream key, val;
    key << "sigma2_" << nc.node.k1 << "_" << nc.node.k2 << "_" << nc.node.k3;
    val << fmt_double(nc.sigma2);
    report.emplace_back(key.str(), val.str());
  }
  std::filesystem::create_directories(g.out);
  save_config(out_path(g, "splittability.txt"), report);
  print_kv(report);
  write_manifest(g, "certify-splittability",
                 {{"collection", collection_path}, {"tree", tree_spec}},
                 {out_path(g, "splittability.txt")});
  require(tau_cap <= 0 || cert.tau <= tau_cap + 1e-12, errc::bound_violated,
          "measured tau exceeds the requested cap");
  return 0;
}

// --- parity-sampler -----------------------------------------------------------

int cmd_parity_sampler(const global_opts& g, const std::string& collection_path,
                       const std::string& eps0_text, double bound) {
  walk_collection w = load_collection(collection_path);
  rational eps0 = parse_rational(eps0_text);
  rational measured = parity_sampling_measure(w, eps0);
  kv_list report;
  report.emplace_back("arity", std::to_string(w.arity));
  report.emplace_back("walks", std::to_string(w.count()));
  report.emplace_back("eps0", format_rational(eps0));
  report.emplace_back("measure", format_rational(measured));
  report.emplace_back("measure_decimal", fmt_double(to_double(measured)));
  std::filesystem::create_directories(g.out);
  save_config(out_path(g, "parity.txt"), report);
  print_kv(report);
  write_manifest(g, "parity-sampler",
                 {{"collection", collection_path}, {"eps0", eps0_text}},
                 {out_path(g, "parity.txt")});
  require(bound <= 0 || to_double(measured) <= bound + 1e-12,
          errc::bound_violated, "parity-sampling measure exceeds the bound");
  return 0;
}

// --- cover-prune ---------------------------------------------------------------

int cmd_cover_prune(const global_opts& g, const std::string& list_path,
                    const std::string& collection_path,
                    const std::string& zeta_text, const std::string& eta_text) {
  walk_collection w = load_collection(collection_path);
  std::vector<word> bases = load_words(list_path);
  decode_list entries;
  for (const word& b : bases) entries.push_back({b, direct_sum_lift(b, w)});
  decode_list kept =
      zeta_cover_prune(entries, parse_rational(zeta_text), parse_rational(eta_text));
  std::vector<word> kept_bases;
  for (const decode_entry& e : kept) kept_bases.push_back(e.base);
  std::filesystem::create_directories(g.out);
  save_words(out_path(g, "pruned.txt"), kept_bases);
  std::cout << "kept " << kept.size() << " of " << entries.size()
            << " entries; written to " << out_path(g, "pruned.txt") << "\n";
  write_manifest(g, "cover-prune",
                 {{"list", list_path},
                  {"collection", collection_path},
                  {"zeta", zeta_text},
                  {"eta", eta_text}},
                 {out_path(g, "pruned.txt")});
  return 0;
}

// --- selftest -------------------------------------------------------------------

int cmd_selftest(const global_opts& g, const std::string& filter) {
  std::vector<criterion_result> results = run_acceptance_criteria(filter);
  bool all_pass = true;
  for (const criterion_result& r : results) {
    std::cout << format_criterion_line(r) << "\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all criteria passed" : "criteria FAILED") << " ("
            << results.size() << " run)\n";
  write_manifest(g, "selftest", {{"filter", filter}}, {});
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsilon-balanced codes from walks on wide replacement products"};
  app.require_subcommand(1);

  global_opts g;
  app.add_option("--seed", g.seed, "random seed for the run");
  app.add_option("--cap-walks", g.cap_walks, "walk enumeration cap");
  app.add_option("--cap-dim", g.cap_dim, "operator dimension cap");
  app.add_option("--out", g.out, "output directory");

  params_opts po;
  auto* params_cmd = app.add_subcommand("params", "parameter engine report");
  params_cmd->add_option("--dim", po.dim, "message dimension");
  params_cmd->add_option("--eps", po.eps, "bias target, 2^-x")->required();
  params_cmd->add_option("--round", po.round, "I, II, III, or IV");
  params_cmd->add_option("--alpha", po.alpha, "rate-bias tradeoff, e.g. 1/8");
  params_cmd->add_option("--Q", po.big_q, "degree multiplier");
  params_cmd->add_option("--mode", po.mode, "desk or paper");

  std::string build_config;
  auto* build_cmd = app.add_subcommand("build", "build a cascade directory");
  build_cmd->add_option("--config", build_config, "build config file")
      ->required();

  std::string enc_dir, enc_msg, enc_out = "codeword.txt";
  auto* encode_cmd = app.add_subcommand("encode", "encode a message");
  encode_cmd->add_option("--cascade", enc_dir, "cascade directory")->required();
  encode_cmd->add_option("--message", enc_msg, "message bit file")->required();
  encode_cmd->add_option("--output", enc_out, "codeword file name");

  decode_opts dopts;
  auto* decode_cmd = app.add_subcommand("decode", "decode a received word");
  decode_cmd->add_option("--cascade", dopts.cascade_dir, "cascade directory")
      ->required();
  decode_cmd->add_option("--word", dopts.word_path, "received word file")
      ->required();
  decode_cmd->add_option("--mode", dopts.mode, "unique, fixedpoly, or list");
  decode_cmd->add_option("--eta", dopts.eta, "list-radius parameter");
  decode_cmd->add_option("--eta0", dopts.eta0, "sampling strength parameter");

  spectra_opts so;
  auto* spectra_cmd = app.add_subcommand("spectra", "spectral certificates");
  spectra_cmd->add_option("--product", so.product_path, "product file")
      ->required();
  spectra_cmd->add_option("--check", so.check,
                          "zigzag, blockbound, or transfer");
  spectra_cmd->add_option("--z", so.z_bits, "base word for blockbound");
  spectra_cmd->add_option("--t", so.t, "walk vertices for blockbound");
  spectra_cmd->add_option("--trials", so.trials, "transfer trial count");

  std::string cs_collection, cs_tree = "balanced";
  double cs_tau = 0;
  auto* cs_cmd = app.add_subcommand("certify-splittability",
                                    "split-tree sigma2 certificate");
  cs_cmd->add_option("--collection", cs_collection, "collection file")
      ->required();
  cs_cmd->add_option("--tree", cs_tree, "balanced or explicit:<file>");
  cs_cmd->add_option("--tau", cs_tau, "fail when measured tau exceeds this");

  std::string ps_collection, ps_eps0 = "1/4";
  double ps_bound = 0;
  auto* ps_cmd = app.add_subcommand("parity-sampler",
                                    "exact parity-sampling measure");
  ps_cmd->add_option("--collection", ps_collection, "collection file")
      ->required();
  ps_cmd->add_option("--eps0", ps_eps0, "base bias threshold");
  ps_cmd->add_option("--bound", ps_bound, "fail when the measure exceeds this");

  std::string cp_list, cp_collection, cp_zeta = "1/8", cp_eta = "1/4";
  auto* cp_cmd = app.add_subcommand("cover-prune", "prune a decode list");
  cp_cmd->add_option("--list", cp_list, "word-list file")->required();
  cp_cmd->add_option("--collection", cp_collection, "collection file")
      ->required();
  cp_cmd->add_option("--zeta", cp_zeta, "cover radius parameter");
  cp_cmd->add_option("--eta", cp_eta, "list-radius parameter");

  std::string st_filter;
  auto* st_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  st_cmd->add_option("--filter", st_filter, "criterion name substring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*params_cmd) return cmd_params(g, po);
    if (*build_cmd) return cmd_build(g, build_config);
    if (*encode_cmd) return cmd_encode(g, enc_dir, enc_msg, enc_out);
    if (*decode_cmd) return cmd_decode(g, dopts);
    if (*spectra_cmd) return cmd_spectra(g, so);
    if (*cs_cmd)
      return cmd_certify_splittability(g, cs_collection, cs_tree, cs_tau);
    if (*ps_cmd) return cmd_parity_sampler(g, ps_collection, ps_eps0, ps_bound);
    if (*cp_cmd)
      return cmd_cover_prune(g, cp_list, cp_collection, cp_zeta, cp_eta);
    if (*st_cmd) return cmd_selftest(g, st_filter);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
