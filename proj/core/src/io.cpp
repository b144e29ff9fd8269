#include "walklift/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace walklift {

const char* errc_name(errc kind) noexcept {
  switch (kind) {
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::dimension_too_large: return "DimensionTooLarge";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::too_large: return "TooLarge";
    case errc::too_many_walks: return "TooManyWalks";
    case errc::ground_set_too_large: return "GroundSetTooLarge";
    case errc::not_closed_under_inverse: return "NotClosedUnderInverse";
    case errc::not_power_of_two: return "NotPowerOfTwo";
    case errc::width_too_small: return "WidthTooSmall";
    case errc::bad_indices: return "BadIndices";
    case errc::bad_residue: return "BadResidue";
    case errc::locality_too_small: return "LocalityTooSmall";
    case errc::missing_marginal: return "MissingMarginal";
    case errc::empty_list: return "EmptyList";
    case errc::degree_too_high: return "DegreeTooHigh";
    case errc::search_exhausted: return "SearchExhausted";
    case errc::bad_alpha: return "BadAlpha";
    case errc::infeasible: return "Infeasible";
    case errc::convergence_failure: return "ConvergenceFailure";
    case errc::io_failure: return "IoFailure";
    case errc::bound_violated: return "BoundViolated";
    case errc::bias_certification_failed: return "BiasCertificationFailed";
    case errc::premise_violated: return "PremiseViolated";
  }
  return "UnknownError";
}

bool is_certification_failure(errc kind) noexcept {
  return kind == errc::bound_violated ||
         kind == errc::bias_certification_failed ||
         kind == errc::premise_violated;
}

rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  require(!s.empty(), errc::io_failure, "empty rational");
  auto is_integer = [](const std::string& v) {
    std::size_t start = (v[0] == '-' || v[0] == '+') ? 1 : 0;
    if (start == v.size()) return false;
    return std::all_of(v.begin() + start, v.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    require(is_integer(num) && is_integer(den), errc::io_failure,
            "malformed rational: " + text);
    bigint d(den);
    require(d != 0, errc::io_failure, "zero denominator: " + text);
    return rational(bigint(num), d);
  }
  std::size_t dot = s.find('.');
  if (dot != std::string::npos) {
    std::string ipart = s.substr(0, dot), fpart = s.substr(dot + 1);
    if (ipart.empty() || ipart == "-" || ipart == "+") ipart += "0";
    require(is_integer(ipart) &&
                std::all_of(fpart.begin(), fpart.end(),
                            [](unsigned char c) { return std::isdigit(c); }),
            errc::io_failure, "malformed decimal: " + text);
    bool negative = s[0] == '-';
    bigint scale = 1;
    for (std::size_t i = 0; i < fpart.size(); ++i) scale *= 10;
    bigint ival(ipart);
    if (ival < 0) ival = -ival;
    bigint fval = fpart.empty() ? bigint(0) : bigint(fpart);
    bigint total = ival * scale + fval;
    if (negative) total = -total;
    return rational(total, scale);
  }
  require(is_integer(s), errc::io_failure, "malformed rational: " + text);
  return rational(bigint(s));
}

std::string format_rational(const rational& value) {
  bigint num = numerator(value), den = denominator(value);
  std::string out = num.str();
  if (den != 1) out += "/" + den.str();
  return out;
}

double to_double(const rational& value) { return value.convert_to<double>(); }

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Next non-blank line with comments stripped; false at end of stream.
bool next_content_line(std::istream& in, std::string& out) {
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (!line.empty()) {
      out = line;
      return true;
    }
  }
  return false;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::uint64_t parse_u64(const std::string& text) {
  require(!text.empty() && std::all_of(text.begin(), text.end(),
                                       [](unsigned char c) { return std::isdigit(c); }),
          errc::io_failure, "malformed integer: " + text);
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  require(errno == 0 && end == text.c_str() + text.size(), errc::io_failure,
          "integer out of range: " + text);
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), errc::io_failure, "cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  require(f.good(), errc::io_failure, "cannot write " + path);
  return f;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

// --- words and codes --------------------------------------------------------

word parse_word(const std::string& text) {
  std::string s = trim(text);
  require(!s.empty(), errc::io_failure, "empty word");
  require(std::all_of(s.begin(), s.end(),
                      [](char c) { return c == '0' || c == '1'; }),
          errc::io_failure, "word must be a 0/1 string");
  return word::from_string(s);
}

std::vector<word> load_words(const std::string& path) {
  std::ifstream f = open_in(path);
  std::vector<word> out;
  std::string line;
  while (next_content_line(f, line)) out.push_back(parse_word(line));
  require(!out.empty(), errc::io_failure, "no words in " + path);
  return out;
}

word load_word(const std::string& path) { return load_words(path).front(); }

void save_word(const std::string& path, const word& w) {
  std::ofstream f = open_out(path);
  f << w.to_string() << "\n";
}

void save_words(const std::string& path, const std::vector<word>& words) {
  std::ofstream f = open_out(path);
  for (const word& w : words) f << w.to_string() << "\n";
}

linear_code read_code(std::istream& in) {
  std::string line;
  require(next_content_line(in, line), errc::io_failure, "missing code header");
  auto toks = split_tokens(line);
  require(toks.size() == 3 && toks[0] == "code", errc::io_failure,
          "expected `code <dim> <len>`");
  std::uint64_t dim = parse_u64(toks[1]), len = parse_u64(toks[2]);
  std::vector<word> rows;
  for (std::uint64_t i = 0; i < dim; ++i) {
    require(next_content_line(in, line), errc::io_failure,
            "truncated generator matrix");
    word row = parse_word(line);
    require(row.size() == len, errc::io_failure, "generator row length");
    rows.push_back(std::move(row));
  }
  return linear_code(std::move(rows), len);
}

linear_code load_code(const std::string& path) {
  std::ifstream f = open_in(path);
  return read_code(f);
}

void write_code(std::ostream& out, const linear_code& code) {
  out << "code " << code.dimension() << " " << code.block_length() << "\n";
  for (const word& row : code.generator()) out << row.to_string() << "\n";
}

void save_code(const std::string& path, const linear_code& code) {
  std::ofstream f = open_out(path);
  write_code(f, code);
}

// --- graphs and products -----------------------------------------------------

rotation_graph parse_cayley(const std::string& line) {
  auto toks = split_tokens(line);
  require(toks.size() == 3 && toks[0] == "cayley", errc::io_failure,
          "expected `cayley <group> <gens>`");
  std::vector<std::uint32_t> gens;
  {
    std::string csv = toks[2];
    std::size_t pos = 0;
    while (pos <= csv.size()) {
      std::size_t comma = csv.find(',', pos);
      std::string item = csv.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      require(!item.empty(), errc::io_failure, "empty generator entry");
      gens.push_back(std::uint32_t(parse_u64(item)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const std::string& group = toks[1];
  if (group.rfind("f2^", 0) == 0) {
    std::uint64_t m = parse_u64(group.substr(3));
    return cayley_f2m(unsigned(m), gens);
  }
  require(group.size() > 1 && group[0] == 'z', errc::io_failure,
          "group must be z<n> or f2^<m>");
  std::uint64_t n = parse_u64(group.substr(1));
  return cayley_zn(std::size_t(n), gens);
}

rotation_graph read_graph(std::istream& in) {
  std::string line;
  require(next_content_line(in, line), errc::io_failure, "missing graph header");
  auto toks = split_tokens(line);
  require(!toks.empty(), errc::io_failure, "missing graph header");
  if (toks[0] == "cayley") return parse_cayley(line);
  require(toks.size() == 3 && toks[0] == "graph", errc::io_failure,
          "expected `graph <n> <d>` or `cayley ...`");
  std::uint64_t n = parse_u64(toks[1]), d = parse_u64(toks[2]);
  require(n >= 1 && d >= 1 && n * d <= (std::uint64_t(1) << 28),
          errc::io_failure, "graph too large");
  std::vector<std::uint32_t> rot_vertex(n * d), rot_label(n * d);
  std::vector<bool> seen(n * d, false);
  for (std::uint64_t i = 0; i < n * d; ++i) {
    require(next_content_line(in, line), errc::io_failure,
            "truncated rotation map");
    auto entry = split_tokens(line);
    require(entry.size() == 4, errc::io_failure, "expected `v j v' j'`");
    std::uint64_t v = parse_u64(entry[0]), j = parse_u64(entry[1]);
    std::uint64_t tv = parse_u64(entry[2]), tj = parse_u64(entry[3]);
    require(v < n && j < d && tv < n && tj < d, errc::io_failure,
            "rotation entry out of range");
    require(!seen[v * d + j], errc::io_failure, "duplicate rotation entry");
    seen[v * d + j] = true;
    rot_vertex[v * d + j] = std::uint32_t(tv);
    rot_label[v * d + j] = std::uint32_t(tj);
  }
  rotation_graph g(n, d, std::move(rot_vertex), std::move(rot_label));
  if (auto phi = local_invertibility_check(g)) {
    std::vector<std::uint32_t> rv(n * d), rl(n * d);
    for (std::uint64_t v = 0; v < n; ++v)
      for (std::uint64_t j = 0; j < d; ++j) {
        auto [tv, tj] = g.rot(v, j);
        rv[v * d + j] = tv;
        rl[v * d + j] = tj;
      }
    return rotation_graph(n, d, std::move(rv), std::move(rl), std::move(phi));
  }
  return g;
}

rotation_graph load_graph(const std::string& path) {
  std::ifstream f = open_in(path);
  return read_graph(f);
}

void write_graph(std::ostream& out, const rotation_graph& g) {
  out << "graph " << g.num_vertices() << " " << g.degree() << "\n";
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (std::size_t j = 0; j < g.degree(); ++j) {
      auto [tv, tj] = g.rot(v, j);
      out << v << " " << j << " " << tv << " " << tj << "\n";
    }
}

void save_graph(const std::string& path, const rotation_graph& g) {
  std::ofstream f = open_out(path);
  write_graph(f, g);
}

wide_replacement_product read_product(std::istream& in) {
  std::string line;
  require(next_content_line(in, line), errc::io_failure,
          "missing product header");
  auto toks = split_tokens(line);
  require(toks.size() == 2 && toks[0] == "product", errc::io_failure,
          "expected `product <s>`");
  std::uint64_t s = parse_u64(toks[1]);
  rotation_graph outer = read_graph(in);
  rotation_graph inner = read_graph(in);
  return wide_replacement_product(std::move(outer), std::move(inner),
                                  unsigned(s));
}

wide_replacement_product load_product(const std::string& path) {
  std::ifstream f = open_in(path);
  return read_product(f);
}

void write_product(std::ostream& out, const wide_replacement_product& p) {
  out << "product " << p.width() << "\n";
  write_graph(out, p.outer());
  write_graph(out, p.inner());
}

void save_product(const std::string& path, const wide_replacement_product& p) {
  std::ofstream f = open_out(path);
  write_product(f, p);
}

// --- collections, walks, operators ------------------------------------------

walk_collection read_collection(std::istream& in) {
  std::string line;
  require(next_content_line(in, line), errc::io_failure,
          "missing collection header");
  auto toks = split_tokens(line);
  require(toks.size() == 3 && toks[0] == "walks", errc::io_failure,
          "expected `walks <k> <n>`");
  walk_collection w;
  w.arity = unsigned(parse_u64(toks[1]));
  w.ground_size = std::size_t(parse_u64(toks[2]));
  w.base_size = w.ground_size;
  w.projection.resize(w.ground_size);
  for (std::size_t i = 0; i < w.ground_size; ++i) w.projection[i] = i;

  bool first = true;
  while (next_content_line(in, line)) {
    auto entry = split_tokens(line);
    if (first && !entry.empty() && entry[0] == "proj") {
      require(entry.size() == w.ground_size + 2, errc::io_failure,
              "projection line needs base size plus one entry per ground element");
      w.base_size = std::size_t(parse_u64(entry[1]));
      for (std::size_t i = 0; i < w.ground_size; ++i)
        w.projection[i] = parse_u64(entry[i + 2]);
      first = false;
      continue;
    }
    first = false;
    require(entry.size() == w.arity, errc::io_failure,
            "tuple length must equal the arity");
    for (const std::string& t : entry) w.tuples.push_back(parse_u64(t));
  }
  w.origin = walk_collection::provenance::explicit_list;
  w.validate();
  return w;
}

walk_collection load_collection(const std::string& path) {
  std::ifstream f = open_in(path);
  return read_collection(f);
}

void write_collection(std::ostream& out, const walk_collection& w) {
  out << "walks " << w.arity << " " << w.ground_size << "\n";
  bool identity = w.base_size == w.ground_size;
  for (std::size_t i = 0; identity && i < w.ground_size; ++i)
    identity = w.projection[i] == i;
  if (!identity) {
    out << "proj " << w.base_size;
    for (std::size_t i = 0; i < w.ground_size; ++i) out << " " << w.projection[i];
    out << "\n";
  }
  for (std::uint64_t t = 0; t < w.count(); ++t) {
    for (unsigned i = 0; i < w.arity; ++i)
      out << (i ? " " : "") << w.entry(t, i);
    out << "\n";
  }
}

void save_collection(const std::string& path, const walk_collection& w) {
  std::ofstream f = open_out(path);
  write_collection(f, w);
}

void write_walk_dump(std::ostream& out, const wide_replacement_product& p,
                     const walk_space& walks) {
  for (std::uint64_t rank = 0; rank < walks.count(); ++rank) {
    std::vector<std::uint64_t> vs = walks.vertices(rank);
    for (std::size_t i = 0; i < vs.size(); ++i)
      out << (i ? " " : "") << "(" << p.outer_component(vs[i]) << ","
          << p.cloud_component(vs[i]) << ")";
    out << "\n";
  }
}

void save_walk_dump(const std::string& path, const wide_replacement_product& p,
                    const walk_space& walks) {
  std::ofstream f = open_out(path);
  write_walk_dump(f, p, walks);
}

void save_operator(const std::string& path, const matrix& m) {
  std::ofstream f = open_out(path);
  f << "op " << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      f << (c ? " " : "") << fmt_double(m(r, c));
    f << "\n";
  }
}

matrix load_operator(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  require(next_content_line(f, line), errc::io_failure, "missing operator header");
  auto toks = split_tokens(line);
  require(toks.size() == 3 && toks[0] == "op", errc::io_failure,
          "expected `op <rows> <cols>`");
  std::uint64_t rows = parse_u64(toks[1]), cols = parse_u64(toks[2]);
  require(rows >= 1 && cols >= 1 && rows * cols <= (std::uint64_t(1) << 26),
          errc::io_failure, "operator too large");
  matrix m(rows, cols);
  for (std::uint64_t r = 0; r < rows; ++r) {
    require(next_content_line(f, line), errc::io_failure, "truncated operator");
    std::istringstream ss(line);
    for (std::uint64_t c = 0; c < cols; ++c) {
      double v = 0;
      require(bool(ss >> v), errc::io_failure, "malformed operator row");
      m(Eigen::Index(r), Eigen::Index(c)) = v;
    }
  }
  return m;
}

// --- config files and cascade directories ------------------------------------

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> cfg;
  std::string line;
  while (next_content_line(in, line)) {
    std::size_t eq = line.find('=');
    require(eq != std::string::npos, errc::io_failure,
            "config line must be `key = value`: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), errc::io_failure, "empty config key");
    require(!cfg.count(key), errc::io_failure, "duplicate config key " + key);
    cfg[key] = value;
  }
  return cfg;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream f = open_in(path);
  return read_config(f);
}

void save_config(const std::string& path,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream f = open_out(path);
  for (const auto& [key, value] : kv) f << key << " = " << value << "\n";
}

const std::string& config_get(const std::map<std::string, std::string>& cfg,
                              const std::string& key) {
  auto it = cfg.find(key);
  require(it != cfg.end(), errc::io_failure, "missing config key " + key);
  return it->second;
}

std::string config_get_or(const std::map<std::string, std::string>& cfg,
                          const std::string& key, const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

namespace {

rotation_graph graph_from_spec(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') return load_graph(spec.substr(1));
  return parse_cayley(spec);
}

}  // namespace

cascade_bundle cascade_from_config(const std::map<std::string, std::string>& cfg,
                                   std::uint64_t walk_cap) {
  unsigned s = unsigned(parse_u64(config_get(cfg, "s")));
  unsigned depth = unsigned(parse_u64(config_get(cfg, "depth")));
  unsigned top_arity =
      unsigned(parse_u64(config_get_or(cfg, "top_arity", std::to_string(s))));
  rotation_graph outer = graph_from_spec(config_get(cfg, "outer"));
  rotation_graph inner = graph_from_spec(config_get(cfg, "inner"));
  wide_replacement_product product(std::move(outer), std::move(inner), s);

  linear_code base = [&] {
    auto it = cfg.find("base");
    if (it != cfg.end()) {
      require(!it->second.empty() && it->second[0] == '@', errc::io_failure,
              "base must be @<path> of a code file");
      return load_code(it->second.substr(1));
    }
    std::uint64_t dim = parse_u64(config_get(cfg, "base_dim"));
    rational eps0 = parse_rational(config_get_or(cfg, "base_bias", "1/2"));
    std::uint64_t seed = parse_u64(config_get_or(cfg, "base_seed", "1"));
    std::uint64_t attempts = parse_u64(config_get_or(cfg, "base_attempts", "4096"));
    return random_balanced_code(std::size_t(dim), product.outer_size(), eps0,
                                seed, unsigned(attempts));
  }();

  cascade lifted = build_cascade(std::move(base), std::move(product), depth,
                                 top_arity, walk_cap);
  return cascade_bundle{cfg, std::move(lifted)};
}

void write_cascade_dir(const std::string& dir, const cascade_bundle& bundle,
                       const std::vector<std::pair<std::string, std::string>>& manifest) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, errc::io_failure, "cannot create " + dir);

  save_config(dir + "/manifest.txt", manifest);
  {
    std::vector<std::pair<std::string, std::string>> kv(bundle.config.begin(),
                                                        bundle.config.end());
    save_config(dir + "/config.txt", kv);
  }
  const cascade& c = bundle.lifted;
  save_code(dir + "/base_code.txt", c.base());
  save_graph(dir + "/outer.txt", c.product().outer());
  save_graph(dir + "/inner.txt", c.product().inner());
  for (unsigned j = 1; j <= c.depth(); ++j)
    save_collection(dir + "/level" + std::to_string(j) + ".walks",
                    c.levels()[j - 1].collection);

  std::ofstream cert = open_out(dir + "/certificates.txt");
  zigzag_report zz = zigzag_spectral_checks(c.product());
  cert << "sigma2_outer " << fmt_double(zz.sigma_g) << "\n";
  cert << "sigma2_inner " << fmt_double(zz.sigma_h) << "\n";
  for (std::size_t i = 0; i < zz.step_sigma.size(); ++i)
    cert << "step " << i << " sigma2 " << fmt_double(zz.step_sigma[i]) << "\n";
  cert << "zigzag coarse_bound " << fmt_double(zz.coarse_bound)
       << " refined_applicable " << (zz.refined_applicable ? 1 : 0)
       << " refined_bound " << fmt_double(zz.refined_bound) << "\n";

  for (unsigned j = 1; j <= c.depth(); ++j) {
    const walk_collection& w = c.levels()[j - 1].collection;
    cert << "level " << j << " arity " << w.arity << " count " << w.count()
         << "\n";
    try {
      splittability_certificate_t sc =
          splittability_certificate(w, balanced_splitting_tree(w.arity));
      cert << "level " << j << " tau " << fmt_double(sc.tau) << "\n";
      for (const node_certificate& nc : sc.nodes)
        cert << "level " << j << " node " << nc.node.k1 << " " << nc.node.k2
             << " " << nc.node.k3 << " sigma2 " << fmt_double(nc.sigma2)
             << "\n";
    } catch (const error& e) {
      if (is_certification_failure(e.kind())) throw;
      cert << "level " << j << " tau skipped " << errc_name(e.kind()) << "\n";
    }
  }

  if (c.base().block_length() <= 20 && c.base().dimension() <= 20) {
    rational eps0 = code_bias(c.base());
    cert << "base_bias " << format_rational(eps0) << "\n";
    try {
      rational measure =
          parity_sampling_measure(c.levels()[0].collection, eps0);
      cert << "level 1 parity_measure " << format_rational(measure) << "\n";
    } catch (const error& e) {
      if (is_certification_failure(e.kind())) throw;
      cert << "level 1 parity_measure skipped " << errc_name(e.kind()) << "\n";
    }
  }
}

cascade_bundle load_cascade_dir(const std::string& dir, std::uint64_t walk_cap) {
  cascade_bundle bundle =
      cascade_from_config(load_config(dir + "/config.txt"), walk_cap);
  linear_code stored = load_code(dir + "/base_code.txt");
  const linear_code& rebuilt = bundle.lifted.base();
  bool same = stored.dimension() == rebuilt.dimension() &&
              stored.block_length() == rebuilt.block_length();
  for (std::size_t i = 0; same && i < stored.dimension(); ++i)
    same = stored.generator()[i].to_string() ==
           rebuilt.generator()[i].to_string();
  require(same, errc::io_failure,
          "stored base code disagrees with the config rebuild");
  return bundle;
}

}  // namespace walklift
