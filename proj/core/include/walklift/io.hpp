#pragma once

// Plain-text artifact formats shared by the CLI and the tests: words and
// generator matrices, rotation graphs (explicit or Cayley shorthand),
// replacement products, walk collections, operator dumps, key=value config
// files, and the cascade directory layout.  Everything is line-oriented
// text so runs can be diffed; writers are deterministic.

#include "walklift/decode.hpp"
#include "walklift/errors.hpp"
#include "walklift/f2.hpp"
#include "walklift/graphs.hpp"
#include "walklift/lifting.hpp"
#include "walklift/rational.hpp"
#include "walklift/rpp.hpp"
#include "walklift/spectra.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace walklift {

// --- words and codes ------------------------------------------------------

/// Parses one 0/1 string.
word parse_word(const std::string& text);

/// Word files: one 0/1 string per line.
std::vector<word> load_words(const std::string& path);
/// First word of the file.
word load_word(const std::string& path);
void save_word(const std::string& path, const word& w);
void save_words(const std::string& path, const std::vector<word>& words);

/// Code files: `code <dim> <len>` then dim generator rows as 0/1 strings.
linear_code read_code(std::istream& in);
linear_code load_code(const std::string& path);
void write_code(std::ostream& out, const linear_code& code);
void save_code(const std::string& path, const linear_code& code);

// --- graphs and products --------------------------------------------------

/// Graph blocks come in two forms:
///   `graph <n> <d>` then n*d lines `v j v' j'` listing rot(v, j) = (v', j')
///   `cayley z<n> g1,g2,...`   or   `cayley f2^<m> g1,g2,...`
/// Explicit graphs get their local-inversion map recovered when one exists.
rotation_graph read_graph(std::istream& in);
rotation_graph load_graph(const std::string& path);
/// Single-line Cayley shorthand, e.g. "cayley z8 1,7".
rotation_graph parse_cayley(const std::string& line);
void write_graph(std::ostream& out, const rotation_graph& g);
void save_graph(const std::string& path, const rotation_graph& g);

/// Product files: `product <s>` then the outer graph block then the inner
/// graph block.
wide_replacement_product read_product(std::istream& in);
wide_replacement_product load_product(const std::string& path);
void write_product(std::ostream& out, const wide_replacement_product& p);
void save_product(const std::string& path, const wide_replacement_product& p);

// --- collections, walks, operators ----------------------------------------

/// Collection files: `walks <k> <n>` (arity, ground size) then one
/// k-tuple of ground indices per line; an optional `proj ...` line after the
/// header carries a non-identity base projection.
walk_collection read_collection(std::istream& in);
walk_collection load_collection(const std::string& path);
void write_collection(std::ostream& out, const walk_collection& w);
void save_collection(const std::string& path, const walk_collection& w);

/// Walk dumps: one line per walk, its vertices as `(v,h)` pairs
/// space-separated.
void write_walk_dump(std::ostream& out, const wide_replacement_product& p,
                     const walk_space& walks);
void save_walk_dump(const std::string& path, const wide_replacement_product& p,
                    const walk_space& walks);

/// Operator dumps: `op <rows> <cols>` then one row per line.
void save_operator(const std::string& path, const matrix& m);
matrix load_operator(const std::string& path);

// --- config files and cascade directories ----------------------------------

/// `key = value` lines; blank lines and everything after '#' are ignored.
std::map<std::string, std::string> read_config(std::istream& in);
std::map<std::string, std::string> load_config(const std::string& path);
void save_config(const std::string& path,
                 const std::vector<std::pair<std::string, std::string>>& kv);

const std::string& config_get(const std::map<std::string, std::string>& cfg,
                              const std::string& key);
std::string config_get_or(const std::map<std::string, std::string>& cfg,
                          const std::string& key, const std::string& fallback);

/// A cascade together with the config it was built from.  The cascade value
/// owns copies of the base code and the product.
struct cascade_bundle {
  std::map<std::string, std::string> config;
  cascade lifted;
};

/// Builds a cascade from a build config.  Keys:
///   s, depth, top_arity (default s), outer, inner (Cayley shorthand or
///   @<path> of a graph file), base (@<path> of a code file) or
///   base_dim/base_bias/base_seed[/base_attempts] for a sampled base code.
cascade_bundle cascade_from_config(const std::map<std::string, std::string>& cfg,
                                   std::uint64_t walk_cap = default_walk_cap);

/// Writes the full artifact directory: manifest.txt, config.txt,
/// base_code.txt, outer.txt, inner.txt, one collection file per level, and
/// certificates.txt with the per-level spectral and splittability numbers.
void write_cascade_dir(const std::string& dir, const cascade_bundle& bundle,
                       const std::vector<std::pair<std::string, std::string>>& manifest);

/// Rebuilds the cascade from <dir>/config.txt (the artifact files are
/// derived data); verifies the stored base code matches the rebuilt one.
cascade_bundle load_cascade_dir(const std::string& dir,
                                std::uint64_t walk_cap = default_walk_cap);

}  // namespace walklift
