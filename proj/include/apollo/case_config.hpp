#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "apollo/lattice.hpp"

namespace apollo {

/// A linear combination of named vectors, kept symbolic until names resolve.
struct VectorExpr {
  std::vector<std::pair<Integer, std::string>> terms;  // coefficient, name
  std::optional<std::vector<Integer>> literal;
  std::string text;
};

/// A vector to be solved for: a wall normal or a null point.
struct Derivation {
  enum class Kind { Normal, Null };
  Kind kind = Kind::Normal;
  std::string name;
  std::vector<VectorExpr> orthogonal_to;
  std::optional<Integer> norm_target;
};

/// Rules that rebuild the Gram matrix from tangency data.
struct ReconstructRules {
  std::vector<std::size_t> tangent;  // mutually tangent -2 classes
  std::optional<std::size_t> cusp;
  std::vector<std::size_t> cusp_on;  // -2 classes whose walls pass through the cusp
  std::optional<std::size_t> fiber_face;  // fiber class is cusp - face
};

struct CaseConfig {
  std::string name;
  std::size_t dim = 0;
  IntegerMatrix gram;
  std::optional<std::size_t> cusp;
  std::optional<std::size_t> face;
  std::vector<std::pair<std::string, VectorExpr>> vectors;
  std::vector<std::pair<std::string, LatticeVector>> printed;
  std::vector<std::pair<std::string, LatticeVector>> rejected;
  std::vector<Derivation> derivations;
  std::vector<std::string> walls;
  std::vector<std::string> extra;
  std::optional<std::pair<VectorExpr, VectorExpr>> strip;
  std::optional<ReconstructRules> reconstruct;
  std::map<std::string, std::string> settings;  // free-form key/value pairs
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline Integer parse_integer(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.empty()) throw ConfigError("line " + std::to_string(line) + ": expected integer");
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) throw ConfigError("line " + std::to_string(line) + ": bad integer '" + t + "'");
  for (std::size_t j = i; j < t.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(t[j])))
      throw ConfigError("line " + std::to_string(line) + ": bad integer '" + t + "'");
  return Integer(t[0] == '+' ? t.substr(1) : t);
}

inline std::vector<Integer> parse_literal(const std::string& s, int line) {
  std::string t = trim(s);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated vector literal");
    t = t.substr(1, t.size() - 2);
  }
  for (auto& ch : t)
    if (ch == ',') ch = ' ';
  std::vector<Integer> out;
  for (const auto& tok : split_ws(t)) out.push_back(parse_integer(tok, line));
  if (out.empty()) throw ConfigError("line " + std::to_string(line) + ": empty vector literal");
  return out;
}

/// Parses "e4 - e3", "2*e1 + n1", or "[1, 0, -1, 1]".
inline VectorExpr parse_expr(const std::string& s, int line) {
  VectorExpr e;
  e.text = trim(s);
  if (e.text.empty()) throw ConfigError("line " + std::to_string(line) + ": empty expression");
  if (e.text.front() == '[') {
    e.literal = parse_literal(e.text, line);
    return e;
  }
  std::string t;
  for (char ch : e.text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  std::size_t i = 0;
  while (i < t.size()) {
    Integer sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      if (t[i] == '-') sign = -1;
      ++i;
    } else if (i != 0) {
      throw ConfigError("line " + std::to_string(line) + ": expected + or - in '" + e.text + "'");
    }
    std::size_t j = i;
    while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
    std::string term = t.substr(i, j - i);
    if (term.empty()) throw ConfigError("line " + std::to_string(line) + ": dangling operator in '" + e.text + "'");
    Integer coef = 1;
    auto star = term.find('*');
    if (star != std::string::npos) {
      coef = parse_integer(term.substr(0, star), line);
      term = term.substr(star + 1);
    }
    if (term.empty() || !std::isalpha(static_cast<unsigned char>(term[0])))
      throw ConfigError("line " + std::to_string(line) + ": bad term in '" + e.text + "'");
    e.terms.emplace_back(sign * coef, term);
    i = j;
  }
  return e;
}

inline std::size_t parse_basis_index(const std::string& s, std::size_t dim, int line) {
  std::string t = trim(s);
  if (t.size() < 2 || t[0] != 'e') throw ConfigError("line " + std::to_string(line) + ": expected basis name eN, got '" + t + "'");
  std::size_t idx = 0;
  try {
    idx = std::stoul(t.substr(1));
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": bad basis name '" + t + "'");
  }
  if (idx < 1 || idx > dim) throw ConfigError("line " + std::to_string(line) + ": basis index out of range in '" + t + "'");
  return idx - 1;
}

}  // namespace detail

/// Parses the plain-text case format (see data/cases/*.lat).
inline CaseConfig parse_case(const std::string& text) {
  using namespace detail;
  CaseConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  enum class Block { None, Gram, Reconstruct } block = Block::None;
  std::vector<std::vector<Integer>> gram_rows;
  bool have_gram = false;

  auto need_dim = [&](int ln) {
    if (cfg.dim == 0) throw ConfigError("line " + std::to_string(ln) + ": 'dim' must come first");
  };

  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;

    if (block == Block::Gram) {
      if (s == "end") {
        block = Block::None;
        if (gram_rows.size() != cfg.dim) throw ConfigError("line " + std::to_string(line) + ": gram block needs " + std::to_string(cfg.dim) + " rows");
        cfg.gram = IntegerMatrix(cfg.dim, cfg.dim);
        for (std::size_t i = 0; i < cfg.dim; ++i)
          for (std::size_t j = 0; j < cfg.dim; ++j) cfg.gram(i, j) = gram_rows[i][j];
        have_gram = true;
        continue;
      }
      auto row = parse_literal(s, line);
      if (row.size() != cfg.dim) throw ConfigError("line " + std::to_string(line) + ": gram row has wrong length");
      gram_rows.push_back(std::move(row));
      continue;
    }
    if (block == Block::Reconstruct) {
      if (s == "end") {
        block = Block::None;
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value in reconstruct block");
      std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
      auto& r = *cfg.reconstruct;
      if (key == "tangent") {
        if (val == "all") {
          for (std::size_t i = 0; i < cfg.dim; ++i) r.tangent.push_back(i);
        } else {
          for (const auto& tok : split_ws(val)) r.tangent.push_back(parse_basis_index(tok, cfg.dim, line));
        }
      } else if (key == "cusp") {
        r.cusp = parse_basis_index(val, cfg.dim, line);
      } else if (key == "cusp_on") {
        for (const auto& tok : split_ws(val)) r.cusp_on.push_back(parse_basis_index(tok, cfg.dim, line));
      } else if (key == "fiber_face") {
        r.fiber_face = parse_basis_index(val, cfg.dim, line);
      } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown reconstruct key '" + key + "'");
      }
      continue;
    }

    if (s == "gram") {
      need_dim(line);
      block = Block::Gram;
      gram_rows.clear();
      continue;
    }
    if (s == "reconstruct") {
      need_dim(line);
      block = Block::Reconstruct;
      cfg.reconstruct = ReconstructRules{};
      continue;
    }

    // "normal n1 : e1 e3 e4 | -8" and "null P : e1 e2"
    auto first = split_ws(s).front();
    if (first == "normal" || first == "null") {
      need_dim(line);
      auto colon = s.find(':');
      if (colon == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected ':' in derivation");
      Derivation d;
      d.kind = first == "normal" ? Derivation::Kind::Normal : Derivation::Kind::Null;
      d.name = trim(s.substr(first.size(), colon - first.size()));
      if (d.name.empty()) throw ConfigError("line " + std::to_string(line) + ": derivation needs a name");
      std::string rest = s.substr(colon + 1);
      auto bar = rest.find('|');
      if (bar != std::string::npos) {
        d.norm_target = parse_integer(rest.substr(bar + 1), line);
        rest = rest.substr(0, bar);
      }
      for (auto& tok : split_ws(rest)) d.orthogonal_to.push_back(parse_expr(tok, line));
      if (d.orthogonal_to.empty()) throw ConfigError("line " + std::to_string(line) + ": derivation without constraints");
      cfg.derivations.push_back(std::move(d));
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": cannot parse '" + s + "'");
    std::string lhs = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    auto words = split_ws(lhs);
    if (words.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    const std::string& key = words[0];

    if (words.size() == 2 && (key == "vector" || key == "printed" || key == "reject")) {
      need_dim(line);
      if (key == "vector") {
        cfg.vectors.emplace_back(words[1], parse_expr(val, line));
      } else {
        auto lit = parse_literal(val, line);
        if (lit.size() != cfg.dim) throw ConfigError("line " + std::to_string(line) + ": vector has wrong length");
        (key == "printed" ? cfg.printed : cfg.rejected).emplace_back(words[1], LatticeVector(std::move(lit)));
      }
      continue;
    }
    if (words.size() != 1) throw ConfigError("line " + std::to_string(line) + ": unknown directive '" + lhs + "'");

    if (key == "name") {
      cfg.name = val;
    } else if (key == "dim") {
      auto d = parse_integer(val, line);
      if (d < 2 || d > 16) throw ConfigError("line " + std::to_string(line) + ": dim must be in 2..16");
      cfg.dim = d.convert_to<std::size_t>();
    } else if (key == "cusp") {
      need_dim(line);
      cfg.cusp = parse_basis_index(val, cfg.dim, line);
    } else if (key == "face") {
      need_dim(line);
      cfg.face = parse_basis_index(val, cfg.dim, line);
    } else if (key == "walls") {
      cfg.walls = split_ws(val);
    } else if (key == "extra") {
      cfg.extra = split_ws(val);
    } else if (key == "strip") {
      auto toks = split_ws(val);
      if (toks.size() != 2) throw ConfigError("line " + std::to_string(line) + ": strip needs two vectors");
      cfg.strip = std::make_pair(parse_expr(toks[0], line), parse_expr(toks[1], line));
    } else {
      cfg.settings[key] = val;
    }
  }
  if (block != Block::None) throw ConfigError("unterminated block at end of config");
  if (cfg.dim == 0) throw ConfigError("config lacks 'dim'");
  if (!have_gram) throw ConfigError("config lacks a gram block");
  if (cfg.name.empty()) cfg.name = "custom";
  return cfg;
}

inline CaseConfig load_case_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_case(ss.str());
}

inline const char* circle_case_text() {
  return R"(# Apollonian circle packing: three mutually tangent -2 classes and a fiber class
name = circle
dim = 4
gram
  -2  2  2  4
   2 -2  2  4
   2  2 -2  0
   4  4  0  0
end
cusp = e4
face = e3
vector L = e4 - e3
strip = e3 L

# literal tuples, cross-checked against the solved walls below
printed n1 = [-1, 1, 0, 1]
printed n2 = [0, 0, 2, -1]
printed n3 = [1, -1, 0, 1]
printed n4 = [1, 0, -1, 1]
reject n5 = [2, -2, 0, 1]

# the same walls, solved from their stated incidences
null P : e1 e2
normal n1 : e1 e3 e4 | -8
normal n2 : e1 e2 e4 | -8
normal n3 : e3 e4 P | -8
normal n4 : e2 e3 n1 | -8
walls = n1 n2 n3 n4
extra = e3

reconstruct
  tangent = e1 e2 e3
  cusp = e4
  cusp_on = e3
  fiber_face = e3
end
)";
}

inline const char* sphere_case_text() {
  return R"(# Apollonian sphere packing: four mutually tangent -2 classes and a fiber class
name = sphere
dim = 5
gram
  -2  2  2  2  4
   2 -2  2  2  4
   2  2 -2  2  4
   2  2  2 -2  0
   4  4  4  0  0
end
cusp = e5
face = e4
vector L = e5 - e4
strip = e4 L

printed n1 = [0, 1, -1, 0, 0]
printed n2 = [1, -1, 0, 0, 0]
printed n3 = [1, 1, -2, 0, 1]
printed n4 = [0, 0, 0, 2, -1]
printed n5 = [1, 1, 1, 3, -2]
printed P = [1, 0, 0, 1, 0]

null P : e1 L
normal n1 : e1 e4 e5 e2+e3 | -8
normal n2 : e3 e4 e5 e1+e2 | -8
normal n3 : e1 e2 e4 e5 | -24
normal n4 : e1 e2 e3 e5 | -8
normal n5 : e2 e3 e4 P | -8
walls = n1 n2 n3 n4 n5
extra = e4

reconstruct
  tangent = e1 e2 e3 e4
  cusp = e5
  cusp_on = e4
  fiber_face = e4
end
)";
}

/// The rank m+2 lattice with -2 on the diagonal and 2 elsewhere.
inline CaseConfig dim_family_case(int m) {
  if (m < 1) throw ConfigError("family parameter m must be at least 1");
  CaseConfig cfg;
  cfg.name = "dim" + std::to_string(m);
  cfg.dim = static_cast<std::size_t>(m) + 2;
  cfg.gram = IntegerMatrix(cfg.dim, cfg.dim, Integer(2));
  for (std::size_t i = 0; i < cfg.dim; ++i) cfg.gram(i, i) = -2;
  std::vector<Integer> n(cfg.dim, Integer(1));
  n.back() = 1 - m;
  cfg.printed.emplace_back("n", LatticeVector(std::move(n)));
  ReconstructRules r;
  for (std::size_t i = 0; i < cfg.dim; ++i) r.tangent.push_back(i);
  cfg.reconstruct = r;
  return cfg;
}

/// Built-in cases by name: "circle", "sphere", or "dim<m>".
inline CaseConfig builtin_case(const std::string& name) {
  if (name == "circle") return parse_case(circle_case_text());
  if (name == "sphere") return parse_case(sphere_case_text());
  if (name.rfind("dim", 0) == 0 && name.size() > 3) {
    try {
      return dim_family_case(std::stoi(name.substr(3)));
    } catch (const std::invalid_argument&) {
    }
  }
  throw ConfigError("unknown case '" + name + "'");
}

}  // namespace apollo
