#include "carl/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace carl {

ConfigError::ConfigError(const std::string& msg, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

bool RunConfig::has(const std::string& block) const {
  return std::find(blocks.begin(), blocks.end(), block) != blocks.end();
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
T as(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + what + "' has the wrong type", line_of(n));
  }
}

void check_keys(const YAML::Node& n, const std::string& block, const std::set<std::string>& allowed) {
  if (!n.IsMap()) throw ConfigError("block '" + block + "' must be a mapping", line_of(n));
  for (const auto& kv : n) {
    const std::string key = as<std::string>(kv.first, block + " key");
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in block '" + block + "'", line_of(kv.first));
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& block) {
  const YAML::Node n = parent[key];
  if (n) out = as<T>(n, block + "." + key);
}

PolyTable read_table(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) throw ConfigError("'" + what + "' must be a list of [coeff, exponents...] rows", line_of(n));
  PolyTable t;
  for (const auto& row : n) {
    auto r = as<std::vector<double>>(row, what);
    if (r.empty()) throw ConfigError("'" + what + "' has an empty row", line_of(row));
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i] < 0 || r[i] != std::floor(r[i])) throw ConfigError("'" + what + "' exponents must be natural numbers", line_of(row));
    }
    t.push_back(std::move(r));
  }
  return t;
}

ComplexTable read_complex(const YAML::Node& n, const std::string& what) {
  check_keys(n, what, {"re", "im"});
  ComplexTable c;
  if (n["re"]) c.re = read_table(n["re"], what + ".re");
  if (n["im"]) c.im = read_table(n["im"], what + ".im");
  return c;
}

void emit_table(YAML::Emitter& e, const PolyTable& t) {
  e << YAML::BeginSeq;
  for (const auto& r : t) {
    e << YAML::Flow << YAML::BeginSeq;
    for (double v : r) e << v;
    e << YAML::EndSeq;
  }
  e << YAML::EndSeq;
}

void emit_complex(YAML::Emitter& e, const ComplexTable& c) {
  e << YAML::BeginMap << YAML::Key << "re" << YAML::Value;
  emit_table(e, c.re);
  e << YAML::Key << "im" << YAML::Value;
  emit_table(e, c.im);
  e << YAML::EndMap;
}

ComplexPoly complex_from_table(int nv, const ComplexTable& c) {
  return {poly_from_table(nv, c.re), poly_from_table(nv, c.im)};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  RunConfig cfg;
  if (!root || root.IsNull()) throw ConfigError("empty configuration", 0);
  check_keys(root, "root", {"domain", "coefficients", "weight", "equation", "params", "options", "tables", "output", "seed"});
  for (const auto& kv : root) cfg.blocks.push_back(kv.first.as<std::string>());
  std::sort(cfg.blocks.begin(), cfg.blocks.end());
  if (!root["domain"]) throw ConfigError("missing required block 'domain'", 1);

  {
    const YAML::Node d = root["domain"];
    check_keys(d, "domain", {"dim", "lows", "highs", "nodes", "time", "levels"});
    auto& b = cfg.domain;
    read(d, "dim", b.n, "domain");
    read(d, "lows", b.lows, "domain");
    read(d, "highs", b.highs, "domain");
    read(d, "nodes", b.nodes, "domain");
    read(d, "levels", b.levels, "domain");
    if (d["time"]) {
      const auto t = as<std::vector<double>>(d["time"], "domain.time");
      if (t.size() != 2) throw ConfigError("'domain.time' must be [t1, t2]", line_of(d["time"]));
      b.t1 = t[0];
      b.t2 = t[1];
    }
    if (b.n < 1 || b.n > 3) throw ConfigError("'domain.dim' must be 1, 2 or 3", line_of(d));
    if (static_cast<int>(b.lows.size()) != b.n || static_cast<int>(b.highs.size()) != b.n ||
        static_cast<int>(b.nodes.size()) != b.n) {
      throw ConfigError("'domain' lows, highs and nodes need one entry per dimension", line_of(d));
    }
  }
  if (const YAML::Node c = root["coefficients"]) {
    check_keys(c, "coefficients", {"family", "a0", "slope", "matrix", "entries"});
    auto& b = cfg.coefficients;
    read(c, "family", b.family, "coefficients");
    read(c, "a0", b.a0, "coefficients");
    read(c, "slope", b.slope, "coefficients");
    read(c, "matrix", b.matrix, "coefficients");
    if (c["entries"]) {
      for (const auto& kv : c["entries"]) {
        const std::string key = as<std::string>(kv.first, "coefficients.entries key");
        if (key.size() != 2 || key[0] > key[1] || key[0] < '0' || key[1] > '2') {
          throw ConfigError("entry key '" + key + "' must be 'kl' with k <= l", line_of(kv.first));
        }
        b.entries[key] = read_table(kv.second, "coefficients.entries." + key);
      }
    }
    static const std::set<std::string> families{"identity", "constant", "scalar_affine", "polynomial"};
    if (!families.count(b.family)) throw ConfigError("unknown coefficient family '" + b.family + "'", line_of(c["family"]));
  }
  if (const YAML::Node w = root["weight"]) {
    check_keys(w, "weight", {"profile", "psi0", "x0", "t0", "gamma", "C", "lambda", "alpha", "horizon", "auto_shift"});
    auto& b = cfg.weight;
    read(w, "profile", b.profile, "weight");
    if (w["psi0"]) b.psi0 = read_table(w["psi0"], "weight.psi0");
    read(w, "x0", b.x0, "weight");
    read(w, "t0", b.t0, "weight");
    read(w, "gamma", b.gamma, "weight");
    read(w, "C", b.C, "weight");
    read(w, "lambda", b.lambda, "weight");
    read(w, "alpha", b.alpha, "weight");
    read(w, "horizon", b.horizon, "weight");
    read(w, "auto_shift", b.auto_shift, "weight");
    static const std::set<std::string> profiles{"zero", "example", "observability", "ucp"};
    if (!profiles.count(b.profile)) throw ConfigError("unknown weight profile '" + b.profile + "'", line_of(w["profile"]));
  }
  if (const YAML::Node e = root["equation"]) {
    check_keys(e, "equation", {"kind", "q0", "q", "p", "bound"});
    auto& b = cfg.equation;
    read(e, "kind", b.kind, "equation");
    read(e, "bound", b.bound, "equation");
    if (e["q0"]) b.q0 = read_complex(e["q0"], "equation.q0");
    if (e["p"]) b.p = read_complex(e["p"], "equation.p");
    if (e["q"]) {
      if (!e["q"].IsSequence()) throw ConfigError("'equation.q' must be a list", line_of(e["q"]));
      for (const auto& q : e["q"]) b.q.push_back(read_complex(q, "equation.q"));
    }
    try {
      equation_kind_from_name(b.kind);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what(), line_of(e["kind"]));
    }
  }
  if (const YAML::Node p = root["params"]) {
    if (!p.IsMap()) throw ConfigError("block 'params' must be a mapping", line_of(p));
    for (const auto& kv : p) {
      const std::string key = as<std::string>(kv.first, "params key");
      cfg.params[key] = kv.second.IsSequence() ? as<std::vector<double>>(kv.second, "params." + key)
                                               : std::vector<double>{as<double>(kv.second, "params." + key)};
    }
  }
  if (const YAML::Node o = root["options"]) {
    if (!o.IsMap()) throw ConfigError("block 'options' must be a mapping", line_of(o));
    for (const auto& kv : o) cfg.options[as<std::string>(kv.first, "options key")] = as<std::string>(kv.second, "options value");
  }
  if (const YAML::Node t = root["tables"]) {
    if (!t.IsMap()) throw ConfigError("block 'tables' must be a mapping", line_of(t));
    for (const auto& kv : t) {
      const std::string key = as<std::string>(kv.first, "tables key");
      cfg.tables[key] = read_table(kv.second, "tables." + key);
    }
  }
  read(root, "output", cfg.output, "root");
  read(root, "seed", cfg.seed, "root");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config(os.str());
}

std::string to_yaml(const RunConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  const auto& d = cfg.domain;
  e << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dim" << YAML::Value << d.n;
  e << YAML::Key << "lows" << YAML::Value << YAML::Flow << d.lows;
  e << YAML::Key << "highs" << YAML::Value << YAML::Flow << d.highs;
  e << YAML::Key << "nodes" << YAML::Value << YAML::Flow << d.nodes;
  e << YAML::Key << "time" << YAML::Value << YAML::Flow << std::vector<double>{d.t1, d.t2};
  e << YAML::Key << "levels" << YAML::Value << d.levels;
  e << YAML::EndMap;
  if (cfg.has("coefficients")) {
    const auto& c = cfg.coefficients;
    e << YAML::Key << "coefficients" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "family" << YAML::Value << c.family;
    e << YAML::Key << "a0" << YAML::Value << c.a0;
    e << YAML::Key << "slope" << YAML::Value << YAML::Flow << c.slope;
    e << YAML::Key << "matrix" << YAML::Value << YAML::Flow << c.matrix;
    e << YAML::Key << "entries" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, t] : c.entries) {
      e << YAML::Key << k << YAML::Value;
      emit_table(e, t);
    }
    e << YAML::EndMap << YAML::EndMap;
  }
  if (cfg.has("weight")) {
    const auto& w = cfg.weight;
    e << YAML::Key << "weight" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "profile" << YAML::Value << w.profile;
    e << YAML::Key << "psi0" << YAML::Value;
    emit_table(e, w.psi0);
    e << YAML::Key << "x0" << YAML::Value << YAML::Flow << w.x0;
    e << YAML::Key << "t0" << YAML::Value << w.t0;
    e << YAML::Key << "gamma" << YAML::Value << w.gamma;
    e << YAML::Key << "C" << YAML::Value << w.C;
    e << YAML::Key << "lambda" << YAML::Value << w.lambda;
    e << YAML::Key << "alpha" << YAML::Value << w.alpha;
    e << YAML::Key << "horizon" << YAML::Value << w.horizon;
    e << YAML::Key << "auto_shift" << YAML::Value << w.auto_shift;
    e << YAML::EndMap;
  }
  if (cfg.has("equation")) {
    const auto& q = cfg.equation;
    e << YAML::Key << "equation" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << q.kind;
    e << YAML::Key << "bound" << YAML::Value << q.bound;
    if (q.q0) {
      e << YAML::Key << "q0" << YAML::Value;
      emit_complex(e, *q.q0);
    }
    if (!q.q.empty()) {
      e << YAML::Key << "q" << YAML::Value << YAML::BeginSeq;
      for (const auto& c : q.q) emit_complex(e, c);
      e << YAML::EndSeq;
    }
    if (q.p) {
      e << YAML::Key << "p" << YAML::Value;
      emit_complex(e, *q.p);
    }
    e << YAML::EndMap;
  }
  if (cfg.has("params")) {
    e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : cfg.params) e << YAML::Key << k << YAML::Value << YAML::Flow << v;
    e << YAML::EndMap;
  }
  if (cfg.has("options")) {
    e << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : cfg.options) e << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
    e << YAML::EndMap;
  }
  if (cfg.has("tables")) {
    e << YAML::Key << "tables" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, t] : cfg.tables) {
      e << YAML::Key << k << YAML::Value;
      emit_table(e, t);
    }
    e << YAML::EndMap;
  }
  if (cfg.has("output")) e << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << cfg.output;
  if (cfg.has("seed")) e << YAML::Key << "seed" << YAML::Value << cfg.seed;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

Polynomial poly_from_table(int num_vars, const PolyTable& t) {
  Polynomial p(num_vars);
  for (const auto& r : t) {
    if (static_cast<int>(r.size()) - 1 > num_vars) {
      throw ConfigError("polynomial row has more exponents than variables (" + std::to_string(num_vars) + ")", 0);
    }
    Exponents e{};
    for (std::size_t i = 1; i < r.size(); ++i) e[i - 1] = static_cast<int>(r[i]);
    p.add_term(e, r[0]);
  }
  return p;
}

BoxDomain build_box(const RunConfig& cfg) {
  const auto& d = cfg.domain;
  return make_box(d.n, d.lows, d.highs, d.nodes);
}

SpaceTimeGrid build_grid(const RunConfig& cfg) {
  return SpaceTimeGrid(build_box(cfg), cfg.domain.t1, cfg.domain.t2, cfg.domain.levels);
}

MatrixField build_field(const RunConfig& cfg) {
  const int n = cfg.domain.n;
  const auto& c = cfg.coefficients;
  if (c.family == "identity") return MatrixField::identity(n);
  if (c.family == "scalar_affine") {
    if (static_cast<int>(c.slope.size()) != n) throw ConfigError("'coefficients.slope' needs one entry per dimension", 0);
    return MatrixField::scalar_affine(n, c.a0, c.slope);
  }
  if (c.family == "constant") {
    if (static_cast<int>(c.matrix.size()) != n * n) throw ConfigError("'coefficients.matrix' needs n*n entries", 0);
    Mat3 A = Mat3::Zero();
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) A(k, l) = c.matrix[k * n + l];
    }
    return MatrixField::constant(A, n);
  }
  std::vector<std::vector<Polynomial>> e(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      const auto it = c.entries.find(std::to_string(k) + std::to_string(l));
      if (it == c.entries.end()) {
        if (k == l) throw ConfigError("polynomial family needs diagonal entry '" + std::to_string(k) + std::to_string(l) + "'", 0);
        continue;
      }
      e[k][l] = poly_from_table(n, it->second);
    }
  }
  return MatrixField::polynomial(n, e);
}

Polynomial build_psi0(const RunConfig& cfg) {
  const int n = cfg.domain.n;
  if (!cfg.weight.psi0.empty()) return poly_from_table(n, cfg.weight.psi0);
  if (static_cast<int>(cfg.weight.x0.size()) != n) throw ConfigError("weight needs psi0 or an x0 with one entry per dimension", 0);
  return half_squared_distance(n, cfg.weight.x0);
}

WeightSpec build_weight(const RunConfig& cfg, const SpaceTimeGrid& grid) {
  const auto& w = cfg.weight;
  if (w.profile == "example") {
    return make_example_weight(w.x0, w.t0, w.gamma, w.C, grid, w.lambda, w.auto_shift);
  }
  if (w.profile == "observability") {
    return make_observability_weight(build_psi0(cfg), w.alpha, w.horizon, w.C, build_field(cfg), grid.box(), w.lambda).spec;
  }
  if (w.profile == "ucp") throw ConfigError("the ucp profile is only used by ucp-certificate", 0);
  return make_time_independent_weight(build_psi0(cfg), w.lambda, w.C);
}

LowerOrderCoeffs build_lower(const RunConfig& cfg) {
  const int nv = cfg.domain.n + 1;
  const auto& e = cfg.equation;
  LowerOrderCoeffs lo;
  if (e.q0) lo.q0 = complex_from_table(nv, *e.q0);
  for (const auto& q : e.q) lo.q.push_back(complex_from_table(nv, q));
  if (e.p) lo.p = complex_from_table(nv, *e.p);
  lo.bound = e.bound;
  return lo;
}

EquationKind equation_kind_from_name(const std::string& name) {
  if (name == "elliptic") return EquationKind::elliptic;
  if (name == "parabolic" || name == "heat") return EquationKind::parabolic;
  if (name == "wave") return EquationKind::wave;
  if (name == "schrodinger") return EquationKind::schrodinger;
  throw std::invalid_argument("unknown equation kind '" + name + "'");
}

double param(const RunConfig& cfg, const std::string& key, double fallback) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end() || it->second.empty()) return fallback;
  return it->second.front();
}

std::vector<double> param_list(const RunConfig& cfg, const std::string& key, const std::vector<double>& fallback) {
  const auto it = cfg.params.find(key);
  return it == cfg.params.end() ? fallback : it->second;
}

std::string option(const RunConfig& cfg, const std::string& key, const std::string& fallback) {
  const auto it = cfg.options.find(key);
  return it == cfg.options.end() ? fallback : it->second;
}

}  // namespace carl
