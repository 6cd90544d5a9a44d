#include "carl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "carl/carleman_audit.hpp"
#include "carl/experiments.hpp"
#include "carl/pde_solvers.hpp"
#include "carl/pseudoconvex.hpp"
#include "carl/report.hpp"

namespace carl {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json mat_json(const Mat3& M, int n) {
  json a = json::array();
  for (int k = 0; k < n; ++k) {
    json r = json::array();
    for (int l = 0; l < n; ++l) r.push_back(num(M(k, l)));
    a.push_back(r);
  }
  return a;
}

json loc_json(const std::array<double, 3>& x, int n) {
  json a = json::array();
  for (int i = 0; i < n; ++i) a.push_back(num(x[i]));
  return a;
}

json ellipticity_json(const EllipticityReport& e) {
  return {{"kappa", num(e.kappa_estimate)}, {"lambda_min", num(e.lambda_min)}, {"lambda_max", num(e.lambda_max)},
          {"m", num(e.m_estimate)}, {"pass", e.pass}};
}

json pseudoconvex_json(const PseudoconvexCertificate& c, int n) {
  return {{"kappa", num(c.kappa)},
          {"kappa_location", loc_json(c.kappa_location, n)},
          {"grad_min", num(c.grad_min)},
          {"grad_location", loc_json(c.grad_location, n)},
          {"lipschitz_estimate", num(c.lipschitz_estimate)},
          {"lipschitz_margin", num(c.lipschitz_margin)},
          {"pass", c.pass}};
}

json admissibility_json(const WeightAdmissibility& a) {
  json v = json::array();
  for (const auto& x : a.violated) {
    v.push_back({{"condition", condition_name(x.condition)}, {"node", x.node}, {"level", x.level}, {"value", num(x.value)}});
  }
  return {{"kind", kind_name(a.kind)}, {"pass", a.pass},   {"kappa", num(a.kappa)},       {"varkappa", num(a.varkappa)},
          {"delta", num(a.delta)},     {"delta0", num(a.delta0)}, {"grad_min", num(a.grad_min)}, {"violated", v}};
}

struct Context {
  const RunConfig& cfg;
  std::string out;
  CommandResult res;

  void write(const std::string& name, const std::string& content) {
    write_file((std::filesystem::path(out) / name).string(), content);
    res.artifacts.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  void fail() { res.status = std::max(res.status, 2); }
};

double trace_series_value(const Complex& z) { return z.real(); }

void cmd_certify(Context& c) {
  const BoxDomain box = build_box(c.cfg);
  const MatrixField A = build_field(c.cfg);
  const auto ell = certify_ellipticity(A, box);
  json j{{"ellipticity", ellipticity_json(ell)}};
  bool pass = ell.pass;
  if (c.cfg.has("weight")) {
    const auto cert = certify_pseudoconvex(A, build_psi0(c.cfg), box);
    j["pseudoconvex"] = pseudoconvex_json(cert, box.n);
    pass = pass && cert.pass;
    if (c.cfg.has("equation")) {
      const SpaceTimeGrid grid = build_grid(c.cfg);
      const WeightSpec spec = build_weight(c.cfg, grid);
      const auto adm = check_admissibility(spec, A, &ell, grid, equation_kind_from_name(c.cfg.equation.kind));
      j["admissibility"] = admissibility_json(adm);
      pass = pass && adm.pass;
    }
  }
  j["pass"] = pass;
  c.write_json("certificate.json", j);
  if (!pass) c.fail();
}

void cmd_theta(Context& c) {
  const BoxDomain box = build_box(c.cfg);
  const MatrixField A = build_field(c.cfg);
  const Polynomial h = build_psi0(c.cfg);
  std::vector<double> pts = param_list(c.cfg, "points", {});
  const int n = box.n;
  if (pts.empty()) {
    for (int i = 0; i < n; ++i) pts.push_back(0.5 * (box.lows[i] + box.highs[i]));
  }
  if (pts.size() % n != 0) throw ConfigError("'params.points' length must be a multiple of the dimension", 0);
  json arr = json::array();
  for (std::size_t p = 0; p < pts.size(); p += n) {
    double x[3] = {0, 0, 0};
    std::array<double, 3> xa{};
    for (int i = 0; i < n; ++i) xa[i] = x[i] = pts[p + i];
    const auto d = theta_decomposition(A, h, x);
    json lam = json::array();
    for (int m = 0; m < n; ++m) lam.push_back(mat_json(d.Lambda[m], n));
    arr.push_back({{"x", loc_json(xa, n)}, {"Lambda", lam}, {"Upsilon", mat_json(d.Upsilon, n)},
                   {"Theta", mat_json(d.Theta, n)}, {"theta_sym_min", num(d.theta_sym_min)}});
  }
  c.write_json("theta.json", {{"points", arr}});
}

void cmd_flatten(Context& c) {
  const MatrixField A = build_field(c.cfg);
  const int n = c.cfg.domain.n;
  const auto it = c.cfg.tables.find("graph");
  const Polynomial graph = it == c.cfg.tables.end() ? Polynomial(n) : poly_from_table(n, it->second);
  const auto r = flatten_and_certify_hypersurface(A, graph, param(c.cfg, "radius", 0.5),
                                                  static_cast<int>(param(c.cfg, "chart_nodes", 17)));
  const Mat3 target = 4.0 * Mat3::Identity();
  double dev = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) dev = std::max(dev, std::abs(r.theta_at_origin.Theta(k, l) - target(k, l)));
  }
  json j{{"radius", num(r.chart.radius)},
         {"halvings", r.chart.halvings},
         {"pch1_min", num(r.chart.pch1_min)},
         {"pch1_pass", r.chart.pch1_min >= 0.5},
         {"theta_at_origin", mat_json(r.theta_at_origin.Theta, n)},
         {"deviation_from_4I", num(dev)},
         {"certificate", pseudoconvex_json(r.certificate, n)}};
  if (dev > 1e-8) {
    c.res.flags.push_back("computed Theta at the chart origin differs from 4I");
  }
  c.write_json("flatten.json", j);
  if (!r.certificate.pass || r.chart.pch1_min < 0.5) c.fail();
}

void cmd_audit(Context& c) {
  const SpaceTimeGrid grid = build_grid(c.cfg);
  const MatrixField A = build_field(c.cfg);
  const WeightSpec spec = build_weight(c.cfg, grid);
  const InequalityKind kind = inequality_from_name(option(c.cfg, "inequality", "wave_full"));
  const LowerOrderCoeffs lower = build_lower(c.cfg);
  const auto taus = param_list(c.cfg, "taus", {2, 4, 8, 16});
  const auto lambdas = param_list(c.cfg, "lambdas", {spec.lambda});
  const bool single = equation_of(kind) == EquationKind::elliptic;
  const auto ensemble = default_ensemble(grid, c.cfg.seed, single);
  const auto ell = certify_ellipticity(A, grid.box());
  const auto adm = check_admissibility(spec, A, &ell, grid, equation_of(kind));
  AuditReport rep = adm.pass ? sweep_audit(ensemble, spec, A, lower, kind, taus, lambdas, grid,
                                           param(c.cfg, "target", 1e-3))
                             : negative_control(adm, ensemble, spec, A, ell, kind, taus, lambdas, grid);
  CsvTable t;
  t.header = {"tau", "lambda", "member", "lhs", "rhs_source", "rhs_dmu", "rhs_sigma_plus", "ratio"};
  for (const auto& cell : rep.cells) {
    for (std::size_t m = 0; m < cell.members.size(); ++m) {
      const auto& v = cell.members[m];
      t.rows.push_back({format_number(cell.tau), format_number(cell.lambda), std::to_string(m),
                        format_number(v.lhs_interior), format_number(v.rhs_source), format_number(v.rhs_boundary_dmu),
                        format_number(v.rhs_boundary_sigma_plus), format_number(v.ratio())});
    }
  }
  c.write("audit.csv", to_csv(t));
  json cells = json::array();
  for (const auto& cell : rep.cells) {
    cells.push_back({{"tau", cell.tau}, {"lambda", cell.lambda}, {"aleph", num(cell.aleph)}, {"vacuous", cell.vacuous}});
  }
  json j{{"kind", inequality_name(kind)},
         {"admissibility", admissibility_json(adm)},
         {"stamp", rep.stamp},
         {"reasons", rep.admissibility_reasons},
         {"target", rep.target},
         {"tau_star", rep.tau_star ? num(*rep.tau_star) : json("absent")},
         {"lambda_star", rep.lambda_star ? num(*rep.lambda_star) : json("absent")},
         {"positive_beyond_threshold", rep.positive_beyond_threshold()},
         {"cells", cells},
         {"ensemble", std::to_string(ensemble.size()) + " fields, seed " + std::to_string(c.cfg.seed)},
         {"note", rep.note}};
  c.write_json("audit_summary.json", j);
  c.write("audit_heatmap.svg", emit_plot(t, std::string("min RHS/LHS, ") + inequality_name(kind)));
  if (!adm.pass || !rep.positive_beyond_threshold()) c.fail();
}

void cmd_ucp(Context& c) {
  UCPGeometry g;
  g.c = param(c.cfg, "c", 1.0);
  g.eps = param(c.cfg, "eps", 0.1);
  g.horizon = param(c.cfg, "horizon", 3.0);
  g.r = param(c.cfg, "r", g.r);
  g.r0 = param(c.cfg, "r0", g.r0);
  g.rho0 = param(c.cfg, "rho0", g.rho0);
  g.rho1 = param(c.cfg, "rho1", g.rho1);
  g.center = param_list(c.cfg, "center", std::vector<double>(c.cfg.domain.n, 0.0));
  const auto cert = ucp_region_certificate(g, param(c.cfg, "lambda", 1.0), param(c.cfg, "C", 0.0));
  json j{{"gamma", num(cert.gamma)}, {"rho", num(cert.rho)},   {"rho_clamped", cert.rho_clamped},
         {"exponents", {num(cert.e0), num(cert.e1), num(cert.e2)}},
         {"levels", {num(cert.c0), num(cert.c1), num(cert.c2)}},
         {"margin", num(cert.margin)}, {"threshold", num(cert.threshold)}, {"threshold_ok", cert.threshold_ok},
         {"pass", cert.pass},          {"failure", cert.failure},       {"shift_note", cert.shift_note}};
  c.res.flags.push_back("source statement omits the right-hand side; read as homogeneous (= 0)");
  c.write_json("ucp_certificate.json", j);
  if (!cert.pass) c.fail();
}

InitialData mode_data(const MatrixField& A, const BoxDomain& box, int mode) {
  const auto modes = mode_ensemble(A, box, mode);
  if (static_cast<int>(modes.size()) < mode) throw ConfigError("requested mode exceeds the grid", 0);
  return modes[mode - 1];
}

void trace_csv(Context& c, const EvolutionState& st, const std::string& name) {
  CsvTable t;
  t.header = {"face", "x0", "x1", "x2", "time", "value", "imag", "series"};
  const auto& faces = st.grid.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (std::size_t q = 0; q < faces[f].nodes.size(); ++q) {
      const auto x = st.grid.box().coords(faces[f].nodes[q]);
      const std::string series = "f" + std::to_string(f) + "n" + std::to_string(q);
      for (int k = 0; k < st.grid.nt(); ++k) {
        const Complex z = st.traces[f][k][q];
        t.rows.push_back({std::to_string(f), format_number(x[0]), format_number(x[1]), format_number(x[2]),
                          format_number(st.grid.time(k)), format_number(trace_series_value(z)),
                          format_number(z.imag()), series});
      }
    }
  }
  c.write(name, to_csv(t));
  c.write(name.substr(0, name.size() - 4) + ".svg", emit_plot(t, "normal derivative on the boundary"));
}

void cmd_solve(Context& c) {
  const BoxDomain box = build_box(c.cfg);
  const MatrixField A = build_field(c.cfg);
  const EquationKind kind = equation_kind_from_name(c.cfg.equation.kind);
  const double horizon = param(c.cfg, "horizon", c.cfg.domain.t2 - c.cfg.domain.t1);
  InitialData data = mode_data(A, box, static_cast<int>(param(c.cfg, "mode", 1)));
  SolveOptions opt;
  opt.cfl_fraction = param(c.cfg, "cfl", 0.5);
  opt.steps = static_cast<int>(param(c.cfg, "steps", 0));
  opt.dt = param(c.cfg, "dt", 0.0);
  if (kind != EquationKind::wave && opt.steps <= 0 && opt.dt <= 0.0) opt.steps = c.cfg.domain.levels - 1;
  opt.keep_snapshots = false;
  const EvolutionState st = solve_evolution(kind, A, build_lower(c.cfg), data, horizon, box, opt);
  CsvTable e;
  e.header = {"time", "value"};
  for (int k = 0; k < st.grid.nt(); ++k) e.rows.push_back({format_number(st.grid.time(k)), format_number(st.energy[k])});
  c.write("energy.csv", to_csv(e));
  c.write("energy.svg", emit_plot(e, kind == EquationKind::wave ? "energy" : "L2 norm"));
  trace_csv(c, st, "traces.csv");
  json j{{"kind", kind_name(kind)}, {"steps", st.grid.nt() - 1}, {"dt", st.grid.dt()}, {"validation_mode", st.validation_mode}};
  if (kind == EquationKind::wave) {
    const auto eq = energy_equivalence_check(st);
    j["energy_ratio_max"] = num(eq.max_ratio);
    j["energy_ratio_min"] = num(eq.min_ratio);
  }
  c.write_json("solve.json", j);
}

void cmd_observability(Context& c) {
  const BoxDomain box = build_box(c.cfg);
  const MatrixField A = build_field(c.cfg);
  const ObservabilityKind kind = observability_from_name(option(c.cfg, "kind", c.cfg.has("equation") ? c.cfg.equation.kind : "wave"));
  const Polynomial psi0 = build_psi0(c.cfg);
  const auto ensemble = mode_ensemble(A, box, static_cast<int>(param(c.cfg, "modes", 4)));
  SolveOptions opt;
  opt.cfl_fraction = param(c.cfg, "cfl", 0.5);
  opt.steps = static_cast<int>(param(c.cfg, "steps", 0));
  const auto rep = observability_experiment(kind, A, psi0, c.cfg.weight.alpha, c.cfg.weight.horizon, ensemble, box, opt);
  CsvTable t;
  t.header = {"sample", "data_norm", "trace_norm", "ratio", "zero_observation"};
  json samples = json::array();
  for (std::size_t s = 0; s < rep.samples.size(); ++s) {
    const auto& x = rep.samples[s];
    t.rows.push_back({std::to_string(s), format_number(x.data_norm), format_number(x.trace_norm), format_number(x.ratio),
                      x.zero_observation ? "1" : "0"});
  }
  c.write("ratios.csv", to_csv(t));
  json j{{"kind", observability_name(kind)},
         {"horizon", rep.horizon},
         {"alpha", rep.alpha},
         {"t_alpha", num(rep.t_alpha)},
         {"secondary_threshold", num(rep.secondary)},
         {"printed_min_threshold", num(rep.printed_min)},
         {"enforced_threshold", num(rep.gate)},
         {"above_threshold", rep.above_threshold},
         {"kappa", num(rep.kappa)},
         {"varkappa", num(rep.varkappa)},
         {"aleph", num(rep.aleph)},
         {"gamma_plus_per_face", rep.gamma_plus_per_face},
         {"norms", "H1_0 norms are gradient seminorms ||grad_A u||"},
         {"ensemble", rep.ensemble},
         {"flags", rep.flags}};
  c.write_json("observability.json", j);
  for (const auto& f : rep.flags) c.res.flags.push_back(f);
  bool zero = false;
  for (const auto& s : rep.samples) zero = zero || s.zero_observation;
  if (!rep.above_threshold) {
    std::ostringstream os;
    os << "observation time " << rep.horizon << " is below the enforced threshold " << rep.gate;
    if (kind == ObservabilityKind::wave) os << " (t_alpha = " << rep.t_alpha << ", secondary = " << rep.secondary << ")";
    c.res.summary = os.str();
    c.fail();
  }
  if (zero) c.fail();
}

std::vector<double> on_box(const BoxDomain& box, double (*f)(const double*)) {
  std::vector<double> v(box.num_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = box.coords(i);
    v[i] = f(x.data());
  }
  return v;
}

double smooth_u(const double* x) { return std::exp(0.5 * x[0]) * std::cos(x[1 % 3] + 0.3 * x[2 % 3]); }
double smooth_v(const double* x) { return std::sin(kPi * x[0]) + x[1 % 3] * x[1 % 3]; }

void cmd_identities(Context& c) {
  const MatrixField A = build_field(c.cfg);
  const int n = c.cfg.domain.n;
  const auto levels = param_list(c.cfg, "levels", n == 3 ? std::vector<double>{9, 17, 33} : std::vector<double>{65, 129, 257});
  json j = json::object();
  bool pass = true;
  auto study = [&](const char* name, auto&& residual) {
    json rows = json::array();
    double prev = -1.0;
    bool ok = true;
    for (double nodes : levels) {
      RunConfig cfg = c.cfg;
      cfg.domain.nodes.assign(n, static_cast<int>(nodes));
      const double r = residual(build_box(cfg));
      json row{{"nodes", nodes}, {"residual", num(r)}};
      if (prev >= 0.0) {
        const double order = prev > 1e-12 && r > 0.0 ? std::log2(prev / r) : 99.0;
        row["order"] = num(order);
        ok = ok && (order >= 1.8 || r < 1e-11);
      }
      prev = r;
      rows.push_back(row);
    }
    j[name] = {{"refinement", rows}, {"pass", ok}};
    pass = pass && ok;
  };
  auto dims = [&](const BoxDomain& b) { return n == 1 ? on_box(b, +[](const double* x) { return std::exp(0.5 * x[0]); }) : on_box(b, smooth_u); };
  if (n >= 2) {
    study("green", [&](const BoxDomain& b) { return green_residual(dims(b), on_box(b, smooth_v), A, b); });
    study("magnetic", [&](const BoxDomain& b) {
      std::vector<Polynomial> bv;
      for (int k = 0; k < n; ++k) bv.push_back(Polynomial::variable(n, (k + 1) % n) * (k % 2 ? -1.0 : 1.0));
      std::vector<Complex> u(b.num_nodes());
      const auto ur = dims(b);
      const auto vr = on_box(b, smooth_v);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = Complex(ur[i], vr[i]);
      return magnetic_expansion_residual(A, bv, u, b);
    });
  }
  if (n == 3) {
    study("riemannian", [&](const BoxDomain& b) { return riemannian_identity_residual(A, dims(b), b); });
  } else {
    j["riemannian"] = {{"skipped", "the metric identity needs n >= 3"}};
  }
  j["pass"] = pass;
  c.write_json("identities.json", j);
  if (!pass) c.fail();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"certify", "theta", "flatten", "carleman-audit",
                                              "ucp-certificate", "solve", "observability", "identities"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir, bool strict,
                          int threads) {
  Context c{cfg, out_dir, {}};
  if (std::find(command_names().begin(), command_names().end(), name) == command_names().end()) {
    c.res.status = 1;
    c.res.summary = "unknown command '" + name + "'";
    return c.res;
  }
  std::filesystem::create_directories(out_dir);
  if (name == "certify") cmd_certify(c);
  else if (name == "theta") cmd_theta(c);
  else if (name == "flatten") cmd_flatten(c);
  else if (name == "carleman-audit") cmd_audit(c);
  else if (name == "ucp-certificate") cmd_ucp(c);
  else if (name == "solve") cmd_solve(c);
  else if (name == "observability") cmd_observability(c);
  else cmd_identities(c);
  if (strict && !c.res.flags.empty()) c.fail();

  const std::string echo = to_yaml(cfg);
  bool round_trip = false;
  try {
    round_trip = parse_config(echo) == cfg;
  } catch (const ConfigError&) {
    round_trip = false;
  }
  json m{{"command", name},
         {"version", kVersion},
         {"seed", cfg.seed},
         {"threads", threads},
         {"strict", strict},
         {"status", c.res.status},
         {"flags", c.res.flags},
         {"artifacts", c.res.artifacts},
         {"config_round_trip", round_trip},
         {"config", echo}};
  if (!c.res.summary.empty()) m["summary"] = c.res.summary;
  c.write_json("manifest.json", m);
  return c.res;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Carleman weight certification, audits and observability experiments"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool strict = false;
  app.add_option("command", command, "certify | theta | flatten | carleman-audit | ucp-certificate | solve | observability | identities")
      ->required();
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--out", out_dir, "output directory (defaults to the config's output)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed overriding the config");
  app.add_option("--threads", threads, "worker threads (0 keeps the runtime default)");
  app.add_flag("--strict", strict, "exit 2 on any flagged ambiguity");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    RunConfig cfg = load_config(config_path);
    if (*seed_opt) {
      cfg.seed = seed;
      if (!cfg.has("seed")) {
        cfg.blocks.push_back("seed");
        std::sort(cfg.blocks.begin(), cfg.blocks.end());
      }
    }
    if (threads > 0) set_thread_count(threads);
    const CommandResult r = run_command(command, cfg, out_dir.empty() ? cfg.output : out_dir, strict, threads);
    if (!r.summary.empty()) std::cerr << r.summary << "\n";
    for (const auto& f : r.flags) std::cerr << "flag: " << f << "\n";
    return r.status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace carl
