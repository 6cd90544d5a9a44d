#include "carl/experiments.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carl/pseudoconvex.hpp"

namespace carl {

namespace {

EquationKind solver_kind(ObservabilityKind k) {
  switch (k) {
    case ObservabilityKind::wave: return EquationKind::wave;
    case ObservabilityKind::heat_final: return EquationKind::parabolic;
    case ObservabilityKind::schrodinger: return EquationKind::schrodinger;
  }
  return EquationKind::wave;
}

/// <-Delta_h u, v> with trapezoid weights over interior nodes (real part).
double energy_bilinear(const FluxLaplacian& L, const std::vector<Complex>& u, const std::vector<Complex>& v,
                       const SpaceTimeGrid& grid) {
  std::vector<Complex> lu(u.size());
  L.apply(u.data(), lu.data());
  const auto& w = grid.space_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (grid.box().is_boundary(i)) continue;
    s -= w[i] * (lu[i] * std::conj(v[i])).real();
  }
  return s;
}

double l2_bilinear(const std::vector<Complex>& u, const std::vector<Complex>& v, const SpaceTimeGrid& grid) {
  const auto& w = grid.space_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * (u[i] * std::conj(v[i])).real();
  return s;
}

double trace_bilinear(const TraceRecord& a, const TraceRecord& b, const GammaPlusMask& mask,
                      const SpaceTimeGrid& grid) {
  const auto& tw = grid.time_weights();
  double s = 0.0;
  for (std::size_t f = 0; f < grid.faces().size(); ++f) {
    const auto& face = grid.faces()[f];
    for (int k = 0; k < grid.nt(); ++k) {
      double fs = 0.0;
      for (std::size_t q = 0; q < face.nodes.size(); ++q) {
        if (!mask.mask[f][q]) continue;
        fs += face.weights[q] * (a[f][k][q] * std::conj(b[f][k][q])).real();
      }
      s += tw[k] * fs;
    }
  }
  return s;
}

struct Forward {
  EvolutionState state;
  std::vector<Complex> data_field;  // the field whose gradient norm enters the data side
};

Forward run_forward(ObservabilityKind kind, const MatrixField& A, const InitialData& d, double horizon,
                    const BoxDomain& box, SolveOptions opt) {
  opt.keep_snapshots = false;
  if (kind != ObservabilityKind::wave && opt.dt <= 0.0 && opt.steps <= 0) {
    opt.steps = std::max(16, 4 * (box.nodes[0] - 1));
  }
  Forward f;
  f.state = solve_evolution(solver_kind(kind), A, LowerOrderCoeffs{}, d, horizon, box, opt);
  f.data_field = kind == ObservabilityKind::heat_final ? f.state.final_u : d.u0;
  return f;
}

}  // namespace

const char* observability_name(ObservabilityKind k) {
  switch (k) {
    case ObservabilityKind::wave: return "wave";
    case ObservabilityKind::heat_final: return "heat_final";
    case ObservabilityKind::schrodinger: return "schrodinger";
  }
  return "unknown";
}

ObservabilityKind observability_from_name(const std::string& name) {
  if (name == "wave") return ObservabilityKind::wave;
  if (name == "heat_final" || name == "heat" || name == "parabolic") return ObservabilityKind::heat_final;
  if (name == "schrodinger") return ObservabilityKind::schrodinger;
  throw std::invalid_argument("unknown observability kind '" + name + "'");
}

std::vector<InitialData> mode_ensemble(const MatrixField& A, const BoxDomain& box, int count) {
  const DirichletModes dm = dirichlet_modes(A, box, count, true);
  std::vector<InitialData> out;
  for (const auto& m : dm.modes) {
    InitialData d;
    d.u0 = m;
    out.push_back(std::move(d));
  }
  return out;
}

ObservabilityReport observability_experiment(ObservabilityKind kind, const MatrixField& A, const Polynomial& psi0,
                                             double alpha, double horizon, const std::vector<InitialData>& ensemble,
                                             const BoxDomain& box, const SolveOptions& opt) {
  if (ensemble.empty()) throw std::invalid_argument("observability_experiment: empty ensemble");
  if (psi0.num_vars() != box.n || A.dim() != box.n) throw std::invalid_argument("observability_experiment: dimension mismatch");
  ObservabilityReport rep;
  rep.kind = kind;
  rep.horizon = horizon;
  rep.alpha = alpha;
  rep.validation_mode = box.n == 1;
  rep.ensemble = std::to_string(ensemble.size()) + " initial data";

  const auto ell = certify_ellipticity(A, box);
  rep.varkappa = ell.kappa_estimate;
  const auto cert = certify_pseudoconvex(A, psi0, box);
  rep.kappa = cert.kappa;
  rep.pseudoconvex = cert.pass;
  if (kind != ObservabilityKind::heat_final && !cert.pass) {
    rep.flags.push_back("psi0 is not certified pseudo-convex; the quotient bound is not covered");
  }
  if (kind == ObservabilityKind::wave) {
    try {
      rep.t_alpha = make_observability_weight(psi0, alpha, horizon, 0.0, A, box).thresholds.t_alpha;
    } catch (const std::invalid_argument& e) {
      rep.t_alpha = std::numeric_limits<double>::infinity();
      rep.flags.push_back(std::string("threshold undefined: ") + e.what());
    }
    rep.secondary = cert.kappa > 0.0 ? std::pow(8.0 * rep.varkappa / cert.kappa, 1.0 / (2.0 - alpha))
                                     : std::numeric_limits<double>::infinity();
    rep.printed_min = std::min(rep.t_alpha, rep.secondary);
    rep.gate = std::max(rep.t_alpha, rep.secondary);
    rep.flags.push_back("threshold printed as min(t_alpha, secondary); gated on the max, both reported");
  }
  rep.above_threshold = horizon > rep.gate;
  if (!rep.above_threshold) rep.flags.push_back("observation time below the enforced threshold");
  if (rep.validation_mode) rep.flags.push_back("validation mode (n = 1)");

  const SpaceTimeGrid probe(box, 0.0, horizon, 3);
  const GammaPlusMask mask = gamma_plus(A, psi0, probe);
  for (const auto& m : mask.mask) {
    std::size_t c = 0;
    for (char v : m) c += v != 0;
    rep.gamma_plus_per_face.push_back(c);
  }

  const FluxLaplacian L(A, box);
  rep.samples.resize(ensemble.size());
  for (std::size_t s = 0; s < ensemble.size(); ++s) {
    const Forward fw = run_forward(kind, A, ensemble[s], horizon, box, opt);
    const SpaceTimeGrid& g = fw.state.grid;
    ObservationSample& smp = rep.samples[s];
    double d2 = energy_bilinear(L, fw.data_field, fw.data_field, g);
    if (kind == ObservabilityKind::wave && !ensemble[s].u1.empty()) d2 += l2_bilinear(ensemble[s].u1, ensemble[s].u1, g);
    smp.data_norm = std::sqrt(std::max(d2, 0.0));
    smp.trace_norm = trace_norm(fw.state.traces, gamma_plus(A, psi0, g), g);
    smp.zero_observation = smp.trace_norm == 0.0;
    smp.ratio = smp.zero_observation ? std::numeric_limits<double>::quiet_NaN() : smp.data_norm / smp.trace_norm;
    if (smp.zero_observation) {
      rep.flags.push_back("zero observation in sample " + std::to_string(s));
    } else {
      rep.aleph = std::max(rep.aleph, smp.ratio);
    }
  }
  return rep;
}

std::vector<InitialData> worst_case_basis(ObservabilityKind kind, const MatrixField& A, const BoxDomain& box,
                                          int modes) {
  std::vector<InitialData> base = mode_ensemble(A, box, modes);
  if (kind != ObservabilityKind::wave) return base;
  std::vector<InitialData> out = base;
  for (const auto& b : base) {
    InitialData d;
    d.u0.assign(b.u0.size(), 0.0);
    d.u1 = b.u0;
    out.push_back(std::move(d));
  }
  return out;
}

WorstCaseResult worst_case_ratio(ObservabilityKind kind, const MatrixField& A, const Polynomial& psi0,
                                 double horizon, const std::vector<InitialData>& basis, const BoxDomain& box,
                                 int iterations, std::size_t seed_index, const SolveOptions& opt) {
  if (basis.empty()) throw std::invalid_argument("worst_case_ratio: empty basis");
  if (iterations < 1) throw std::invalid_argument("worst_case_ratio: need at least one iteration");
  if (seed_index >= basis.size()) throw std::invalid_argument("worst_case_ratio: seed index out of range");
  const std::size_t K = basis.size();
  std::vector<Forward> fw;
  fw.reserve(K);
  for (const auto& d : basis) fw.push_back(run_forward(kind, A, d, horizon, box, opt));
  const SpaceTimeGrid& g = fw.front().state.grid;
  const GammaPlusMask mask = gamma_plus(A, psi0, g);
  const FluxLaplacian L(A, box);

  Eigen::MatrixXd G(K, K), M(K, K);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      G(i, j) = G(j, i) = trace_bilinear(fw[i].state.traces, fw[j].state.traces, mask, g);
      double m = energy_bilinear(L, fw[i].data_field, fw[j].data_field, g);
      if (kind == ObservabilityKind::wave && !basis[i].u1.empty() && !basis[j].u1.empty()) {
        m += l2_bilinear(basis[i].u1, basis[j].u1, g);
      }
      M(i, j) = M(j, i) = m;
    }
  }

  WorstCaseResult res;
  if (G.cwiseAbs().maxCoeff() == 0.0) {
    res.unobservable = true;
    res.ratio = std::numeric_limits<double>::infinity();
    return res;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K);
  c(seed_index) = 1.0;
  auto quotient = [&](const Eigen::VectorXd& v) { return v.dot(M * v) / v.dot(G * v); };
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  double R = quotient(c);
  res.iterates.push_back(std::sqrt(R));
  for (int it = 1; it < iterations; ++it) {
    Eigen::VectorXd next = ldlt.solve(M * c);
    if (ldlt.info() != Eigen::Success || !next.allFinite()) {
      res.partial = true;
      break;
    }
    next /= next.norm();
    const double Rn = quotient(next);
    if (!(Rn > 0.0) || !std::isfinite(Rn)) {
      res.partial = true;
      break;
    }
    c = next;
    const double rel = std::abs(Rn - R) / R;
    R = Rn;
    res.iterates.push_back(std::sqrt(R));
    if (rel < 1e-4) {
      res.converged = true;
      break;
    }
  }
  if (iterations == 1) res.converged = true;
  if (!res.converged && !res.partial) res.partial = true;
  res.ratio = std::sqrt(R);
  res.coefficients.assign(c.data(), c.data() + K);
  const std::size_t N = box.num_nodes();
  res.extremal.u0.assign(N, 0.0);
  if (kind == ObservabilityKind::wave) res.extremal.u1.assign(N, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      res.extremal.u0[i] += c(j) * basis[j].u0[i];
      if (kind == ObservabilityKind::wave && !basis[j].u1.empty()) res.extremal.u1[i] += c(j) * basis[j].u1[i];
    }
  }
  return res;
}

}  // namespace carl
