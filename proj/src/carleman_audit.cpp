#include "carl/carleman_audit.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "carl/pde_solvers.hpp"

namespace carl {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct KindInfo {
  InequalityKind kind;
  const char* name;
  EquationKind eq;
};

constexpr KindInfo kKinds[] = {
    {InequalityKind::wave_full, "wave_full", EquationKind::wave},
    {InequalityKind::wave_boundary, "wave_boundary", EquationKind::wave},
    {InequalityKind::wave_lower_order, "wave_lower_order", EquationKind::wave},
    {InequalityKind::wave_single_param, "wave_single_param", EquationKind::wave},
    {InequalityKind::elliptic, "elliptic", EquationKind::elliptic},
    {InequalityKind::parabolic_full, "parabolic_full", EquationKind::parabolic},
    {InequalityKind::parabolic_boundary, "parabolic_boundary", EquationKind::parabolic},
    {InequalityKind::schrodinger_full, "schrodinger_full", EquationKind::schrodinger},
    {InequalityKind::schrodinger_boundary, "schrodinger_boundary", EquationKind::schrodinger},
};

bool has_time_trace_term(InequalityKind k) {
  return k == InequalityKind::parabolic_full || k == InequalityKind::schrodinger_full;
}

bool uses_sigma_plus(InequalityKind k) {
  return k == InequalityKind::wave_boundary || k == InequalityKind::parabolic_boundary ||
         k == InequalityKind::schrodinger_boundary;
}

bool uses_dmu(InequalityKind k) {
  return k == InequalityKind::wave_full || k == InequalityKind::wave_lower_order || k == InequalityKind::elliptic ||
         k == InequalityKind::parabolic_full || k == InequalityKind::schrodinger_full;
}

void check_vanishing(const ComplexField& u, InequalityKind kind, const SpaceTimeGrid& grid) {
  const BoxDomain& box = grid.box();
  double umax = 0.0;
  for (const auto& z : u.values) umax = std::max(umax, std::abs(z));
  const double tol = 1e-12 * std::max(1.0, umax);
  std::vector<std::string> bad;
  auto flag = [&](const char* what, int k, std::size_t i, double v) {
    if (bad.size() < 8) {
      std::ostringstream os;
      os << what << " at level " << k << " node " << i << " (" << v << ")";
      bad.push_back(os.str());
    } else if (bad.size() == 8) {
      bad.push_back("...");
    }
  };
  for (int k = 0; k < u.levels; ++k) {
    for (std::size_t i = 0; i < u.nodes; ++i) {
      const double v = std::abs(u.at(k, i));
      if (box.is_boundary(i) && v > tol) flag("u != 0 on the lateral boundary", k, i, v);
    }
  }
  if (u.levels > 1) {
    const int last = u.levels - 1;
    for (int k : {0, last}) {
      for (std::size_t i = 0; i < u.nodes; ++i) {
        const double v = std::abs(u.at(k, i));
        if (v > tol) flag("u != 0 at an end time", k, i, v);
        if (equation_of(kind) == EquationKind::wave) {
          const double d = std::abs(time_d1(u, k, i, grid.dt()));
          if (d > tol / grid.dt()) flag("d_t u != 0 at an end time", k, i, d);
        }
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = std::string(inequality_name(kind)) + " requires vanishing data; offending nodes:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw std::invalid_argument(msg);
  }
}

}  // namespace

const char* inequality_name(InequalityKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) return e.name;
  }
  return "unknown";
}

InequalityKind inequality_from_name(const std::string& name) {
  for (const auto& e : kKinds) {
    if (name == e.name) return e.kind;
  }
  throw std::invalid_argument("unknown inequality kind '" + name + "'");
}

EquationKind equation_of(InequalityKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) return e.eq;
  }
  return EquationKind::wave;
}

bool requires_vanishing(InequalityKind k) { return uses_sigma_plus(k) || k == InequalityKind::wave_single_param; }

double CarlemanSideValues::ratio() const {
  if (vacuous) return std::numeric_limits<double>::infinity();
  return rhs() / lhs_interior;
}

FieldJets prepare_field(const ComplexField& u, const MatrixField& A, const LowerOrderCoeffs& lower,
                        InequalityKind kind, const SpaceTimeGrid& grid) {
  const EquationKind eq = equation_of(kind);
  const bool single = eq == EquationKind::elliptic;
  if (single && u.levels != 1) throw std::invalid_argument("elliptic audits take a single-level field");
  if (!single && u.levels != grid.nt()) throw std::invalid_argument("field levels do not match the grid");
  if (u.nodes != grid.num_nodes()) throw std::invalid_argument("field does not match the grid");
  if (!lower.empty() && kind != InequalityKind::wave_lower_order) {
    throw std::invalid_argument(std::string(inequality_name(kind)) + " takes no lower-order terms");
  }
  require_finite(u, "prepare_field");
  if (requires_vanishing(kind)) check_vanishing(u, kind, grid);

  const BoxDomain& box = grid.box();
  const std::size_t N = box.num_nodes();
  const int n = box.n;
  const FluxLaplacian L(A, box);
  const ComplexField Lu = apply_operator(eq, L, lower, u, grid);

  FieldJets j;
  j.kind = kind;
  j.single_level = single;
  const int levels = u.levels;
  j.u2 = RealField(levels, N);
  j.grad2 = RealField(levels, N);
  j.gradA2 = RealField(levels, N);
  j.dt2 = RealField(levels, N);
  j.Lu2 = RealField(levels, N);
  for (int k = 0; k < levels; ++k) {
    const Complex* uk = u.level_ptr(k);
    kernels::for_each(N, [&](std::size_t i) {
      std::array<Complex, 3> g{};
      for (int a = 0; a < n; ++a) g[a] = L.diff().d1(a).apply_row(uk, i);
      const Mat3& Ai = L.A_at(i);
      double e = 0.0, ea = 0.0;
      for (int a = 0; a < n; ++a) {
        e += std::norm(g[a]);
        for (int b = 0; b < n; ++b) ea += Ai(a, b) * (g[a] * std::conj(g[b])).real();
      }
      j.u2.at(k, i) = std::norm(uk[i]);
      j.grad2.at(k, i) = e;
      j.gradA2.at(k, i) = ea;
      j.dt2.at(k, i) = single ? 0.0 : std::norm(time_d1(u, k, i, grid.dt()));
      j.Lu2.at(k, i) = std::norm(Lu.at(k, i));
    });
  }
  for (const auto& f : grid.faces()) {
    std::vector<std::vector<double>> lv(levels, std::vector<double>(f.nodes.size()));
    for (int k = 0; k < levels; ++k) {
      for (std::size_t q = 0; q < f.nodes.size(); ++q) {
        lv[k][q] = std::norm(L.diff().d1(f.axis).apply_row(u.level_ptr(k), f.nodes[q]));
      }
    }
    j.dnu2.push_back(std::move(lv));
  }
  j.zero = true;
  for (const auto* fld : {&j.u2, &j.grad2, &j.dt2, &j.Lu2}) {
    for (double v : fld->values) {
      if (v != 0.0) j.zero = false;
    }
  }
  return j;
}

AuditContext make_audit_context(const WeightSpec& spec, const MatrixField& A, const SpaceTimeGrid& grid,
                                bool single_level) {
  AuditContext ctx;
  ctx.grid = &grid;
  const int levels = single_level ? 1 : grid.nt();
  ctx.psi = RealField(levels, grid.num_nodes());
  for (int k = 0; k < levels; ++k) {
    const double t = single_level ? grid.t1() : grid.time(k);
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
      const auto x = grid.box().coords(i);
      ctx.psi.at(k, i) = spec.psi(x.data(), t);
    }
  }
  ctx.sigma_plus = gamma_plus(A, spec.psi0, grid).mask;
  return ctx;
}

CarlemanSideValues evaluate_sides(const FieldJets& jets, const AuditContext& ctx, double lambda, double tau,
                                  bool normalize, Exec exec) {
  if (!(tau > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("tau and lambda must be positive");
  const SpaceTimeGrid& grid = *ctx.grid;
  const std::size_t N = grid.num_nodes();
  const int levels = jets.u2.levels;
  if (ctx.psi.levels != levels) throw std::invalid_argument("audit context and field disagree on time levels");
  CarlemanSideValues sv;
  if (jets.zero) {
    sv.vacuous = true;
    return sv;
  }
  const InequalityKind kind = jets.kind;
  auto active = [&](int k, std::size_t i) {
    return jets.u2.at(k, i) + jets.grad2.at(k, i) + jets.dt2.at(k, i) + jets.Lu2.at(k, i) > 0.0;
  };
  // phi is increasing in psi, so the support maximum of phi comes from the largest active psi.
  double psi_ref = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < levels; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      if (active(k, i)) psi_ref = std::max(psi_ref, ctx.psi.at(k, i));
    }
  }
  const double phi_ref = std::exp(lambda * psi_ref);
  sv.phi_ref = phi_ref;
  if (!normalize && 2.0 * tau * phi_ref > 700.0) {
    throw std::overflow_error("raw weight exp(2 tau phi) overflows; use the normalized path");
  }
  const double shift = normalize ? phi_ref : 0.0;
  auto weight = [&](int k, std::size_t i, double& phi) {
    phi = std::exp(lambda * ctx.psi.at(k, i));
    return std::exp(2.0 * tau * (phi - shift));
  };

  const double t = tau, l = lambda;
  const bool single_param = kind == InequalityKind::wave_single_param;
  const EquationKind eq = equation_of(kind);
  double grad_coef_pow = 1.0;  // power of lambda on the gradient term
  if (eq == EquationKind::elliptic || eq == EquationKind::parabolic) grad_coef_pow = 2.0;

  // Space-time trapezoid over all nodes; single-level fields integrate in space only.
  const auto& sw = grid.space_weights();
  const auto& tw = grid.time_weights();
  auto tweight = [&](int k) { return jets.single_level ? 1.0 : tw[k]; };

  double lhs = 0.0, src = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double wt = tweight(k);
    lhs += wt * kernels::sum(N, [&](std::size_t i) {
      if (!active(k, i)) return 0.0;
      double phi;
      const double w = weight(k, i, phi);
      double v;
      if (single_param) {
        v = t * t * t * t * jets.u2.at(k, i) + t * t * (jets.grad2.at(k, i) + jets.dt2.at(k, i));
      } else {
        const double grad = eq == EquationKind::wave ? jets.gradA2.at(k, i) + jets.dt2.at(k, i)
                            : eq == EquationKind::schrodinger ? jets.gradA2.at(k, i)
                                                              : jets.grad2.at(k, i);
        v = t * t * t * std::pow(l, 4) * phi * phi * phi * jets.u2.at(k, i) +
            t * std::pow(l, grad_coef_pow) * phi * grad;
      }
      return sw[i] * w * v;
    }, exec);
    src += wt * kernels::sum(N, [&](std::size_t i) {
      if (jets.Lu2.at(k, i) == 0.0) return 0.0;
      double phi;
      return sw[i] * weight(k, i, phi) * jets.Lu2.at(k, i);
    }, exec);
  }
  if (single_param) src *= t;
  sv.lhs_interior = lhs;
  sv.rhs_source = src;

  const auto& faces = grid.faces();
  if (uses_dmu(kind)) {
    auto dmu_integrand = [&](int k, std::size_t i, bool lateral) {
      const double base = jets.u2.at(k, i) + jets.grad2.at(k, i) + jets.dt2.at(k, i);
      if (base == 0.0) return 0.0;
      double phi;
      const double w = weight(k, i, phi);
      double v = t * t * t * l * l * l * phi * phi * phi * jets.u2.at(k, i) +
                 t * l * phi * (jets.grad2.at(k, i) + jets.dt2.at(k, i));
      if (lateral && has_time_trace_term(kind)) v += jets.dt2.at(k, i) / (t * l * phi);
      return w * v;
    };
    double b = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      for (int k = 0; k < levels; ++k) {
        double fs = 0.0;
        for (std::size_t q = 0; q < faces[f].nodes.size(); ++q) {
          fs += faces[f].weights[q] * dmu_integrand(k, faces[f].nodes[q], true);
        }
        b += tweight(k) * fs;
      }
    }
    if (!jets.single_level) {
      for (int k : {0, levels - 1}) {
        b += kernels::sum(N, [&](std::size_t i) { return sw[i] * dmu_integrand(k, i, false); }, exec);
      }
    }
    sv.rhs_boundary_dmu = b;
  }
  if (uses_sigma_plus(kind)) {
    double b = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      for (int k = 0; k < levels; ++k) {
        double fs = 0.0;
        for (std::size_t q = 0; q < faces[f].nodes.size(); ++q) {
          if (!ctx.sigma_plus[f][q]) continue;
          const double d = jets.dnu2[f][k][q];
          if (d == 0.0) continue;
          double phi;
          const double w = weight(k, faces[f].nodes[q], phi);
          fs += faces[f].weights[q] * w * phi * d;
        }
        b += tweight(k) * fs;
      }
    }
    sv.rhs_boundary_sigma_plus = t * l * b;
  }
  for (double v : {sv.lhs_interior, sv.rhs_source, sv.rhs_boundary_dmu, sv.rhs_boundary_sigma_plus}) {
    if (!std::isfinite(v)) throw std::overflow_error("Carleman side overflowed despite normalization");
  }
  sv.vacuous = sv.lhs_interior == 0.0;
  return sv;
}

CarlemanSideValues evaluate_sides(const ComplexField& u, const WeightSpec& spec, const MatrixField& A,
                                  const LowerOrderCoeffs& lower, InequalityKind kind, double tau,
                                  const SpaceTimeGrid& grid, bool normalize, Exec exec) {
  const FieldJets jets = prepare_field(u, A, lower, kind, grid);
  const AuditContext ctx = make_audit_context(spec, A, grid, jets.single_level);
  return evaluate_sides(jets, ctx, spec.lambda, tau, normalize, exec);
}

std::vector<ComplexField> default_ensemble(const SpaceTimeGrid& grid, std::uint64_t seed, bool single_level,
                                           int modes, int random) {
  const BoxDomain& box = grid.box();
  const int n = box.n;
  const std::size_t N = box.num_nodes();
  const int levels = single_level ? 1 : grid.nt();
  // Unit coordinates in space and time.
  auto unit = [&](std::size_t i, int k, std::array<double, 4>& s) {
    const auto x = box.coords(i);
    for (int a = 0; a < n; ++a) s[a] = (x[a] - box.lows[a]) / (box.highs[a] - box.lows[a]);
    s[3] = single_level ? 0.5 : static_cast<double>(k) / (levels - 1);
  };
  auto cutoff = [&](const std::array<double, 4>& s) {
    double c = 1.0;
    for (int a = 0; a < n; ++a) c *= std::pow(std::sin(kPi * s[a]), 2);
    if (!single_level) c *= std::pow(std::sin(kPi * s[3]), 2);
    return c;
  };
  // Members are bounded by 1 and defined pointwise, so nodes shared by two grids carry equal values.
  std::vector<ComplexField> out;
  for (int j = 0; j < modes; ++j) {
    // Frequencies run through the binary corners, then shift by 2.
    std::array<int, 4> m{};
    const int dims = n + (single_level ? 0 : 1);
    for (int a = 0; a < dims; ++a) m[a] = ((j >> a) & 1) + 2 * (j >> dims);
    if (!single_level) std::swap(m[n], m[3]);
    ComplexField f(levels, N);
    for (int k = 0; k < levels; ++k) {
      for (std::size_t i = 0; i < N; ++i) {
        std::array<double, 4> s{};
        unit(i, k, s);
        double v = cutoff(s);
        for (int a = 0; a < n; ++a) v *= std::cos(kPi * m[a] * s[a]);
        if (!single_level) v *= std::cos(kPi * m[3] * s[3]);
        f.at(k, i) = v;
      }
    }
    out.push_back(std::move(f));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  // Random coefficients on a coarse lattice, smoothed twice with the (1, 2, 1) / 4 stencil
  // and evaluated as a tensor cubic B-spline, so each member is the same C2 field on every grid.
  constexpr int kCoarse = 7;
  const int active_axes = n + (single_level ? 0 : 1);
  std::size_t lattice_size = 1;
  for (int a = 0; a < active_axes; ++a) lattice_size *= kCoarse;
  auto axis_of = [&](int a) { return a < n ? a : 3; };
  auto bspline = [](double f, double w[4]) {
    const double g = 1.0 - f;
    w[0] = g * g * g / 6.0;
    w[1] = (3.0 * f * f * f - 6.0 * f * f + 4.0) / 6.0;
    w[2] = (-3.0 * f * f * f + 3.0 * f * f + 3.0 * f + 1.0) / 6.0;
    w[3] = f * f * f / 6.0;
  };
  for (int r = 0; r < random; ++r) {
    std::vector<double> coef(lattice_size);
    for (auto& v : coef) v = dist(rng);
    std::vector<std::size_t> stride(active_axes, 1);
    for (int a = 1; a < active_axes; ++a) stride[a] = stride[a - 1] * kCoarse;
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < active_axes; ++a) {
        const std::vector<double> src = coef;
        for (std::size_t idx = 0; idx < lattice_size; ++idx) {
          const int ia = static_cast<int>((idx / stride[a]) % kCoarse);
          const double lo = ia > 0 ? src[idx - stride[a]] : src[idx];
          const double hi = ia + 1 < kCoarse ? src[idx + stride[a]] : src[idx];
          coef[idx] = 0.25 * (lo + 2.0 * src[idx] + hi);
        }
      }
    }
    ComplexField f(levels, N);
    for (int k = 0; k < levels; ++k) {
      for (std::size_t i = 0; i < N; ++i) {
        std::array<double, 4> s{};
        unit(i, k, s);
        std::array<int, 4> seg{};
        std::array<std::array<double, 4>, 4> w{};
        for (int a = 0; a < active_axes; ++a) {
          const double p = s[axis_of(a)] * (kCoarse - 3);
          seg[a] = std::min(static_cast<int>(p), kCoarse - 4);
          bspline(p - seg[a], w[a].data());
        }
        double v = 0.0;
        const int corners = 1 << (2 * active_axes);
        for (int c = 0; c < corners; ++c) {
          double wt = 1.0;
          std::size_t idx = 0;
          for (int a = 0; a < active_axes; ++a) {
            const int o = (c >> (2 * a)) & 3;
            wt *= w[a][o];
            idx += (seg[a] + o) * stride[a];
          }
          v += wt * coef[idx];
        }
        f.at(k, i) = v * cutoff(s);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

bool AuditReport::positive_beyond_threshold() const {
  if (!tau_star || !lambda_star) return false;
  for (std::size_t it = 0; it < taus.size(); ++it) {
    for (std::size_t il = 0; il < lambdas.size(); ++il) {
      if (taus[it] < *tau_star || lambdas[il] < *lambda_star) continue;
      if (!(cell(it, il).aleph > 0.0)) return false;
    }
  }
  return true;
}

AuditReport sweep_audit(const std::vector<ComplexField>& ensemble, const WeightSpec& spec, const MatrixField& A,
                        const LowerOrderCoeffs& lower, InequalityKind kind, const std::vector<double>& taus,
                        const std::vector<double>& lambdas, const SpaceTimeGrid& grid, double target) {
  if (ensemble.empty()) throw std::invalid_argument("sweep_audit: empty ensemble");
  if (taus.empty() || lambdas.empty()) throw std::invalid_argument("sweep_audit: empty sweep range");
  for (const auto& u : ensemble) {
    if (u.nodes != ensemble.front().nodes || u.levels != ensemble.front().levels) {
      throw std::invalid_argument("sweep_audit: ensemble members must share the grid");
    }
  }
  AuditReport rep;
  rep.kind = kind;
  rep.taus = taus;
  rep.lambdas = lambdas;
  rep.target = target;

  std::vector<FieldJets> jets(ensemble.size());
  for (std::size_t m = 0; m < ensemble.size(); ++m) jets[m] = prepare_field(ensemble[m], A, lower, kind, grid);
  const AuditContext ctx = make_audit_context(spec, A, grid, jets.front().single_level);

  const std::size_t cells = taus.size() * lambdas.size();
  const std::size_t M = ensemble.size();
  std::vector<CarlemanSideValues> vals(cells * M);
  std::vector<std::string> errors(cells * M);
  // Cells and members are independent; each task writes its own slot.
  kernels::for_each(cells * M, [&](std::size_t task) {
    const std::size_t c = task / M, m = task % M;
    const double tau = taus[c / lambdas.size()], lam = lambdas[c % lambdas.size()];
    try {
      vals[task] = evaluate_sides(jets[m], ctx, lam, tau, true, Exec::serial);
    } catch (const std::overflow_error&) {
      std::ostringstream os;
      os << "overflow in cell (tau=" << tau << ", lambda=" << lam << ")";
      errors[task] = os.str();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw std::overflow_error(e);
  }
  for (std::size_t c = 0; c < cells; ++c) {
    AuditCell cell;
    cell.tau = taus[c / lambdas.size()];
    cell.lambda = lambdas[c % lambdas.size()];
    cell.aleph = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < M; ++m) {
      cell.members.push_back(vals[c * M + m]);
      if (!vals[c * M + m].vacuous) cell.aleph = std::min(cell.aleph, vals[c * M + m].ratio());
    }
    cell.vacuous = std::isinf(cell.aleph);
    rep.cells.push_back(std::move(cell));
  }
  // Smallest (tau*, lambda*) such that every cell beyond both meets the target.
  for (std::size_t it = 0; it < taus.size() && !rep.tau_star; ++it) {
    for (std::size_t il = 0; il < lambdas.size(); ++il) {
      bool ok = true;
      for (std::size_t a = it; a < taus.size() && ok; ++a) {
        for (std::size_t b = il; b < lambdas.size() && ok; ++b) ok = rep.cell(a, b).aleph >= target;
      }
      if (ok) {
        rep.tau_star = taus[it];
        rep.lambda_star = lambdas[il];
        break;
      }
    }
  }
  return rep;
}

double refinement_drift(const AuditReport& coarse, const AuditReport& fine) {
  if (coarse.taus != fine.taus || coarse.lambdas != fine.lambdas) {
    throw std::invalid_argument("refinement_drift: reports cover different sweeps");
  }
  double drift = 0.0;
  for (std::size_t it = 0; it < fine.taus.size(); ++it) {
    for (std::size_t il = 0; il < fine.lambdas.size(); ++il) {
      if (fine.tau_star && fine.taus[it] < *fine.tau_star) continue;
      if (fine.lambda_star && fine.lambdas[il] < *fine.lambda_star) continue;
      const double a = coarse.cell(it, il).aleph, b = fine.cell(it, il).aleph;
      if (std::isinf(a) && std::isinf(b)) continue;
      if (!(b > 0.0) || std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
      drift = std::max(drift, std::abs(a - b) / b);
    }
  }
  return drift;
}

AuditReport negative_control(const WeightAdmissibility& claimed, const std::vector<ComplexField>& ensemble,
                             const WeightSpec& spec, const MatrixField& A, const EllipticityReport& ellipticity,
                             InequalityKind kind, const std::vector<double>& taus, const std::vector<double>& lambdas,
                             const SpaceTimeGrid& grid) {
  const WeightAdmissibility actual = check_admissibility(spec, A, &ellipticity, grid, equation_of(kind));
  if (actual.pass) throw std::invalid_argument("weight is admissible: use sweep_audit");
  if (claimed.pass) throw std::invalid_argument("caller stamped an inadmissible weight as admissible");
  AuditReport rep = sweep_audit(ensemble, spec, A, LowerOrderCoeffs{}, kind, taus, lambdas, grid);
  rep.stamp = "INADMISSIBLE WEIGHT: exploratory";
  for (const auto& v : actual.violated) {
    std::ostringstream os;
    os << condition_name(v.condition) << " (node " << v.node << ", level " << v.level << ", value " << v.value << ")";
    rep.admissibility_reasons.push_back(os.str());
  }
  return rep;
}

}  // namespace carl
