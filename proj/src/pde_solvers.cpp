#include "carl/pde_solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carl {

double wave_dt_limit(const MatrixField& A, const BoxDomain& box) {
  double lmax = 0.0;
  for (std::size_t i = 0; i < box.num_nodes(); ++i) {
    const auto x = box.coords(i);
    lmax = std::max(lmax, sym_eigenvalues(A.eval(x.data()), box.n)[box.n - 1]);
  }
  return 0.9 * box.min_spacing() / std::sqrt(box.n * lmax);
}

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;
using CVec = Eigen::VectorXcd;

bool depends_on_time(const ComplexPoly& p) {
  const int tv = p.re.num_vars() - 1;
  for (const auto* q : {&p.re, &p.im}) {
    for (const auto& t : q->terms()) {
      if (tv >= 0 && t.exponents[tv] != 0) return true;
    }
  }
  return false;
}

std::vector<std::vector<Complex>> face_traces(const Complex* u, const SpaceTimeGrid& grid) {
  const BoxDomain& box = grid.box();
  std::vector<std::vector<Complex>> out;
  for (const auto& f : grid.faces()) {
    std::vector<Complex> row(f.nodes.size());
    const std::size_t s = box.stride(f.axis);
    const double h = box.spacing(f.axis);
    for (std::size_t j = 0; j < f.nodes.size(); ++j) {
      const std::size_t i = f.nodes[j];
      if (f.side == 1) {
        row[j] = (3.0 * u[i] - 4.0 * u[i - s] + u[i - 2 * s]) / (2.0 * h);
      } else {
        row[j] = (3.0 * u[i] - 4.0 * u[i + s] + u[i + 2 * s]) / (2.0 * h);
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

void check_data(const std::vector<Complex>& v, const BoxDomain& box, const char* what) {
  if (v.size() != box.num_nodes()) throw std::invalid_argument(std::string(what) + " has the wrong size");
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error(std::string(what) + " is not finite");
  }
}

// Interior unknown numbering.
struct Unknowns {
  std::vector<long> index;  // node -> unknown or -1
  std::vector<std::size_t> node;
  explicit Unknowns(const BoxDomain& box) : index(box.num_nodes(), -1) {
    for (std::size_t i = 0; i < box.num_nodes(); ++i) {
      if (!box.is_boundary(i)) {
        index[i] = static_cast<long>(node.size());
        node.push_back(i);
      }
    }
  }
};

SpMat assemble_operator(const FluxLaplacian& L, const LowerOrderCoeffs& lower, const Unknowns& un) {
  const BoxDomain& box = L.box();
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t r = 0; r < un.node.size(); ++r) {
    const std::size_t i = un.node[r];
    const auto x = box.coords(i);
    const SparseRows& rows = L.rows();
    for (std::size_t e = rows.start[i]; e < rows.start[i + 1]; ++e) {
      const long c = un.index[rows.col[e]];
      if (c >= 0) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), rows.w[e]);
    }
    for (int j = 0; j < static_cast<int>(lower.q.size()); ++j) {
      const Complex q = lower.q[j].eval(x.data(), 0.0);
      const SparseRows& d = L.diff().d1(j);
      for (std::size_t e = d.start[i]; e < d.start[i + 1]; ++e) {
        const long c = un.index[d.col[e]];
        if (c >= 0) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), q * d.w[e]);
      }
    }
    if (lower.p) trip.emplace_back(static_cast<int>(r), static_cast<int>(r), lower.p->eval(x.data(), 0.0));
  }
  const int m = static_cast<int>(un.node.size());
  SpMat M(m, m);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

}  // namespace

double dirichlet_energy(const FluxLaplacian& L, const Complex* u, const SpaceTimeGrid& grid) {
  const std::size_t N = grid.num_nodes();
  std::vector<Complex> lu(N);
  L.apply(u, lu.data());
  const auto& w = grid.space_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (grid.box().is_boundary(i)) continue;
    s -= w[i] * (lu[i] * std::conj(u[i])).real();
  }
  return s;
}

double l2_norm(const Complex* u, const SpaceTimeGrid& grid) {
  const auto& w = grid.space_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::norm(u[i]);
  return std::sqrt(s);
}

EvolutionState solve_evolution(EquationKind kind, const MatrixField& A, const LowerOrderCoeffs& lower,
                               const InitialData& data, double horizon, const BoxDomain& box,
                               const SolveOptions& opt) {
  if (kind == EquationKind::elliptic) throw std::invalid_argument("solve_evolution: elliptic problems have no time evolution");
  if (!(horizon > 0.0)) throw std::invalid_argument("solve_evolution: horizon must be positive");
  if (lower.q0 && kind != EquationKind::wave) throw std::invalid_argument("q0 is only defined for the wave operator");
  check_data(data.u0, box, "u0");
  const std::size_t N = box.num_nodes();

  double dt = opt.dt;
  int steps = 0;
  if (kind == EquationKind::wave) {
    const double limit = wave_dt_limit(A, box);
    if (dt > 0.0) {
      if (dt > limit) {
        std::ostringstream os;
        os << "CFL violation: dt = " << dt << " exceeds the admissible " << limit;
        throw std::invalid_argument(os.str());
      }
    } else {
      dt = opt.cfl_fraction * limit;
    }
    steps = static_cast<int>(std::ceil(horizon / dt - 1e-12));
  } else if (dt > 0.0) {
    steps = static_cast<int>(std::ceil(horizon / dt - 1e-12));
  } else {
    if (opt.steps <= 0) throw std::invalid_argument("implicit solve needs dt or a step count");
    steps = opt.steps;
  }
  steps = std::max(steps, 2);
  dt = horizon / steps;

  EvolutionState st;
  st.kind = kind;
  st.grid = SpaceTimeGrid(box, 0.0, horizon, steps + 1);
  st.validation_mode = box.n == 1;
  const SpaceTimeGrid& grid = st.grid;
  const FluxLaplacian L(A, box);
  st.traces.assign(grid.faces().size(), {});
  if (opt.keep_snapshots) st.u = ComplexField(steps + 1, N);

  auto record = [&](int k, const std::vector<Complex>& u) {
    if (opt.keep_snapshots) std::copy(u.begin(), u.end(), st.u.level_ptr(k));
    auto tr = face_traces(u.data(), grid);
    for (std::size_t f = 0; f < tr.size(); ++f) st.traces[f].push_back(std::move(tr[f]));
    st.l2.push_back(l2_norm(u.data(), grid));
  };

  auto zero_boundary = [&](std::vector<Complex>& u) {
    for (std::size_t i = 0; i < N; ++i) {
      if (box.is_boundary(i)) u[i] = 0.0;
    }
  };

  std::vector<Complex> u0 = data.u0;
  zero_boundary(u0);

  if (kind == EquationKind::wave) {
    std::vector<Complex> u1 = data.u1.empty() ? std::vector<Complex>(N, 0.0) : data.u1;
    check_data(u1, box, "u1");
    zero_boundary(u1);
    auto space_part = [&](const std::vector<Complex>& u, double t, std::vector<Complex>& out) {
      L.apply(u.data(), out.data());
      if (lower.q.empty() && !lower.p) return;
      kernels::for_each(N, [&](std::size_t i) {
        if (box.is_boundary(i)) return;
        const auto x = box.coords(i);
        Complex s = out[i];
        for (int j = 0; j < static_cast<int>(lower.q.size()); ++j) {
          s += lower.q[j].eval(x.data(), t) * L.diff().d1(j).apply_row(u.data(), i);
        }
        if (lower.p) s += lower.p->eval(x.data(), t) * u[i];
        out[i] = s;
      });
    };
    auto q0_at = [&](std::size_t i, double t) -> Complex {
      if (!lower.q0) return 0.0;
      const auto x = box.coords(i);
      return lower.q0->eval(x.data(), t);
    };
    std::vector<Complex> prev = u0, cur(N), next(N), work(N);
    space_part(prev, 0.0, work);
    for (std::size_t i = 0; i < N; ++i) {
      cur[i] = box.is_boundary(i) ? 0.0 : prev[i] + dt * u1[i] + 0.5 * dt * dt * (work[i] + q0_at(i, 0.0) * u1[i]);
    }
    auto energy_at = [&](const std::vector<Complex>& u, const std::vector<Complex>& vel) {
      double e = dirichlet_energy(L, u.data(), grid);
      e += std::pow(l2_norm(vel.data(), grid), 2);
      return std::sqrt(std::max(e, 0.0));
    };
    record(0, prev);
    st.energy.push_back(energy_at(prev, u1));
    std::vector<Complex> vel(N), older(N);
    for (int k = 1; k < steps; ++k) {
      const double t = grid.time(k);
      space_part(cur, t, work);
      for (std::size_t i = 0; i < N; ++i) {
        if (box.is_boundary(i)) {
          next[i] = 0.0;
          continue;
        }
        const Complex half = 0.5 * dt * q0_at(i, t);
        next[i] = (2.0 * cur[i] - prev[i] * (1.0 + half) + dt * dt * work[i]) / (1.0 - half);
      }
      record(k, cur);
      for (std::size_t i = 0; i < N; ++i) vel[i] = (next[i] - prev[i]) / (2.0 * dt);
      st.energy.push_back(energy_at(cur, vel));
      older.swap(prev);
      prev.swap(cur);
      cur.swap(next);
    }
    // cur is the last level, prev and older the two before it.
    record(steps, cur);
    for (std::size_t i = 0; i < N; ++i) vel[i] = (3.0 * cur[i] - 4.0 * prev[i] + older[i]) / (2.0 * dt);
    st.energy.push_back(energy_at(cur, vel));
    st.final_u = cur;
    if (!opt.keep_snapshots) {
      st.u = ComplexField(1, N);
      std::copy(cur.begin(), cur.end(), st.u.level_ptr(0));
    }
    return st;
  }

  for (const auto* c : {lower.p ? &*lower.p : nullptr}) {
    if (c && depends_on_time(*c)) throw std::invalid_argument("implicit solvers need time-independent lower-order terms");
  }
  for (const auto& c : lower.q) {
    if (depends_on_time(c)) throw std::invalid_argument("implicit solvers need time-independent lower-order terms");
  }
  const Unknowns un(box);
  const SpMat M = assemble_operator(L, lower, un);
  const int m = static_cast<int>(un.node.size());
  SpMat I(m, m);
  I.setIdentity();
  const Complex factor = kind == EquationKind::schrodinger ? Complex(0.0, 0.5 * dt) : Complex(0.5 * dt, 0.0);
  const SpMat lhs = I - factor * M;
  const SpMat rhs = I + factor * M;
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(lhs);
  lu.factorize(lhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("linear solve failed: factorization did not succeed");

  auto source_vec = [&](double t) {
    CVec f = CVec::Zero(m);
    if (!data.source) return f;
    for (int r = 0; r < m; ++r) {
      const auto x = box.coords(un.node[r]);
      f(r) = data.source(x.data(), t);
    }
    return f;
  };

  CVec v(m);
  for (int r = 0; r < m; ++r) v(r) = u0[un.node[r]];
  std::vector<Complex> full(N, 0.0);
  auto scatter = [&](const CVec& x) {
    std::fill(full.begin(), full.end(), Complex(0.0));
    for (int r = 0; r < m; ++r) full[un.node[r]] = x(r);
  };
  scatter(v);
  record(0, full);
  CVec f_prev = source_vec(0.0);
  for (int k = 1; k <= steps; ++k) {
    CVec b = rhs * v;
    if (kind == EquationKind::parabolic && data.source) {
      const CVec f_next = source_vec(grid.time(k));
      b -= 0.5 * dt * (f_prev + f_next);
      f_prev = f_next;
    }
    CVec nv = lu.solve(b);
    if (lu.info() != Eigen::Success) throw std::runtime_error("linear solve failed at step " + std::to_string(k));
    const double res = (lhs * nv - b).norm() / std::max(b.norm(), 1e-300);
    if (res > 1e-10) throw std::runtime_error("linear solve did not reach the residual tolerance");
    v = nv;
    scatter(v);
    record(k, full);
  }
  st.energy = st.l2;
  st.final_u = full;
  if (!opt.keep_snapshots) {
    st.u = ComplexField(1, N);
    std::copy(full.begin(), full.end(), st.u.level_ptr(0));
  }
  return st;
}

bool GammaPlusMask::on_face(int face) const {
  const auto& m = mask[face];
  return std::any_of(m.begin(), m.end(), [](char c) { return c != 0; });
}

GammaPlusMask gamma_plus(const MatrixField& A, const Polynomial& psi0, const SpaceTimeGrid& grid) {
  const int n = grid.dim();
  if (psi0.num_vars() != n || A.dim() != n) throw std::invalid_argument("gamma_plus: dimension mismatch");
  std::vector<Polynomial> d1;
  for (int i = 0; i < n; ++i) d1.push_back(psi0.derivative(i));
  GammaPlusMask gm;
  for (const auto& f : grid.faces()) {
    std::vector<char> row(f.nodes.size(), 0);
    for (std::size_t j = 0; j < f.nodes.size(); ++j) {
      const auto x = grid.box().coords(f.nodes[j]);
      Vec3 g = Vec3::Zero();
      for (int i = 0; i < n; ++i) g(i) = d1[i].eval(x.data());
      const Vec3 Ag = A.eval(x.data()) * g;
      const double dn = Ag(f.axis) * f.normal[f.axis];
      row[j] = dn > 0.0;
      gm.count += row[j];
    }
    gm.mask.push_back(std::move(row));
  }
  return gm;
}

double trace_norm(const TraceRecord& traces, const GammaPlusMask& mask, const SpaceTimeGrid& grid) {
  std::vector<std::vector<std::vector<double>>> sq(traces.size());
  for (std::size_t f = 0; f < traces.size(); ++f) {
    for (const auto& lvl : traces[f]) {
      std::vector<double> r(lvl.size());
      for (std::size_t j = 0; j < lvl.size(); ++j) r[j] = std::norm(lvl[j]);
      sq[f].push_back(std::move(r));
    }
  }
  return std::sqrt(integrate_lateral(sq, grid, &mask.mask));
}

EnergyEquivalence energy_equivalence_check(const EvolutionState& state) {
  if (state.kind != EquationKind::wave) throw std::invalid_argument("energy equivalence applies to wave states");
  if (state.energy.empty() || state.energy.front() == 0.0) throw std::invalid_argument("zero initial energy");
  EnergyEquivalence r;
  r.max_ratio = 0.0;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (double e : state.energy) {
    r.max_ratio = std::max(r.max_ratio, e / state.energy.front());
    r.min_ratio = std::min(r.min_ratio, e / state.energy.front());
  }
  return r;
}

MildBound heat_mild_bound(const EvolutionState& state, const InitialData& data) {
  MildBound mb;
  const SpaceTimeGrid& grid = state.grid;
  for (double v : state.l2) mb.sup_norm = std::max(mb.sup_norm, v);
  double fint = 0.0;
  if (data.source) {
    std::vector<Complex> f(grid.num_nodes());
    for (int k = 0; k < grid.nt(); ++k) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = grid.box().coords(i);
        f[i] = data.source(x.data(), grid.time(k));
      }
      fint += grid.time_weights()[k] * l2_norm(f.data(), grid);
    }
  }
  mb.bound = state.l2.front() + fint;
  return mb;
}

DirichletModes dirichlet_modes(const MatrixField& A, const BoxDomain& box, int count, bool vectors) {
  const FluxLaplacian L(A, box);
  const Unknowns un(box);
  const int m = static_cast<int>(un.node.size());
  if (m > 4096) throw std::invalid_argument("dense eigendecomposition limited to 4096 unknowns");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  const SparseRows& rows = L.rows();
  for (int r = 0; r < m; ++r) {
    const std::size_t i = un.node[r];
    for (std::size_t e = rows.start[i]; e < rows.start[i + 1]; ++e) {
      const long c = un.index[rows.col[e]];
      if (c >= 0) K(r, c) -= rows.w[e];
    }
  }
  K = 0.5 * (K + K.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  DirichletModes dm;
  const int take = count <= 0 ? m : std::min(count, m);
  for (int j = 0; j < take; ++j) dm.eigenvalues.push_back(es.eigenvalues()(j));
  if (vectors) {
    for (int j = 0; j < take; ++j) {
      std::vector<Complex> v(box.num_nodes(), 0.0);
      // Fix the sign so the largest entry is positive; keeps ensembles reproducible.
      Eigen::Index arg = 0;
      es.eigenvectors().col(j).cwiseAbs().maxCoeff(&arg);
      const double sgn = es.eigenvectors()(arg, j) < 0 ? -1.0 : 1.0;
      for (int r = 0; r < m; ++r) v[un.node[r]] = sgn * es.eigenvectors()(r, j);
      dm.modes.push_back(std::move(v));
    }
  }
  return dm;
}

SmoothingBound smoothing_bound_check(const MatrixField& A, const BoxDomain& box, const std::vector<double>& t_samples) {
  if (t_samples.empty()) throw std::invalid_argument("smoothing bound needs at least one time sample");
  const DirichletModes dm = dirichlet_modes(A, box, 0, false);
  SmoothingBound sb;
  sb.envelope = 1.0 / std::sqrt(2.0 * std::exp(1.0));
  sb.mu_min = dm.eigenvalues.front();
  sb.mu_max = dm.eigenvalues.back();
  for (double t : t_samples) {
    if (!(t > 0.0)) throw std::invalid_argument("time samples must be positive");
    for (double mu : dm.eigenvalues) {
      const double s = t * mu;
      sb.aleph0 = std::max(sb.aleph0, std::sqrt(s) * std::exp(-s));
    }
  }
  return sb;
}

}  // namespace carl
