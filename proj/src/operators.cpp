#include "carl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "carl/pseudoconvex.hpp"

namespace carl {

ComplexPoly ComplexPoly::constant(int n, Complex c) {
  return {Polynomial::constant(n + 1, c.real()), Polynomial::constant(n + 1, c.imag())};
}

Complex ComplexPoly::eval(const double* x, double t) const {
  const int nv = re.num_vars();
  double buf[4] = {0, 0, 0, 0};
  for (int i = 0; i + 1 < nv; ++i) buf[i] = x[i];
  if (nv > 0) buf[nv - 1] = t;
  return {re.eval(buf), im.num_vars() ? im.eval(buf) : 0.0};
}

double LowerOrderCoeffs::sup_norm(const SpaceTimeGrid& grid) const {
  double m = 0.0;
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.time(k);
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
      const auto x = grid.box().coords(i);
      if (q0) m = std::max(m, std::abs(q0->eval(x.data(), t)));
      for (const auto& qj : q) m = std::max(m, std::abs(qj.eval(x.data(), t)));
      if (p) m = std::max(m, std::abs(p->eval(x.data(), t)));
    }
  }
  return m;
}

ComplexField apply_operator(EquationKind kind, const FluxLaplacian& L, const LowerOrderCoeffs& lower,
                            const ComplexField& u, const SpaceTimeGrid& grid, Exec exec) {
  const BoxDomain& box = L.box();
  const std::size_t N = box.num_nodes();
  if (u.nodes != N) throw std::invalid_argument("apply_operator: field does not match the grid");
  if (lower.q0 && kind != EquationKind::wave) {
    throw std::invalid_argument("apply_operator: time coefficient q0 is only defined for the wave operator");
  }
  if (!lower.q.empty() && static_cast<int>(lower.q.size()) != box.n) {
    throw std::invalid_argument("apply_operator: need one first-order coefficient per axis");
  }
  const bool timed = kind != EquationKind::elliptic;
  if (timed && u.levels != grid.nt()) throw std::invalid_argument("apply_operator: time levels do not match the grid");
  if (timed && u.levels < 3) throw std::invalid_argument("apply_operator: need at least 3 time levels");
  require_finite(u, "apply_operator");
  const double dt = grid.dt();
  ComplexField out(u.levels, N);
  for (int k = 0; k < u.levels; ++k) {
    const Complex* uk = u.level_ptr(k);
    Complex* ok = out.level_ptr(k);
    L.apply(uk, ok, exec);
    const double t = timed ? grid.time(k) : 0.0;
    kernels::for_each(
        N,
        [&](std::size_t i) {
          Complex s = ok[i];
          switch (kind) {
            case EquationKind::wave: s -= time_d2(u, k, i, dt); break;
            case EquationKind::parabolic: s -= time_d1(u, k, i, dt); break;
            case EquationKind::schrodinger: s += Complex(0, 1) * time_d1(u, k, i, dt); break;
            case EquationKind::elliptic: break;
          }
          if (!lower.empty()) {
            const auto x = box.coords(i);
            if (lower.q0) s += lower.q0->eval(x.data(), t) * time_d1(u, k, i, dt);
            for (int j = 0; j < static_cast<int>(lower.q.size()); ++j) {
              s += lower.q[j].eval(x.data(), t) * L.diff().d1(j).apply_row(uk, i);
            }
            if (lower.p) s += lower.p->eval(x.data(), t) * uk[i];
          }
          ok[i] = s;
        },
        exec);
  }
  return out;
}

ComplexField apply_operator(EquationKind kind, const MatrixField& A, const LowerOrderCoeffs& lower,
                            const ComplexField& u, const SpaceTimeGrid& grid) {
  const FluxLaplacian L(A, grid.box());
  return apply_operator(kind, L, lower, u, grid);
}

RealField real_part_checked(const ComplexField& u, double tol) {
  RealField r(u.levels, u.nodes);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (std::abs(u.values[i].imag()) > tol) {
      throw std::domain_error("real operator produced an imaginary part at entry " + std::to_string(i));
    }
    r.values[i] = u.values[i].real();
  }
  return r;
}

ComplexField to_complex(const RealField& u) {
  ComplexField c(u.levels, u.nodes);
  for (std::size_t i = 0; i < u.values.size(); ++i) c.values[i] = u.values[i];
  return c;
}

ConjugationCoeffs::ConjugationCoeffs(const WeightSpec& spec, const MatrixField& A, EquationKind kind, double tau)
    : spec_(spec), A_(&A), kind_(kind), tau_(tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (spec.psi0.num_vars() != A.dim()) throw std::invalid_argument("conjugation_coeffs: dimension mismatch");
  const int n = A.dim();
  for (int i = 0; i < n; ++i) d1_.push_back(spec.psi0.derivative(i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d2_.push_back(d1_[i].derivative(j));
  }
}

ConjugationPoint ConjugationCoeffs::at(const double* x, double t) const {
  const int n = A_->dim();
  const double lam = spec_.lambda;
  const double tau = tau_;
  const CoeffValues cv = A_->eval_with_derivatives(x);
  const Mat3& A = cv.A;
  Vec3 g = Vec3::Zero();
  Mat3 H = Mat3::Zero();
  for (int i = 0; i < n; ++i) g(i) = d1_[i].eval(x);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) H(i, j) = d2_[i * n + j].eval(x);
  }
  Vec3 divA = Vec3::Zero();
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) divA(l) += cv.dA[k](k, l);
  }
  const double pt = spec_.dpsi1(t);
  const double ptt = spec_.d2psi1();
  const double phi = std::exp(lam * spec_.psi(x, t));

  // Route 1: derivatives of phi directly.
  const Vec3 gphi = lam * phi * g;
  const Mat3 Hphi = lam * phi * (lam * g * g.transpose() + H);
  const double phit = lam * phi * pt;
  const double phitt = lam * phi * (lam * pt * pt + ptt);
  double lapA_phi = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) lapA_phi += A(k, l) * Hphi(k, l);
    lapA_phi += divA(k) * gphi(k);
  }
  const double gA2_phi = gphi.dot(A * gphi);

  // chi and chi1.
  double lapA_psi = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) lapA_psi += A(k, l) * H(k, l);
    lapA_psi += divA(k) * g(k);
  }
  const Vec3 Ag = A * g;
  ConjugationPoint cp;
  cp.phi = phi;
  const bool wave = kind_ == EquationKind::wave;
  cp.chi = g.dot(Ag) - (wave ? pt * pt : 0.0);
  Vec3 gchi = Vec3::Zero();
  for (int j = 0; j < n; ++j) gchi(j) = g.dot(cv.dA[j] * g) + 2.0 * Ag.dot(H.row(j).transpose());
  const double chit = wave ? -2.0 * pt * ptt : 0.0;
  cp.chi1 = gchi.dot(Ag) - (wave ? chit * pt : 0.0);

  cp.B = -2.0 * tau * (A * gphi);
  switch (kind_) {
    case EquationKind::wave:
      cp.a = tau * tau * (gA2_phi - phit * phit);
      cp.b = -tau * (lapA_phi - phitt);
      cp.d = 2.0 * tau * phit;
      cp.a_via_chi = tau * tau * lam * lam * phi * phi * cp.chi;
      cp.b_via_chi = -tau * lam * lam * phi * cp.chi - tau * lam * phi * (lapA_psi - ptt);
      break;
    case EquationKind::elliptic:
      cp.a = tau * tau * gA2_phi;
      cp.b = -2.0 * tau * lapA_phi;
      cp.c = tau * lapA_phi;
      cp.a_via_chi = tau * tau * lam * lam * phi * phi * cp.chi;
      cp.b_via_chi = -2.0 * tau * (lam * lam * phi * cp.chi + lam * phi * lapA_psi);
      break;
    case EquationKind::parabolic:
      cp.a = tau * tau * gA2_phi;
      cp.b = -2.0 * tau * lapA_phi;
      cp.c = tau * lapA_phi + tau * phit;
      cp.a_via_chi = tau * tau * lam * lam * phi * phi * cp.chi;
      cp.b_via_chi = -2.0 * tau * (lam * lam * phi * cp.chi + lam * phi * lapA_psi);
      break;
    case EquationKind::schrodinger:
      cp.a = tau * tau * gA2_phi;
      cp.b = -tau * lapA_phi;
      cp.c = Complex(0.0, -tau * phit);
      cp.a_via_chi = tau * tau * lam * lam * phi * phi * cp.chi;
      cp.b_via_chi = -tau * (lam * lam * phi * cp.chi + lam * phi * lapA_psi);
      break;
  }
  return cp;
}

ConjugationCoeffs conjugation_coeffs(const WeightSpec& spec, const MatrixField& A, EquationKind kind, double tau) {
  return ConjugationCoeffs(spec, A, kind, tau);
}

namespace {

bool interior_node(const SpaceTimeGrid& grid, int k, std::size_t i, bool timed, int margin) {
  if (grid.box().near_boundary(i, margin - 1)) return false;
  if (timed && (k < margin || k > grid.nt() - 1 - margin)) return false;
  return true;
}

}  // namespace

double conjugation_residual(const ComplexField& u, const WeightSpec& spec, const MatrixField& A, EquationKind kind,
                            double tau, const SpaceTimeGrid& grid) {
  const bool timed = kind != EquationKind::elliptic;
  const BoxDomain& box = grid.box();
  const std::size_t N = box.num_nodes();
  if (u.nodes != N || (timed && u.levels != grid.nt())) throw std::invalid_argument("conjugation_residual: shape mismatch");
  for (int k = 0; k < u.levels; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      if (!interior_node(grid, k, i, timed, 2) && u.at(k, i) != Complex(0.0, 0.0)) {
        throw std::invalid_argument("conjugation_residual: test field support touches the boundary");
      }
    }
  }
  const ConjugationCoeffs cc(spec, A, kind, tau);
  const FluxLaplacian L(A, box);
  const LowerOrderCoeffs none;
  std::vector<ConjugationPoint> pts(static_cast<std::size_t>(u.levels) * N);
  ComplexField v(u.levels, N);
  for (int k = 0; k < u.levels; ++k) {
    const double t = timed ? grid.time(k) : 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const auto x = box.coords(i);
      pts[k * N + i] = cc.at(x.data(), t);
      v.at(k, i) = std::exp(-tau * pts[k * N + i].phi) * u.at(k, i);
    }
  }
  const ComplexField Lv = apply_operator(kind, L, none, v, grid);
  const ComplexField Lu = apply_operator(kind, L, none, u, grid);  // principal part plus time term
  const double dt = grid.dt();
  double num = 0.0, den = 0.0;
  const auto& sw = grid.space_weights();
  for (int k = 0; k < u.levels; ++k) {
    const double tw = timed ? grid.time_weights()[k] : 1.0;
    const Complex* uk = u.level_ptr(k);
    for (std::size_t i = 0; i < N; ++i) {
      if (!interior_node(grid, k, i, timed, 1)) continue;
      const ConjugationPoint& c = pts[k * N + i];
      Complex grad_term = 0.0;
      for (int j = 0; j < box.n; ++j) grad_term += c.B(j) * L.diff().d1(j).apply_row(uk, i);
      Complex split = Lu.at(k, i) + c.a * uk[i] + grad_term + c.b * uk[i] + c.c * uk[i];
      if (kind == EquationKind::wave) split += c.d * time_d1(u, k, i, dt);
      const Complex direct = std::exp(tau * c.phi) * Lv.at(k, i);
      const double w = tw * sw[i];
      num += w * std::norm(direct - split);
      den += w * std::norm(split);
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

double green_residual(const std::vector<double>& u, const std::vector<double>& v, const MatrixField& A,
                      const BoxDomain& box) {
  const std::size_t N = box.num_nodes();
  if (u.size() != N || v.size() != N) throw std::invalid_argument("green_residual: field size mismatch");
  const FluxLaplacian L(A, box);
  const SpaceTimeGrid grid(box, 0.0, 1.0, 3);
  std::vector<double> lap(N);
  L.apply(u.data(), lap.data());
  const int n = box.n;
  std::vector<Vec3> gu(N, Vec3::Zero()), gv(N, Vec3::Zero());
  for (int a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < N; ++i) {
      gu[i](a) = L.diff().d1(a).apply_row(u.data(), i);
      gv[i](a) = L.diff().d1(a).apply_row(v.data(), i);
    }
  }
  std::vector<double> vol(N);
  for (std::size_t i = 0; i < N; ++i) vol[i] = lap[i] * v[i] + gu[i].dot(L.A_at(i) * gv[i]);
  double s = integrate_space(vol.data(), grid);
  for (const auto& f : grid.faces()) {
    for (std::size_t j = 0; j < f.nodes.size(); ++j) {
      const std::size_t i = f.nodes[j];
      const Vec3 Agu = L.A_at(i) * gu[i];
      s -= f.weights[j] * Agu(f.axis) * f.normal[f.axis] * v[i];
    }
  }
  return std::abs(s);
}

RiemannianPoint riemannian_metric(const MatrixField& A, const double* x) {
  const int n = A.dim();
  if (n <= 2) throw std::invalid_argument("metric exponent undefined for n=2");
  const Mat3 M = A.eval(x);
  const double det = M.determinant();
  RiemannianPoint r;
  r.sqrt_det = std::pow(std::abs(det), 1.0 / (n - 2));
  r.g = r.sqrt_det * M.inverse();
  r.g_inv = M / r.sqrt_det;
  return r;
}

double riemannian_identity_residual(const MatrixField& A, const std::vector<double>& u, const BoxDomain& box) {
  if (A.dim() <= 2) throw std::invalid_argument("metric exponent undefined for n=2");
  const std::size_t N = box.num_nodes();
  if (u.size() != N) throw std::invalid_argument("riemannian_identity_residual: field size mismatch");
  const int n = box.n;
  const FluxLaplacian L(A, box);
  std::vector<double> lap(N);
  L.apply(u.data(), lap.data());
  std::vector<RiemannianPoint> metric(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto x = box.coords(i);
    metric[i] = riemannian_metric(A, x.data());
  }
  // w_kl = sqrt|g| g^kl at nodes; its divergence by finite differences.
  std::vector<double> w(N);
  double worst = 0.0;
  std::vector<std::vector<double>> dw(9, std::vector<double>(N, 0.0));  // d_k w_kl
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < N; ++i) w[i] = metric[i].sqrt_det * metric[i].g_inv(k, l);
      L.diff().d1(k).apply(w.data(), dw[k * 3 + l].data());
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (box.is_boundary(i)) continue;
    double lap_g = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        lap_g += metric[i].g_inv(k, l) * L.diff().mixed(k, l).apply_row(u.data(), i);
        lap_g += dw[k * 3 + l][i] / metric[i].sqrt_det * L.diff().d1(l).apply_row(u.data(), i);
      }
    }
    worst = std::max(worst, std::abs(lap[i] - metric[i].sqrt_det * lap_g));
  }
  return worst;
}

double magnetic_expansion_residual(const MatrixField& A, const std::vector<Polynomial>& b,
                                   const std::vector<Complex>& u, const BoxDomain& box) {
  const int n = box.n;
  const std::size_t N = box.num_nodes();
  if (static_cast<int>(b.size()) != n || u.size() != N) throw std::invalid_argument("magnetic: size mismatch");
  const FluxLaplacian L(A, box);
  const Complex I(0.0, 1.0);
  std::vector<Vec3> bn(N, Vec3::Zero());
  std::vector<double> divAb(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const auto x = box.coords(i);
    const CoeffValues c = A.eval_with_derivatives(x.data());
    for (int l = 0; l < n; ++l) bn[i](l) = b[l].eval(x.data());
    double d = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) d += c.dA[k](k, l) * bn[i](l) + c.A(k, l) * b[l].derivative(k).eval(x.data());
    }
    divAb[i] = d;
  }
  // (A b)_k u at nodes, differentiated along k.
  std::vector<std::vector<Complex>> flux(n, std::vector<Complex>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const Vec3 Ab = L.A_at(i) * bn[i];
    for (int k = 0; k < n; ++k) flux[k][i] = Ab(k) * u[i];
  }
  std::vector<Complex> lap(N);
  L.apply(u.data(), lap.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (box.is_boundary(i)) continue;
    const Vec3 Ab = L.A_at(i) * bn[i];
    const double b2 = bn[i].dot(Ab);
    Complex grad_dot_Ab = 0.0;
    Complex div_flux = 0.0;
    for (int k = 0; k < n; ++k) {
      grad_dot_Ab += Ab(k) * L.diff().d1(k).apply_row(u.data(), i);
      div_flux += L.diff().d1(k).apply_row(flux[k].data(), i);
    }
    const Complex composed = lap[i] + I * div_flux + I * grad_dot_Ab - b2 * u[i];
    const Complex expanded = lap[i] + 2.0 * I * grad_dot_Ab + (-b2 + I * divAb[i]) * u[i];
    worst = std::max(worst, std::abs(composed - expanded));
  }
  return worst;
}

}  // namespace carl
