#include "carl/pseudoconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace carl {

Vec3 poly_gradient(const Polynomial& h, const double* x) {
  Vec3 g = Vec3::Zero();
  for (int i = 0; i < h.num_vars() && i < 3; ++i) g(i) = h.derivative(i).eval(x);
  return g;
}

Mat3 poly_hessian(const Polynomial& h, const double* x) {
  Mat3 H = Mat3::Zero();
  const int n = std::min(h.num_vars(), 3);
  for (int i = 0; i < n; ++i) {
    const Polynomial di = h.derivative(i);
    for (int j = i; j < n; ++j) H(i, j) = H(j, i) = di.derivative(j).eval(x);
  }
  return H;
}

namespace {

// Gradient/Hessian with derivative polynomials built once per scan.
struct PolyJet {
  int n;
  std::vector<Polynomial> d1;
  std::vector<Polynomial> d2;
  explicit PolyJet(const Polynomial& h, int dim) : n(dim) {
    for (int i = 0; i < n; ++i) d1.push_back(h.derivative(i));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d2.push_back(d1[i].derivative(j));
    }
  }
  Vec3 grad(const double* x) const {
    Vec3 g = Vec3::Zero();
    for (int i = 0; i < n; ++i) g(i) = d1[i].eval(x);
    return g;
  }
  Mat3 hess(const double* x) const {
    Mat3 H = Mat3::Zero();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) H(i, j) = d2[i * n + j].eval(x);
    }
    return H;
  }
};

ThetaDecomposition assemble_theta(const CoeffValues& c, const Vec3& g, const Mat3& H, int n) {
  ThetaDecomposition td;
  for (auto& L : td.Lambda) L.setZero();
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int p = 0; p < n; ++p) s += -c.dA[p](k, l) * c.A(p, m) + 2.0 * c.A(k, p) * c.dA[p](l, m);
        td.Lambda[m](k, l) = s;
      }
    }
  }
  td.Upsilon.setZero();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += td.Lambda[m](k, l) * g(m);
      td.Upsilon(k, l) = s;
    }
  }
  td.Theta = 2.0 * c.A * H * c.A + td.Upsilon;
  const Mat3 S = 0.5 * (td.Theta + td.Theta.transpose());
  td.theta_sym_min = sym_eigenvalues(S, n)[0];
  return td;
}

}  // namespace

ThetaDecomposition theta_decomposition(const MatrixField& A, const Polynomial& h, const double* x) {
  if (h.num_vars() != A.dim()) throw std::invalid_argument("theta_decomposition: dimension mismatch between A and h");
  const int n = A.dim();
  const PolyJet jet(h, n);
  return assemble_theta(A.eval_with_derivatives(x), jet.grad(x), jet.hess(x), n);
}

PseudoconvexCertificate certify_pseudoconvex(const MatrixField& A, const Polynomial& h, const BoxDomain& box,
                                             double grad_tol, Exec exec) {
  if (h.num_vars() != A.dim() || box.n != A.dim()) throw std::invalid_argument("certify_pseudoconvex: dimension mismatch");
  const std::size_t N = box.num_nodes();
  if (N == 0) throw std::invalid_argument("certify_pseudoconvex: grid empty");
  const int n = A.dim();
  const PolyJet jet(h, n);
  std::vector<double> smin(N), gnorm(N);
  kernels::for_each(
      N,
      [&](std::size_t i) {
        const auto x = box.coords(i);
        const Vec3 g = jet.grad(x.data());
        smin[i] = assemble_theta(A.eval_with_derivatives(x.data()), g, jet.hess(x.data()), n).theta_sym_min;
        gnorm[i] = g.norm();
      },
      exec);
  const auto km = kernels::min_scan(N, [&](std::size_t i) { return smin[i]; }, exec);
  const auto gm = kernels::min_scan(N, [&](std::size_t i) { return gnorm[i]; }, exec);

  PseudoconvexCertificate cert;
  cert.kappa = km.value;
  cert.kappa_argmin = km.index;
  cert.kappa_location = box.coords(km.index);
  cert.grad_min = gm.value;
  cert.grad_argmin = gm.index;
  cert.grad_location = box.coords(gm.index);

  double L = 0.0;
  double hmax = 0.0;
  for (int a = 0; a < n; ++a) hmax = std::max(hmax, box.spacing(a));
  for (std::size_t i = 0; i < N; ++i) {
    const auto ijk = box.multi_index(i);
    for (int a = 0; a < n; ++a) {
      if (ijk[a] + 1 < box.nodes[a]) {
        L = std::max(L, std::abs(smin[i + box.stride(a)] - smin[i]) / box.spacing(a));
      }
    }
  }
  cert.lipschitz_estimate = L;
  cert.lipschitz_margin = cert.kappa - hmax * L;
  cert.pass = cert.kappa > 0.0 && cert.grad_min > grad_tol;
  return cert;
}

std::array<double, 3> FlattenedChart::forward(const double* x) const {
  std::array<double, 3> y{x[0], x[1], x[2]};
  double r2 = 0.0;
  for (int k = 0; k + 1 < n; ++k) r2 += x[k] * x[k];
  y[n - 1] = x[n - 1] - graph.eval(x) + r2;
  return y;
}

std::array<double, 3> FlattenedChart::inverse(const double* y) const {
  std::array<double, 3> x{y[0], y[1], y[2]};
  double r2 = 0.0;
  for (int k = 0; k + 1 < n; ++k) r2 += y[k] * y[k];
  x[n - 1] = y[n - 1] + graph.eval(y) - r2;
  return x;
}

Mat3 FlattenedChart::jacobian(const double* x) const {
  Mat3 J = Mat3::Identity();
  for (int k = 0; k + 1 < n; ++k) J(n - 1, k) = -graph.derivative(k).eval(x) + 2.0 * x[k];
  return J;
}

BoxDomain FlattenedChart::chart_box() const {
  return make_box(n, std::vector<double>(n, -radius), std::vector<double>(n, radius),
                  std::vector<int>(n, chart_nodes));
}

namespace {

void check_graph(const Polynomial& graph, int n) {
  if (graph.num_vars() != n) throw std::invalid_argument("graph function must use n variables");
  for (const auto& t : graph.terms()) {
    if (t.exponents[n - 1] != 0) throw std::invalid_argument("graph function must not depend on x_n");
  }
  const double zero[3] = {0, 0, 0};
  if (std::abs(graph.eval(zero)) > 1e-14) throw std::invalid_argument("graph function must vanish at 0");
  for (int k = 0; k + 1 < n; ++k) {
    if (std::abs(graph.derivative(k).eval(zero)) > 1e-14) {
      throw std::invalid_argument("graph function must have zero gradient at 0");
    }
  }
}

// A_H(y) = J A(phi^{-1}(y)) J^t with J depending on y' only.
MatrixField transformed_field(const MatrixField& A, const Polynomial& graph, int n) {
  std::vector<Polynomial> inv;
  Polynomial r2(n);
  for (int k = 0; k + 1 < n; ++k) {
    inv.push_back(Polynomial::variable(n, k));
    r2 += Polynomial::variable(n, k) * Polynomial::variable(n, k);
  }
  inv.push_back(Polynomial::variable(n, n - 1) + graph - r2);

  std::vector<std::vector<Polynomial>> J(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int k = 0; k < n; ++k) J[k][k] = Polynomial::constant(n, 1.0);
  for (int k = 0; k + 1 < n; ++k) {
    J[n - 1][k] = -1.0 * graph.derivative(k) + 2.0 * Polynomial::variable(n, k);
  }
  std::vector<std::vector<Polynomial>> Ahat(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) Ahat[i][j] = Ahat[j][i] = A.entry(i, j).compose(inv);
  }
  std::vector<std::vector<Polynomial>> out(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      Polynomial s(n);
      for (int i = 0; i < n; ++i) {
        if (J[k][i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
          if (J[l][j].is_zero()) continue;
          s += J[k][i] * Ahat[i][j] * J[l][j];
        }
      }
      out[k][l] = s;
    }
  }
  return MatrixField::polynomial(n, out);
}

bool preimage_allowed(const MatrixField& A, const std::array<double, 3>& x) {
  return !A.domain() || A.domain()->contains(x.data(), 1e-12);
}

}  // namespace

FlattenResult flatten_and_certify_hypersurface(const MatrixField& A, const Polynomial& graph, double chart_radius,
                                               int chart_nodes) {
  const int n = A.dim();
  if (n < 2) throw std::invalid_argument("flattening needs n >= 2");
  if (!(chart_radius > 0.0)) throw std::invalid_argument("chart radius must be positive");
  check_graph(graph, n);

  FlattenedChart chart;
  chart.n = n;
  chart.graph = graph;
  chart.chart_nodes = chart_nodes;
  chart.radius = chart_radius;

  bool ok = false;
  for (int halving = 0; halving <= 20; ++halving) {
    chart.halvings = halving;
    const BoxDomain box = chart.chart_box();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < box.num_nodes(); ++i) {
      const auto y = box.coords(i);
      const auto x = chart.inverse(y.data());
      if (!preimage_allowed(A, x)) continue;
      const Mat3 J = chart.jacobian(x.data());
      const Mat3 S = 0.5 * (J + J.transpose());
      worst = std::min(worst, sym_eigenvalues(S, n)[0]);
    }
    chart.pch1_min = worst;
    if (worst >= 0.5) {
      ok = true;
      break;
    }
    chart.radius *= 0.5;
  }
  if (!ok) throw std::runtime_error("chart too curved");

  chart.A_H = transformed_field(A, graph, n);
  Polynomial w = pow(Polynomial::variable(n, n - 1) - Polynomial::constant(n, 1.0), 2);
  for (int k = 0; k + 1 < n; ++k) w += Polynomial::variable(n, k) * Polynomial::variable(n, k);
  chart.model_weight = w;

  FlattenResult res;
  const double zero[3] = {0, 0, 0};
  res.theta_at_origin = theta_decomposition(chart.A_H, w, zero);

  // Certificate over chart nodes whose preimage lies in the closed domain.
  const BoxDomain box = chart.chart_box();
  const PolyJet jet(w, n);
  PseudoconvexCertificate cert;
  cert.kappa = std::numeric_limits<double>::infinity();
  cert.grad_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < box.num_nodes(); ++i) {
    const auto y = box.coords(i);
    if (!preimage_allowed(A, chart.inverse(y.data()))) continue;
    const Vec3 g = jet.grad(y.data());
    const double s = assemble_theta(chart.A_H.eval_with_derivatives(y.data()), g, jet.hess(y.data()), n).theta_sym_min;
    if (s < cert.kappa) {
      cert.kappa = s;
      cert.kappa_argmin = i;
      cert.kappa_location = y;
    }
    if (g.norm() < cert.grad_min) {
      cert.grad_min = g.norm();
      cert.grad_argmin = i;
      cert.grad_location = y;
    }
  }
  cert.lipschitz_margin = cert.kappa;
  cert.pass = cert.kappa > 0.0 && cert.grad_min > 1e-8;
  res.chart = std::move(chart);
  res.certificate = cert;
  return res;
}

double subellipticity_bracket(const MatrixField& A, const Polynomial& psi, double lambda, const double* x,
                              const double* xi, double tau) {
  const int n = A.dim();
  if (psi.num_vars() != n) throw std::invalid_argument("subellipticity_bracket: dimension mismatch");
  const CoeffValues c = A.eval_with_derivatives(x);
  const PolyJet jet(psi, n);
  const Vec3 gpsi = jet.grad(x);
  const Mat3 hpsi = jet.hess(x);
  const double phi = std::exp(lambda * psi.eval(x));
  const Vec3 gphi = lambda * phi * gpsi;
  // Row j of Hphi is d_j grad(phi).
  const Mat3 Hphi = lambda * phi * (lambda * gpsi * gpsi.transpose() + hpsi);
  Vec3 Xi = Vec3::Zero();
  for (int i = 0; i < n; ++i) Xi(i) = xi[i];

  const Vec3 Axi = c.A * Xi;
  const Vec3 Agphi = c.A * gphi;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec3 dgphi = Hphi.row(j).transpose();
    const double dp0_dxi = 2.0 * Axi(j);
    const double dp1_dxi = 2.0 * tau * Agphi(j);
    const double dp0_dx = Xi.dot(c.dA[j] * Xi) - tau * tau * (gphi.dot(c.dA[j] * gphi) + 2.0 * Agphi.dot(dgphi));
    const double dp1_dx = 2.0 * tau * (Xi.dot(c.dA[j] * gphi) + Axi.dot(dgphi));
    s += dp0_dxi * dp1_dx - dp0_dx * dp1_dxi;
  }
  return s;
}

}  // namespace carl
