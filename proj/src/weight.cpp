#include "carl/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carl/kernels.hpp"
#include "carl/pseudoconvex.hpp"

namespace carl {

const char* profile_name(TimeProfile p) {
  switch (p) {
    case TimeProfile::zero: return "zero";
    case TimeProfile::example: return "example";
    case TimeProfile::ucp: return "ucp";
    case TimeProfile::observability: return "observability";
  }
  return "unknown";
}

const char* kind_name(EquationKind k) {
  switch (k) {
    case EquationKind::elliptic: return "elliptic";
    case EquationKind::parabolic: return "parabolic";
    case EquationKind::wave: return "wave";
    case EquationKind::schrodinger: return "schrodinger";
  }
  return "unknown";
}

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::nonnegative: return "nonnegative";
    case Condition::nonvanishing_gradient: return "nonvanishing-gradient";
    case Condition::pseudo_convexity: return "pseudo-convexity";
    case Condition::time_gradient_separation: return "time-gradient-separation";
    case Condition::time_curvature: return "time-curvature";
  }
  return "unknown";
}

double WeightSpec::phi(const double* x, double t) const { return std::exp(lambda * psi(x, t)); }

bool WeightAdmissibility::has(Condition c) const {
  return std::any_of(violated.begin(), violated.end(), [c](const Violation& v) { return v.condition == c; });
}

WeightSpec make_time_independent_weight(const Polynomial& psi0, double lambda, double shift) {
  WeightSpec s;
  s.n = psi0.num_vars();
  s.psi0 = psi0;
  s.profile = TimeProfile::zero;
  s.lambda = lambda;
  s.shift = shift;
  return s;
}

namespace {

double grad_norm2_A(const Mat3& A, const Vec3& g) { return g.dot(A * g); }

}  // namespace

double separation_bracket(const WeightSpec& spec, const MatrixField& A, const double* x, double t) {
  const Vec3 g = poly_gradient(spec.psi0, x);
  const double dt = spec.dpsi1(t);
  const double b = grad_norm2_A(A.eval(x), g) - dt * dt;
  return b * b;
}

WeightAdmissibility check_admissibility(const WeightSpec& spec, const MatrixField& A,
                                        const EllipticityReport* ellipticity, const SpaceTimeGrid& grid,
                                        EquationKind kind, double grad_tol) {
  if (!ellipticity) throw std::invalid_argument("coefficient field is uncertified: run certify_ellipticity first");
  if (spec.n != A.dim() || spec.psi0.num_vars() != A.dim() || grid.dim() != A.dim()) {
    throw std::invalid_argument("check_admissibility: dimension mismatch");
  }
  if (!(spec.lambda > 0.0)) throw std::invalid_argument("check_admissibility: lambda must be positive");
  const BoxDomain& box = grid.box();
  const std::size_t N = box.num_nodes();
  std::vector<Polynomial> d1;
  for (int i = 0; i < A.dim(); ++i) d1.push_back(spec.psi0.derivative(i));

  std::vector<double> gnorm(N), gA(N), psi0v(N);
  kernels::for_each(N, [&](std::size_t i) {
    const auto x = box.coords(i);
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < A.dim(); ++k) g(k) = d1[k].eval(x.data());
    gnorm[i] = g.norm();
    gA[i] = grad_norm2_A(A.eval(x.data()), g);
    psi0v[i] = spec.psi0.eval(x.data());
  });

  WeightAdmissibility rep;
  rep.kind = kind;
  rep.varkappa = ellipticity->kappa_estimate;
  const auto gm = kernels::min_scan(N, [&](std::size_t i) { return gnorm[i]; });
  rep.grad_min = gm.value;
  rep.delta0 = kernels::min_scan(N, [&](std::size_t i) { return gA[i]; }).value;

  // psi >= 0 on the grid.
  {
    kernels::MinLoc best;
    int best_level = 0;
    for (int k = 0; k < grid.nt(); ++k) {
      const double p1 = spec.psi1(grid.time(k)) + spec.shift;
      const auto m = kernels::min_scan(N, [&](std::size_t i) { return psi0v[i] + p1; });
      if (m.value < best.value) {
        best = m;
        best_level = k;
      }
    }
    if (best.value < 0.0) rep.violated.push_back({Condition::nonnegative, best.index, best_level, best.value});
  }

  if (gm.value <= grad_tol) rep.violated.push_back({Condition::nonvanishing_gradient, gm.index, 0, gm.value});

  if (kind == EquationKind::schrodinger || kind == EquationKind::wave) {
    const auto cert = certify_pseudoconvex(A, spec.psi0, box, grad_tol);
    rep.kappa = cert.kappa;
    if (!(cert.kappa > 0.0)) rep.violated.push_back({Condition::pseudo_convexity, cert.kappa_argmin, 0, cert.kappa});
  }

  if (kind == EquationKind::wave) {
    double bmin = std::numeric_limits<double>::infinity();
    double bmax = -std::numeric_limits<double>::infinity();
    kernels::MinLoc best;
    int best_level = 0;
    for (int k = 0; k < grid.nt(); ++k) {
      const double dt = spec.dpsi1(grid.time(k));
      const double dt2 = dt * dt;
      for (std::size_t i = 0; i < N; ++i) {
        const double b = gA[i] - dt2;
        bmin = std::min(bmin, b);
        bmax = std::max(bmax, b);
        const double sq = b * b;
        if (sq < best.value) {
          best = {sq, i};
          best_level = k;
        }
      }
    }
    rep.delta = best.value;
    const bool sign_change = bmin < 0.0 && bmax > 0.0;
    if (sign_change || rep.delta <= 1e-14) {
      rep.violated.push_back({Condition::time_gradient_separation, best.index, best_level, rep.delta});
    }
    const double bound = rep.kappa / (4.0 * rep.varkappa);
    if (std::abs(spec.d2psi1()) > bound) {
      rep.violated.push_back({Condition::time_curvature, 0, 0, std::abs(spec.d2psi1())});
    }
  }
  rep.pass = rep.violated.empty();
  return rep;
}

WeightSpec make_example_weight(const std::vector<double>& x0, double t0, double gamma, double C,
                               const SpaceTimeGrid& grid, double lambda, bool auto_shift) {
  const BoxDomain& box = grid.box();
  if (static_cast<int>(x0.size()) != box.n) throw std::invalid_argument("x0 must have one entry per axis");
  if (box.contains(x0.data(), 0.0)) throw std::invalid_argument("x0 must lie outside the closed box");
  WeightSpec s;
  s.n = box.n;
  s.psi0 = half_squared_distance(box.n, x0);
  s.profile = TimeProfile::example;
  s.gamma = gamma;
  s.t0 = t0;
  s.coef = 0.5 * gamma;
  s.center = -t0;
  s.shift = C;
  s.lambda = lambda;
  s.x0 = x0;
  if (auto_shift) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.nt(); ++k) {
      const double p1 = s.psi1(grid.time(k));
      for (std::size_t i = 0; i < box.num_nodes(); ++i) {
        const auto x = box.coords(i);
        m = std::min(m, s.psi0.eval(x.data()) + p1);
      }
    }
    if (m + C < 0.0) s.shift = -m + 1e-9;
  }
  return s;
}

double observability_threshold(double alpha, double delta0, double m) {
  return std::max(std::pow(delta0, -1.0 / (2.0 * (1.0 - alpha))), std::pow(32.0 * m, 1.0 / alpha));
}

ObservabilityWeight make_observability_weight(const Polynomial& psi0, double alpha, double horizon, double C,
                                              const MatrixField& A, const BoxDomain& box, double lambda,
                                              int time_samples) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(horizon > 0.0)) throw std::invalid_argument("observation time must be positive");
  if (psi0.num_vars() != box.n || A.dim() != box.n) throw std::invalid_argument("dimension mismatch");
  ObservabilityWeight out;
  WeightSpec& s = out.spec;
  s.n = box.n;
  s.psi0 = psi0;
  s.profile = TimeProfile::observability;
  s.alpha = alpha;
  s.horizon = horizon;
  s.coef = -std::pow(horizon, alpha - 2.0);
  s.center = 0.5 * horizon;
  s.shift = C;
  s.lambda = lambda;

  const std::size_t N = box.num_nodes();
  std::vector<double> p0(N), gA(N);
  std::vector<Polynomial> d1;
  for (int i = 0; i < box.n; ++i) d1.push_back(psi0.derivative(i));
  for (std::size_t i = 0; i < N; ++i) {
    const auto x = box.coords(i);
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < box.n; ++k) g(k) = d1[k].eval(x.data());
    gA[i] = g.dot(A.eval(x.data()) * g);
    p0[i] = psi0.eval(x.data());
  }
  auto& th = out.thresholds;
  th.m = *std::max_element(p0.begin(), p0.end());
  th.delta0 = *std::min_element(gA.begin(), gA.end());
  if (*std::min_element(p0.begin(), p0.end()) < 0.0 || !(th.delta0 > 0.0)) {
    throw std::invalid_argument("psi0 must be nonnegative with nonvanishing gradient on the grid");
  }
  th.t_alpha = observability_threshold(alpha, th.delta0, th.m);

  std::vector<double> times;
  for (int k = 0; k < time_samples; ++k) times.push_back(horizon * k / (time_samples - 1));
  for (double f : {0.25, 0.375, 0.625, 0.75}) times.push_back(f * horizon);
  std::sort(times.begin(), times.end());

  const double ta = std::pow(horizon, alpha);
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -bmin;
  double dmin = bmin;
  bool low_ok = true;
  bool high_ok = true;
  for (double t : times) {
    const double dt = s.dpsi1(t);
    const double p1 = s.psi1(t);
    const bool middle = t >= 0.375 * horizon && t <= 0.625 * horizon;
    const bool outer = t <= 0.25 * horizon || t >= 0.75 * horizon;
    for (std::size_t i = 0; i < N; ++i) {
      const double b = gA[i] - dt * dt;
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
      dmin = std::min(dmin, b * b);
      const double psi = p0[i] + p1 + C;
      if (middle && psi < -ta / 64.0 + C) low_ok = false;
      if (outer && psi > -2.0 * ta / 64.0 + C) high_ok = false;
    }
  }
  th.delta = dmin;
  th.oiw1 = !(bmin < 0.0 && bmax > 0.0) && dmin > 1e-14;
  th.oiw2 = low_ok;
  th.oiw3 = high_ok;
  return out;
}

UCPCertificate ucp_region_certificate(const UCPGeometry& g, double lambda, double C) {
  if (!(g.eps > 0.0)) throw std::invalid_argument("margin eps must be positive");
  if (!(g.c > 0.0) || !(g.horizon > 0.0)) throw std::invalid_argument("c and the time scale must be positive");
  if (!(0.0 < g.rho0 && g.rho0 < g.rho1 && g.rho1 < g.r0 && g.r0 <= std::min(g.r, 0.5 * g.c))) {
    throw std::invalid_argument("radii must satisfy 0 < rho0 < rho1 < r0 <= min(r, c/2)");
  }
  if (g.horizon < 2.0 * g.eps / g.c) {
    throw std::invalid_argument("time scale below 2 eps / c: the cut-off radius is undefined");
  }
  UCPCertificate cert;
  cert.gamma = g.c / (4.0 * g.horizon);
  double rho2 = 2.0 * g.eps / (g.c * g.horizon);
  if (rho2 > 1.0) {
    rho2 = 1.0;
    cert.rho_clamped = true;
  }
  cert.rho = std::sqrt(rho2);
  const double base = 0.5 * g.c * g.c;
  cert.e0 = base - 0.5 * g.eps - g.c * rho2 * g.horizon / 8.0 + C;
  cert.e1 = base - g.eps + C;
  cert.e2 = base - g.c * g.horizon / 32.0 + C;
  cert.c0 = std::exp(lambda * cert.e0);
  cert.c1 = std::exp(lambda * cert.e1);
  cert.c2 = std::exp(lambda * cert.e2);
  cert.margin = std::min(cert.c0 - cert.c1, cert.c0 - cert.c2);
  cert.threshold = 24.0 * g.eps / g.c;
  cert.threshold_ok = g.horizon > cert.threshold;
  cert.pass = cert.c1 < cert.c0 && cert.c2 < cert.c0;
  if (!cert.pass) {
    cert.failure = cert.threshold_ok ? "c1 >= c0" : "time scale not above the 24 eps / c threshold";
  }
  cert.shift_note = "additive constant in the region exponents read as the weight shift C";
  return cert;
}

}  // namespace carl
