#include <cmath>
#include <numbers>

#include "carl/operators.hpp"
#include "doctest.h"

using namespace carl;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField spatial(const BoxDomain& box, auto f) {
  ComplexField u(1, box.num_nodes());
  for (std::size_t i = 0; i < box.num_nodes(); ++i) u.at(0, i) = f(box.coords(i).data());
  return u;
}

std::vector<double> real_nodes(const BoxDomain& box, auto f) {
  std::vector<double> u(box.num_nodes());
  for (std::size_t i = 0; i < box.num_nodes(); ++i) u[i] = f(box.coords(i).data());
  return u;
}

ComplexField spacetime(const SpaceTimeGrid& g, auto f) {
  ComplexField u(g.nt(), g.num_nodes());
  for (int k = 0; k < g.nt(); ++k)
    for (std::size_t i = 0; i < g.num_nodes(); ++i) u.at(k, i) = f(g.box().coords(i).data(), g.time(k));
  return u;
}

// Smooth bump supported in [0.25, 0.75]^n x [0.25, 0.75].
double bump(const double* x, int n, double t) {
  auto s = [](double v) {
    if (v <= 0.25 || v >= 0.75) return 0.0;
    const double r = std::sin(2 * kPi * (v - 0.25));
    return r * r * r * r;
  };
  double p = s(t);
  for (int a = 0; a < n; ++a) p *= s(x[a]);
  return p;
}

MatrixField variable_field() {
  const int n = 2;
  auto x = [&](int i) { return Polynomial::variable(n, i); };
  std::vector<std::vector<Polynomial>> e(2, std::vector<Polynomial>(2, Polynomial(n)));
  e[0][0] = Polynomial::constant(n, 1.5) + 0.2 * x(0) * x(1);
  e[0][1] = 0.1 * x(0) + 0.05 * x(1) * x(1);
  e[1][1] = Polynomial::constant(n, 1.0) + 0.1 * x(1);
  return MatrixField::polynomial(n, e);
}

}  // namespace

TEST_CASE("Laplacian is exact on quadratics") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {9, 9}, 0.0, 1.0, 3);
  const auto u = spatial(g.box(), [](const double* x) { return x[0] * x[0]; });
  const auto out = apply_operator(EquationKind::elliptic, MatrixField::identity(2), {}, u, g);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) CHECK(std::abs(out.at(0, i) - 2.0) < 1e-11);
}

TEST_CASE("stencil is exact for constant coefficients on polynomials of degree two per axis") {
  Mat3 M = Mat3::Zero();
  M << 2.0, 0.3, 0, 0.3, 0.7, 0, 0, 0, 0;
  const auto A = MatrixField::constant(M, 2);
  const auto g = build_grid(2, {-0.5, 0}, {1, 2}, {11, 13}, 0.0, 1.0, 3);
  const auto u = spatial(g.box(), [](const double* x) {
    return 1 + x[0] - 2 * x[1] + 3 * x[0] * x[0] * x[1] * x[1] - x[0] * x[1] + 0.5 * x[1] * x[1];
  });
  const auto out = apply_operator(EquationKind::elliptic, A, {}, u, g);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto c = g.box().coords(i);
    const double X = c[0], Y = c[1];
    const double uxx = 6 * Y * Y, uyy = 6 * X * X + 1.0, uxy = 12 * X * Y - 1.0;
    const double exact = M(0, 0) * uxx + 2 * M(0, 1) * uxy + M(1, 1) * uyy;
    CHECK(std::abs(out.at(0, i) - exact) < 1e-11 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("wave operator annihilates a standing wave to second order") {
  auto err = [](int N) {
    // dt = h / 2 so the scheme is not on the exact d'Alembert diagonal.
    const auto g = build_grid(1, {0}, {1}, {N}, 0.0, 1.0, 2 * N - 1);
    const auto u = spacetime(g, [](const double* x, double t) { return std::sin(kPi * x[0]) * std::sin(kPi * t); });
    const auto out = apply_operator(EquationKind::wave, MatrixField::identity(1), {}, u, g);
    double m = 0.0;
    for (int k = 1; k + 1 < g.nt(); ++k)
      for (std::size_t i = 1; i + 1 < g.num_nodes(); ++i) m = std::max(m, std::abs(out.at(k, i)));
    return m;
  };
  const double e1 = err(17), e2 = err(33);
  CHECK(e1 < 0.05);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("zero-order coefficient acts on constants") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {7, 7}, 0.0, 1.0, 5);
  LowerOrderCoeffs lower;
  lower.p = ComplexPoly::constant(2, 3.0);
  const auto u = spacetime(g, [](const double*, double) { return 1.0; });
  const auto out = apply_operator(EquationKind::parabolic, MatrixField::identity(2), lower, u, g);
  for (const auto& v : out.values) CHECK(std::abs(v - 3.0) < 1e-12);
}

TEST_CASE("flux-form Laplacian is discretely self-adjoint") {
  const auto A = variable_field();
  const auto box = make_box(2, {0, 0}, {1, 1}, {25, 25});
  const FluxLaplacian L(A, box);
  const auto u = real_nodes(box, [](const double* x) { return bump(x, 2, 0.5); });
  const auto v = real_nodes(box, [](const double* x) { return bump(x, 2, 0.5) * (1 + x[0] - x[1] * x[1]); });
  std::vector<double> Lu(u.size()), Lv(v.size());
  L.apply(u.data(), Lu.data());
  L.apply(v.data(), Lv.data());
  std::vector<double> p(u.size()), q(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    p[i] = Lu[i] * v[i];
    q[i] = u[i] * Lv[i];
  }
  CHECK(std::abs(integrate_space(p.data(), box) - integrate_space(q.data(), box)) < 1e-11);
}

TEST_CASE("stored rows agree with the direct stencil") {
  const auto A = variable_field();
  const auto box = make_box(2, {0, 0}, {1, 1}, {13, 13});
  const FluxLaplacian L(A, box);
  const auto u = real_nodes(box, [](const double* x) { return std::sin(2 * x[0]) * std::cos(3 * x[1]); });
  std::vector<double> a(u.size()), b(u.size()), c(u.size());
  L.apply(u.data(), a.data(), Exec::serial);
  L.apply(u.data(), c.data(), Exec::parallel);
  L.apply_direct(u.data(), b.data());
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) < 1e-10 * std::max(1.0, std::abs(b[i])));
    CHECK(a[i] == c[i]);
  }
}

TEST_CASE("conjugation coefficients") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {9, 9}, -1.0, 1.0, 17);
  const double x[3] = {0.3, 0.6, 0};

  const auto flat = make_time_independent_weight(half_squared_distance(2, std::vector<double>{-0.5, 0.5}), 2.0);
  for (auto kind : {EquationKind::wave, EquationKind::parabolic, EquationKind::schrodinger}) {
    const auto cp = conjugation_coeffs(flat, MatrixField::identity(2), kind, 3.0).at(x, 0.4);
    CHECK(cp.d == 0.0);
    CHECK(cp.c == Complex(kind == EquationKind::parabolic ? cp.c.real() : 0.0, 0.0));
  }

  const auto spec = make_example_weight({-0.5, 0.5}, 0.0, 0.25, 0.0, g, 2.0);
  const auto A = variable_field();
  for (auto kind : {EquationKind::wave, EquationKind::elliptic, EquationKind::parabolic, EquationKind::schrodinger}) {
    const auto cc = conjugation_coeffs(spec, A, kind, 4.0);
    for (double t : {-0.8, 0.0, 0.5}) {
      const auto cp = cc.at(x, t);
      CHECK(std::abs(cp.a - cp.a_via_chi) <= 1e-10 * std::abs(cp.a));
      CHECK(std::abs(cp.b - cp.b_via_chi) <= 1e-10 * std::abs(cp.b));
    }
  }

  // A = I, psi = x_1, lambda = 1: Delta phi = phi.
  const auto lin = make_time_independent_weight(Polynomial::variable(2, 0), 1.0);
  const double tau = 2.5;
  const auto cp = conjugation_coeffs(lin, MatrixField::identity(2), EquationKind::elliptic, tau).at(x, 0.0);
  const double phi = std::exp(x[0]);
  CHECK(cp.b == doctest::Approx(-2 * tau * phi).epsilon(1e-13));
  CHECK(cp.c.real() == doctest::Approx(tau * phi).epsilon(1e-13));
}

TEST_CASE("conjugation residual") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {9, 9}, 0.0, 1.0, 9);
  const auto spec = make_example_weight({-0.5, 0.5}, 0.0, 0.25, 0.0, g, 1.0);
  const ComplexField zero(g.nt(), g.num_nodes());
  CHECK(conjugation_residual(zero, spec, MatrixField::identity(2), EquationKind::wave, 2.0, g) == 0.0);

  auto res = [&](int N, EquationKind kind) {
    const auto gg = build_grid(2, {0, 0}, {1, 1}, {N, N}, 0.0, 1.0, N);
    const auto u = spacetime(gg, [](const double* x, double t) { return bump(x, 2, t); });
    return conjugation_residual(u, spec, variable_field(), kind, 2.0, gg);
  };
  for (auto kind : {EquationKind::wave, EquationKind::parabolic, EquationKind::schrodinger}) {
    const double factor = res(17, kind) / res(33, kind);
    CHECK(factor >= 3.0);
    CHECK(factor <= 5.0);
  }
}

TEST_CASE("Green identity residual") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  const auto A = MatrixField::identity(2);
  const auto u = real_nodes(box, [](const double* x) { return x[0] * x[0]; });
  CHECK(green_residual(u, std::vector<double>(u.size(), 0.0), A, box) == 0.0);
  auto defect = [&](int N) {
    const auto b = make_box(2, {0, 0}, {1, 1}, {N, N});
    return green_residual(real_nodes(b, [](const double* x) { return x[0] * x[0]; }),
                          real_nodes(b, [](const double* x) { return x[1]; }), A, b);
  };
  const double d1 = defect(17), d2 = defect(33);
  CHECK(d2 <= d1);
  CHECK(d1 <= 1.0 / 16);
  // Zero boundary trace: the defect is the interior summation-by-parts defect only.
  const auto w = real_nodes(box, [](const double* x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]); });
  CHECK(green_residual(w, w, variable_field(), box) < 0.05);
}

TEST_CASE("Riemannian identity residual") {
  const auto box = make_box(3, {0, 0, 0}, {1, 1, 1}, {9, 9, 9});
  const auto u = real_nodes(box, [](const double* x) { return std::sin(kPi * x[0]) * std::cos(x[1]) + x[2] * x[2]; });
  CHECK(riemannian_identity_residual(MatrixField::identity(3), u, box) < 1e-12);

  Mat3 D = Mat3::Zero();
  D(0, 0) = 1;
  D(1, 1) = 1;
  D(2, 2) = 4;
  const auto A = MatrixField::constant(D, 3);
  const double xc[3] = {0.2, 0.3, 0.4};
  const auto rp = riemannian_metric(A, xc);
  CHECK(rp.g(2, 2) == doctest::Approx(4.0 * 0.25).epsilon(1e-14));
  CHECK(rp.g(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  auto resid = [&](int N) {
    const auto b = make_box(3, {0, 0, 0}, {1, 1, 1}, {N, N, N});
    return riemannian_identity_residual(A, real_nodes(b, [](const double* x) { return std::sin(kPi * x[0]); }), b);
  };
  CHECK(resid(9) < 1e-10);
  CHECK_THROWS_WITH(riemannian_identity_residual(MatrixField::identity(2), std::vector<double>(81, 0.0),
                                                 make_box(2, {0, 0}, {1, 1}, {9, 9})),
                    doctest::Contains("n=2"));
}

TEST_CASE("magnetic expansion residual") {
  const auto A = MatrixField::identity(2);
  auto field = [](const BoxDomain& b, auto f) {
    std::vector<Complex> u(b.num_nodes());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(b.coords(i).data());
    return u;
  };
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  const auto smooth = [](const double* x) { return Complex(std::sin(x[0] + 2 * x[1]), std::cos(3 * x[0])); };
  const std::vector<Polynomial> zero_b(2, Polynomial(2));
  CHECK(magnetic_expansion_residual(A, zero_b, field(box, smooth), box) < 1e-12);

  const std::vector<Polynomial> cb = {Polynomial::constant(2, 0.7), Polynomial::constant(2, -0.3)};
  auto resid = [&](int N, const std::vector<Polynomial>& b, auto f) {
    const auto bx = make_box(2, {0, 0}, {1, 1}, {N, N});
    return magnetic_expansion_residual(A, b, field(bx, f), bx);
  };
  // Second order, or exact up to roundoff.
  auto second_order = [](double r1, double r2) { return r2 <= 1e-10 || r1 / r2 > 3.5; };
  CHECK(resid(17, cb, smooth) < 1e-2);
  CHECK(second_order(resid(17, cb, smooth), resid(33, cb, smooth)));

  const std::vector<Polynomial> vb = {Polynomial::variable(2, 1) * Polynomial::variable(2, 1),
                                      Polynomial::variable(2, 0) * Polynomial::variable(2, 1)};
  auto one = [](const double*) { return Complex(1.0, 0.0); };
  CHECK(second_order(resid(17, vb, one), resid(33, vb, one)));
}
