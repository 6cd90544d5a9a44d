#include <cmath>
#include <numbers>

#include "carl/pde_solvers.hpp"
#include "doctest.h"

using namespace carl;

namespace {

constexpr double kPi = std::numbers::pi;

InitialData standing_1d(const BoxDomain& box) {
  InitialData d;
  d.u0.resize(box.num_nodes());
  for (std::size_t i = 0; i < d.u0.size(); ++i) d.u0[i] = std::sin(kPi * box.coords(i)[0]);
  return d;
}

InitialData mode_2d(const BoxDomain& box) {
  InitialData d;
  d.u0.resize(box.num_nodes());
  for (std::size_t i = 0; i < d.u0.size(); ++i) {
    const auto x = box.coords(i);
    d.u0[i] = std::sin(kPi * x[0]) * std::sin(2 * kPi * x[1]) + 0.2 * std::sin(2 * kPi * x[0]) * std::sin(kPi * x[1]);
  }
  return d;
}

double energy_drift(const EvolutionState& st) {
  const double e0 = st.energy.front() * st.energy.front();
  double m = 0.0;
  for (double e : st.energy) m = std::max(m, std::abs(e * e - e0) / e0);
  return m;
}

}  // namespace

TEST_CASE("one-dimensional standing wave and its boundary trace") {
  const auto box = make_box(1, {0.0}, {1.0}, {257});
  const auto st = solve_evolution(EquationKind::wave, MatrixField::identity(1), {}, standing_1d(box), 2.0, box);
  CHECK(st.validation_mode);
  double err = 0.0, terr = 0.0;
  for (int k = 0; k < st.grid.nt(); ++k) {
    const double t = st.grid.time(k);
    for (std::size_t i = 0; i < box.num_nodes(); ++i) {
      err = std::max(err, std::abs(st.u.at(k, i) - std::sin(kPi * box.coords(i)[0]) * std::cos(kPi * t)));
    }
    // Face 1 is x = 1 with outward normal +1.
    terr = std::max(terr, std::abs(st.traces[1][k][0] - (-kPi * std::cos(kPi * t))));
  }
  CHECK(err <= 1e-3);
  CHECK(terr <= 2e-2);
}

TEST_CASE("wave energy is conserved") {
  const auto box = make_box(1, {0.0}, {1.0}, {257});
  const auto st = solve_evolution(EquationKind::wave, MatrixField::identity(1), {}, standing_1d(box), 2.0, box);
  const auto eq = energy_equivalence_check(st);
  CHECK(eq.max_ratio <= 1 + 1e-3);
  CHECK(eq.min_ratio >= 1 - 1e-3);

  InitialData zero;
  zero.u0.assign(box.num_nodes(), 0.0);
  const auto z = solve_evolution(EquationKind::wave, MatrixField::identity(1), {}, zero, 1.0, box);
  CHECK_THROWS_WITH(energy_equivalence_check(z), doctest::Contains("zero initial energy"));

  LowerOrderCoeffs lower;
  lower.p = ComplexPoly::constant(1, 1.0);
  const auto q = solve_evolution(EquationKind::wave, MatrixField::identity(1), lower, standing_1d(box), 2.0, box);
  const auto qe = energy_equivalence_check(q);
  CHECK(std::isfinite(qe.max_ratio));
  CHECK(std::isfinite(qe.min_ratio));
}

TEST_CASE("leapfrog energy drift is second order in the time step") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {33, 33});
  const auto A = MatrixField::scalar_affine(2, 1.0, {0.1, 0.0});
  SolveOptions a, b;
  a.dt = 0.5 * wave_dt_limit(A, box);
  b.dt = 0.5 * a.dt;
  a.keep_snapshots = b.keep_snapshots = false;
  const double d1 = energy_drift(solve_evolution(EquationKind::wave, A, {}, mode_2d(box), 1.0, box, a));
  const double d2 = energy_drift(solve_evolution(EquationKind::wave, A, {}, mode_2d(box), 1.0, box, b));
  CHECK(d1 / d2 >= 3.0);
  CHECK(d1 / d2 <= 5.0);
}

TEST_CASE("heat equation with zero data stays zero") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  InitialData d;
  d.u0.assign(box.num_nodes(), 0.0);
  SolveOptions opt;
  opt.steps = 20;
  const auto st = solve_evolution(EquationKind::parabolic, MatrixField::identity(2), {}, d, 0.5, box, opt);
  for (const auto& v : st.u.values) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("heat mild-solution bound") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  auto d = mode_2d(box);
  d.source = [](const double* x, double t) { return Complex(std::sin(kPi * x[0]) * x[1] * (1 - x[1]) * (1 + t), 0.0); };
  SolveOptions opt;
  opt.steps = 64;
  const auto st = solve_evolution(EquationKind::parabolic, MatrixField::scalar_affine(2, 1.0, {0.1, 0.0}), {}, d, 0.5,
                                  box, opt);
  const auto mb = heat_mild_bound(st, d);
  CHECK(mb.sup_norm <= 1.01 * mb.bound);
}

TEST_CASE("Schrodinger steps conserve the discrete norm") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  auto d = mode_2d(box);
  for (std::size_t i = 0; i < d.u0.size(); ++i) d.u0[i] *= Complex(1.0, box.coords(i)[0]);
  SolveOptions opt;
  opt.steps = 200;
  opt.keep_snapshots = false;
  const auto st = solve_evolution(EquationKind::schrodinger, MatrixField::scalar_affine(2, 1.0, {0.1, 0.0}), {}, d,
                                  1.0, box, opt);
  for (double v : st.l2) CHECK(std::abs(v - st.l2.front()) <= 1e-10 * st.l2.front());
}

TEST_CASE("implicit kinds reject time-dependent lower-order terms") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {9, 9});
  LowerOrderCoeffs lower;
  lower.p = ComplexPoly{Polynomial::variable(3, 2), Polynomial(3)};
  SolveOptions opt;
  opt.steps = 4;
  CHECK_THROWS(solve_evolution(EquationKind::parabolic, MatrixField::identity(2), lower, mode_2d(box), 0.1, box, opt));
}

TEST_CASE("observed boundary part") {
  const auto g1 = build_grid(1, {0}, {1}, {9}, 0.0, 1.0, 3);
  const auto m1 = gamma_plus(MatrixField::identity(1), half_squared_distance(1, std::vector<double>{-0.5}), g1);
  CHECK_FALSE(m1.on_face(0));
  CHECK(m1.on_face(1));
  CHECK(m1.count == 1);

  const auto g2 = build_grid(2, {0, 0}, {1, 1}, {9, 9}, 0.0, 1.0, 3);
  const auto m2 = gamma_plus(MatrixField::identity(2), Polynomial::variable(2, 0), g2);
  for (int f = 0; f < 4; ++f) CHECK(m2.on_face(f) == (f == 1));

  const auto m3 = gamma_plus(MatrixField::identity(2), Polynomial::constant(2, 1.0), g2);
  CHECK(m3.count == 0);
}

TEST_CASE("discrete Dirichlet spectrum matches the closed form") {
  const int N = 33;
  const double h = 1.0 / (N - 1);
  const auto box = make_box(1, {0.0}, {1.0}, {N});
  const auto modes = dirichlet_modes(MatrixField::identity(1), box, 5);
  REQUIRE(modes.eigenvalues.size() == 5);
  for (int k = 1; k <= 5; ++k) {
    const double s = std::sin(k * kPi * h / 2);
    CHECK(modes.eigenvalues[k - 1] == doctest::Approx(4.0 / (h * h) * s * s).epsilon(1e-10));
  }
  for (const auto& m : modes.modes) {
    CHECK(m.front() == Complex(0.0, 0.0));
    CHECK(m.back() == Complex(0.0, 0.0));
  }
}

TEST_CASE("smoothing bound") {
  const auto A = MatrixField::scalar_affine(2, 1.0, {0.1, 0.05});
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  const double env = 1.0 / std::sqrt(2.0 * std::exp(1.0));
  const auto any = smoothing_bound_check(A, box, {1e-3, 0.01, 0.1, 1.0});
  CHECK(any.aleph0 <= env + 1e-9);
  CHECK(any.envelope == doctest::Approx(env).epsilon(1e-15));
  const auto modes = dirichlet_modes(A, box, 1, false);
  const auto hit = smoothing_bound_check(A, box, {1.0 / (2.0 * modes.eigenvalues[0])});
  CHECK(std::abs(hit.aleph0 - env) <= 1e-9);
  CHECK_THROWS(smoothing_bound_check(A, box, {}));
}
