#include <cmath>
#include <numbers>

#include "carl/grid.hpp"
#include "doctest.h"

using namespace carl;

TEST_CASE("unit square lattice spacings") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {17, 17}, 0.0, 1.0, 33);
  CHECK(g.box().spacing(0) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(g.box().spacing(1) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(g.dt() == doctest::Approx(1.0 / 32).epsilon(1e-15));
  CHECK(g.num_nodes() == 289);
}

TEST_CASE("degenerate one-dimensional grid") {
  const auto g = build_grid(1, {0}, {1}, {3}, 0.0, 1.0, 3);
  CHECK(g.box().spacing(0) == 0.5);
  CHECK(g.faces().size() == 2);
}

TEST_CASE("empty extent is rejected") {
  CHECK_THROWS_WITH(build_grid(1, {0}, {0}, {3}, 0.0, 1.0, 3), doctest::Contains("empty extent"));
}

TEST_CASE("interior integrals") {
  const auto unit = build_grid(2, {0, 0}, {1, 1}, {9, 9}, 0.0, 1.0, 5);
  const auto one = sample(unit, [](const double*, double) { return 1.0; });
  CHECK(integrate_interior(one, unit) == doctest::Approx(1.0).epsilon(1e-14));
  const auto rect = build_grid(2, {0, 0}, {2, 3}, {9, 13}, 0.0, 1.0, 5);
  CHECK(integrate_interior(sample(rect, [](const double*, double) { return 1.0; }), rect) ==
        doctest::Approx(6.0).epsilon(1e-14));
  CHECK(integrate_interior(sample(unit, [](const double* x, double) { return x[0]; }), unit) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quadrature is exact for affine-per-axis integrands") {
  const auto g = build_grid(3, {-1, 0, 2}, {1, 3, 2.5}, {5, 7, 4}, -0.5, 1.5, 6);
  const auto f = sample(g, [](const double* x, double t) {
    return (1 + 2 * x[0]) * (3 - x[1]) * (0.5 + x[2]) * (2 + t) + 4 * x[0] * t;
  });
  // Exact: product of axis integrals plus the odd term, which vanishes on the symmetric x0 range.
  const double exact = (2.0 * 1) * (3 * 3 - 4.5) * (0.5 * 0.5 + (2.5 * 2.5 - 4) / 2) * (2 * 2 + (1.5 * 1.5 - 0.25) / 2);
  CHECK(std::abs(integrate_interior(f, g) - exact) <= 1e-12 * std::abs(exact));
}

TEST_CASE("second-order convergence of the trapezoid rule") {
  auto err = [](int N) {
    const auto g = build_grid(1, {0}, {1}, {N}, 0.0, 1.0, N);
    const auto f = sample(g, [](const double* x, double t) {
      return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * t);
    });
    return std::abs(integrate_interior(f, g) - 4.0 / (std::numbers::pi * std::numbers::pi));
  };
  const double factor = err(17) / err(33);
  CHECK(factor >= 3.5);
  CHECK(factor <= 4.5);
}

TEST_CASE("boundary measure of the space-time cylinder") {
  const auto g = build_grid(2, {0, 0}, {1, 1}, {9, 9}, 0.0, 1.0, 5);
  auto ones = DmuField::zeros(g);
  for (auto& face : ones.lateral)
    for (auto& level : face) std::fill(level.begin(), level.end(), 1.0);
  std::fill(ones.cap_lo.begin(), ones.cap_lo.end(), 1.0);
  std::fill(ones.cap_hi.begin(), ones.cap_hi.end(), 1.0);
  CHECK(integrate_dmu(ones, g) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(integrate_dmu(DmuField::zeros(g), g) == 0.0);

  const auto cube = build_grid(3, {0, 0, 0}, {1, 1, 1}, {5, 5, 5}, 0.0, 1.0, 3);
  auto caps = DmuField::zeros(cube);
  std::fill(caps.cap_lo.begin(), caps.cap_lo.end(), 1.0);
  std::fill(caps.cap_hi.begin(), caps.cap_hi.end(), 1.0);
  CHECK(integrate_dmu(caps, cube) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("boundary integral is additive") {
  const auto g = build_grid(2, {0, 0}, {1, 2}, {7, 9}, 0.0, 1.0, 6);
  auto a = DmuField::zeros(g), b = DmuField::zeros(g), s = DmuField::zeros(g);
  double v = 0.1;
  for (std::size_t f = 0; f < a.lateral.size(); ++f)
    for (std::size_t k = 0; k < a.lateral[f].size(); ++k)
      for (std::size_t j = 0; j < a.lateral[f][k].size(); ++j) {
        a.lateral[f][k][j] = std::sin(v += 0.37);
        b.lateral[f][k][j] = std::cos(3 * v);
        s.lateral[f][k][j] = a.lateral[f][k][j] + b.lateral[f][k][j];
      }
  for (std::size_t i = 0; i < a.cap_lo.size(); ++i) {
    a.cap_lo[i] = 1.0 + i;
    b.cap_hi[i] = 2.0 - 0.1 * i;
    s.cap_lo[i] = a.cap_lo[i];
    s.cap_hi[i] = b.cap_hi[i];
  }
  const double lhs = integrate_dmu(s, g), rhs = integrate_dmu(a, g) + integrate_dmu(b, g);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("every boundary node has exactly one owner face") {
  const auto g = build_grid(3, {0, 0, 0}, {1, 1, 1}, {4, 5, 6}, 0.0, 1.0, 3);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const int o = g.owner(i);
    CHECK((o >= 0) == g.box().is_boundary(i));
  }
}
