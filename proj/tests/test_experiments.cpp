#include <cmath>
#include <numbers>

#include "carl/experiments.hpp"
#include "doctest.h"

using namespace carl;

namespace {

constexpr double kPi = std::numbers::pi;

BoxDomain line() { return make_box(1, {0.0}, {1.0}, {257}); }

InitialData sine(const BoxDomain& box, double scale = 1.0) {
  InitialData d;
  d.u0.resize(box.num_nodes());
  for (std::size_t i = 0; i < d.u0.size(); ++i) d.u0[i] = scale * std::sin(kPi * box.coords(i)[0]);
  return d;
}

Polynomial bowl1() { return half_squared_distance(1, std::vector<double>{-0.5}); }
Polynomial bowl2() { return half_squared_distance(2, std::vector<double>{-0.5, 0.5}); }

}  // namespace

TEST_CASE("one-dimensional validation ratio") {
  const auto box = line();
  const auto rep = observability_experiment(ObservabilityKind::wave, MatrixField::identity(1), bowl1(), 0.5, 2.0,
                                            {sine(box)}, box);
  CHECK(rep.validation_mode);
  const auto& s = rep.samples.front();
  CHECK(s.data_norm == doctest::Approx(std::sqrt(kPi * kPi / 2)).epsilon(0.02));
  CHECK(s.trace_norm == doctest::Approx(kPi).epsilon(0.02));
  CHECK(s.ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("zero data is flagged") {
  const auto box = line();
  const auto rep = observability_experiment(ObservabilityKind::wave, MatrixField::identity(1), bowl1(), 0.5, 2.0,
                                            {sine(box, 0.0), sine(box)}, box);
  CHECK(rep.samples[0].zero_observation);
  CHECK_FALSE(rep.samples[1].zero_observation);
  CHECK(rep.aleph == rep.samples[1].ratio);
}

TEST_CASE("threshold bookkeeping and gating") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {9, 9});
  const auto A = MatrixField::identity(2);
  const auto ens = mode_ensemble(A, box, 2);
  const auto rep = observability_experiment(ObservabilityKind::wave, A, bowl2(), 0.7, 1.0, ens, box);
  CHECK(rep.t_alpha == observability_threshold(0.7, 0.25, 1.25));
  CHECK(rep.secondary == std::pow(8.0 * rep.varkappa / rep.kappa, 1.0 / (2.0 - 0.7)));
  CHECK(rep.gate == std::max(rep.t_alpha, rep.secondary));
  CHECK(rep.printed_min == std::min(rep.t_alpha, rep.secondary));
  CHECK_FALSE(rep.above_threshold);
}

TEST_CASE("ratios are invariant under scaling of the data") {
  const auto box = line();
  const auto a = observability_experiment(ObservabilityKind::wave, MatrixField::identity(1), bowl1(), 0.5, 2.0,
                                          {sine(box)}, box);
  const auto b = observability_experiment(ObservabilityKind::wave, MatrixField::identity(1), bowl1(), 0.5, 2.0,
                                          {sine(box, 3.0)}, box);
  CHECK(std::abs(a.samples[0].ratio - b.samples[0].ratio) <= 1e-12 * a.samples[0].ratio);
}

TEST_CASE("longer observation never shrinks the trace norm") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  const auto A = MatrixField::scalar_affine(2, 1.0, {0.1, 0.0});
  const auto ens = mode_ensemble(A, box, 3);
  SolveOptions opt;
  opt.dt = 0.01;
  double prev = 0.0;
  for (double T : {0.5, 1.0, 2.0}) {
    const auto rep = observability_experiment(ObservabilityKind::wave, A, bowl2(), 0.7, T, ens, box, opt);
    CHECK(rep.samples[0].trace_norm >= prev);
    prev = rep.samples[0].trace_norm;
  }
}

TEST_CASE("heat and Schrodinger experiments produce finite ratios") {
  const auto box = make_box(2, {0, 0}, {1, 1}, {17, 17});
  const auto A = MatrixField::identity(2);
  const auto ens = mode_ensemble(A, box, 3);
  for (auto kind : {ObservabilityKind::heat_final, ObservabilityKind::schrodinger}) {
    const auto rep = observability_experiment(kind, A, bowl2(), 0.5, 0.2, ens, box);
    CHECK(observability_from_name(observability_name(kind)) == kind);
    for (const auto& s : rep.samples) {
      CHECK(std::isfinite(s.ratio));
      CHECK(s.ratio > 0.0);
    }
  }
}

TEST_CASE("two-dimensional mode ensemble is stable under refinement") {
  auto run = [](int N) {
    const auto box = make_box(2, {0, 0}, {1, 1}, {N, N});
    const auto A = MatrixField::identity(2);
    return observability_experiment(ObservabilityKind::wave, A, bowl2(), 0.7, 200.0, mode_ensemble(A, box, 10), box);
  };
  const auto c = run(17), f = run(33);
  CHECK(f.above_threshold);
  for (const auto& s : f.samples) CHECK(std::isfinite(s.ratio));
  CHECK(std::abs(c.aleph - f.aleph) < 0.5 * f.aleph);
}

TEST_CASE("worst-case ratio") {
  const auto box = make_box(1, {0.0}, {1.0}, {129});
  const auto A = MatrixField::identity(1);
  const auto basis = worst_case_basis(ObservabilityKind::wave, A, box, 4);
  const auto w = worst_case_ratio(ObservabilityKind::wave, A, bowl1(), 2.0, basis, box, 50);
  CHECK(w.converged);
  CHECK(w.ratio >= 0.7071 * (1 - 0.02));
  for (std::size_t k = 1; k < w.iterates.size(); ++k) CHECK(w.iterates[k] >= w.iterates[k - 1] * (1 - 1e-10));

  const auto one = worst_case_ratio(ObservabilityKind::wave, A, bowl1(), 2.0, basis, box, 1);
  const auto exp = observability_experiment(ObservabilityKind::wave, A, bowl1(), 0.5, 2.0, {basis[0]}, box);
  CHECK(std::abs(one.ratio - exp.samples[0].ratio) <= 1e-12 * exp.samples[0].ratio);

  auto scaled = basis;
  for (auto& d : scaled) {
    for (auto& v : d.u0) v *= 3.0;
    for (auto& v : d.u1) v *= 3.0;
  }
  const auto s = worst_case_ratio(ObservabilityKind::wave, A, bowl1(), 2.0, scaled, box, 50);
  CHECK(std::abs(s.ratio - w.ratio) <= 1e-12 * w.ratio);

  const auto blind = worst_case_ratio(ObservabilityKind::wave, A, Polynomial::constant(1, 1.0), 2.0, basis, box, 10);
  CHECK(blind.unobservable);
}
