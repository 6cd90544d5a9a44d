#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "carl/pseudoconvex.hpp"
#include "carl/stencil.hpp"

namespace {

carl::BoxDomain box_for(int n) { return carl::make_box(2, {0.0, 0.0}, {1.0, 1.0}, {n, n}); }

carl::MatrixField field() {
  return carl::MatrixField::scalar_affine(2, 1.0, {0.1, 0.05});
}

void laplacian(benchmark::State& state, carl::Exec exec) {
  const auto box = box_for(static_cast<int>(state.range(0)));
  const auto A = field();
  const carl::FluxLaplacian L(A, box);
  std::vector<double> u(box.num_nodes()), out(box.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(0.01 * static_cast<double>(i));
  for (auto _ : state) {
    L.apply(u.data(), out.data(), exec);
    benchmark::DoNotOptimize(out.data());
  }
}

void certify(benchmark::State& state, carl::Exec exec) {
  const auto box = box_for(static_cast<int>(state.range(0)));
  const auto A = field();
  const std::vector<double> x0{-0.5, 0.5};
  const auto psi = carl::half_squared_distance(2, x0);
  for (auto _ : state) benchmark::DoNotOptimize(carl::certify_pseudoconvex(A, psi, box, 1e-8, exec).kappa);
}

}  // namespace

BENCHMARK_CAPTURE(laplacian, serial, carl::Exec::serial)->Arg(65)->Arg(257);
BENCHMARK_CAPTURE(laplacian, parallel, carl::Exec::parallel)->Arg(65)->Arg(257);
BENCHMARK_CAPTURE(certify, serial, carl::Exec::serial)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(certify, parallel, carl::Exec::parallel)->Arg(33)->Arg(65);

BENCHMARK_MAIN();
