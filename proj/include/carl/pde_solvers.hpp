#pragma once

#include <functional>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/grid.hpp"
#include "carl/operators.hpp"
#include "carl/weight.hpp"

namespace carl {

struct InitialData {
  std::vector<Complex> u0;
  std::vector<Complex> u1;  // wave only
  /// Heat source f(x, t) in Delta_A u - d_t u = f; empty means f = 0.
  std::function<Complex(const double*, double)> source;
};

struct SolveOptions {
  double dt = 0.0;            // 0 selects from cfl_fraction (wave) or steps
  double cfl_fraction = 0.5;  // fraction of the wave stability limit
  int steps = 0;              // implicit kinds: number of steps when dt = 0
  bool keep_snapshots = true;
};

using TraceRecord = std::vector<std::vector<std::vector<Complex>>>;  // [face][level][face node]

struct EvolutionState {
  EquationKind kind = EquationKind::wave;
  SpaceTimeGrid grid;
  ComplexField u;            // all levels when snapshots are kept, otherwise the last one
  std::vector<Complex> final_u;
  TraceRecord traces;        // outward normal derivative
  std::vector<double> energy;  // wave: ||D_A u(t)||; heat and Schrodinger: L2 norm
  std::vector<double> l2;
  bool validation_mode = false;  // n = 1 runs
};

/// Wave stability limit 0.9 h_min / sqrt(n lambda_max(A)).
double wave_dt_limit(const MatrixField& A, const BoxDomain& box);

EvolutionState solve_evolution(EquationKind kind, const MatrixField& A, const LowerOrderCoeffs& lower,
                               const InitialData& data, double horizon, const BoxDomain& box,
                               const SolveOptions& opt = {});

struct GammaPlusMask {
  std::vector<std::vector<char>> mask;  // [face][face node]
  std::size_t count = 0;
  bool on_face(int face) const;
};

GammaPlusMask gamma_plus(const MatrixField& A, const Polynomial& psi0, const SpaceTimeGrid& grid);

/// L2(Sigma_+) norm of a trace record.
double trace_norm(const TraceRecord& traces, const GammaPlusMask& mask, const SpaceTimeGrid& grid);

/// Discrete quadratic form <-Delta_h u, u> on the trapezoid-weighted grid.
double dirichlet_energy(const FluxLaplacian& L, const Complex* u, const SpaceTimeGrid& grid);
double l2_norm(const Complex* u, const SpaceTimeGrid& grid);

struct EnergyEquivalence {
  double max_ratio = 1.0;
  double min_ratio = 1.0;
};

EnergyEquivalence energy_equivalence_check(const EvolutionState& state);

/// Discrete sup ||u(t)|| and the right side ||u0|| + int ||f|| of the mild-solution bound.
struct MildBound {
  double sup_norm = 0.0;
  double bound = 0.0;
};

MildBound heat_mild_bound(const EvolutionState& state, const InitialData& data);

/// Eigenvalues (ascending) and optionally eigenvectors of -Delta_h with Dirichlet conditions.
struct DirichletModes {
  std::vector<double> eigenvalues;
  std::vector<std::vector<Complex>> modes;  // full-grid vectors, zero on the boundary
};

DirichletModes dirichlet_modes(const MatrixField& A, const BoxDomain& box, int count, bool vectors = true);

struct SmoothingBound {
  double aleph0 = 0.0;
  double envelope = 0.0;  // (2e)^{-1/2}
  double mu_min = 0.0;
  double mu_max = 0.0;
};

SmoothingBound smoothing_bound_check(const MatrixField& A, const BoxDomain& box, const std::vector<double>& t_samples);

}  // namespace carl
