#pragma once

#include <string>
#include <vector>

#include "carl/pde_solvers.hpp"

namespace carl {

enum class ObservabilityKind { wave, heat_final, schrodinger };

const char* observability_name(ObservabilityKind k);
ObservabilityKind observability_from_name(const std::string& name);

struct ObservationSample {
  double data_norm = 0.0;   // wave: (||grad_A u0||^2 + ||u1||^2)^(1/2); heat: ||grad_A u(T)||; Schrodinger: ||grad_A u0||
  double trace_norm = 0.0;  // ||d_nu u||_{L2(Sigma_+)}
  double ratio = 0.0;
  bool zero_observation = false;
};

struct ObservabilityReport {
  ObservabilityKind kind = ObservabilityKind::wave;
  double horizon = 0.0;
  double alpha = 0.5;
  double t_alpha = 0.0;
  double secondary = 0.0;       // (8 varkappa / kappa)^(1/(2 - alpha)), wave only
  double printed_min = 0.0;     // the min combination as stated in the source
  double gate = 0.0;            // threshold actually enforced: max of the two
  bool above_threshold = false;
  bool pseudoconvex = true;
  double kappa = 0.0;
  double varkappa = 1.0;
  std::string ensemble;
  std::vector<ObservationSample> samples;
  double aleph = 0.0;  // max ratio over samples with nonzero observation
  std::vector<std::size_t> gamma_plus_per_face;
  std::vector<std::string> flags;
  bool validation_mode = false;
};

/// Solves forward for each datum and forms the kind's observed-energy quotient.
ObservabilityReport observability_experiment(ObservabilityKind kind, const MatrixField& A, const Polynomial& psi0,
                                             double alpha, double horizon, const std::vector<InitialData>& ensemble,
                                             const BoxDomain& box, const SolveOptions& opt = {});

/// The lowest Dirichlet modes as wave data (u0 = mode, u1 = 0) or heat/Schrodinger data.
std::vector<InitialData> mode_ensemble(const MatrixField& A, const BoxDomain& box, int count);

struct WorstCaseResult {
  double ratio = 0.0;
  std::vector<double> iterates;      // ratio after each power step
  std::vector<double> coefficients;  // extremal combination of the basis
  InitialData extremal;
  bool converged = false;
  bool partial = false;
  bool unobservable = false;
};

/// Largest observability quotient over span(basis), found by power iteration on the
/// generalized eigenproblem M c = R G c, with G the Sigma_+ trace Gramian and M the
/// data Gramian. The first iterate is the quotient of basis[seed_index].
WorstCaseResult worst_case_ratio(ObservabilityKind kind, const MatrixField& A, const Polynomial& psi0,
                                 double horizon, const std::vector<InitialData>& basis, const BoxDomain& box,
                                 int iterations, std::size_t seed_index = 0, const SolveOptions& opt = {});

/// Basis for worst_case_ratio: for the wave kind, each mode as u0 and as u1.
std::vector<InitialData> worst_case_basis(ObservabilityKind kind, const MatrixField& A, const BoxDomain& box,
                                          int modes);

}  // namespace carl
