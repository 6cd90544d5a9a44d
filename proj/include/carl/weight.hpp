#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/grid.hpp"
#include "carl/polynomial.hpp"

namespace carl {

enum class TimeProfile { zero, example, ucp, observability };

const char* profile_name(TimeProfile p);

/// psi(x, t) = psi0(x) + psi1(t) + C, with psi1(t) = coef * (t - center)^2, and
/// phi = exp(lambda * psi).
struct WeightSpec {
  int n = 2;
  Polynomial psi0;
  TimeProfile profile = TimeProfile::zero;
  double coef = 0.0;
  double center = 0.0;
  double gamma = 0.0;    // example, ucp
  double t0 = 0.0;       // example
  double alpha = 0.5;    // observability
  double horizon = 1.0;  // observability and ucp time scale
  double shift = 0.0;    // C
  double lambda = 1.0;
  std::optional<std::vector<double>> x0;

  double psi1(double t) const { return coef * (t - center) * (t - center); }
  double dpsi1(double t) const { return 2.0 * coef * (t - center); }
  double d2psi1() const { return 2.0 * coef; }
  double psi(const double* x, double t) const { return psi0.eval(x) + psi1(t) + shift; }
  double phi(const double* x, double t) const;
};

WeightSpec make_time_independent_weight(const Polynomial& psi0, double lambda, double shift = 0.0);

enum class EquationKind { elliptic, parabolic, wave, schrodinger };

const char* kind_name(EquationKind k);

/// Named admissibility conditions. time_gradient_separation is the requirement that
/// [|grad psi0|_A^2 - (d_t psi1)^2]^2 has a positive minimum over the closed cylinder;
/// time_curvature is |d_t^2 psi1| <= kappa / (4 varkappa).
enum class Condition { nonnegative, nonvanishing_gradient, pseudo_convexity, time_gradient_separation, time_curvature };

const char* condition_name(Condition c);

struct Violation {
  Condition condition;
  std::size_t node = 0;
  int level = 0;
  double value = 0.0;
};

struct WeightAdmissibility {
  EquationKind kind = EquationKind::elliptic;
  bool pass = false;
  double kappa = 0.0;
  double varkappa = 1.0;
  double delta = 0.0;
  double delta0 = 0.0;
  double grad_min = 0.0;
  std::vector<Violation> violated;

  bool has(Condition c) const;
};

/// Squared bracket [|grad psi0|_A^2 - (d_t psi1)^2]^2 at one node and time.
double separation_bracket(const WeightSpec& spec, const MatrixField& A, const double* x, double t);

WeightAdmissibility check_admissibility(const WeightSpec& spec, const MatrixField& A,
                                        const EllipticityReport* ellipticity, const SpaceTimeGrid& grid,
                                        EquationKind kind, double grad_tol = 1e-8);

/// psi = [|x - x0|^2 + gamma (t + t0)^2] / 2 + C. With auto_shift, C is raised to the
/// smallest grid value making psi >= 0, plus 1e-9.
WeightSpec make_example_weight(const std::vector<double>& x0, double t0, double gamma, double C,
                               const SpaceTimeGrid& grid, double lambda = 1.0, bool auto_shift = true);

struct ObservabilityThresholds {
  double m = 0.0;        // sup psi0
  double delta0 = 0.0;   // min |grad psi0|_A^2
  double t_alpha = 0.0;
  double delta = 0.0;
  bool oiw1 = false;
  bool oiw2 = false;
  bool oiw3 = false;
  bool all() const { return oiw1 && oiw2 && oiw3; }
};

struct ObservabilityWeight {
  WeightSpec spec;
  ObservabilityThresholds thresholds;
};

double observability_threshold(double alpha, double delta0, double m);

/// psi = psi0 - T^(alpha-2) (t - T/2)^2 + C on box x [0, T]; time bands are sampled with
/// time_samples uniform levels plus the band endpoints.
ObservabilityWeight make_observability_weight(const Polynomial& psi0, double alpha, double horizon, double C,
                                              const MatrixField& A, const BoxDomain& box, double lambda = 1.0,
                                              int time_samples = 257);

struct UCPGeometry {
  std::vector<double> center;
  double c = 1.0;
  double r = 1.0;
  double r0 = 0.5;
  double rho0 = 0.2;
  double rho1 = 0.4;
  double eps = 0.1;
  double horizon = 1.0;
};

struct UCPCertificate {
  double gamma = 0.0;
  double rho = 0.0;
  bool rho_clamped = false;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double margin = 0.0;  // min(c0 - c1, c0 - c2)
  double threshold = 0.0;  // 24 eps / c
  bool threshold_ok = false;
  bool pass = false;
  std::string failure;
  std::string shift_note;
};

UCPCertificate ucp_region_certificate(const UCPGeometry& geom, double lambda, double C);

}  // namespace carl
