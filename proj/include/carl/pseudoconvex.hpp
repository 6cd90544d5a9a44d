#pragma once

#include <array>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/kernels.hpp"

namespace carl {

struct ThetaDecomposition {
  std::array<Mat3, 3> Lambda{};  // Lambda[m](k, l)
  Mat3 Upsilon = Mat3::Zero();
  Mat3 Theta = Mat3::Zero();
  double theta_sym_min = 0.0;
};

/// Gradient and Hessian of a scalar polynomial at x.
Vec3 poly_gradient(const Polynomial& h, const double* x);
Mat3 poly_hessian(const Polynomial& h, const double* x);

ThetaDecomposition theta_decomposition(const MatrixField& A, const Polynomial& h, const double* x);

struct PseudoconvexCertificate {
  double kappa = 0.0;
  double grad_min = 0.0;
  std::size_t kappa_argmin = 0;
  std::size_t grad_argmin = 0;
  std::array<double, 3> kappa_location{};
  std::array<double, 3> grad_location{};
  /// Largest change of theta_sym_min between neighbouring nodes per unit length.
  double lipschitz_estimate = 0.0;
  /// kappa minus max spacing times the Lipschitz estimate.
  double lipschitz_margin = 0.0;
  bool pass = false;
};

PseudoconvexCertificate certify_pseudoconvex(const MatrixField& A, const Polynomial& h, const BoxDomain& box,
                                             double grad_tol = 1e-8, Exec exec = Exec::parallel);

/// Graph chart: the surface x_n = theta(x') is sent to y_n = |y'|^2.
struct FlattenedChart {
  int n = 2;
  Polynomial graph;           // theta(x'), in n variables (last one unused)
  double radius = 0.0;        // chart box is [-radius, radius]^n in y
  int halvings = 0;
  MatrixField A_H;            // transformed coefficients in y
  Polynomial model_weight;    // (y_n - 1)^2 + |y'|^2
  double pch1_min = 0.0;      // min eigenvalue of sym(phi') on the chart grid
  int chart_nodes = 17;

  std::array<double, 3> forward(const double* x) const;
  std::array<double, 3> inverse(const double* y) const;
  /// Jacobian of the forward map; it depends only on x'.
  Mat3 jacobian(const double* x) const;
  BoxDomain chart_box() const;
};

struct FlattenResult {
  FlattenedChart chart;
  PseudoconvexCertificate certificate;
  ThetaDecomposition theta_at_origin;
};

/// Builds the chart, shrinking the radius by halving (at most 20 times) until the
/// Jacobian bound (phi' xi | xi) >= |xi|^2 / 2 holds on the chart grid, then
/// certifies the model weight against A_H. When A has a domain, chart nodes whose
/// preimage falls outside it are skipped.
FlattenResult flatten_and_certify_hypersurface(const MatrixField& A, const Polynomial& graph, double chart_radius,
                                               int chart_nodes = 17);

/// Poisson bracket {p0, p1} of the conjugated symbol parts with phi = exp(lambda psi).
double subellipticity_bracket(const MatrixField& A, const Polynomial& psi, double lambda, const double* x,
                              const double* xi, double tau);

}  // namespace carl
