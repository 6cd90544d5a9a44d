#pragma once

#include <optional>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/grid.hpp"
#include "carl/stencil.hpp"
#include "carl/weight.hpp"

namespace carl {

/// Complex polynomial in (x_1..x_n, t).
struct ComplexPoly {
  Polynomial re;
  Polynomial im;

  static ComplexPoly constant(int n, Complex c);
  Complex eval(const double* x, double t) const;
};

/// First- and zero-order terms. q0 multiplies d_t (wave only), q[j] multiplies d_j,
/// p is the zero-order coefficient. bound is the declared sup bound.
struct LowerOrderCoeffs {
  std::optional<ComplexPoly> q0;
  std::vector<ComplexPoly> q;
  std::optional<ComplexPoly> p;
  double bound = 0.0;

  bool empty() const { return !q0 && q.empty() && !p; }
  /// Largest modulus of any coefficient on the grid.
  double sup_norm(const SpaceTimeGrid& grid) const;
};

/// Applies the operator of the given kind: Delta_A plus -d_t^2 (wave), -d_t (parabolic)
/// or i d_t (Schrodinger), plus lower-order terms. Elliptic fields may have one level.
ComplexField apply_operator(EquationKind kind, const FluxLaplacian& L, const LowerOrderCoeffs& lower,
                            const ComplexField& u, const SpaceTimeGrid& grid, Exec exec = Exec::parallel);
ComplexField apply_operator(EquationKind kind, const MatrixField& A, const LowerOrderCoeffs& lower,
                            const ComplexField& u, const SpaceTimeGrid& grid);

/// Real part, after checking the imaginary part is below tol everywhere.
RealField real_part_checked(const ComplexField& u, double tol = 1e-12);
ComplexField to_complex(const RealField& u);

struct ConjugationPoint {
  double a = 0.0;
  double b = 0.0;
  Vec3 B = Vec3::Zero();
  double d = 0.0;
  Complex c{0.0, 0.0};
  double chi = 0.0;
  double chi1 = 0.0;
  double phi = 0.0;
  /// Second assembly route through chi, for the cross-check.
  double a_via_chi = 0.0;
  double b_via_chi = 0.0;
};

/// Coefficients of the conjugated operator Phi^{-1} L Phi with Phi = exp(-tau phi).
class ConjugationCoeffs {
 public:
  ConjugationCoeffs(const WeightSpec& spec, const MatrixField& A, EquationKind kind, double tau);

  EquationKind kind() const { return kind_; }
  double tau() const { return tau_; }
  double lambda() const { return spec_.lambda; }
  ConjugationPoint at(const double* x, double t) const;

 private:
  WeightSpec spec_;
  const MatrixField* A_;
  EquationKind kind_;
  double tau_;
  std::vector<Polynomial> d1_, d2_;
};

ConjugationCoeffs conjugation_coeffs(const WeightSpec& spec, const MatrixField& A, EquationKind kind, double tau);

/// Relative L2 norm over interior nodes of Phi^{-1} L(Phi u) minus the split form applied to u.
double conjugation_residual(const ComplexField& u, const WeightSpec& spec, const MatrixField& A, EquationKind kind,
                            double tau, const SpaceTimeGrid& grid);

/// |int Delta_A u v + int (A grad u | grad v) - int_Gamma (A grad u | nu) v| with the discrete stencils.
double green_residual(const std::vector<double>& u, const std::vector<double>& v, const MatrixField& A,
                      const BoxDomain& box);

/// g_kl = |det A|^{1/(n-2)} (A^{-1})_kl; requires n >= 3.
struct RiemannianPoint {
  Mat3 g = Mat3::Identity();
  Mat3 g_inv = Mat3::Identity();
  double sqrt_det = 1.0;
};

RiemannianPoint riemannian_metric(const MatrixField& A, const double* x);

/// Sup over interior nodes of |Delta_A u - sqrt|g| Delta_g u|.
double riemannian_identity_residual(const MatrixField& A, const std::vector<double>& u, const BoxDomain& box);

/// Sup over interior nodes of the gap between sum (d_k + i b_k) a_kl (d_l + i b_l) u and
/// Delta_A u + 2i (grad u | b)_A + (-|b|_A^2 + i div(A b)) u.
double magnetic_expansion_residual(const MatrixField& A, const std::vector<Polynomial>& b,
                                   const std::vector<Complex>& u, const BoxDomain& box);

}  // namespace carl
