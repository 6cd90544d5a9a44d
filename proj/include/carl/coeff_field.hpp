#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "carl/grid.hpp"
#include "carl/polynomial.hpp"

namespace carl {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

enum class CoeffFamily { identity, constant, scalar_affine, polynomial };

const char* family_name(CoeffFamily f);

/// A and its first and second derivative tensors at a point. Entries beyond the
/// active dimension are zero.
struct CoeffValues {
  Mat3 A = Mat3::Zero();
  std::array<Mat3, 3> dA{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::array<std::array<Mat3, 3>, 3> d2A{};
};

/// Symmetric coefficient matrix field with polynomial entries. Only the upper
/// triangle is stored; (l, k) reads the (k, l) entry, so symmetry is exact.
class MatrixField {
 public:
  MatrixField() = default;

  static MatrixField identity(int n);
  static MatrixField constant(const Mat3& A, int n);
  /// a(x) = a0 + sum_i slope[i] x_i times the identity.
  static MatrixField scalar_affine(int n, double a0, const std::vector<double>& slope);
  /// entries[k][l] for k <= l; entries below the diagonal are ignored.
  static MatrixField polynomial(int n, const std::vector<std::vector<Polynomial>>& entries);

  int dim() const { return n_; }
  CoeffFamily family() const { return family_; }
  const Polynomial& entry(int k, int l) const;
  const Polynomial& entry_derivative(int k, int l, int p) const;
  const Polynomial& entry_second_derivative(int k, int l, int p, int q) const;
  const Polynomial& entry_third_derivative(int k, int l, int p, int q, int r) const;

  /// Restricts evaluation to a closed box (out-of-box evaluation throws).
  void set_domain(const BoxDomain& box) { domain_ = box; }
  const std::optional<BoxDomain>& domain() const { return domain_; }

  Mat3 eval(const double* x) const;
  CoeffValues eval_with_derivatives(const double* x) const;

  /// Scalar factor for scalar_affine fields.
  double affine_a0() const { return a0_; }
  const std::vector<double>& affine_slope() const { return slope_; }

 private:
  void build_cache();
  void check_point(const double* x) const;
  int tri(int k, int l) const;

  int n_ = 0;
  CoeffFamily family_ = CoeffFamily::identity;
  double a0_ = 1.0;
  std::vector<double> slope_;
  std::vector<Polynomial> table_;             // upper triangle
  std::vector<std::vector<Polynomial>> d1_;   // [tri][p]
  std::vector<std::vector<Polynomial>> d2_;   // [tri][p*n+q]
  std::vector<std::vector<Polynomial>> d3_;   // [tri][(p*n+q)*n+r]
  std::optional<BoxDomain> domain_;
};

struct EllipticityTolerances {
  double kappa_max = 1e6;
  double m_max = 1e12;
};

struct EllipticityReport {
  double kappa_estimate = 1.0;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double m_estimate = 0.0;
  bool pass = false;
};

/// Eigenvalues of the leading n x n block of a symmetric matrix, ascending, by
/// closed-form expressions (trigonometric formula for n = 3).
std::array<double, 3> sym_eigenvalues(const Mat3& M, int n);

EllipticityReport certify_ellipticity(const MatrixField& A, const BoxDomain& box,
                                      const EllipticityTolerances& tol = {});

struct OrthogonalMap {
  Mat3 O = Mat3::Identity();
  Vec3 b = Vec3::Zero();
  int n = 2;
};

/// Planar rotation by angle theta in the (0, 1) plane, embedded in dimension n.
OrthogonalMap rotation(int n, double theta, const Vec3& shift = Vec3::Zero());

/// A_O(y) = O A(O^t (y - b)) O^t, built exactly by polynomial composition.
MatrixField rotate_field(const MatrixField& A, const OrthogonalMap& map);

/// p(O^t (y - b)) for a scalar polynomial in n variables.
Polynomial rotate_scalar(const Polynomial& p, const OrthogonalMap& map);

}  // namespace carl
