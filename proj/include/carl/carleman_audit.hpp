#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carl/grid.hpp"
#include "carl/operators.hpp"
#include "carl/stencil.hpp"
#include "carl/weight.hpp"

namespace carl {

enum class InequalityKind {
  wave_full,
  wave_boundary,
  wave_lower_order,
  wave_single_param,
  elliptic,
  parabolic_full,
  parabolic_boundary,
  schrodinger_full,
  schrodinger_boundary,
};

const char* inequality_name(InequalityKind k);
InequalityKind inequality_from_name(const std::string& name);
EquationKind equation_of(InequalityKind k);
/// Kinds whose statement assumes vanishing data instead of carrying dmu terms.
bool requires_vanishing(InequalityKind k);

/// Side values with the common factor exp(-2 tau phi_ref) applied to all integrands.
struct CarlemanSideValues {
  double lhs_interior = 0.0;
  double rhs_source = 0.0;
  double rhs_boundary_dmu = 0.0;
  double rhs_boundary_sigma_plus = 0.0;
  double phi_ref = 0.0;
  bool vacuous = false;

  double rhs() const { return rhs_source + rhs_boundary_dmu + rhs_boundary_sigma_plus; }
  /// RHS / LHS; +infinity for vacuous fields.
  double ratio() const;
};

/// Squared pointwise quantities of a test field that do not depend on tau or lambda.
struct FieldJets {
  InequalityKind kind = InequalityKind::wave_full;
  bool single_level = false;
  RealField u2, grad2, gradA2, dt2, Lu2;
  std::vector<std::vector<std::vector<double>>> dnu2;  // [face][level][face node]
  bool zero = true;
};

FieldJets prepare_field(const ComplexField& u, const MatrixField& A, const LowerOrderCoeffs& lower,
                        InequalityKind kind, const SpaceTimeGrid& grid);

/// psi on every (level, node) and the Sigma_+ mask, shared by all evaluations of one weight.
struct AuditContext {
  const SpaceTimeGrid* grid = nullptr;
  RealField psi;                       // psi(x, t) per level and node
  std::vector<std::vector<char>> sigma_plus;  // [face][face node]
};

AuditContext make_audit_context(const WeightSpec& spec, const MatrixField& A, const SpaceTimeGrid& grid,
                                bool single_level);

/// normalize = false evaluates the raw weight exp(2 tau phi) and throws when it would overflow.
CarlemanSideValues evaluate_sides(const FieldJets& jets, const AuditContext& ctx, double lambda, double tau,
                                  bool normalize = true, Exec exec = Exec::parallel);
CarlemanSideValues evaluate_sides(const ComplexField& u, const WeightSpec& spec, const MatrixField& A,
                                  const LowerOrderCoeffs& lower, InequalityKind kind, double tau,
                                  const SpaceTimeGrid& grid, bool normalize = true, Exec exec = Exec::parallel);

/// 10 cutoff cosine modes and 10 seeded random cubic B-spline fields, all vanishing to
/// second order on the boundary of Q (or of the box for single-level fields).
std::vector<ComplexField> default_ensemble(const SpaceTimeGrid& grid, std::uint64_t seed, bool single_level = false,
                                           int modes = 10, int random = 10);

struct AuditCell {
  double tau = 0.0;
  double lambda = 0.0;
  std::vector<CarlemanSideValues> members;
  double aleph = 0.0;  // min ratio over non-vacuous members
  bool vacuous = false;
};

struct AuditReport {
  InequalityKind kind = InequalityKind::wave_full;
  std::vector<double> taus;
  std::vector<double> lambdas;
  std::vector<AuditCell> cells;  // tau-major
  double target = 1e-3;
  std::optional<double> tau_star;
  std::optional<double> lambda_star;
  std::string stamp;
  std::vector<std::string> admissibility_reasons;
  std::string note = "discrete-grid evidence only; no continuum constants are claimed";

  const AuditCell& cell(std::size_t it, std::size_t il) const { return cells[it * lambdas.size() + il]; }
  /// True when every cell with tau >= tau_star and lambda >= lambda_star has aleph > 0.
  bool positive_beyond_threshold() const;
};

AuditReport sweep_audit(const std::vector<ComplexField>& ensemble, const WeightSpec& spec, const MatrixField& A,
                        const LowerOrderCoeffs& lower, InequalityKind kind, const std::vector<double>& taus,
                        const std::vector<double>& lambdas, const SpaceTimeGrid& grid, double target = 1e-3);

/// Largest relative change |aleph_c - aleph_f| / aleph_f over cells past the fine report's
/// thresholds (all cells when no threshold was found). Reports must share the sweep.
double refinement_drift(const AuditReport& coarse, const AuditReport& fine);

/// Runs the sweep for a weight that failed admissibility and stamps the report.
/// Refuses admissible weights and callers claiming admissibility.
AuditReport negative_control(const WeightAdmissibility& claimed, const std::vector<ComplexField>& ensemble,
                             const WeightSpec& spec, const MatrixField& A, const EllipticityReport& ellipticity,
                             InequalityKind kind, const std::vector<double>& taus, const std::vector<double>& lambdas,
                             const SpaceTimeGrid& grid);

}  // namespace carl
