#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/grid.hpp"
#include "carl/operators.hpp"
#include "carl/weight.hpp"

namespace carl {

/// Rows of (coefficient, e_0, e_1, ...) describing a polynomial.
using PolyTable = std::vector<std::vector<double>>;

struct ComplexTable {
  PolyTable re;
  PolyTable im;
  bool operator==(const ComplexTable&) const = default;
};

struct DomainBlock {
  int n = 2;
  std::vector<double> lows{0.0, 0.0};
  std::vector<double> highs{1.0, 1.0};
  std::vector<int> nodes{17, 17};
  double t1 = 0.0;
  double t2 = 1.0;
  int levels = 17;
  bool operator==(const DomainBlock&) const = default;
};

struct CoeffBlock {
  std::string family = "identity";
  double a0 = 1.0;
  std::vector<double> slope;
  std::vector<double> matrix;                 // row-major n x n for the constant family
  std::map<std::string, PolyTable> entries;   // key "kl" with k <= l
  bool operator==(const CoeffBlock&) const = default;
};

struct WeightBlock {
  std::string profile = "zero";
  PolyTable psi0;              // when empty, psi0 = |x - x0|^2 / 2
  std::vector<double> x0;
  double t0 = 0.0;
  double gamma = 0.0;
  double C = 0.0;
  double lambda = 1.0;
  double alpha = 0.5;
  double horizon = 1.0;
  bool auto_shift = true;
  bool operator==(const WeightBlock&) const = default;
};

struct EquationBlock {
  std::string kind = "wave";
  std::optional<ComplexTable> q0;
  std::vector<ComplexTable> q;
  std::optional<ComplexTable> p;
  double bound = 0.0;
  bool operator==(const EquationBlock&) const = default;
};

struct RunConfig {
  std::vector<std::string> blocks;  // names of the blocks present in the source, sorted
  DomainBlock domain;
  CoeffBlock coefficients;
  WeightBlock weight;
  EquationBlock equation;
  std::map<std::string, std::vector<double>> params;
  std::map<std::string, std::string> options;
  std::map<std::string, PolyTable> tables;
  std::string output = "out";
  std::uint64_t seed = 0;

  bool has(const std::string& block) const;
  bool operator==(const RunConfig&) const = default;
};

/// Carries the 1-based source line of the offending node (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line);
  int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string to_yaml(const RunConfig& cfg);

Polynomial poly_from_table(int num_vars, const PolyTable& t);
BoxDomain build_box(const RunConfig& cfg);
SpaceTimeGrid build_grid(const RunConfig& cfg);
MatrixField build_field(const RunConfig& cfg);
Polynomial build_psi0(const RunConfig& cfg);
WeightSpec build_weight(const RunConfig& cfg, const SpaceTimeGrid& grid);
LowerOrderCoeffs build_lower(const RunConfig& cfg);
EquationKind equation_kind_from_name(const std::string& name);

/// Numeric parameter lookup with a default; vector form returns all entries.
double param(const RunConfig& cfg, const std::string& key, double fallback);
std::vector<double> param_list(const RunConfig& cfg, const std::string& key, const std::vector<double>& fallback);
std::string option(const RunConfig& cfg, const std::string& key, const std::string& fallback);

}  // namespace carl
