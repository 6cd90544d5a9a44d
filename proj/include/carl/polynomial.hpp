#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace carl {

/// Up to three space variables plus time.
inline constexpr int kMaxVars = 4;

using Exponents = std::array<int, kMaxVars>;

struct Monomial {
  Exponents exponents{};
  double coeff = 0.0;
};

/// Sparse real polynomial in a fixed number of variables. Terms are kept in
/// canonical (sorted, merged, zero-free) order so that equality is structural.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int num_vars);

  static Polynomial constant(int num_vars, double c);
  static Polynomial variable(int num_vars, int var);
  /// Builds from (multi-index, coefficient) pairs; repeated indices are summed.
  static Polynomial from_terms(int num_vars, const std::vector<Monomial>& terms);

  int num_vars() const { return num_vars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Monomial>& terms() const { return terms_; }

  void add_term(const Exponents& e, double c);

  double operator()(std::span<const double> x) const;
  double eval(const double* x) const;

  Polynomial derivative(int var) const;

  /// Substitutes variable i by subs[i]; all substitutes share a variable count.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  /// Same polynomial viewed in more variables (new ones unused).
  Polynomial extended(int num_vars) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  std::string to_string() const;

 private:
  void canonicalize();

  int num_vars_ = 0;
  std::vector<Monomial> terms_;
};

Polynomial pow(const Polynomial& p, int k);

/// |x - center|^2 / 2 over the first center.size() variables.
Polynomial half_squared_distance(int num_vars, std::span<const double> center);

}  // namespace carl
