#include "carl/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carl {

namespace {

bool exponent_less(const Exponents& a, const Exponents& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxVars) {
    throw std::invalid_argument("polynomial: variable count out of range");
  }
}

Polynomial Polynomial::constant(int num_vars, double c) {
  Polynomial p(num_vars);
  p.add_term(Exponents{}, c);
  return p;
}

Polynomial Polynomial::variable(int num_vars, int var) {
  if (var < 0 || var >= num_vars) throw std::invalid_argument("polynomial: bad variable index");
  Polynomial p(num_vars);
  Exponents e{};
  e[var] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::from_terms(int num_vars, const std::vector<Monomial>& terms) {
  Polynomial p(num_vars);
  for (const auto& t : terms) p.add_term(t.exponents, t.coeff);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, double c) {
  for (int i = num_vars_; i < kMaxVars; ++i) {
    if (e[i] != 0) throw std::invalid_argument("polynomial: exponent on unused variable");
  }
  for (int v : e) {
    if (v < 0) throw std::invalid_argument("polynomial: negative exponent");
  }
  if (c == 0.0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Monomial& m, const Exponents& k) { return exponent_less(m.exponents, k); });
  if (it != terms_.end() && it->exponents == e) {
    it->coeff += c;
    if (it->coeff == 0.0) terms_.erase(it);
  } else {
    terms_.insert(it, Monomial{e, c});
  }
}

double Polynomial::eval(const double* x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int i = 0; i < num_vars_; ++i) {
      if (t.exponents[i]) m *= ipow(x[i], t.exponents[i]);
    }
    s += m;
  }
  return s;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < num_vars_) throw std::invalid_argument("polynomial: too few coordinates");
  return eval(x.data());
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial d(num_vars_);
  if (var < 0 || var >= num_vars_) return d;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Exponents e = t.exponents;
    const double c = t.coeff * e[var];
    e[var] -= 1;
    d.terms_.push_back(Monomial{e, c});
  }
  d.canonicalize();
  return d;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (static_cast<int>(subs.size()) != num_vars_) throw std::invalid_argument("compose: substitution count mismatch");
  const int out_vars = subs.empty() ? 0 : subs.front().num_vars();
  for (const auto& s : subs) {
    if (s.num_vars() != out_vars) throw std::invalid_argument("compose: inconsistent substitution variables");
  }
  // Cache powers of each substitute.
  std::vector<std::vector<Polynomial>> powers(num_vars_);
  for (int i = 0; i < num_vars_; ++i) powers[i].push_back(Polynomial::constant(out_vars, 1.0));
  Polynomial result(out_vars);
  for (const auto& t : terms_) {
    Polynomial m = Polynomial::constant(out_vars, t.coeff);
    for (int i = 0; i < num_vars_; ++i) {
      const int k = t.exponents[i];
      while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(powers[i].back() * subs[i]);
      if (k) m = m * powers[i][k];
    }
    result += m;
  }
  return result;
}

Polynomial Polynomial::extended(int num_vars) const {
  if (num_vars < num_vars_) throw std::invalid_argument("extended: cannot drop variables");
  Polynomial p(num_vars);
  p.terms_ = terms_;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.num_vars_ != num_vars_) throw std::invalid_argument("polynomial: variable count mismatch");
  for (const auto& t : o.terms_) add_term(t.exponents, t.coeff);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.num_vars_ != num_vars_) throw std::invalid_argument("polynomial: variable count mismatch");
  for (const auto& t : o.terms_) add_term(t.exponents, -t.coeff);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("polynomial: variable count mismatch");
  Polynomial r(a.num_vars_);
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      Exponents e{};
      for (int i = 0; i < kMaxVars; ++i) e[i] = x.exponents[i] + y.exponents[i];
      r.terms_.push_back(Monomial{e, x.coeff * y.coeff});
    }
  }
  r.canonicalize();
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& x, const Monomial& y) { return exponent_less(x.exponents, y.exponents); });
  std::vector<Monomial> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Monomial& m) { return m.coeff == 0.0; });
  terms_ = std::move(merged);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (int i = 0; i < num_vars_; ++i) {
      if (t.exponents[i]) os << "*x" << i << "^" << t.exponents[i];
    }
  }
  return os.str();
}

Polynomial pow(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("pow: negative exponent");
  Polynomial r = Polynomial::constant(p.num_vars(), 1.0);
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

Polynomial half_squared_distance(int num_vars, std::span<const double> center) {
  Polynomial p(num_vars);
  for (size_t i = 0; i < center.size(); ++i) {
    Polynomial d = Polynomial::variable(num_vars, static_cast<int>(i)) -
                   Polynomial::constant(num_vars, center[i]);
    p += 0.5 * (d * d);
  }
  return p;
}

}  // namespace carl
