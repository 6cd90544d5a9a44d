#include "carl/coeff_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "carl/kernels.hpp"

namespace carl {

const char* family_name(CoeffFamily f) {
  switch (f) {
    case CoeffFamily::identity: return "identity";
    case CoeffFamily::constant: return "constant";
    case CoeffFamily::scalar_affine: return "scalar_affine";
    case CoeffFamily::polynomial: return "polynomial";
  }
  return "unknown";
}

int MatrixField::tri(int k, int l) const {
  if (k > l) std::swap(k, l);
  return k * n_ - k * (k - 1) / 2 + (l - k);
}

MatrixField MatrixField::identity(int n) {
  MatrixField f;
  f.n_ = n;
  f.family_ = CoeffFamily::identity;
  f.table_.assign(n * (n + 1) / 2, Polynomial(n));
  for (int k = 0; k < n; ++k) f.table_[f.tri(k, k)] = Polynomial::constant(n, 1.0);
  f.build_cache();
  return f;
}

MatrixField MatrixField::constant(const Mat3& A, int n) {
  MatrixField f;
  f.n_ = n;
  f.family_ = CoeffFamily::constant;
  f.table_.assign(n * (n + 1) / 2, Polynomial(n));
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) f.table_[f.tri(k, l)] = Polynomial::constant(n, A(k, l));
  }
  f.build_cache();
  return f;
}

MatrixField MatrixField::scalar_affine(int n, double a0, const std::vector<double>& slope) {
  if (static_cast<int>(slope.size()) != n) throw std::invalid_argument("scalar_affine: slope needs one entry per axis");
  MatrixField f;
  f.n_ = n;
  f.family_ = CoeffFamily::scalar_affine;
  f.a0_ = a0;
  f.slope_ = slope;
  Polynomial a = Polynomial::constant(n, a0);
  for (int i = 0; i < n; ++i) a += slope[i] * Polynomial::variable(n, i);
  f.table_.assign(n * (n + 1) / 2, Polynomial(n));
  for (int k = 0; k < n; ++k) f.table_[f.tri(k, k)] = a;
  f.build_cache();
  return f;
}

MatrixField MatrixField::polynomial(int n, const std::vector<std::vector<Polynomial>>& entries) {
  if (static_cast<int>(entries.size()) != n) throw std::invalid_argument("polynomial field: need n rows");
  MatrixField f;
  f.n_ = n;
  f.family_ = CoeffFamily::polynomial;
  f.table_.assign(n * (n + 1) / 2, Polynomial(n));
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(entries[k].size()) != n) throw std::invalid_argument("polynomial field: need n columns");
    for (int l = k; l < n; ++l) {
      const Polynomial& p = entries[k][l];
      if (p.num_vars() != n) throw std::invalid_argument("polynomial field: entry variable count must equal n");
      f.table_[f.tri(k, l)] = p;
    }
  }
  f.build_cache();
  return f;
}

void MatrixField::build_cache() {
  if (n_ < 1 || n_ > 3) throw std::invalid_argument("matrix field dimension must be 1, 2 or 3");
  const int T = static_cast<int>(table_.size());
  d1_.assign(T, {});
  d2_.assign(T, {});
  d3_.assign(T, {});
  for (int t = 0; t < T; ++t) {
    for (int p = 0; p < n_; ++p) d1_[t].push_back(table_[t].derivative(p));
    for (int p = 0; p < n_; ++p) {
      for (int q = 0; q < n_; ++q) d2_[t].push_back(d1_[t][p].derivative(q));
    }
    for (int pq = 0; pq < n_ * n_; ++pq) {
      for (int r = 0; r < n_; ++r) d3_[t].push_back(d2_[t][pq].derivative(r));
    }
  }
}

const Polynomial& MatrixField::entry(int k, int l) const { return table_[tri(k, l)]; }
const Polynomial& MatrixField::entry_derivative(int k, int l, int p) const { return d1_[tri(k, l)][p]; }
const Polynomial& MatrixField::entry_second_derivative(int k, int l, int p, int q) const {
  return d2_[tri(k, l)][p * n_ + q];
}
const Polynomial& MatrixField::entry_third_derivative(int k, int l, int p, int q, int r) const {
  return d3_[tri(k, l)][(p * n_ + q) * n_ + r];
}

void MatrixField::check_point(const double* x) const {
  if (domain_ && !domain_->contains(x, 1e-12)) {
    std::ostringstream os;
    os << "coefficient evaluated outside its domain at (";
    for (int i = 0; i < n_; ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    throw std::out_of_range(os.str());
  }
}

Mat3 MatrixField::eval(const double* x) const {
  check_point(x);
  Mat3 A = Mat3::Zero();
  for (int k = 0; k < n_; ++k) {
    for (int l = k; l < n_; ++l) {
      const double v = table_[tri(k, l)].eval(x);
      A(k, l) = v;
      A(l, k) = v;
    }
  }
  return A;
}

CoeffValues MatrixField::eval_with_derivatives(const double* x) const {
  check_point(x);
  CoeffValues c;
  for (auto& row : c.d2A) row.fill(Mat3::Zero());
  for (int k = 0; k < n_; ++k) {
    for (int l = k; l < n_; ++l) {
      const int t = tri(k, l);
      const double v = table_[t].eval(x);
      c.A(k, l) = c.A(l, k) = v;
      for (int p = 0; p < n_; ++p) {
        const double d = d1_[t][p].eval(x);
        c.dA[p](k, l) = c.dA[p](l, k) = d;
        for (int q = 0; q < n_; ++q) {
          const double dd = d2_[t][p * n_ + q].eval(x);
          c.d2A[p][q](k, l) = c.d2A[p][q](l, k) = dd;
        }
      }
    }
  }
  return c;
}

std::array<double, 3> sym_eigenvalues(const Mat3& M, int n) {
  std::array<double, 3> ev{0, 0, 0};
  if (n == 1) {
    ev[0] = M(0, 0);
    return ev;
  }
  if (n == 2) {
    const double m = 0.5 * (M(0, 0) + M(1, 1));
    const double d = 0.5 * (M(0, 0) - M(1, 1));
    const double r = std::hypot(d, M(0, 1));
    ev[0] = m - r;
    ev[1] = m + r;
    return ev;
  }
  const double p1 = M(0, 1) * M(0, 1) + M(0, 2) * M(0, 2) + M(1, 2) * M(1, 2);
  if (p1 == 0.0) {
    ev = {M(0, 0), M(1, 1), M(2, 2)};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = M.trace() / 3.0;
  const double p2 = (M(0, 0) - q) * (M(0, 0) - q) + (M(1, 1) - q) * (M(1, 1) - q) +
                    (M(2, 2) - q) * (M(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 B = (M - q * Mat3::Identity()) / p;
  const double r = std::clamp(B.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev = {lo, 3.0 * q - hi - lo, hi};
  std::sort(ev.begin(), ev.end());
  return ev;
}

EllipticityReport certify_ellipticity(const MatrixField& A, const BoxDomain& box, const EllipticityTolerances& tol) {
  if (A.dim() != box.n) throw std::invalid_argument("certify_ellipticity: dimension mismatch");
  const int n = A.dim();
  const std::size_t N = box.num_nodes();
  std::vector<double> lmin(N), lmax(N), msup(N);
  std::vector<std::string> errors(N);
  kernels::for_each(N, [&](std::size_t i) {
    const auto x = box.coords(i);
    const Mat3 M = A.eval(x.data());
    double asym = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        if (!std::isfinite(M(k, l))) asym = std::numeric_limits<double>::infinity();
        asym = std::max(asym, std::abs(M(k, l) - M(l, k)));
      }
    }
    if (asym > 1e-14) {
      errors[i] = "eigen-solve failed: non-symmetric coefficient matrix at node " + std::to_string(i);
      return;
    }
    const auto ev = sym_eigenvalues(M, n);
    lmin[i] = ev[0];
    lmax[i] = ev[n - 1];
    double m = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l) {
        m = std::max(m, std::abs(A.entry(k, l).eval(x.data())));
        for (int p = 0; p < n; ++p) {
          m = std::max(m, std::abs(A.entry_derivative(k, l, p).eval(x.data())));
          for (int q = 0; q < n; ++q) {
            m = std::max(m, std::abs(A.entry_second_derivative(k, l, p, q).eval(x.data())));
            for (int r = 0; r < n; ++r) {
              m = std::max(m, std::abs(A.entry_third_derivative(k, l, p, q, r).eval(x.data())));
            }
          }
        }
      }
    }
    msup[i] = m;
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  EllipticityReport rep;
  rep.lambda_min = *std::min_element(lmin.begin(), lmin.end());
  rep.lambda_max = *std::max_element(lmax.begin(), lmax.end());
  rep.m_estimate = *std::max_element(msup.begin(), msup.end());
  rep.kappa_estimate = rep.lambda_min > 0.0 ? std::max({rep.lambda_max, 1.0 / rep.lambda_min, 1.0})
                                            : std::numeric_limits<double>::infinity();
  rep.pass = rep.lambda_min > 0.0 && rep.kappa_estimate <= tol.kappa_max && rep.m_estimate <= tol.m_max;
  return rep;
}

OrthogonalMap rotation(int n, double theta, const Vec3& shift) {
  if (n < 2) throw std::invalid_argument("rotation needs n >= 2");
  OrthogonalMap m;
  m.n = n;
  m.O = Mat3::Identity();
  m.O(0, 0) = std::cos(theta);
  m.O(0, 1) = -std::sin(theta);
  m.O(1, 0) = std::sin(theta);
  m.O(1, 1) = std::cos(theta);
  m.b = shift;
  return m;
}

namespace {

void check_orthogonal(const OrthogonalMap& map) {
  const int n = map.n;
  const Eigen::MatrixXd O = map.O.topLeftCorner(n, n);
  const double err = (O.transpose() * O - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-12) throw std::invalid_argument("map is not orthogonal");
}

// z = O^t (y - b) as polynomials in y.
std::vector<Polynomial> pullback_coordinates(const OrthogonalMap& map) {
  const int n = map.n;
  std::vector<Polynomial> z;
  for (int i = 0; i < n; ++i) {
    Polynomial zi(n);
    double c = 0.0;
    for (int j = 0; j < n; ++j) {
      zi += map.O(j, i) * Polynomial::variable(n, j);
      c -= map.O(j, i) * map.b(j);
    }
    zi += Polynomial::constant(n, c);
    z.push_back(zi);
  }
  return z;
}

}  // namespace

Polynomial rotate_scalar(const Polynomial& p, const OrthogonalMap& map) {
  check_orthogonal(map);
  return p.compose(pullback_coordinates(map));
}

MatrixField rotate_field(const MatrixField& A, const OrthogonalMap& map) {
  if (A.dim() != map.n) throw std::invalid_argument("rotate_field: dimension mismatch");
  check_orthogonal(map);
  const int n = A.dim();
  switch (A.family()) {
    case CoeffFamily::identity:
      return MatrixField::identity(n);
    case CoeffFamily::constant: {
      const double zero[3] = {0, 0, 0};
      const Eigen::MatrixXd O = map.O.topLeftCorner(n, n);
      const Eigen::MatrixXd M = O * A.eval(zero).topLeftCorner(n, n) * O.transpose();
      Mat3 R = Mat3::Zero();
      R.topLeftCorner(n, n) = M;
      return MatrixField::constant(R, n);
    }
    case CoeffFamily::scalar_affine: {
      // a(O^t (y - b)) = a0 - (O s | b) + (O s | y).
      std::vector<double> s2(n, 0.0);
      double a0 = A.affine_a0();
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s2[i] += map.O(i, j) * A.affine_slope()[j];
        a0 -= s2[i] * map.b(i);
      }
      return MatrixField::scalar_affine(n, a0, s2);
    }
    case CoeffFamily::polynomial:
      break;
  }
  const auto z = pullback_coordinates(map);
  std::vector<std::vector<Polynomial>> pulled(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      pulled[i][j] = A.entry(i, j).compose(z);
      pulled[j][i] = pulled[i][j];
    }
  }
  std::vector<std::vector<Polynomial>> out(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      Polynomial s(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double w = map.O(k, i) * map.O(l, j);
          if (w != 0.0) s += w * pulled[i][j];
        }
      }
      out[k][l] = s;
    }
  }
  return MatrixField::polynomial(n, out);
}

}  // namespace carl
