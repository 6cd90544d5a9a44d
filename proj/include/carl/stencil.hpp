#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "carl/coeff_field.hpp"
#include "carl/grid.hpp"
#include "carl/kernels.hpp"

namespace carl {

/// Compressed sparse rows over the node lattice; every stencil in the library is
/// stored this way so that explicit application and matrix assembly share weights.
struct SparseRows {
  std::vector<std::size_t> start{0};
  std::vector<std::size_t> col;
  std::vector<double> w;

  std::size_t rows() const { return start.size() - 1; }
  void push_row(const std::vector<std::pair<std::size_t, double>>& entries);

  template <class T>
  T apply_row(const T* u, std::size_t i) const {
    T s{};
    for (std::size_t k = start[i]; k < start[i + 1]; ++k) s += w[k] * u[col[k]];
    return s;
  }

  template <class T>
  void apply(const T* u, T* out, Exec exec = Exec::parallel) const {
    kernels::for_each(rows(), [&](std::size_t i) { out[i] = apply_row(u, i); }, exec);
  }
};

/// Geometric finite differences: central in the interior, second-order one-sided
/// (3-point first derivative, 4-point second derivative) on the boundary.
class Differences {
 public:
  explicit Differences(const BoxDomain& box);

  const BoxDomain& box() const { return box_; }
  const SparseRows& d1(int axis) const { return d1_[axis]; }
  const SparseRows& d2(int axis) const { return d2_[axis]; }
  /// d_k d_l by composing first-derivative rows (k != l); d2 for k == l.
  const SparseRows& mixed(int k, int l) const { return mixed_[k * 3 + l]; }

 private:
  BoxDomain box_;
  std::vector<SparseRows> d1_;
  std::vector<SparseRows> d2_;
  std::vector<SparseRows> mixed_;
};

/// Delta_A u = div(A grad u). Interior nodes use the flux form: diagonal terms with
/// a_kk at half nodes, cross terms as D_k(a_kl D_l u) with central differences. At
/// boundary nodes the non-divergence form with analytic derivatives of A is used.
class FluxLaplacian {
 public:
  FluxLaplacian(const MatrixField& A, const BoxDomain& box);

  const SparseRows& rows() const { return rows_; }
  const Differences& diff() const { return diff_; }
  const BoxDomain& box() const { return diff_.box(); }
  const Mat3& A_at(std::size_t i) const { return A_nodes_[i]; }
  /// Sum_k d_k a_kl at node i (divergence of the columns of A).
  const Vec3& divA_at(std::size_t i) const { return divA_nodes_[i]; }
  double lambda_max() const { return lambda_max_; }

  template <class T>
  void apply(const T* u, T* out, Exec exec = Exec::parallel) const {
    rows_.apply(u, out, exec);
  }

  /// Reference implementation evaluating the same formula without the stored rows.
  void apply_direct(const double* u, double* out) const;

 private:
  Differences diff_;
  const MatrixField* field_;
  SparseRows rows_;
  std::vector<Mat3> A_nodes_;
  std::vector<Vec3> divA_nodes_;
  double lambda_max_ = 1.0;
};

/// Centered time derivatives of a space-time field, one-sided second order at the end levels.
template <class T>
T time_d1(const NodalField<T>& u, int k, std::size_t i, double dt) {
  const int L = u.levels;
  if (k == 0) return (-3.0 * u.at(0, i) + 4.0 * u.at(1, i) - u.at(2, i)) / (2.0 * dt);
  if (k == L - 1) return (3.0 * u.at(L - 1, i) - 4.0 * u.at(L - 2, i) + u.at(L - 3, i)) / (2.0 * dt);
  return (u.at(k + 1, i) - u.at(k - 1, i)) / (2.0 * dt);
}

template <class T>
T time_d2(const NodalField<T>& u, int k, std::size_t i, double dt) {
  const int L = u.levels;
  if (L >= 4 && k == 0) return (2.0 * u.at(0, i) - 5.0 * u.at(1, i) + 4.0 * u.at(2, i) - u.at(3, i)) / (dt * dt);
  if (L >= 4 && k == L - 1) {
    return (2.0 * u.at(L - 1, i) - 5.0 * u.at(L - 2, i) + 4.0 * u.at(L - 3, i) - u.at(L - 4, i)) / (dt * dt);
  }
  const int c = std::min(std::max(k, 1), L - 2);
  return (u.at(c + 1, i) - 2.0 * u.at(c, i) + u.at(c - 1, i)) / (dt * dt);
}

}  // namespace carl
