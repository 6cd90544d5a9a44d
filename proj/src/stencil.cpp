#include "carl/stencil.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace carl {

using Row = std::vector<std::pair<std::size_t, double>>;

void SparseRows::push_row(const Row& entries) {
  // Merge repeated columns and keep a sorted, deterministic order.
  std::map<std::size_t, double> merged;
  for (const auto& [c, v] : entries) merged[c] += v;
  for (const auto& [c, v] : merged) {
    if (v == 0.0) continue;
    col.push_back(c);
    w.push_back(v);
  }
  start.push_back(col.size());
}

namespace {

Row d1_row(const BoxDomain& box, std::size_t i, int axis) {
  const auto ijk = box.multi_index(i);
  const std::size_t s = box.stride(axis);
  const double h = box.spacing(axis);
  const int last = box.nodes[axis] - 1;
  if (ijk[axis] == 0) return {{i, -1.5 / h}, {i + s, 2.0 / h}, {i + 2 * s, -0.5 / h}};
  if (ijk[axis] == last) return {{i, 1.5 / h}, {i - s, -2.0 / h}, {i - 2 * s, 0.5 / h}};
  return {{i + s, 0.5 / h}, {i - s, -0.5 / h}};
}

Row d2_row(const BoxDomain& box, std::size_t i, int axis) {
  const auto ijk = box.multi_index(i);
  const std::size_t s = box.stride(axis);
  const double h2 = box.spacing(axis) * box.spacing(axis);
  const int last = box.nodes[axis] - 1;
  if (box.nodes[axis] >= 4 && ijk[axis] == 0) {
    return {{i, 2.0 / h2}, {i + s, -5.0 / h2}, {i + 2 * s, 4.0 / h2}, {i + 3 * s, -1.0 / h2}};
  }
  if (box.nodes[axis] >= 4 && ijk[axis] == last) {
    return {{i, 2.0 / h2}, {i - s, -5.0 / h2}, {i - 2 * s, 4.0 / h2}, {i - 3 * s, -1.0 / h2}};
  }
  const std::size_t c = ijk[axis] == 0 ? i + s : (ijk[axis] == last ? i - s : i);
  return {{c + s, 1.0 / h2}, {c, -2.0 / h2}, {c - s, 1.0 / h2}};
}

Row compose(const SparseRows& outer, const SparseRows& inner, std::size_t i) {
  Row r;
  for (std::size_t a = outer.start[i]; a < outer.start[i + 1]; ++a) {
    const std::size_t j = outer.col[a];
    for (std::size_t b = inner.start[j]; b < inner.start[j + 1]; ++b) r.push_back({inner.col[b], outer.w[a] * inner.w[b]});
  }
  return r;
}

}  // namespace

Differences::Differences(const BoxDomain& box) : box_(box), d1_(3), d2_(3), mixed_(9) {
  const std::size_t N = box.num_nodes();
  for (int a = 0; a < box.n; ++a) {
    for (std::size_t i = 0; i < N; ++i) {
      d1_[a].push_row(d1_row(box, i, a));
      d2_[a].push_row(d2_row(box, i, a));
    }
  }
  for (int k = 0; k < box.n; ++k) {
    for (int l = 0; l < box.n; ++l) {
      if (k == l) {
        mixed_[k * 3 + l] = d2_[k];
        continue;
      }
      for (std::size_t i = 0; i < N; ++i) mixed_[k * 3 + l].push_row(compose(d1_[k], d1_[l], i));
    }
  }
}

FluxLaplacian::FluxLaplacian(const MatrixField& A, const BoxDomain& box) : diff_(box), field_(&A) {
  if (A.dim() != box.n) throw std::invalid_argument("FluxLaplacian: dimension mismatch");
  const int n = box.n;
  const std::size_t N = box.num_nodes();
  A_nodes_.resize(N);
  divA_nodes_.resize(N);
  lambda_max_ = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto x = box.coords(i);
    const CoeffValues c = A.eval_with_derivatives(x.data());
    A_nodes_[i] = c.A;
    Vec3 d = Vec3::Zero();
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k < n; ++k) d(l) += c.dA[k](k, l);
    }
    divA_nodes_[i] = d;
    lambda_max_ = std::max(lambda_max_, sym_eigenvalues(c.A, n)[n - 1]);
  }

  for (std::size_t i = 0; i < N; ++i) {
    Row row;
    const auto x = box.coords(i);
    if (!box.is_boundary(i)) {
      for (int k = 0; k < n; ++k) {
        const std::size_t s = box.stride(k);
        const double h = box.spacing(k);
        auto xp = x, xm = x;
        xp[k] += 0.5 * h;
        xm[k] -= 0.5 * h;
        const double wp = A.entry(k, k).eval(xp.data()) / (h * h);
        const double wm = A.entry(k, k).eval(xm.data()) / (h * h);
        row.push_back({i + s, wp});
        row.push_back({i - s, wm});
        row.push_back({i, -(wp + wm)});
        for (int l = 0; l < n; ++l) {
          if (l == k) continue;
          const std::size_t sl = box.stride(l);
          const double c = 1.0 / (4.0 * h * box.spacing(l));
          const double ap = A_nodes_[i + s](k, l) * c;
          const double am = A_nodes_[i - s](k, l) * c;
          row.push_back({i + s + sl, ap});
          row.push_back({i + s - sl, -ap});
          row.push_back({i - s + sl, -am});
          row.push_back({i - s - sl, am});
        }
      }
    } else {
      const Mat3& a = A_nodes_[i];
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const SparseRows& m = diff_.mixed(k, l);
          for (std::size_t e = m.start[i]; e < m.start[i + 1]; ++e) row.push_back({m.col[e], a(k, l) * m.w[e]});
        }
        const SparseRows& d = diff_.d1(k);
        for (std::size_t e = d.start[i]; e < d.start[i + 1]; ++e) row.push_back({d.col[e], divA_nodes_[i](k) * d.w[e]});
      }
    }
    rows_.push_row(row);
  }
}

void FluxLaplacian::apply_direct(const double* u, double* out) const {
  const BoxDomain& box = diff_.box();
  const int n = box.n;
  const std::size_t N = box.num_nodes();
  for (std::size_t i = 0; i < N; ++i) {
    if (box.is_boundary(i)) {
      out[i] = rows_.apply_row(u, i);
      continue;
    }
    const auto x = box.coords(i);
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const std::size_t sk = box.stride(k);
      const double h = box.spacing(k);
      auto xp = x, xm = x;
      xp[k] += 0.5 * h;
      xm[k] -= 0.5 * h;
      s += (field_->entry(k, k).eval(xp.data()) * (u[i + sk] - u[i]) -
            field_->entry(k, k).eval(xm.data()) * (u[i] - u[i - sk])) /
           (h * h);
      for (int l = 0; l < n; ++l) {
        if (l == k) continue;
        const std::size_t sl = box.stride(l);
        const double hl = box.spacing(l);
        const double fp = A_nodes_[i + sk](k, l) * (u[i + sk + sl] - u[i + sk - sl]) / (2.0 * hl);
        const double fm = A_nodes_[i - sk](k, l) * (u[i - sk + sl] - u[i - sk - sl]) / (2.0 * hl);
        s += (fp - fm) / (2.0 * h);
      }
    }
    out[i] = s;
  }
}

}  // namespace carl
