#include "carl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carl {

double BoxDomain::min_spacing() const {
  double h = spacing(0);
  for (int a = 1; a < n; ++a) h = std::min(h, spacing(a));
  return h;
}

std::size_t BoxDomain::num_nodes() const {
  std::size_t c = 1;
  for (int a = 0; a < n; ++a) c *= static_cast<std::size_t>(nodes[a]);
  return c;
}

std::size_t BoxDomain::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(nodes[a]);
  return s;
}

std::size_t BoxDomain::index(const std::array<int, 3>& ijk) const {
  std::size_t idx = 0;
  for (int a = n - 1; a >= 0; --a) idx = idx * nodes[a] + ijk[a];
  return idx;
}

std::array<int, 3> BoxDomain::multi_index(std::size_t idx) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < n; ++a) {
    ijk[a] = static_cast<int>(idx % nodes[a]);
    idx /= nodes[a];
  }
  return ijk;
}

std::array<double, 3> BoxDomain::coords(std::size_t idx) const {
  const auto ijk = multi_index(idx);
  std::array<double, 3> x{0, 0, 0};
  for (int a = 0; a < n; ++a) {
    // Pin the last node to the endpoint so box extents are reproduced exactly.
    x[a] = ijk[a] == nodes[a] - 1 ? highs[a] : lows[a] + ijk[a] * spacing(a);
  }
  return x;
}

bool BoxDomain::is_boundary(std::size_t idx) const { return near_boundary(idx, 0); }

bool BoxDomain::near_boundary(std::size_t idx, int margin) const {
  const auto ijk = multi_index(idx);
  for (int a = 0; a < n; ++a) {
    if (ijk[a] <= margin || ijk[a] >= nodes[a] - 1 - margin) return true;
  }
  return false;
}

bool BoxDomain::contains(const double* x, double tol) const {
  for (int a = 0; a < n; ++a) {
    if (x[a] < lows[a] - tol || x[a] > highs[a] + tol) return false;
  }
  return true;
}

BoxDomain make_box(int n, const std::vector<double>& lows, const std::vector<double>& highs,
                   const std::vector<int>& nodes) {
  if (n < 1 || n > 3) throw std::invalid_argument("box dimension must be 1, 2 or 3");
  if (static_cast<int>(lows.size()) != n || static_cast<int>(highs.size()) != n ||
      static_cast<int>(nodes.size()) != n) {
    throw std::invalid_argument("box arrays must have one entry per axis");
  }
  BoxDomain b;
  b.n = n;
  for (int a = 0; a < n; ++a) {
    if (!std::isfinite(lows[a]) || !std::isfinite(highs[a])) throw std::invalid_argument("non-finite endpoint");
    if (!(highs[a] > lows[a])) throw std::invalid_argument("empty extent");
    if (nodes[a] < 3) throw std::invalid_argument("resolution must be at least 3 nodes per axis");
    b.lows[a] = lows[a];
    b.highs[a] = highs[a];
    b.nodes[a] = nodes[a];
  }
  return b;
}

std::vector<double> trapezoid_weights(int count, double h) {
  std::vector<double> w(count, h);
  if (count == 1) {
    w[0] = 1.0;
    return w;
  }
  w.front() = w.back() = 0.5 * h;
  return w;
}

SpaceTimeGrid::SpaceTimeGrid(BoxDomain box, double t1, double t2, int nt)
    : box_(box), t1_(t1), t2_(t2), nt_(nt) {
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw std::invalid_argument("non-finite time endpoint");
  if (!(t2 > t1)) throw std::invalid_argument("empty time interval");
  if (nt < 3) throw std::invalid_argument("resolution must be at least 3 time levels");

  const int n = box_.n;
  std::array<std::vector<double>, 3> axis_w;
  for (int a = 0; a < 3; ++a) {
    axis_w[a] = a < n ? trapezoid_weights(box_.nodes[a], box_.spacing(a)) : std::vector<double>{1.0};
  }
  const std::size_t N = box_.num_nodes();
  space_weights_.resize(N);
  owner_.assign(N, -1);
  for (std::size_t i = 0; i < N; ++i) {
    const auto ijk = box_.multi_index(i);
    double w = 1.0;
    for (int a = 0; a < n; ++a) w *= axis_w[a][ijk[a]];
    space_weights_[i] = w;
  }
  time_weights_ = trapezoid_weights(nt_, dt());

  for (int axis = 0; axis < n; ++axis) {
    for (int side = 0; side < 2; ++side) {
      Face f;
      f.axis = axis;
      f.side = side;
      f.normal[axis] = side ? 1.0 : -1.0;
      const int fixed = side ? box_.nodes[axis] - 1 : 0;
      for (std::size_t i = 0; i < N; ++i) {
        const auto ijk = box_.multi_index(i);
        if (ijk[axis] != fixed) continue;
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
          if (a != axis) w *= axis_w[a][ijk[a]];
        }
        f.nodes.push_back(i);
        f.weights.push_back(w);
        if (owner_[i] < 0) owner_[i] = static_cast<int>(faces_.size());
      }
      faces_.push_back(std::move(f));
    }
  }
}

SpaceTimeGrid build_grid(int n, const std::vector<double>& lows, const std::vector<double>& highs,
                         const std::vector<int>& nodes, double t1, double t2, int nt) {
  return SpaceTimeGrid(make_box(n, lows, highs, nodes), t1, t2, nt);
}

DmuField DmuField::zeros(const SpaceTimeGrid& grid) {
  DmuField g;
  for (const auto& f : grid.faces()) {
    g.lateral.emplace_back(grid.nt(), std::vector<double>(f.nodes.size(), 0.0));
  }
  g.cap_lo.assign(grid.num_nodes(), 0.0);
  g.cap_hi.assign(grid.num_nodes(), 0.0);
  return g;
}

void require_finite(const RealField& f, const char* what) {
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i])) {
      throw std::domain_error(std::string(what) + ": non-finite value at entry " + std::to_string(i));
    }
  }
}

void require_finite(const ComplexField& f, const char* what) {
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i].real()) || !std::isfinite(f.values[i].imag())) {
      throw std::domain_error(std::string(what) + ": non-finite value at entry " + std::to_string(i));
    }
  }
}

double integrate_space(const double* f, const SpaceTimeGrid& grid) {
  const auto& w = grid.space_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i];
  return s;
}

double integrate_space(const double* f, const BoxDomain& box) {
  // A throwaway grid is cheap relative to any caller's work.
  const SpaceTimeGrid g(box, 0.0, 1.0, 3);
  return integrate_space(f, g);
}

double integrate_interior(const RealField& f, const SpaceTimeGrid& grid) {
  if (f.levels != grid.nt() || f.nodes != grid.num_nodes()) throw std::invalid_argument("field shape mismatch");
  require_finite(f, "integrate_interior");
  const auto& tw = grid.time_weights();
  double s = 0.0;
  for (int k = 0; k < grid.nt(); ++k) s += tw[k] * integrate_space(f.level_ptr(k), grid);
  return s;
}

double integrate_lateral(const std::vector<std::vector<std::vector<double>>>& g, const SpaceTimeGrid& grid,
                         const std::vector<std::vector<char>>* mask) {
  const auto& faces = grid.faces();
  if (g.size() != faces.size()) throw std::invalid_argument("lateral data must cover every face");
  const auto& tw = grid.time_weights();
  double s = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (static_cast<int>(g[f].size()) != grid.nt()) throw std::invalid_argument("lateral data missing time levels");
    for (int k = 0; k < grid.nt(); ++k) {
      const auto& row = g[f][k];
      if (row.size() != faces[f].nodes.size()) throw std::invalid_argument("lateral data size mismatch");
      double fs = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (mask && !(*mask)[f][j]) continue;
        if (!std::isfinite(row[j])) throw std::domain_error("integrate_dmu: non-finite lateral value");
        fs += faces[f].weights[j] * row[j];
      }
      s += tw[k] * fs;
    }
  }
  return s;
}

double integrate_dmu(const DmuField& g, const SpaceTimeGrid& grid) {
  if (g.cap_lo.size() != grid.num_nodes() || g.cap_hi.size() != grid.num_nodes()) {
    throw std::invalid_argument("missing cap data");
  }
  for (std::size_t i = 0; i < g.cap_lo.size(); ++i) {
    if (!std::isfinite(g.cap_lo[i]) || !std::isfinite(g.cap_hi[i])) {
      throw std::domain_error("integrate_dmu: non-finite cap value");
    }
  }
  return integrate_lateral(g.lateral, grid) + integrate_space(g.cap_lo.data(), grid) +
         integrate_space(g.cap_hi.data(), grid);
}

}  // namespace carl
