#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace carl {

using Complex = std::complex<double>;

/// Axis-aligned box in 1 to 3 dimensions with a uniform node lattice.
/// Linear node index is i0 + N0 * (i1 + N1 * i2).
struct BoxDomain {
  int n = 0;
  std::array<double, 3> lows{};
  std::array<double, 3> highs{};
  std::array<int, 3> nodes{1, 1, 1};

  double spacing(int axis) const { return (highs[axis] - lows[axis]) / (nodes[axis] - 1); }
  double min_spacing() const;
  std::size_t num_nodes() const;
  std::size_t stride(int axis) const;
  std::size_t index(const std::array<int, 3>& ijk) const;
  std::array<int, 3> multi_index(std::size_t idx) const;
  std::array<double, 3> coords(std::size_t idx) const;
  bool is_boundary(std::size_t idx) const;
  /// True when no more than `margin` lattice steps separate the node from the boundary.
  bool near_boundary(std::size_t idx, int margin) const;
  bool contains(const double* x, double tol = 1e-12) const;
};

/// Validates and builds a box. Throws on empty extent or fewer than 3 nodes per axis.
BoxDomain make_box(int n, const std::vector<double>& lows, const std::vector<double>& highs,
                   const std::vector<int>& nodes);

/// One face of the box. Face id is 2 * axis + side (side 0 low, 1 high).
/// Holds every lattice node lying on the face, edges included, with the face's
/// own trapezoid weights, so each face integral is a full surface quadrature.
struct Face {
  int axis = 0;
  int side = 0;
  std::array<double, 3> normal{};
  std::vector<std::size_t> nodes;
  std::vector<double> weights;
};

/// Q = box x (t1, t2) with nt time levels.
class SpaceTimeGrid {
 public:
  SpaceTimeGrid() = default;
  SpaceTimeGrid(BoxDomain box, double t1, double t2, int nt);

  const BoxDomain& box() const { return box_; }
  int dim() const { return box_.n; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }
  int nt() const { return nt_; }
  double dt() const { return (t2_ - t1_) / (nt_ - 1); }
  double time(int level) const { return t1_ + level * dt(); }
  std::size_t num_nodes() const { return box_.num_nodes(); }

  const std::vector<Face>& faces() const { return faces_; }
  /// Face owning a boundary node: the lowest-index face containing it; -1 for interior nodes.
  int owner(std::size_t node) const { return owner_[node]; }

  /// Trapezoid weights in space (product rule) and in time.
  const std::vector<double>& space_weights() const { return space_weights_; }
  const std::vector<double>& time_weights() const { return time_weights_; }

 private:
  BoxDomain box_;
  double t1_ = 0.0;
  double t2_ = 1.0;
  int nt_ = 2;
  std::vector<Face> faces_;
  std::vector<int> owner_;
  std::vector<double> space_weights_;
  std::vector<double> time_weights_;
};

SpaceTimeGrid build_grid(int n, const std::vector<double>& lows, const std::vector<double>& highs,
                         const std::vector<int>& nodes, double t1, double t2, int nt);

/// Trapezoid weights for a uniform 1D lattice.
std::vector<double> trapezoid_weights(int count, double h);

/// Values on grid nodes; levels = 1 for purely spatial fields.
template <class T>
struct NodalField {
  int levels = 1;
  std::size_t nodes = 0;
  std::vector<T> values;

  NodalField() = default;
  NodalField(int lv, std::size_t nn, T fill = T{}) : levels(lv), nodes(nn), values(lv * nn, fill) {}

  T& at(int level, std::size_t node) { return values[level * nodes + node]; }
  const T& at(int level, std::size_t node) const { return values[level * nodes + node]; }
  T* level_ptr(int level) { return values.data() + level * nodes; }
  const T* level_ptr(int level) const { return values.data() + level * nodes; }
};

using RealField = NodalField<double>;
using ComplexField = NodalField<Complex>;

/// Boundary data on dQ: per face and time level on the lateral part, plus the two time caps.
struct DmuField {
  std::vector<std::vector<std::vector<double>>> lateral;  // [face][level][face node]
  std::vector<double> cap_lo;                              // all space nodes at t1
  std::vector<double> cap_hi;                              // all space nodes at t2

  static DmuField zeros(const SpaceTimeGrid& grid);
};

/// Throws if any value is not finite.
void require_finite(const RealField& f, const char* what);
void require_finite(const ComplexField& f, const char* what);

double integrate_space(const double* f, const SpaceTimeGrid& grid);
double integrate_space(const double* f, const BoxDomain& box);
double integrate_interior(const RealField& f, const SpaceTimeGrid& grid);
double integrate_dmu(const DmuField& g, const SpaceTimeGrid& grid);
/// Lateral part only, optionally restricted by a per-face-node mask.
double integrate_lateral(const std::vector<std::vector<std::vector<double>>>& g, const SpaceTimeGrid& grid,
                         const std::vector<std::vector<char>>* mask = nullptr);

/// Samples a function of (x, t) on every node.
template <class F>
RealField sample(const SpaceTimeGrid& grid, F&& f) {
  RealField out(grid.nt(), grid.num_nodes());
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.time(k);
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
      const auto x = grid.box().coords(i);
      out.at(k, i) = f(x.data(), t);
    }
  }
  return out;
}

}  // namespace carl
