/// @file grid.hpp
/// @brief MAC grid geometry, ghosted storage and wall boundary conditions.
///
/// Layout on an nx x ny cell grid over [0, lx] x [0, ly]:
///   u(i, j)  x-velocity on vertical faces,   x = i dx,       y = (j + 1/2) dy
///   v(i, j)  y-velocity on horizontal faces, x = (i + 1/2) dx, y = j dy
///   p(i, j)  pressure at cell centers
/// Every array carries a one-deep ghost ring. Corners (i dx, j dy) hold the
/// off-diagonal strain and are computed on the fly, never stored.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bingham/constitutive.hpp"

namespace bingham {

class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double cell_area() const { return dx() * dy(); }

  double x_face(int i) const { return i * dx(); }
  double x_center(int i) const { return (i + 0.5) * dx(); }
  double y_face(int j) const { return j * dy(); }
  double y_center(int j) const { return (j + 0.5) * dy(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

/// Dense 2D array with a ghost ring of width 1; valid indices are
/// [-1, ni] x [-1, nj]. Stored with i fastest.
class Array2D {
 public:
  Array2D() = default;
  Array2D(int ni, int nj, double value = 0.0)
      : ni_(ni), nj_(nj), stride_(ni + 2),
        data_(static_cast<std::size_t>(ni + 2) * static_cast<std::size_t>(nj + 2), value) {}

  double& operator()(int i, int j) { return data_[offset(i, j)]; }
  double operator()(int i, int j) const { return data_[offset(i, j)]; }

  int ni() const { return ni_; }
  int nj() const { return nj_; }
  int stride() const { return stride_; }

  /// Raw storage, including ghosts; index with offset().
  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(stride_) +
           static_cast<std::size_t>(i + 1);
  }

  void fill(double value) { std::fill(data_.begin(), data_.end(), value); }
  bool same_shape(const Array2D& o) const { return ni_ == o.ni_ && nj_ == o.nj_; }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  int ni_ = 0;
  int nj_ = 0;
  int stride_ = 2;
  std::vector<double> data_;
};

enum class WallKind { NoSlip, MovingLid, Periodic };

struct Wall {
  WallKind kind = WallKind::NoSlip;
  double speed = 0.0;  ///< tangential wall speed, MovingLid only
};

/// Per-wall velocity conditions. The bottom and top walls are always solid;
/// the top may move tangentially (lid). The left/right pair is either two
/// no-slip walls or a periodic pair.
struct BoundarySpec {
  enum Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };
  std::array<Wall, 4> walls{};

  static BoundarySpec no_slip_box() { return {}; }
  static BoundarySpec lid_driven(double speed);
  static BoundarySpec periodic_channel();

  bool periodic_x() const { return walls[Left].kind == WallKind::Periodic; }
  double lid_speed() const { return walls[Top].kind == WallKind::MovingLid ? walls[Top].speed : 0.0; }
  /// Same geometry with every wall at rest; the linear part of the closure.
  BoundarySpec homogeneous() const;

  void validate() const;

  friend bool operator==(const BoundarySpec& a, const BoundarySpec& b) {
    for (int s = 0; s < 4; ++s) {
      if (a.walls[s].kind != b.walls[s].kind || a.walls[s].speed != b.walls[s].speed) return false;
    }
    return true;
  }
};

/// Index ranges of the velocity unknowns (faces not fixed by a wall).
struct FaceRanges {
  int u_i0, u_i1;  ///< u unknowns: i in [u_i0, u_i1), j in [0, ny)
  int v_j0, v_j1;  ///< v unknowns: i in [0, nx), j in [v_j0, v_j1)
};

FaceRanges unknown_faces(const Grid& g, const BoundarySpec& bc);

class StaggeredField {
 public:
  StaggeredField() = default;
  explicit StaggeredField(const Grid& g)
      : u(g.nx() + 1, g.ny()), v(g.nx(), g.ny() + 1), p(g.nx(), g.ny()) {}

  Array2D u;
  Array2D v;
  Array2D p;

  bool matches(const Grid& g) const {
    return u.ni() == g.nx() + 1 && u.nj() == g.ny() && v.ni() == g.nx() && v.nj() == g.ny() + 1 &&
           p.ni() == g.nx() && p.nj() == g.ny();
  }

  friend bool operator==(const StaggeredField&, const StaggeredField&) = default;
};

/// Cell-centered scalar field.
using CellField = Array2D;

/// Cell-centered symmetric tensors.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& g) : nx_(g.nx()), ny_(g.ny()), data_(static_cast<std::size_t>(g.nx()) * g.ny()) {}

  SymTensor2& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  const SymTensor2& operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::span<const SymTensor2> values() const { return data_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<SymTensor2> data_;
};

/// Fill ghost values and wall faces from the boundary spec. Tangential
/// ghosts use linear reflection through the wall value.
void apply_bcs(StaggeredField& f, const Grid& g, const BoundarySpec& bc);

/// Velocity-only variant used on solver work vectors.
void apply_velocity_bcs(Array2D& u, Array2D& v, const Grid& g, const BoundarySpec& bc);

/// Throws std::invalid_argument when the field is not sized for the grid.
void require_matches(const StaggeredField& f, const Grid& g, const char* where);

}  // namespace bingham
