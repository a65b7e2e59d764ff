#include "bingham/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bingham {

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4) {
    throw std::invalid_argument("grid needs at least 4 cells per direction, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("domain lengths must be finite and positive");
  }
}

BoundarySpec BoundarySpec::lid_driven(double speed) {
  BoundarySpec bc;
  bc.walls[Top] = {WallKind::MovingLid, speed};
  return bc;
}

BoundarySpec BoundarySpec::periodic_channel() {
  BoundarySpec bc;
  bc.walls[Left] = {WallKind::Periodic, 0.0};
  bc.walls[Right] = {WallKind::Periodic, 0.0};
  return bc;
}

BoundarySpec BoundarySpec::homogeneous() const {
  BoundarySpec out = *this;
  for (auto& w : out.walls) {
    w.speed = 0.0;
  }
  return out;
}

void BoundarySpec::validate() const {
  for (int s = 0; s < 4; ++s) {
    if (walls[s].kind == WallKind::MovingLid && s != Top) {
      throw std::invalid_argument("a moving lid is only supported on the top wall");
    }
    if (walls[s].kind == WallKind::Periodic && s != Left && s != Right) {
      throw std::invalid_argument("only the left/right pair may be periodic");
    }
    if (walls[s].kind != WallKind::MovingLid && walls[s].speed != 0.0) {
      throw std::invalid_argument("only a moving lid may carry a wall speed");
    }
    if (!std::isfinite(walls[s].speed)) {
      throw std::invalid_argument("wall speed must be finite");
    }
  }
  if ((walls[Left].kind == WallKind::Periodic) != (walls[Right].kind == WallKind::Periodic)) {
    throw std::invalid_argument("periodic walls must come in a left/right pair");
  }
}

FaceRanges unknown_faces(const Grid& g, const BoundarySpec& bc) {
  if (bc.periodic_x()) {
    return {0, g.nx(), 1, g.ny()};
  }
  return {1, g.nx(), 1, g.ny()};
}

void apply_velocity_bcs(Array2D& u, Array2D& v, const Grid& g, const BoundarySpec& bc) {
  const int nx = g.nx();
  const int ny = g.ny();

  if (bc.periodic_x()) {
    for (int j = -1; j <= ny; ++j) {
      u(nx, j) = u(0, j);
      u(-1, j) = u(nx - 1, j);
      u(nx + 1, j) = u(1, j);
    }
  } else {
    for (int j = -1; j <= ny; ++j) {
      u(0, j) = 0.0;
      u(nx, j) = 0.0;
      u(-1, j) = -u(1, j);
      u(nx + 1, j) = -u(nx - 1, j);
    }
  }
  const double lid = bc.lid_speed();
  for (int i = -1; i <= nx + 1; ++i) {
    u(i, -1) = -u(i, 0);
    u(i, ny) = 2.0 * lid - u(i, ny - 1);
  }

  for (int i = -1; i <= nx; ++i) {
    v(i, 0) = 0.0;
    v(i, ny) = 0.0;
  }
  for (int i = -1; i <= nx; ++i) {
    v(i, -1) = -v(i, 1);
    v(i, ny + 1) = -v(i, ny - 1);
  }
  if (bc.periodic_x()) {
    for (int j = -1; j <= ny + 1; ++j) {
      v(-1, j) = v(nx - 1, j);
      v(nx, j) = v(0, j);
    }
  } else {
    for (int j = -1; j <= ny + 1; ++j) {
      v(-1, j) = -v(0, j);
      v(nx, j) = -v(nx - 1, j);
    }
  }
}

void apply_bcs(StaggeredField& f, const Grid& g, const BoundarySpec& bc) {
  require_matches(f, g, "apply_bcs");
  apply_velocity_bcs(f.u, f.v, g, bc);
}

void require_matches(const StaggeredField& f, const Grid& g, const char* where) {
  if (!f.matches(g)) {
    throw std::invalid_argument(std::string(where) + ": field extents do not match the " +
                                std::to_string(g.nx()) + "x" + std::to_string(g.ny()) + " grid");
  }
}

}  // namespace bingham
