/// @file operators.hpp
/// @brief Discrete differential operators and norms on the MAC grid.
///
/// Quadrature is the midpoint rule on each quantity's native control volume:
/// cells for normal strain and pressure, faces for velocity (half volumes on
/// wall faces), corners for shear (half on edges, quarter at domain corners).
#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "bingham/grid.hpp"

namespace bingham {

TensorField compute_strain(const StaggeredField& f, const Grid& g);
CellField compute_divergence(const StaggeredField& f, const Grid& g);
double max_abs_divergence(const StaggeredField& f, const Grid& g);

/// Velocity L2 norm, (sum |v|^2 dV)^(1/2).
double norm_H(const StaggeredField& f, const Grid& g);
/// L2 norm of the full velocity gradient.
double norm_V(const StaggeredField& f, const Grid& g);
/// L4 norm of the cell-centered velocity magnitude.
double norm_L4(const StaggeredField& f, const Grid& g);

/// ||v||_L4^2 / (||v||_H1 ||v||_L2), reported as an empirical embedding ratio.
/// Returns 0 for the zero field.
double ladyzhenskaya_ratio(const StaggeredField& f, const Grid& g);

/// L2 norm over the cells of a tensor field.
double tensor_field_norm(const TensorField& t, const Grid& g);

/// Weight of corner (i, j) relative to a full cell: 1, 1/2 on edges, 1/4 at vertices.
double corner_weight(int i, int j, const Grid& g);
/// Weight of a u face (i, j) relative to a full cell: 1/2 on the x = 0, lx faces.
double u_face_weight(int i, const Grid& g);
/// Weight of a v face (i, j): 1/2 on the y = 0, ly faces.
double v_face_weight(int j, const Grid& g);

/// Face-weighted inner product sum (a.b) dV over all velocity faces.
double inner_H(const StaggeredField& a, const StaggeredField& b, const Grid& g);

/// Difference a - b of velocities (pressure of the result is zero).
StaggeredField velocity_difference(const StaggeredField& a, const StaggeredField& b, const Grid& g);

/// Pressure gradient at the unknown faces; wall faces get 0.
void pressure_gradient(const CellField& p, const Grid& g, const BoundarySpec& bc, Array2D& gu,
                       Array2D& gv);

/// Discrete curl of a corner streamfunction: u = d(psi)/dy, v = -d(psi)/dx.
/// The result is discretely divergence-free; psi must vanish on solid walls.
StaggeredField curl_of_streamfunction(const Array2D& psi_corners, const Grid& g,
                                      const BoundarySpec& bc);

/// Smooth random streamfunction vanishing (with its normal derivative) on
/// solid walls and periodic in x when the boundary is periodic. The curl has
/// H-norm `amplitude`.
StaggeredField random_solenoidal_field(const Grid& g, const BoundarySpec& bc, std::uint64_t seed,
                                       double amplitude, int modes = 3);

/// Sample u, v from analytic functions at face positions, ghosts included.
StaggeredField sample_velocity(const Grid& g, const std::function<double(double, double)>& u_fn,
                               const std::function<double(double, double)>& v_fn);

}  // namespace bingham
