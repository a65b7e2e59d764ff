/// @file kernels.hpp
/// @brief Grid stencils used in the time loop, in two builds.
///
/// `parallel` holds the OpenMP kernels the solver calls. `serial` is a plain
/// loop-by-loop reference kept for testing and benchmarking. Both evaluate
/// each output entry with the same arithmetic, so pointwise kernels agree
/// exactly and only the reductions differ by summation order.
///
/// All kernels read ghost values, so apply_velocity_bcs must have been
/// called on the velocity inputs.
#pragma once

#include "bingham/grid.hpp"

namespace bingham::kernels {

/// Corner array shape: (nx + 1) x (ny + 1) corners.
inline Array2D make_corner_array(const Grid& g) { return Array2D(g.nx() + 1, g.ny() + 1); }

/// Scratch buffers for viscous_apply.
struct ViscousWork {
  Array2D sxx, syy, sxy;
  void ensure(const Grid& g);
};

namespace parallel {

/// Off-diagonal strain 1/2 (du/dy + dv/dx) at every corner.
void corner_shear(const Array2D& u, const Array2D& v, const Grid& g, Array2D& dxy);

/// Cell-centered strain; xy is the average of the four surrounding corners.
void cell_strain(const Array2D& u, const Array2D& v, const Grid& g, TensorField& out);

void divergence(const Array2D& u, const Array2D& v, const Grid& g, CellField& out);

/// Flux-form convective term (u.grad)u at the unknown faces; other faces are 0.
void advection(const Array2D& u, const Array2D& v, const Grid& g, const FaceRanges& r,
               Array2D& nu, Array2D& nv);

/// out = -div(2 eta D(w)) at the unknown faces, eta given at cells and corners.
void viscous_apply(const Array2D& wu, const Array2D& wv, const CellField& eta_c,
                   const Array2D& eta_k, const Grid& g, const FaceRanges& r, bool periodic_x,
                   ViscousWork& work, Array2D& out_u, Array2D& out_v);

/// Cell Laplacian with zero-flux walls; x is wrapped when periodic_x.
void laplacian(const CellField& phi, const Grid& g, bool periodic_x, CellField& out);

/// Sum of a*b over the unknown faces of two velocity pairs.
double dot_faces(const Array2D& au, const Array2D& av, const Array2D& bu, const Array2D& bv,
                 const Grid& g, const FaceRanges& r);

double dot_cells(const CellField& a, const CellField& b, const Grid& g);

}  // namespace parallel

namespace serial {

void corner_shear(const Array2D& u, const Array2D& v, const Grid& g, Array2D& dxy);
void cell_strain(const Array2D& u, const Array2D& v, const Grid& g, TensorField& out);
void divergence(const Array2D& u, const Array2D& v, const Grid& g, CellField& out);
void advection(const Array2D& u, const Array2D& v, const Grid& g, const FaceRanges& r,
               Array2D& nu, Array2D& nv);
void viscous_apply(const Array2D& wu, const Array2D& wv, const CellField& eta_c,
                   const Array2D& eta_k, const Grid& g, const FaceRanges& r, bool periodic_x,
                   ViscousWork& work, Array2D& out_u, Array2D& out_v);
void laplacian(const CellField& phi, const Grid& g, bool periodic_x, CellField& out);
double dot_faces(const Array2D& au, const Array2D& av, const Array2D& bu, const Array2D& bv,
                 const Grid& g, const FaceRanges& r);
double dot_cells(const CellField& a, const CellField& b, const Grid& g);

}  // namespace serial

}  // namespace bingham::kernels
