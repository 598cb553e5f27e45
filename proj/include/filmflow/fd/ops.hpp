#pragma once

#include <Eigen/Sparse>

#include "filmflow/fd/grid.hpp"

namespace filmflow::fd {

using SpMat = Eigen::SparseMatrix<double>;
using Array = Eigen::ArrayXd;

// Second-order difference operators: central in the interior, one-sided
// second-order at the edges. The loop appliers and the sparse builders
// share one stencil definition, so matrix-composed operators agree with
// field-composed ones to rounding.

Array dx(const Grid2D& g, const Array& f);
Array dy(const Grid2D& g, const Array& f);
Array dxx(const Grid2D& g, const Array& f);
Array dyy(const Grid2D& g, const Array& f);
/// Mixed derivative, defined as dx(dy(f)).
Array dxy(const Grid2D& g, const Array& f);

SpMat dx_matrix(const Grid2D& g);
SpMat dy_matrix(const Grid2D& g);
SpMat dxx_matrix(const Grid2D& g);
SpMat dyy_matrix(const Grid2D& g);

/// Gradient pair (dx f, dy f).
std::pair<Array, Array> grad(const Grid2D& g, const Array& f);

/// Conservative divergence of the weighted flux w*g, where w is the
/// symmetric 2x2 tensor field (w11, w12, w22) per node and g a nodal
/// vector field. Central differencing of the nodal flux is the
/// face-averaged flux form (telescoping). Throws NonSPDWeight if the
/// tensor loses positive definiteness at any node.
Array div_weighted(const Grid2D& g, const Array& w11, const Array& w12,
                   const Array& w22, const Array& g1, const Array& g2);

/// Trapezoid-weight quadrature of a nodal field over D.
double integrate(const Grid2D& g, const Array& f);

/// Diagonal of the lumped bilinear mass matrix (dual-cell areas).
Array lumped_mass(const Grid2D& g);

/// Symmetric stiffness matrix K with K(p,q) = sum_cells grad(p).W grad(q)
/// over bilinear elements, W constant per cell (values at cell centers).
/// Exactly symmetric for any W field. Throws NonSPDWeight when a cell
/// tensor is not SPD.
SpMat weighted_stiffness(const Grid2D& g, const Array& w11c,
                         const Array& w12c, const Array& w22c);

/// Weak-form divergence residual: r_i = -(K f)_i, which approximates
/// (M_L * div(W grad f))_i at interior nodes.
Array stiffness_residual(const SpMat& K, const Array& f);

}  // namespace filmflow::fd
