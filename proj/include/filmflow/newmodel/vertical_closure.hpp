#pragma once

#include "filmflow/coeffs/table.hpp"
#include "filmflow/fd/linear_system.hpp"

namespace filmflow::newmodel {

using coeffs::CoefficientTable;
using fd::Array;
using fd::Grid2D;
using fd::SpMat;

/// Linear system produced by eliminating the vertical velocity
/// coefficients from the upper-surface kinematic condition
/// sum_k u3bar^k = eps dh/dt, with the tangential closures of the
/// slip-velocity regime substituted:
///   u2_i = (h^2/2mu) sum_l J^{0,0}_{il} d q / dxi_l   (q = eps^2 pbar0),
///   u3_i = -(eps h A1 / 3 A0) u2_i - (eps h/rho0) sum_l J^{0,1}_{il} dq,
///   u1_i = (W - V)_i - u2_i                 (the regime's order-eps closure,
///                                            u3 enters the stack but not
///                                            the eliminated equation).
/// Both sides are divided by eps, so eps = 0 gives the generalized
/// Reynolds (lubrication-limit) operator composed from the exact same
/// difference stencils.
struct VerticalClosureSystem {
  SpMat A;     // A q = rhs (before Dirichlet rows)
  Array rhs;
  SpMat U2[2];       // q -> tangential u2 components
  SpMat U3[2];       // q -> tangential u3 components
  Array u1_const[2]; // (W - V)_i, the q-free part of u1
};

VerticalClosureSystem assemble_vertical_closure(const Grid2D& grid,
                                                const CoefficientTable& table,
                                                const Array& V1, const Array& V2,
                                                const Array& W1, const Array& W2,
                                                double eps, double mu,
                                                double rho0);

/// Nodal coefficient field pulled out of the table (one-based indices
/// forwarded to the per-point accessor).
Array table_field(const CoefficientTable& table,
                  const std::function<double(const coeffs::PointCoefficients&)>& f);

}  // namespace filmflow::newmodel
