#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "filmflow/fd/grid.hpp"
#include "filmflow/fd/ops.hpp"

namespace filmflow::fd {

/// Sparse linear system with Dirichlet handling already applied:
/// constrained rows are identity rows with the boundary value in b.
struct LinearSystem {
  SpMat A;
  Eigen::VectorXd b;
  std::vector<char> dirichlet;  // 1 where the unknown is pinned
  bool symmetric_hint = true;   // guides the iterative fallback
};

/// Pin `mask` nodes to `values`. With `symmetrize` the constrained
/// columns are folded into b so a symmetric A stays exactly symmetric.
LinearSystem make_dirichlet_system(const SpMat& A, const Eigen::VectorXd& b,
                                   const std::vector<char>& mask,
                                   const Eigen::VectorXd& values,
                                   bool symmetrize);

/// Deterministic sparse solve. Direct LU up to 200^2 unknowns, then
/// diagonally preconditioned CG (BiCGSTAB when not symmetric). Checks
/// |Ax-b|_inf <= 1e-10 |b|_inf and throws SolverDivergence with the
/// achieved residual otherwise.
Eigen::VectorXd solve_sparse(const LinearSystem& sys);

/// Boundary mask for all four edges of the grid.
std::vector<char> boundary_mask(const Grid2D& g);

}  // namespace filmflow::fd
