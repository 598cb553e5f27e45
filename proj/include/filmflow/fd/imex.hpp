#pragma once

#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "filmflow/fd/linear_system.hpp"

namespace filmflow::fd {

enum class BcKind { Dirichlet, ZeroGradient };

/// Lateral boundary treatment per edge of D.
struct BoundarySpec {
  BcKind left = BcKind::ZeroGradient;
  BcKind right = BcKind::ZeroGradient;
  BcKind bottom = BcKind::ZeroGradient;
  BcKind top = BcKind::ZeroGradient;

  BcKind at(Edge e) const {
    switch (e) {
      case Edge::Left: return left;
      case Edge::Right: return right;
      case Edge::Bottom: return bottom;
      default: return top;
    }
  }
};

/// Enforce the boundary spec in place: Dirichlet edges copy from
/// `dirichlet_values`, zero-gradient edges take the second-order
/// one-sided extrapolation from the interior. Corners follow Dirichlet
/// when either adjacent edge is Dirichlet, else the x1-direction rule.
void apply_boundary(const Grid2D& g, const BoundarySpec& bc, Array& f,
                    const Array& dirichlet_values);

/// Backward-Euler operator (I - dt nu sum_lm J_lm d2/dxil dxim) with the
/// boundary rows replaced per `bc`. Factorized once; reused every step.
class ImplicitDiffusion {
 public:
  ImplicitDiffusion(const Grid2D& g, const Array& j11, const Array& j12,
                    const Array& j22, double nu, double dt,
                    const BoundarySpec& bc);

  /// rhs holds the post-explicit state; Dirichlet rows are overwritten
  /// with `dirichlet_values` before the solve.
  Array solve(const Array& rhs, const Array& dirichlet_values) const;

 private:
  const Grid2D grid_;
  BoundarySpec bc_;
  SpMat op_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

/// Advective CFL guard: dt <= 0.5 min(d1,d2) / max |Vrel|.
/// Throws CFLViolation when violated.
void check_advective_cfl(const Grid2D& g, const Array& vrel1,
                         const Array& vrel2, double dt);

using TendencyFn =
    std::function<std::vector<Array>(double t, const std::vector<Array>&)>;
using BoundaryFn = std::function<void(std::vector<Array>&)>;

/// One IMEX step: Heun (RK2) on the explicit tendency, then a
/// backward-Euler diffusion solve per field where an operator is given.
/// `apply_bc` runs after each explicit stage and after the solves.
std::vector<Array> time_step_imex(
    double t, double dt, const std::vector<Array>& fields,
    const TendencyFn& explicit_rhs,
    const std::vector<const ImplicitDiffusion*>& diffusion,
    const std::vector<const Array*>& dirichlet_values,
    const BoundaryFn& apply_bc);

}  // namespace filmflow::fd
