#pragma once

#include <variant>

#include "filmflow/newmodel/stack.hpp"
#include "filmflow/newmodel/vertical_closure.hpp"
#include "filmflow/shallow/shallow_water.hpp"

namespace filmflow::newmodel {

/// Slip-velocity boundary regime: known tangential surface velocities
/// and the lateral Dirichlet trace of pbar^0.
struct VelocityRegime {
  Array V1, V2, W1, W2;
  Array pbar0_trace;
};

/// Traction regime: prescribed normal tractions plus friction closure.
struct TractionRegime {
  shallow::TractionBC bc;
};

using BCRegime = std::variant<VelocityRegime, TractionRegime>;

/// Constrain the stack to the slip-velocity conditions:
/// ubar_i^0 = V_i and ubar_i^1 = W_i - V_i - ubar_i^2 - ubar_i^3.
void apply_bc_velocity(FieldStack& s, const Array& V1, const Array& V2,
                       const Array& W1, const Array& W2);

/// Constrain the stack to the traction conditions: pbar^0 from the
/// lower normal-traction identity, ubar^1/ubar^2/ubar^3 from the
/// order-eps traction closures. Throws MissingFriction when the
/// friction coefficient is absent.
void apply_bc_traction(FieldStack& s, const shallow::TractionBC& bc,
                       const CoefficientTable& table,
                       const ModelParams& params);

class NewModelSolver {
 public:
  NewModelSolver(geometry::ChartPtr chart, geometry::GapPtr gap,
                 const Grid2D& grid, BCRegime regime, ModelParams params,
                 double eps);

  /// Velocity regime: the constrained quasi-static stack at t0 (solves
  /// the pbar^0 consistency equation). Traction regime: uniform initial
  /// tangential velocity with all closures applied.
  FieldStack initial_stack(double t0) const;
  FieldStack initial_stack(double v1, double v2, double t0) const;

  /// One step. Velocity regime: re-solve the elliptic pbar^0
  /// consistency equation and re-close (quasi-static; the momentum
  /// equations are residual diagnostics there). Traction regime: IMEX
  /// step of the ubar^0 evolution with algebraic closures.
  FieldStack advance(const FieldStack& s, double dt);

  Group1Residuals residuals(const FieldStack& s) const;
  double closure_defect(const FieldStack& s) const;

  const CoefficientTable& table(double t) const;
  const ModelParams& params() const { return params_; }
  const BCRegime& regime() const { return regime_; }
  double eps() const { return eps_; }

 private:
  FieldStack velocity_solve(double t) const;
  void traction_close(FieldStack& s) const;

  geometry::ChartPtr chart_;
  geometry::GapPtr gap_;
  Grid2D grid_;
  BCRegime regime_;
  ModelParams params_;
  double eps_;
  bool static_geometry_;
  mutable CoefficientTable table_;
  mutable bool table_valid_ = false;
  std::unique_ptr<fd::ImplicitDiffusion> diffusion_;
  double diffusion_dt_ = -1.0, diffusion_t_ = -1.0;
};

}  // namespace filmflow::newmodel
