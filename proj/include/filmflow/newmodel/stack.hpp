#pragma once

#include "filmflow/coeffs/table.hpp"
#include "filmflow/fd/ops.hpp"

namespace filmflow::newmodel {

using coeffs::CoefficientTable;
using coeffs::Vec3;
using fd::Array;
using fd::Grid2D;

/// Unknowns of the two-dimensional model: the xi3-polynomial velocity
/// coefficients ubar_i^k (i = 1,2; k = 0..3) and pbar^0, plus the
/// derived vertical coefficients ubar_3^k and pressures pbar^{1..3}
/// recomputed from them by eliminate_vertical().
struct FieldStack {
  Grid2D grid;
  double eps = 0.1;
  double t = 0.0;
  Array u[2][4];   // u[i-1][k]: ubar_i^k
  Array u3[4];     // ubar_3^k
  Array p0, p1, p2, p3;

  static FieldStack zeros(const Grid2D& g, double eps, double t = 0.0);
};

/// Truncation used for pbar^1: the full elimination identity or its
/// leading-order form.
enum class P1Mode { Full, LeadingOrder };

struct ModelParams {
  double mu = 1.0;
  double rho0 = 1.0;
  P1Mode p1_mode = P1Mode::Full;
  const coeffs::BodyForce* force = nullptr;
  double nu() const { return mu / rho0; }
};

/// Recompute ubar_3^{0..3} and pbar^{1..3} from the primary fields.
/// Pure function of the primary fields (idempotent). Throws
/// NonPositiveGap if the table carries a non-positive gap.
void eliminate_vertical(FieldStack& s, const CoefficientTable& table,
                        const ModelParams& params);

/// max over interior nodes of |sum_{k=1..3} ubar_3^k - eps dh/dt|
/// (the upper-surface kinematic closure; holds to the model's
/// truncation order).
double vertical_closure_defect(const FieldStack& s,
                               const CoefficientTable& table);

/// All first/second derivatives of the stack fields used by the
/// group-one residuals.
struct StackDerivs {
  Array du[2][4][2];   // d ubar_i^k / dxi_l
  Array d2u[2][4][3];  // dxx, dxy, dyy of ubar_i^k
  Array du3[4][2];
  Array dp[4][2];      // gradients of pbar^0..pbar^3
};

StackDerivs stack_derivs(const FieldStack& s);

/// Pointwise residuals of the first-group equations, with the
/// second-group eliminations substituted. Momentum residuals are in
/// tendency form (what d ubar_i^k/dt must equal; zero for a steady
/// solution); the xi3^3 incompressibility row is a plain constraint
/// residual. eliminate_vertical must have run on the stack.
/// Throws EpsilonTooSmall below eps = 1e-4.
struct Group1Residuals {
  Array r_u0[2];
  Array r_u1[2];
  Array r_u2[2];
  Array r_u3[2];
  Array r_div3;
};

Group1Residuals residual_group1(const FieldStack& s,
                                const CoefficientTable& table,
                                const ModelParams& params);

/// The leading-order momentum tendency of ubar_i^0 alone; `include_diffusion`
/// excludes the J^{0,0}-weighted second-derivative block for IMEX use.
std::pair<Array, Array> u0_tendency(const FieldStack& s,
                                    const CoefficientTable& table,
                                    const ModelParams& params,
                                    bool include_diffusion);

}  // namespace filmflow::newmodel
