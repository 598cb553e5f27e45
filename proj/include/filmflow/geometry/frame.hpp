#pragma once

#include <Eigen/Dense>

#include "filmflow/geometry/chart.hpp"

namespace filmflow::geometry {

/// Local basis {a1, a2, a3}, fundamental forms, metric aggregates and the
/// derivative data every coefficient family needs, evaluated at one
/// (xi1, xi2, t).
///
/// Array indexing: a[k-1] holds a_k; da_dxi[k-1][l-1] is
/// da_k/dxi_l; d2a[k-1][l-1][m-1] is d2 a_k / dxi_l dxi_m.
struct FrameData {
  Vec3 a[3];
  Vec3 dX_dt;
  Vec3 da_dxi[3][2];
  Vec3 d2a[3][2][2];
  Vec3 da_dt[3];

  // First/second fundamental form scalars.
  double E, F, G, e, f, g;

  // Metric aggregates: A0 = EG - F^2, A1 = -eG - gE + 2fF, A2 = eg - f^2.
  double A0, A1, A2;
  double sqrtA0;
  Eigen::Matrix2d M;  // adjugate metric [[G,-F],[-F,E]]

  // xi-derivatives of the scalars (index l-1), needed to differentiate
  // the inverse-Jacobian series coefficients.
  double dE[2], dF[2], dG[2];
  double de[2], df[2], dg[2];
  double dA0[2], dA1[2], dA2[2];

  double xi1 = 0.0, xi2 = 0.0, t = 0.0;
};

/// Evaluate the frame from analytic chart derivatives.
/// Throws DegenerateParametrization if |a1 x a2|^2 < 1e-14.
FrameData build_frame(const SurfaceChart& chart, double xi1, double xi2,
                      double t);

/// Verification oracle: the same frame built purely from central finite
/// differences of the chart position. `step` should lie in [1e-7, 1e-3].
/// With `richardson` the first-level differences are Richardson
/// extrapolated (steps h and h/2), roughly two extra orders of accuracy.
/// Test-only; pure computation, no error paths.
FrameData fd_frame_oracle(const SurfaceChart& chart, double xi1, double xi2,
                          double t, double step, bool richardson = false);

/// Largest relative mismatch over all frame fields (vectors compared
/// component-wise), scaled by the larger field magnitude and 1.
double frame_max_rel_diff(const FrameData& lhs, const FrameData& rhs);

/// Same, restricted to quantities built from first derivatives of X
/// (a1, a2, a3, dX/dt and the first fundamental form). Nested
/// differences of higher order hit the roundoff floor ~eps/step^level,
/// so small-step comparisons are only meaningful at this level.
double frame_first_order_rel_diff(const FrameData& lhs, const FrameData& rhs);

}  // namespace filmflow::geometry
