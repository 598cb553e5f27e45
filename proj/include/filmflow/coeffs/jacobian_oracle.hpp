#pragma once

#include "filmflow/coeffs/alpha_beta.hpp"
#include "filmflow/geometry/chart.hpp"
#include "filmflow/geometry/gap.hpp"

namespace filmflow::coeffs {

/// Rows of the inverse Jacobian of the film map
/// x = X(xi1,xi2,t) + eps xi3 h a3, expressed in the surface basis:
/// grad_x xi_l = comp[l-1][0] a1 + comp[l-1][1] a2 + comp[l-1][2] a3.
struct InverseJacobianRows {
  Vec3 grad[3];
  double comp[3][3];
};

/// Numerically exact inverse (to solver precision) used as the oracle
/// for the alpha/beta series. Throws SingularJacobian when the
/// condition number exceeds 1e12.
InverseJacobianRows jacobian_inverse_oracle(const geometry::SurfaceChart& chart,
                                            const geometry::GapField& gap,
                                            double eps, double xi1, double xi2,
                                            double xi3, double t);

/// Truncated-series evaluation of the same rows (Eq-level:
/// alpha_l = sum_r (eps xi3 h)^r alpha_l^r and the 1/(eps h) normal slot).
InverseJacobianRows series_inverse_rows(const FrameData& fr, const GapPoint& gp,
                                        const AlphaBetaSeries& ab, double eps,
                                        double xi3);

/// Max abs difference of the basis components between series and oracle
/// over a ns1 x ns2 x ns3 sample grid of (xi1, xi2, xi3) in [lo,hi]^2 x [0,1].
double series_vs_oracle_max_error(const geometry::SurfaceChart& chart,
                                  const geometry::GapField& gap, double eps,
                                  double t, int N, int ns1, int ns2, int ns3,
                                  double lo = 0.1, double hi = 0.9);

/// Least-squares slope of log(err) vs log(eps).
double fit_loglog_slope(const std::vector<double>& eps,
                        const std::vector<double>& err);

}  // namespace filmflow::coeffs
