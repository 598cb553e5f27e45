#pragma once

#include "filmflow/geometry/frame.hpp"
#include "filmflow/geometry/gap.hpp"

namespace filmflow::coeffs {

using geometry::FrameData;
using geometry::GapField;
using geometry::Vec3;

/// Gap trace at one point: value, spatial derivatives to second order,
/// time derivative and mixed derivatives.
struct GapPoint {
  double h = 1.0;
  double dh[2] = {0, 0};
  double d2h[2][2] = {{0, 0}, {0, 0}};
  double dht = 0.0;
  double d2h_dxidt[2] = {0, 0};
};

/// Throws NonPositiveGap when h < max(h_min, tiny).
GapPoint sample_gap(const GapField& gap, double xi1, double xi2, double t);

constexpr int kMaxSeriesOrder = 5;

/// Coefficients of the inverse-Jacobian expansion of the film-to-reference
/// change of variable: alpha_l^n, beta_l^n for l = 1..3, n = 0..N, plus
/// their xi-derivatives (needed by the K coefficient family).
/// gamma_3 = 1/(eps h) is kept symbolic: operations needing it take eps.
struct AlphaBetaSeries {
  int N = 0;
  double alpha[3][kMaxSeriesOrder + 1] = {};
  double beta[3][kMaxSeriesOrder + 1] = {};
  double dalpha[3][kMaxSeriesOrder + 1][2] = {};
  double dbeta[3][kMaxSeriesOrder + 1][2] = {};

  // 1-based indices.
  double al(int l, int n) const { return alpha[l - 1][n]; }
  double be(int l, int n) const { return beta[l - 1][n]; }
  double dal(int l, int n, int m) const { return dalpha[l - 1][n][m - 1]; }
  double dbe(int l, int n, int m) const { return dbeta[l - 1][n][m - 1]; }
};

/// Evaluate the series to truncation order N (0..5).
/// Throws DegenerateParametrization when A0 < 1e-14 and TruncationTooLow
/// when N exceeds the supported maximum.
AlphaBetaSeries alpha_beta_series(const FrameData& fr, const GapPoint& gp,
                                  int N);

}  // namespace filmflow::coeffs
