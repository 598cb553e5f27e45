#include "filmflow/coeffs/jacobian_oracle.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "filmflow/errors.hpp"

namespace filmflow::coeffs {

InverseJacobianRows jacobian_inverse_oracle(const geometry::SurfaceChart& chart,
                                            const geometry::GapField& gap,
                                            double eps, double xi1, double xi2,
                                            double xi3, double t) {
  const FrameData fr = geometry::build_frame(chart, xi1, xi2, t);
  const GapPoint gp = sample_gap(gap, xi1, xi2, t);

  Eigen::Matrix3d Jm;  // columns dx/dxi_k
  for (int k = 0; k < 2; ++k) {
    const Vec3 col = fr.a[k] + eps * xi3 * (gp.dh[k] * fr.a[2] +
                                            gp.h * fr.da_dxi[2][k]);
    Jm.col(k) = col;
  }
  Jm.col(2) = eps * gp.h * fr.a[2];

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(Jm);
  const double smin = svd.singularValues()(2);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw SingularJacobian("film map jacobian condition number " +
                           std::to_string(smax / std::max(smin, 1e-300)));

  const Eigen::Matrix3d inv = Jm.inverse();
  InverseJacobianRows out;
  for (int l = 0; l < 3; ++l) {
    const Vec3 row = inv.row(l).transpose();
    out.grad[l] = row;
    // Project on {a1, a2, a3}: a3 is unit and orthogonal to a1, a2.
    const double c3 = row.dot(fr.a[2]);
    const double r1 = row.dot(fr.a[0]);
    const double r2 = row.dot(fr.a[1]);
    const double det = fr.E * fr.G - fr.F * fr.F;
    out.comp[l][0] = (r1 * fr.G - r2 * fr.F) / det;
    out.comp[l][1] = (r2 * fr.E - r1 * fr.F) / det;
    out.comp[l][2] = c3;
  }
  return out;
}

InverseJacobianRows series_inverse_rows(const FrameData& fr, const GapPoint& gp,
                                        const AlphaBetaSeries& ab, double eps,
                                        double xi3) {
  InverseJacobianRows out;
  const double z = eps * xi3 * gp.h;
  for (int l = 1; l <= 2; ++l) {
    double av = 0.0, bv = 0.0, zp = 1.0;
    for (int n = 0; n <= ab.N; ++n) {
      av += zp * ab.al(l, n);
      bv += zp * ab.be(l, n);
      zp *= z;
    }
    out.comp[l - 1][0] = av;
    out.comp[l - 1][1] = bv;
    out.comp[l - 1][2] = 0.0;
  }
  {
    double av = 0.0, bv = 0.0, zp = 1.0;
    for (int n = 0; n <= ab.N; ++n) {
      av += zp * ab.al(3, n);
      bv += zp * ab.be(3, n);
      zp *= z;
    }
    out.comp[2][0] = xi3 / gp.h * av;
    out.comp[2][1] = xi3 / gp.h * bv;
    out.comp[2][2] = 1.0 / (eps * gp.h);
  }
  for (int l = 0; l < 3; ++l)
    out.grad[l] = out.comp[l][0] * fr.a[0] + out.comp[l][1] * fr.a[1] +
                  out.comp[l][2] * fr.a[2];
  return out;
}

double series_vs_oracle_max_error(const geometry::SurfaceChart& chart,
                                  const geometry::GapField& gap, double eps,
                                  double t, int N, int ns1, int ns2, int ns3,
                                  double lo, double hi) {
  double worst = 0.0;
  for (int i = 0; i < ns1; ++i) {
    for (int j = 0; j < ns2; ++j) {
      const double x1 = lo + (hi - lo) * (ns1 == 1 ? 0.5 : double(i) / (ns1 - 1));
      const double x2 = lo + (hi - lo) * (ns2 == 1 ? 0.5 : double(j) / (ns2 - 1));
      const FrameData fr = geometry::build_frame(chart, x1, x2, t);
      const GapPoint gp = sample_gap(gap, x1, x2, t);
      const AlphaBetaSeries ab = alpha_beta_series(fr, gp, N);
      for (int q = 0; q < ns3; ++q) {
        const double x3 = ns3 == 1 ? 0.5 : double(q + 1) / ns3;
        const auto oracle =
            jacobian_inverse_oracle(chart, gap, eps, x1, x2, x3, t);
        const auto series = series_inverse_rows(fr, gp, ab, eps, x3);
        for (int l = 0; l < 3; ++l)
          for (int c = 0; c < 3; ++c)
            worst = std::max(worst,
                             std::abs(oracle.comp[l][c] - series.comp[l][c]));
      }
    }
  }
  return worst;
}

double fit_loglog_slope(const std::vector<double>& eps,
                        const std::vector<double>& err) {
  const int n = static_cast<int>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double x = std::log(eps[k]);
    const double y = std::log(std::max(err[k], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace filmflow::coeffs
