#include "filmflow/geometry/frame.hpp"

#include <cmath>
#include <functional>

#include "filmflow/errors.hpp"

namespace filmflow::geometry {

namespace {

// Fills fundamental forms, aggregates and their xi-derivatives once the
// basis vectors and their derivatives are in place.
void finish_scalars(FrameData& fr) {
  fr.E = fr.a[0].dot(fr.a[0]);
  fr.F = fr.a[0].dot(fr.a[1]);
  fr.G = fr.a[1].dot(fr.a[1]);
  fr.e = fr.a[2].dot(fr.da_dxi[0][0]);
  fr.f = fr.a[2].dot(fr.da_dxi[0][1]);
  fr.g = fr.a[2].dot(fr.da_dxi[1][1]);

  fr.A0 = fr.E * fr.G - fr.F * fr.F;
  fr.A1 = -fr.e * fr.G - fr.g * fr.E + 2.0 * fr.f * fr.F;
  fr.A2 = fr.e * fr.g - fr.f * fr.f;
  fr.sqrtA0 = std::sqrt(fr.A0);
  fr.M << fr.G, -fr.F, -fr.F, fr.E;

  for (int l = 0; l < 2; ++l) {
    fr.dE[l] = 2.0 * fr.a[0].dot(fr.da_dxi[0][l]);
    fr.dF[l] = fr.da_dxi[0][l].dot(fr.a[1]) + fr.a[0].dot(fr.da_dxi[1][l]);
    fr.dG[l] = 2.0 * fr.a[1].dot(fr.da_dxi[1][l]);
    fr.de[l] =
        fr.da_dxi[2][l].dot(fr.da_dxi[0][0]) + fr.a[2].dot(fr.d2a[0][0][l]);
    fr.df[l] =
        fr.da_dxi[2][l].dot(fr.da_dxi[0][1]) + fr.a[2].dot(fr.d2a[0][1][l]);
    fr.dg[l] =
        fr.da_dxi[2][l].dot(fr.da_dxi[1][1]) + fr.a[2].dot(fr.d2a[1][1][l]);
    fr.dA0[l] = fr.dE[l] * fr.G + fr.E * fr.dG[l] - 2.0 * fr.F * fr.dF[l];
    fr.dA1[l] = -fr.de[l] * fr.G - fr.e * fr.dG[l] - fr.dg[l] * fr.E -
                fr.g * fr.dE[l] + 2.0 * fr.df[l] * fr.F + 2.0 * fr.f * fr.dF[l];
    fr.dA2[l] = fr.de[l] * fr.g + fr.e * fr.dg[l] - 2.0 * fr.f * fr.df[l];
  }
}

// Normal vector and its derivatives from w = a1 x a2 and its derivatives.
void build_normal(FrameData& fr, const Vec3& w, const Vec3 dw[2],
                  const Vec3 d2w[2][2], const Vec3& dwt) {
  const double s2 = w.squaredNorm();
  if (s2 < 1e-14) {
    throw DegenerateParametrization(
        "surface parametrization degenerate: |a1 x a2|^2 = " +
        std::to_string(s2));
  }
  const double s = std::sqrt(s2);
  double ds[2];
  for (int l = 0; l < 2; ++l) ds[l] = w.dot(dw[l]) / s;
  const double dst = w.dot(dwt) / s;

  fr.a[2] = w / s;
  for (int l = 0; l < 2; ++l)
    fr.da_dxi[2][l] = dw[l] / s - w * (ds[l] / s2);
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      const double d2s =
          (dw[l].dot(dw[m]) + w.dot(d2w[l][m])) / s - ds[l] * ds[m] / s;
      fr.d2a[2][l][m] = d2w[l][m] / s - dw[l] * (ds[m] / s2) -
                        dw[m] * (ds[l] / s2) - w * (d2s / s2) +
                        2.0 * w * (ds[l] * ds[m] / (s2 * s));
    }
  }
  fr.da_dt[2] = dwt / s - w * (dst / s2);
}

}  // namespace

FrameData build_frame(const SurfaceChart& chart, double xi1, double xi2,
                      double t) {
  FrameData fr;
  fr.xi1 = xi1;
  fr.xi2 = xi2;
  fr.t = t;

  for (int k = 0; k < 2; ++k) {
    fr.a[k] = chart.d1(k + 1, xi1, xi2, t);
    fr.da_dt[k] = chart.dt_d1(k + 1, xi1, xi2, t);
    for (int l = 0; l < 2; ++l) {
      fr.da_dxi[k][l] = chart.d2(k + 1, l + 1, xi1, xi2, t);
      for (int m = 0; m < 2; ++m)
        fr.d2a[k][l][m] = chart.d3(k + 1, l + 1, m + 1, xi1, xi2, t);
    }
  }
  fr.dX_dt = chart.dt(xi1, xi2, t);

  const Vec3 w = fr.a[0].cross(fr.a[1]);
  Vec3 dw[2], d2w[2][2];
  for (int l = 0; l < 2; ++l)
    dw[l] = fr.da_dxi[0][l].cross(fr.a[1]) + fr.a[0].cross(fr.da_dxi[1][l]);
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      d2w[l][m] = fr.d2a[0][l][m].cross(fr.a[1]) +
                  fr.da_dxi[0][l].cross(fr.da_dxi[1][m]) +
                  fr.da_dxi[0][m].cross(fr.da_dxi[1][l]) +
                  fr.a[0].cross(fr.d2a[1][l][m]);
    }
  }
  const Vec3 dwt = fr.da_dt[0].cross(fr.a[1]) + fr.a[0].cross(fr.da_dt[1]);

  build_normal(fr, w, dw, d2w, dwt);
  finish_scalars(fr);
  return fr;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

namespace {

using VecFn = std::function<Vec3(double, double, double)>;

Vec3 fd_xi(const VecFn& f, int l, double x1, double x2, double t, double h,
           bool richardson) {
  auto once = [&](double hh) -> Vec3 {
    return l == 1 ? Vec3((f(x1 + hh, x2, t) - f(x1 - hh, x2, t)) / (2.0 * hh))
                  : Vec3((f(x1, x2 + hh, t) - f(x1, x2 - hh, t)) / (2.0 * hh));
  };
  if (!richardson) return once(h);
  return (4.0 * once(0.5 * h) - once(h)) / 3.0;
}

Vec3 fd_t(const VecFn& f, double x1, double x2, double t, double h,
          bool richardson) {
  auto once = [&](double hh) -> Vec3 {
    return (f(x1, x2, t + hh) - f(x1, x2, t - hh)) / (2.0 * hh);
  };
  if (!richardson) return once(h);
  return (4.0 * once(0.5 * h) - once(h)) / 3.0;
}

}  // namespace

FrameData fd_frame_oracle(const SurfaceChart& chart, double xi1, double xi2,
                          double t, double step, bool richardson) {
  FrameData fr;
  fr.xi1 = xi1;
  fr.xi2 = xi2;
  fr.t = t;

  VecFn pos = [&chart](double a, double b, double c) {
    return chart.position(a, b, c);
  };
  VecFn a_fn[2];
  for (int k = 0; k < 2; ++k) {
    a_fn[k] = [pos, k, step, richardson](double a, double b, double c) {
      return fd_xi(pos, k + 1, a, b, c, step, richardson);
    };
  }
  VecFn w_fn = [a_fn](double a, double b, double c) {
    return Vec3(a_fn[0](a, b, c).cross(a_fn[1](a, b, c)));
  };

  for (int k = 0; k < 2; ++k) {
    fr.a[k] = a_fn[k](xi1, xi2, t);
    fr.da_dt[k] = fd_t(a_fn[k], xi1, xi2, t, step, richardson);
    for (int l = 0; l < 2; ++l) {
      fr.da_dxi[k][l] = fd_xi(a_fn[k], l + 1, xi1, xi2, t, step, richardson);
      for (int m = 0; m < 2; ++m) {
        VecFn da_fn = [a_fn, k, l, step, richardson](double a, double b,
                                                     double c) {
          return fd_xi(a_fn[k], l + 1, a, b, c, step, richardson);
        };
        fr.d2a[k][l][m] = fd_xi(da_fn, m + 1, xi1, xi2, t, step, richardson);
      }
    }
  }
  fr.dX_dt = fd_t(pos, xi1, xi2, t, step, richardson);

  const Vec3 w = w_fn(xi1, xi2, t);
  Vec3 dw[2], d2w[2][2];
  for (int l = 0; l < 2; ++l)
    dw[l] = fd_xi(w_fn, l + 1, xi1, xi2, t, step, richardson);
  for (int l = 0; l < 2; ++l) {
    VecFn dw_fn = [w_fn, l, step, richardson](double a, double b, double c) {
      return fd_xi(w_fn, l + 1, a, b, c, step, richardson);
    };
    for (int m = 0; m < 2; ++m)
      d2w[l][m] = fd_xi(dw_fn, m + 1, xi1, xi2, t, step, richardson);
  }
  const Vec3 dwt = fd_t(w_fn, xi1, xi2, t, step, richardson);

  build_normal(fr, w, dw, d2w, dwt);
  finish_scalars(fr);
  return fr;
}

namespace {
double rel(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}
double relv(const Vec3& a, const Vec3& b) {
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() / scale;
}
}  // namespace

double frame_first_order_rel_diff(const FrameData& lhs, const FrameData& rhs) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, relv(lhs.a[k], rhs.a[k]));
  m = std::max(m, relv(lhs.dX_dt, rhs.dX_dt));
  m = std::max(m, rel(lhs.E, rhs.E));
  m = std::max(m, rel(lhs.F, rhs.F));
  m = std::max(m, rel(lhs.G, rhs.G));
  m = std::max(m, rel(lhs.A0, rhs.A0));
  return m;
}

double frame_max_rel_diff(const FrameData& lhs, const FrameData& rhs) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) {
    m = std::max(m, relv(lhs.a[k], rhs.a[k]));
    m = std::max(m, relv(lhs.da_dt[k], rhs.da_dt[k]));
    for (int l = 0; l < 2; ++l) {
      m = std::max(m, relv(lhs.da_dxi[k][l], rhs.da_dxi[k][l]));
      for (int n = 0; n < 2; ++n)
        m = std::max(m, relv(lhs.d2a[k][l][n], rhs.d2a[k][l][n]));
    }
  }
  m = std::max(m, relv(lhs.dX_dt, rhs.dX_dt));
  m = std::max(m, rel(lhs.E, rhs.E));
  m = std::max(m, rel(lhs.F, rhs.F));
  m = std::max(m, rel(lhs.G, rhs.G));
  m = std::max(m, rel(lhs.e, rhs.e));
  m = std::max(m, rel(lhs.f, rhs.f));
  m = std::max(m, rel(lhs.g, rhs.g));
  m = std::max(m, rel(lhs.A0, rhs.A0));
  m = std::max(m, rel(lhs.A1, rhs.A1));
  m = std::max(m, rel(lhs.A2, rhs.A2));
  return m;
}

}  // namespace filmflow::geometry
