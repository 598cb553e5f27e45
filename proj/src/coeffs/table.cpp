#include "filmflow/coeffs/table.hpp"

#include <cmath>
#include <thread>

#include "filmflow/errors.hpp"

namespace filmflow::coeffs {

double BodyForce::eval(int i, double xi3, double xi1, double xi2,
                       double t) const {
  double acc = 0.0, p = 1.0;
  for (int n = 0; n <= max_order(); ++n) {
    acc += fbar(i, n, xi1, xi2, t) * p;
    p *= xi3;
  }
  return acc;
}

Vec3 quadratic_friction(double c1r, double rho0, const Vec3& u) {
  return rho0 * c1r * u.norm() * u;
}

double PointCoefficients::tau(LhKind w, int l) const {
  switch (w) {
    case L01: return tau01_[l - 1];
    case L11: return tau12_[l - 1];
    case L02: return tau02_[l - 1];
    case L21: return tau23_[l - 1];
    case L12: return tau13_[l - 1];
    case L03: return tau03_[l - 1];
    default:
      throw MissingCoefficient("tau has no variant for this L kind");
  }
}

double friction_forcing(const PointCoefficients& pc, int i, const Vec3& f_R0,
                        const Vec3& f_R1, double s0, double rho0) {
  const Vec3 f = f_R0 + f_R1;
  return s0 / (rho0 * pc.gp.h) *
         f.dot(pc.al(i, 0) * pc.a(1) + pc.be(i, 0) * pc.a(2));
}

namespace {

int max_sup(const AlphaBetaSeries& ab) { return std::min(ab.N, 3); }

void require_order(const AlphaBetaSeries& ab, int needed, const char* what) {
  if (ab.N < needed)
    throw TruncationTooLow(std::string(what) + " needs series order " +
                           std::to_string(needed) + ", have N = " +
                           std::to_string(ab.N));
}

}  // namespace

PointCoefficients base_coefficients(const FrameData& fr, const GapPoint& gp,
                                    const AlphaBetaSeries& ab) {
  PointCoefficients pc;
  pc.fr = fr;
  pc.gp = gp;
  pc.ab = ab;
  const int nmax = max_sup(ab);

  auto a = [&](int k) -> const Vec3& { return fr.a[k - 1]; };
  auto da = [&](int k, int l) -> const Vec3& { return fr.da_dxi[k - 1][l - 1]; };
  auto dat = [&](int k) -> const Vec3& { return fr.da_dt[k - 1]; };

  // B^j_{lk} = alpha^j_l (a1.ak) + beta^j_l (a2.ak)
  for (int j = 0; j <= nmax; ++j)
    for (int l = 1; l <= 3; ++l)
      for (int k = 1; k <= 2; ++k)
        pc.B_[j][l - 1][k - 1] =
            ab.al(l, j) * a(1).dot(a(k)) + ab.be(l, j) * a(2).dot(a(k));

  // C^0_l and C^{i,j}_l
  for (int l = 1; l <= 3; ++l)
    pc.C0_[l - 1] =
        ab.al(l, 0) * a(1).dot(fr.dX_dt) + ab.be(l, 0) * a(2).dot(fr.dX_dt);
  for (int i = 0; i <= nmax; ++i)
    for (int j = 0; j <= nmax; ++j)
      for (int l = 1; l <= 3; ++l)
        pc.Cij_[i][j][l - 1] = ab.al(l, i) * a(1).dot(fr.dX_dt) +
                               ab.be(l, i) * a(2).dot(fr.dX_dt) +
                               ab.al(l, j) * a(1).dot(dat(3)) +
                               ab.be(l, j) * a(2).dot(dat(3));

  // D^j_{ik} = alpha^j_i (a3 . da_k/dxi1) + beta^j_i (a3 . da_k/dxi2)
  for (int j = 0; j <= std::min(nmax, 1); ++j)
    for (int i = 1; i <= 3; ++i)
      for (int k = 1; k <= 2; ++k)
        pc.D_[j][i - 1][k - 1] = ab.al(i, j) * a(3).dot(da(k, 1)) +
                                 ab.be(i, j) * a(3).dot(da(k, 2));

  // H^j_{ilk} = alpha^j_i (a1 . da_k/dxil) + beta^j_i (a2 . da_k/dxil)
  for (int j = 0; j <= nmax; ++j)
    for (int i = 1; i <= 3; ++i)
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k)
          pc.H_[j][i - 1][l - 1][k - 1] = ab.al(i, j) * a(1).dot(da(k, l)) +
                                          ab.be(i, j) * a(2).dot(da(k, l));

  pc.I_ = a(1).cross(da(3, 2)).dot(a(3)) + da(3, 1).cross(a(2)).dot(a(3));

  // J^{i,j}_{lm} = alpha^i_l B^j_{m1} + beta^i_l B^j_{m2}
  for (int i = 0; i <= nmax; ++i)
    for (int j = 0; j <= nmax; ++j)
      for (int l = 1; l <= 3; ++l)
        for (int m = 1; m <= 3; ++m)
          pc.J_[i][j][l - 1][m - 1] = ab.al(l, i) * pc.B_[j][m - 1][0] +
                                      ab.be(l, i) * pc.B_[j][m - 1][1];

  // K^{j,i}_l = sum_m dalpha^j_l B^i_{m1} + dbeta^j_l B^i_{m2}
  //             + alpha^j_l H^i_{mm1} + beta^j_l H^i_{mm2}
  for (int j = 0; j <= nmax; ++j)
    for (int i = 0; i <= nmax; ++i)
      for (int l = 1; l <= 3; ++l) {
        double acc = 0.0;
        for (int m = 1; m <= 2; ++m) {
          acc += ab.dal(l, j, m) * pc.B_[i][m - 1][0] +
                 ab.dbe(l, j, m) * pc.B_[i][m - 1][1] +
                 ab.al(l, j) * pc.H_[i][m - 1][m - 1][0] +
                 ab.be(l, j) * pc.H_[i][m - 1][m - 1][1];
        }
        pc.K_[j][i][l - 1] = acc;
      }

  pc.built |= kBase;
  return pc;
}

void structure_coefficients(PointCoefficients& pc) {
  if (!(pc.built & kBase))
    throw MissingCoefficient("structure_coefficients requires base families");
  const FrameData& fr = pc.fr;
  auto a = [&](int k) -> const Vec3& { return fr.a[k - 1]; };
  auto da = [&](int k, int l) -> const Vec3& { return fr.da_dxi[k - 1][l - 1]; };
  auto d2a = [&](int k, int l, int m) -> const Vec3& {
    return fr.d2a[k - 1][l - 1][m - 1];
  };
  auto dat = [&](int k) -> const Vec3& { return fr.da_dt[k - 1]; };
  const AlphaBetaSeries& ab = pc.ab;

  // L^0_{kli} for i = 1,2 and the i = 3 variant.
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 2; ++l) {
      for (int i = 1; i <= 2; ++i) {
        double acc = (k == i) ? pc.K(0, 0, l) : 0.0;
        for (int m = 1; m <= 2; ++m)
          acc += 2.0 * pc.H(0, i, m, k) * pc.J(0, 0, l, m);
        pc.L0_[k - 1][l - 1][i - 1] = acc;
      }
      pc.L0_[k - 1][l - 1][2] =
          ((k == 3) ? pc.K(0, 0, l) : 0.0) + 2.0 * pc.D(0, l, k);
    }

  // P^0_{ik}; k extended to 3 so the Sbar identity closes.
  const double pref = (pc.I_ * fr.sqrtA0 - fr.A1) / fr.A0;
  const Vec3 cross_sum = a(1).cross(da(3, 2)) + da(3, 1).cross(a(2));
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 3; ++k) {
      double acc = pref * (ab.al(i, 0) * da(k, 1).dot(a(3)) +
                           ab.be(i, 0) * da(k, 2).dot(a(3)));
      for (int l = 1; l <= 2; ++l) {
        for (int m = 1; m <= 2; ++m)
          acc += (ab.al(i, 0) * a(1).dot(d2a(k, l, m)) +
                  ab.be(i, 0) * a(2).dot(d2a(k, l, m))) *
                 pc.J(0, 0, l, m);
        acc += pc.K(0, 0, l) * pc.H(0, i, l, k);
      }
      acc -= cross_sum.dot(ab.al(i, 0) * da(k, 1) + ab.be(i, 0) * da(k, 2)) /
             fr.sqrtA0;
      pc.P0_[i - 1][k - 1] = acc;
    }

  // Q^0_{ik} (i = 1,2) and Q^0_{3k}.
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 3; ++k) {
      double acc =
          ab.al(i, 0) * a(1).dot(dat(k)) + ab.be(i, 0) * a(2).dot(dat(k));
      for (int l = 1; l <= 2; ++l) acc -= pc.H(0, i, l, k) * pc.C0(l);
      pc.Q0_[i - 1][k - 1] = acc;
    }
  for (int k = 1; k <= 2; ++k) {
    double acc = a(3).dot(dat(k));
    for (int l = 1; l <= 2; ++l) acc -= a(3).dot(da(k, l)) * pc.C0(l);
    pc.Q0_[2][k - 1] = acc;
  }
  pc.Q0_[2][2] = 0.0;  // a3 . da3 vanishes identically

  // R^0_{ik} = Q^0_{ik} + H^0_{ik3} (dX/dt . a3)
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k)
      pc.R0_[i - 1][k - 1] = pc.Q0(i, k) + pc.H(0, i, k, 3) * pc.w_n();

  // S^0_{ik} (i = 1,2) and S^0_{3k}.
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 3; ++k) {
      double acc = 0.0;
      for (int l = 1; l <= 2; ++l) {
        for (int m = 1; m <= 2; ++m)
          acc += (ab.al(i, 0) * a(1).dot(d2a(k, l, m)) +
                  ab.be(i, 0) * a(2).dot(d2a(k, l, m))) *
                 pc.J(0, 0, l, m);
        acc += pc.K(0, 0, l) * pc.H(0, i, l, k);
      }
      pc.S0_[i - 1][k - 1] = acc;
    }
  for (int k = 1; k <= 3; ++k) {
    double acc = 0.0;
    for (int l = 1; l <= 2; ++l) {
      for (int m = 1; m <= 2; ++m)
        acc += a(3).dot(d2a(k, l, m)) * pc.J(0, 0, l, m);
      acc += a(3).dot(da(k, l)) * pc.K(0, 0, l);
    }
    pc.S0_[2][k - 1] = acc;
  }

  pc.built |= kStructure;
}

void gap_coefficients(PointCoefficients& pc, const BodyForce* force,
                      const FrictionSample* fric) {
  if (!(pc.built & kBase) || !(pc.built & kStructure))
    throw MissingCoefficient("gap_coefficients requires base and structure");
  require_order(pc.ab, 3, "gap coefficient families");
  const FrameData& fr = pc.fr;
  const GapPoint& gp = pc.gp;
  const AlphaBetaSeries& ab = pc.ab;
  const double h = gp.h;
  if (!(h > 0.0)) throw NonPositiveGap("gap_coefficients: h <= 0");
  auto a = [&](int k) -> const Vec3& { return fr.a[k - 1]; };
  auto da = [&](int k, int l) -> const Vec3& { return fr.da_dxi[k - 1][l - 1]; };
  auto d2a = [&](int k, int l, int m) -> const Vec3& {
    return fr.d2a[k - 1][l - 1][m - 1];
  };
  auto dh = [&](int m) { return gp.dh[m - 1]; };

  // eta(h)
  pc.eta = dh(2) * a(1).cross(a(3)) +
           h * (a(1).cross(da(3, 2)) + da(3, 1).cross(a(2))) +
           dh(1) * a(3).cross(a(2));

  // iota families
  for (int l = 1; l <= 2; ++l)
    for (int m = 1; m <= 2; ++m) {
      pc.iota21_[l - 1][m - 1] =
          h * h * (2.0 * pc.J(2, 0, l, m) + pc.J(1, 1, l, m));
      pc.iota3_[l - 1][m - 1] =
          h * h * h *
          (2.0 * pc.J(3, 0, l, m) + pc.J(2, 1, l, m) + pc.J(2, 1, m, l));
    }

  // tau families
  for (int l = 1; l <= 2; ++l) {
    double t01 = pc.J(1, 0, 3, l), t12 = 5.0 * pc.J(0, 1, 3, l);
    double t23 = 4.0 * pc.J(1, 0, 3, l) + 5.0 * pc.J(0, 1, 3, l);
    for (int m = 1; m <= 2; ++m) {
      t01 += dh(m) * pc.J(1, 0, l, m);
      t12 += dh(m) * pc.J(1, 0, l, m);
      t23 += dh(m) * pc.J(1, 0, l, m);
    }
    t01 += h * (pc.K(1, 0, l) + pc.K(0, 1, l));
    t12 += h * (pc.K(1, 0, l) + pc.K(0, 1, l));
    t23 += h * (pc.K(1, 0, l) + pc.K(0, 1, l));
    pc.tau01_[l - 1] = t01;
    pc.tau12_[l - 1] = t12;
    pc.tau23_[l - 1] = t23;

    double t02 = pc.J(1, 1, 3, l) + 2.0 * pc.J(2, 0, l, 3);
    double t13 = 3.0 * pc.J(1, 1, 3, l) + 4.0 * pc.J(0, 2, 3, l) +
                 2.0 * pc.J(2, 0, 3, l);
    for (int m = 1; m <= 2; ++m) {
      t02 += dh(m) * (2.0 * pc.J(2, 0, l, m) + pc.J(1, 1, l, m));
      t13 += dh(m) * (2.0 * pc.J(2, 0, l, m) + pc.J(1, 1, l, m));
    }
    t02 += h * (pc.K(2, 0, l) + pc.K(1, 1, l) + pc.K(0, 2, l));
    t13 += h * (pc.K(2, 0, l) + pc.K(1, 1, l) + pc.K(0, 2, l));
    pc.tau02_[l - 1] = h * t02;
    pc.tau13_[l - 1] = h * t13;

    double t03 = 3.0 * pc.J(0, 3, 3, l) + 2.0 * pc.J(1, 2, 3, l) +
                 pc.J(2, 1, 3, l);
    for (int m = 1; m <= 2; ++m)
      t03 += dh(m) * (3.0 * pc.J(3, 0, l, m) + 2.0 * pc.J(2, 1, l, m) +
                      pc.J(1, 2, l, m));
    t03 += h * (pc.K(3, 0, l) + pc.K(2, 1, l) + pc.K(1, 2, l) + pc.K(0, 3, l));
    pc.tau03_[l - 1] = h * h * t03;
  }

  // phi families
  {
    double s1 = 0.0, s12 = 0.0, s22 = 0.0, s23 = 0.0, s13 = 0.0;
    for (int m = 1; m <= 2; ++m) {
      s1 += pc.H(1, m, m, 3) - 2.0 / (h * h) * dh(m) * pc.J(0, 0, 3, m);
      s12 += h * pc.H(2, m, m, 3) - dh(m) / h * pc.J(1, 0, m, 3);
      s22 += pc.H(1, m, m, 3) - dh(m) / (h * h) * pc.J(0, 0, 3, m);
      s23 += h * pc.H(2, m, m, 3) - dh(m) / h * pc.J(0, 1, 3, m);
      s13 += dh(m) * (pc.J(2, 0, 3, m) - pc.J(0, 2, 3, m)) +
             h * h * pc.H(3, m, m, 3);
    }
    pc.phi1 = pc.K(0, 0, 3) / h + s1;
    pc.phi12 = s12 + pc.K(1, 0, 3) + pc.K(0, 1, 3) + 3.0 / h * pc.J(1, 0, 3, 3);
    pc.phi22 = 2.0 * s22 + 4.0 / (h * h) * pc.J(0, 0, 3, 3) +
               2.0 / h * pc.K(0, 0, 3);
    pc.phi33 = 3.0 * (s22 + pc.K(0, 0, 3) / h +
                      3.0 / (h * h) * pc.J(0, 0, 3, 3));
    pc.phi23 = 2.0 * (s23 + pc.K(0, 1, 3) + pc.K(1, 0, 3) +
                      5.0 / h * pc.J(1, 0, 3, 3));
    pc.phi13 = s13 + h * (pc.K(2, 0, 3) + pc.K(1, 1, 3) + pc.K(0, 2, 3)) +
               4.0 * pc.J(2, 0, 3, 3) + 2.0 * pc.J(1, 1, 3, 3);
  }

  // L^{a,b}(h) variants. i runs to 3 where a normal-slot variant
  // exists.
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 2; ++l) {
      for (int i = 1; i <= 3; ++i) {
        const double del = (k == i) ? 1.0 : 0.0;
        pc.Lh_[L10][k - 1][l - 1][i - 1] =
            pc.L0(k, l, i) + 2.0 / h * pc.J(0, 0, 3, l) * del;
        pc.Lh_[L20][k - 1][l - 1][i - 1] =
            pc.L0(k, l, i) + 4.0 / h * pc.J(0, 0, 3, l) * del;
        pc.Lh_[L30][k - 1][l - 1][i - 1] =
            pc.L0(k, l, i) + 6.0 / h * pc.J(0, 0, 3, l) * del;
      }
      for (int i = 1; i <= 2; ++i) {
        const double del = (k == i) ? 1.0 : 0.0;
        double h01 = 0.0, h11 = 0.0, h02 = 0.0, h03 = 0.0;
        for (int m = 1; m <= 2; ++m) {
          h01 += pc.H(0, i, m, k) * pc.J(1, 0, m, l);
          h11 += pc.H(0, i, m, k) * pc.J(1, 0, l, m);
          h02 += pc.H(0, i, m, k) * pc.iota21(l, m);
          h03 += pc.H(0, i, m, k) * pc.iota3(l, m);
        }
        pc.Lh_[L01][k - 1][l - 1][i - 1] = 4.0 * h * h01 + del * pc.tau01_[l - 1];
        pc.Lh_[L11][k - 1][l - 1][i - 1] = 4.0 * h * h11 + del * pc.tau12_[l - 1];
        pc.Lh_[L21][k - 1][l - 1][i - 1] = 4.0 * h * h11 + del * pc.tau23_[l - 1];
        pc.Lh_[L02][k - 1][l - 1][i - 1] = 2.0 * h02 + del * pc.tau02_[l - 1];
        pc.Lh_[L12][k - 1][l - 1][i - 1] = 2.0 * h02 + del * pc.tau13_[l - 1];
        pc.Lh_[L03][k - 1][l - 1][i - 1] = 2.0 * h03 + del * pc.tau03_[l - 1];
      }
      {  // normal-slot (i = 3) variants where defined
        const double del3 = (k == 3) ? 1.0 : 0.0;
        pc.Lh_[L01][k - 1][l - 1][2] =
            4.0 * h * pc.D(1, l, k) + del3 * pc.tau01_[l - 1];
        pc.Lh_[L11][k - 1][l - 1][2] =
            4.0 * h * pc.D(1, l, k) + del3 * pc.tau12_[l - 1];
        double a3i = 0.0;
        for (int m = 1; m <= 2; ++m)
          a3i += a(3).dot(da(k, m)) * pc.iota21(l, m);
        pc.Lh_[L02][k - 1][l - 1][2] = 2.0 * a3i + del3 * pc.tau02_[l - 1];
      }
    }

  // Sbar^0_{ik} = S^0 - (A1/A0) D^0 - (1/h) sum_l H^0_{ilk} J^{0,0}_{3l}
  //   + (1/(h sqrtA0)) [ h I D^0_{ik} - (alpha_i da_k1 + beta_i da_k2).eta ]
  // The bracket sign follows the expanded momentum equation (it is the
  // one for which Sbar = P + chi actually holds).
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 3; ++k) {
      double acc = pc.S0(i, k) - fr.A1 / fr.A0 * pc.D(0, i, k);
      for (int l = 1; l <= 2; ++l)
        acc -= pc.H(0, i, l, k) * pc.J(0, 0, 3, l) / h;
      const Vec3 dk =
          ab.al(i, 0) * da(k, 1) + ab.be(i, 0) * da(k, 2);
      acc += (h * pc.I_ * pc.D(0, i, k) - dk.dot(pc.eta)) / (h * fr.sqrtA0);
      pc.Sbar_[i - 1][k - 1] = acc;
    }

  // S^{a,b}(h) variants.
  for (int k = 1; k <= 3; ++k) {
    for (int i = 1; i <= 2; ++i) {
      const double del = (i == k) ? 1.0 : 0.0;
      double hsum = 0.0;
      for (int m = 1; m <= 2; ++m) hsum += pc.H(0, i, m, k) * pc.J(0, 0, 3, m);
      pc.Sh_[S10][i - 1][k - 1] = pc.S0(i, k) + 2.0 / h * hsum + del * pc.phi1;
      pc.Sh_[S20][i - 1][k - 1] = pc.S0(i, k) + 4.0 / h * hsum + del * pc.phi22;
      pc.Sh_[S30][i - 1][k - 1] = pc.S0(i, k) + 6.0 / h * hsum + del * pc.phi33;

      double j10 = 0.0, i21 = 0.0, i3 = 0.0, t01 = 0.0, t12 = 0.0, t02 = 0.0,
             t23 = 0.0, t13 = 0.0, t03 = 0.0;
      for (int l = 1; l <= 2; ++l) {
        for (int m = 1; m <= 2; ++m) {
          const double sec = ab.al(i, 0) * a(1).dot(d2a(k, l, m)) +
                             ab.be(i, 0) * a(2).dot(d2a(k, l, m));
          j10 += sec * pc.J(1, 0, l, m);
          i21 += sec * pc.iota21(l, m);
          i3 += sec * pc.iota3(l, m);
        }
        t01 += pc.H(0, i, l, k) * pc.tau01_[l - 1];
        t12 += pc.H(0, i, l, k) * pc.tau12_[l - 1];
        t02 += pc.H(0, i, l, k) * pc.tau02_[l - 1];
        t23 += pc.H(0, i, l, k) * pc.tau23_[l - 1];
        t13 += pc.H(0, i, l, k) * pc.tau13_[l - 1];
        t03 += pc.H(0, i, l, k) * pc.tau03_[l - 1];
      }
      pc.Sh_[S01][i - 1][k - 1] = 2.0 * h * j10 + t01;
      pc.Sh_[S11][i - 1][k - 1] = 2.0 * h * j10 + t12 + del * pc.phi12;
      pc.Sh_[S21][i - 1][k - 1] = 2.0 * h * j10 + t23 + del * pc.phi23;
      pc.Sh_[S02][i - 1][k - 1] = i21 + t02;
      pc.Sh_[S12][i - 1][k - 1] = i21 + t13 + del * pc.phi13;
      pc.Sh_[S03][i - 1][k - 1] = i3 + t03;
    }
    {  // normal-slot rows where defined
      const double del3 = (k == 3) ? 1.0 : 0.0;
      pc.Sh_[S10][2][k - 1] =
          pc.S0(3, k) + 2.0 / h * pc.D(0, 3, k) + del3 * pc.phi1;
      pc.Sh_[S20][2][k - 1] =
          pc.S0(3, k) + 4.0 / h * pc.D(0, 3, k) + del3 * pc.phi22;
      double j10 = 0.0, i21 = 0.0, t01 = 0.0, t12 = 0.0, t02 = 0.0;
      for (int l = 1; l <= 2; ++l) {
        for (int m = 1; m <= 2; ++m) {
          const double sec = a(3).dot(d2a(k, l, m));
          j10 += sec * pc.J(1, 0, l, m);
          i21 += sec * pc.iota21(l, m);
        }
        t01 += a(3).dot(da(k, l)) * pc.tau01_[l - 1];
        t12 += a(3).dot(da(k, l)) * pc.tau12_[l - 1];
        t02 += a(3).dot(da(k, l)) * pc.tau02_[l - 1];
      }
      pc.Sh_[S01][2][k - 1] = 2.0 * h * j10 + t01;
      pc.Sh_[S11][2][k - 1] = 2.0 * h * j10 + t12 + del3 * pc.phi12;
      pc.Sh_[S02][2][k - 1] = i21 + t02;
    }
  }

  // kappa(h)^0_i
  for (int i = 1; i <= 2; ++i) {
    double acc = 0.0;
    for (int l = 1; l <= 2; ++l) {
      // d/dxi_l (dX/dt . a3)
      const double dwn =
          pc.dat(l).dot(a(3)) + fr.dX_dt.dot(da(3, l));
      acc += dwn * (pc.L0(3, l, i) - fr.A1 / fr.A0 * pc.J(0, 0, i, l));
    }
    acc -= pc.J(0, 0, 3, i) / (h * h) * gp.dht;
    for (int k = 1; k <= 2; ++k)
      acc -= 3.0 / h * pc.J(0, 0, k, i) * gp.d2h_dxidt[k - 1];
    double brk = pc.S0(i, 3);
    for (int l = 1; l <= 2; ++l) {
      brk -= pc.J(0, 0, 3, l) * pc.H(0, i, l, 3) / h;
      brk -= pc.J(0, 0, l, i) / fr.sqrtA0 * da(3, l).dot(pc.eta) / h;
    }
    acc += pc.w_n() * brk;
    pc.kappa0_[i - 1] = acc;
  }

  // chi(h)^0_{ik}
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 3; ++k) {
      const Vec3 dk = ab.al(i, 0) * da(k, 1) + ab.be(i, 0) * da(k, 2);
      double b1 = 0.0, b2 = 0.0;
      for (int l = 1; l <= 2; ++l) {
        b1 += pc.H(0, i, l, k) * ab.al(l, 0);
        b2 += pc.H(0, i, l, k) * ab.be(l, 0);
      }
      b1 -= a(3).cross(a(2)).dot(dk) / fr.sqrtA0;
      b2 -= a(1).cross(a(3)).dot(dk) / fr.sqrtA0;
      pc.chi0_[i - 1][k - 1] = (dh(1) * b1 + dh(2) * b2) / h;
    }

  // psi(h)^0_{ijl}
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int l = 1; l <= 2; ++l)
        pc.psi0_[i - 1][j - 1][l - 1] =
            ((ab.al(l, 0) * dh(1) + ab.be(l, 0) * dh(2)) * ((i == j) ? 1.0 : 0.0) +
             dh(j) * pc.J(0, 0, l, i)) /
            h;

  // F^0_i(h) and Fbar^0_i(h). The xi3 integral uses 8-point
  // Gauss-Legendre; the friction part is added when a sample is given
  // (it depends on the flow state, so solvers usually add it per step
  // through friction_forcing()).
  static const double gl_x[8] = {
      0.5 - 0.5 * 0.9602898564975363, 0.5 - 0.5 * 0.7966664774136267,
      0.5 - 0.5 * 0.5255324099163290, 0.5 - 0.5 * 0.1834346424956498,
      0.5 + 0.5 * 0.1834346424956498, 0.5 + 0.5 * 0.5255324099163290,
      0.5 + 0.5 * 0.7966664774136267, 0.5 + 0.5 * 0.9602898564975363};
  static const double gl_w[8] = {
      0.5 * 0.1012285362903763, 0.5 * 0.2223810344533745,
      0.5 * 0.3137066458778873, 0.5 * 0.3626837833783620,
      0.5 * 0.3626837833783620, 0.5 * 0.3137066458778873,
      0.5 * 0.2223810344533745, 0.5 * 0.1012285362903763};
  for (int i = 1; i <= 2; ++i) {
    double integral = 0.0, lead = 0.0;
    if (force != nullptr) {
      for (int q = 0; q < 8; ++q)
        integral += gl_w[q] * force->eval(i, gl_x[q], fr.xi1, fr.xi2, fr.t);
      lead = force->fbar(i, 0, fr.xi1, fr.xi2, fr.t);
    }
    double fricpart = 0.0;
    if (fric != nullptr)
      fricpart = friction_forcing(pc, i, fric->f_R0, fric->f_R1, fric->s0,
                                  fric->rho0);
    pc.F0_[i - 1] = integral + fricpart;
    pc.Fbar0_[i - 1] = lead + fricpart;
  }

  pc.built |= kGap;
}

PointCoefficients build_point_coefficients(const FrameData& fr,
                                           const GapPoint& gp, int N,
                                           unsigned families,
                                           const BodyForce* force,
                                           const FrictionSample* fric) {
  const AlphaBetaSeries ab = alpha_beta_series(fr, gp, N);
  PointCoefficients pc = base_coefficients(fr, gp, ab);
  if (families & (kStructure | kGap)) structure_coefficients(pc);
  if (families & kGap) gap_coefficients(pc, force, fric);
  return pc;
}

CoefficientTable build_table(const geometry::SurfaceChart& chart,
                             const geometry::GapField& gap,
                             const fd::Grid2D& grid, double t, int N,
                             unsigned families, const BodyForce* force,
                             int threads) {
  CoefficientTable tab;
  tab.grid = grid;
  tab.t = t;
  tab.N = N;
  tab.families = families;
  tab.node.resize(grid.size());

  auto work = [&](int j0, int j1) {
    const double dt_fd = 1e-6;
    for (int j = j0; j < j1; ++j)
      for (int i = 0; i < grid.n1; ++i) {
        const double x1 = grid.x1(i), x2 = grid.x2(j);
        const FrameData fr = geometry::build_frame(chart, x1, x2, t);
        const GapPoint gp = sample_gap(gap, x1, x2, t);
        auto& pc = tab.node[grid.idx(i, j)];
        pc = build_point_coefficients(fr, gp, N, families, force, nullptr);
        const Vec3 xp = chart.dt(x1, x2, t + dt_fd);
        const Vec3 xm = chart.dt(x1, x2, t - dt_fd);
        if ((xp - xm).norm() > 0.0 || fr.dX_dt.norm() > 0.0) {
          const FrameData fp = geometry::build_frame(chart, x1, x2, t + dt_fd);
          const FrameData fm = geometry::build_frame(chart, x1, x2, t - dt_fd);
          pc.wn_dt = (fp.dX_dt.dot(fp.a[2]) - fm.dX_dt.dot(fm.a[2])) /
                     (2.0 * dt_fd);
        }
      }
  };

  if (threads <= 1) {
    work(0, grid.n2);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (grid.n2 + threads - 1) / threads;
    for (int q = 0; q < threads; ++q) {
      const int j0 = q * chunk, j1 = std::min(grid.n2, j0 + chunk);
      if (j0 < j1) pool.emplace_back(work, j0, j1);
    }
    for (auto& th : pool) th.join();
  }
  return tab;
}

}  // namespace filmflow::coeffs
