#include "filmflow/newmodel/stack.hpp"

#include <cmath>

#include "filmflow/errors.hpp"

namespace filmflow::newmodel {

FieldStack FieldStack::zeros(const Grid2D& g, double eps, double t) {
  FieldStack s;
  s.grid = g;
  s.eps = eps;
  s.t = t;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 4; ++k) s.u[i][k] = Array::Zero(g.size());
  for (int k = 0; k < 4; ++k) s.u3[k] = Array::Zero(g.size());
  s.p0 = s.p1 = s.p2 = s.p3 = Array::Zero(g.size());
  return s;
}

namespace {

Array field(const CoefficientTable& tab,
            const std::function<double(const coeffs::PointCoefficients&)>& f) {
  Array out(tab.grid.size());
  for (int q = 0; q < tab.grid.size(); ++q) out[q] = f(tab.node[q]);
  return out;
}

}  // namespace

void eliminate_vertical(FieldStack& s, const CoefficientTable& table,
                        const ModelParams& params) {
  const Grid2D& g = s.grid;
  const double eps = s.eps;
  const double mu = params.mu, rho0 = params.rho0;

  const Array h = field(table, [](const auto& p) { return p.gp.h; });
  const Array h1 = field(table, [](const auto& p) { return p.gp.dh[0]; });
  const Array h2 = field(table, [](const auto& p) { return p.gp.dh[1]; });
  const Array sA0 = field(table, [](const auto& p) { return p.fr.sqrtA0; });
  const Array A1oA0 = field(table, [](const auto& p) { return p.fr.A1 / p.fr.A0; });
  const Array wn = field(table, [](const auto& p) { return p.w_n(); });

  s.u3[0] = wn;

  const Array du0[2][2] = {{fd::dx(g, s.u[0][0]), fd::dy(g, s.u[0][0])},
                           {fd::dx(g, s.u[1][0]), fd::dy(g, s.u[1][0])}};
  const Array du1[2][2] = {{fd::dx(g, s.u[0][1]), fd::dy(g, s.u[0][1])},
                           {fd::dx(g, s.u[1][1]), fd::dy(g, s.u[1][1])}};

  // first-order vertical coefficient
  const Array div_su0 = fd::dx(g, sA0 * s.u[0][0]) + fd::dy(g, sA0 * s.u[1][0]);
  s.u3[1] = -eps * h / sA0 * div_su0 - eps * h * s.u3[0] * A1oA0;

  // second-order vertical coefficient
  {
    const Array div_su1 =
        fd::dx(g, sA0 * s.u[0][1]) + fd::dy(g, sA0 * s.u[1][1]);
    Array corr = Array::Zero(g.size());
    for (int q = 0; q < g.size(); ++q) {
      const auto& pc = table.node[q];
      double acc = 0.0;
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k) {
          const double duk =
              (k <= 2) ? du0[k - 1][l - 1][q] : 0.0;  // B is zero at k = 3
          const double u0k = (k <= 2) ? s.u[k - 1][0][q] : s.u3[0][q];
          acc += duk * pc.B(1, l, k) + u0k * pc.H(1, l, l, k);
        }
      corr[q] = acc;
    }
    s.u3[2] = -eps * h / (2.0 * sA0) * div_su1 +
              0.5 * eps * (h1 * s.u[0][1] + h2 * s.u[1][1]) -
              eps * h * s.u3[1] * A1oA0 - 0.5 * eps * eps * h * h * corr;
  }

  // third-order vertical coefficient
  {
    const Array div_u2 = fd::dx(g, s.u[0][2]) + fd::dy(g, s.u[1][2]);
    const Array du2[2][2] = {{fd::dx(g, s.u[0][2]), fd::dy(g, s.u[0][2])},
                             {fd::dx(g, s.u[1][2]), fd::dy(g, s.u[1][2])}};
    Array lead = div_u2;
    Array br1 = Array::Zero(g.size());
    Array br2 = Array::Zero(g.size());
    for (int q = 0; q < g.size(); ++q) {
      const auto& pc = table.node[q];
      double acc = 0.0;
      for (int k = 1; k <= 3; ++k) {
        const double u2k = (k <= 2) ? s.u[k - 1][2][q] : s.u3[2][q];
        for (int l = 1; l <= 2; ++l) acc += u2k * pc.H(0, l, l, k);
      }
      acc -= 2.0 / h[q] * (s.u[0][2][q] * h1[q] + s.u[1][2][q] * h2[q]);
      lead[q] += acc;

      double b1 = 0.0;
      for (int k = 1; k <= 2; ++k) {
        for (int l = 1; l <= 2; ++l)
          b1 += h[q] * du1[k - 1][l - 1][q] * pc.B(1, l, k);
        b1 += s.u[k - 1][1][q] * pc.B(1, 3, k);
      }
      for (int k = 1; k <= 3; ++k) {
        const double u1k = (k <= 2) ? s.u[k - 1][1][q] : s.u3[1][q];
        for (int l = 1; l <= 2; ++l)
          b1 += h[q] * u1k * pc.H(1, l, l, k);
      }
      br1[q] = b1;

      double b2 = 0.0;
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          b2 += du0[k - 1][l - 1][q] * pc.B(2, l, k);
      for (int k = 1; k <= 3; ++k) {
        const double u0k = (k <= 2) ? s.u[k - 1][0][q] : s.u3[0][q];
        for (int l = 1; l <= 2; ++l) b2 += u0k * pc.H(2, l, l, k);
      }
      br2[q] = b2;
    }
    s.u3[3] = -eps * h / 3.0 * lead - eps * eps * h / 3.0 * br1 -
              std::pow(eps, 3) * h * h * h / 3.0 * br2;
  }

  // pbar^1: full elimination identity or its leading form.
  const Array div_su1 = fd::dx(g, sA0 * s.u[0][1]) + fd::dy(g, sA0 * s.u[1][1]);
  const Array p1_lead =
      mu * (-div_su1 / sA0 + (h1 * s.u[0][1] + h2 * s.u[1][1]) / h);
  if (params.p1_mode == P1Mode::LeadingOrder) {
    s.p1 = p1_lead;
  } else {
    const Array wn_t = field(table, [](const auto& p) { return p.wn_dt; });
    const Array dwn[2] = {fd::dx(g, s.u3[0]), fd::dy(g, s.u3[0])};
    const Array d2wn[3] = {fd::dxx(g, s.u3[0]), fd::dxy(g, s.u3[0]),
                           fd::dyy(g, s.u3[0])};
    Array p1 = p1_lead;
    for (int q = 0; q < g.size(); ++q) {
      const auto& pc = table.node[q];
      double adv = -wn_t[q];
      for (int l = 1; l <= 2; ++l)
        adv -= dwn[l - 1][q] * (s.u[l - 1][0][q] - pc.C0(l));
      for (int k = 1; k <= 2; ++k) {
        double br = pc.Q0(3, k);
        for (int l = 1; l <= 2; ++l)
          br += s.u[l - 1][0][q] * pc.a(3).dot(pc.da(l, k));
        adv -= s.u[k - 1][0][q] * br;
      }
      double visc = pc.J(0, 0, 1, 1) * d2wn[0][q] +
                    2.0 * pc.J(0, 0, 1, 2) * d2wn[1][q] +
                    pc.J(0, 0, 2, 2) * d2wn[2][q];
      for (int k = 1; k <= 3; ++k) {
        const double duk0_l[2] = {
            (k <= 2) ? du0[k - 1][0][q] : dwn[0][q],
            (k <= 2) ? du0[k - 1][1][q] : dwn[1][q]};
        const double u0k = (k <= 2) ? s.u[k - 1][0][q] : s.u3[0][q];
        for (int l = 1; l <= 2; ++l)
          visc += duk0_l[l - 1] * pc.L0(k, l, 3);
        visc += u0k * pc.S0(3, k);
      }
      visc += (div_su0[q] / sA0[q] + s.u3[0][q] * A1oA0[q]) * A1oA0[q];
      double bsum = 0.0;
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k) {
          const double duk = (k <= 2) ? du0[k - 1][l - 1][q] : dwn[l - 1][q];
          const double u0k = (k <= 2) ? s.u[k - 1][0][q] : s.u3[0][q];
          bsum += duk * pc.B(1, l, k) + u0k * pc.H(1, l, l, k);
        }
      visc -= bsum;
      double fsrc = 0.0;
      if (params.force)
        fsrc = params.force->fbar(3, 0, pc.fr.xi1, pc.fr.xi2, pc.fr.t);
      p1[q] += eps * h[q] * (rho0 * adv + mu * visc + rho0 * fsrc);
    }
    s.p1 = p1;
  }

  // pbar^2 (leading form of the second vertical momentum identification)
  {
    const Array div_u2 = fd::dx(g, s.u[0][2]) + fd::dy(g, s.u[1][2]);
    Array p2 = div_u2;
    for (int q = 0; q < g.size(); ++q) {
      const auto& pc = table.node[q];
      double acc = 0.0;
      for (int k = 1; k <= 3; ++k) {
        const double u2k = (k <= 2) ? s.u[k - 1][2][q] : s.u3[2][q];
        for (int l = 1; l <= 2; ++l) acc += u2k * pc.H(0, l, l, k);
      }
      acc -= 2.0 / h[q] * (s.u[0][2][q] * h1[q] + s.u[1][2][q] * h2[q]);
      p2[q] += acc;
    }
    s.p2 = -mu * p2;
  }

  // pbar^3
  {
    const Array dwn[2] = {fd::dx(g, s.u3[0]), fd::dy(g, s.u3[0])};
    const Array du2[2][2] = {{fd::dx(g, s.u[0][2]), fd::dy(g, s.u[0][2])},
                             {fd::dx(g, s.u[1][2]), fd::dy(g, s.u[1][2])}};
    Array p3(g.size());
    for (int q = 0; q < g.size(); ++q) {
      const auto& pc = table.node[q];
      double inertial = 0.0;
      for (int k = 1; k <= 2; ++k) {
        double br = pc.Q0(3, k) + dwn[k - 1][q];
        for (int l = 1; l <= 2; ++l)
          br += s.u[l - 1][0][q] *
                (pc.a(3).dot(pc.da(k, l)) + pc.a(3).dot(pc.da(l, k)));
        inertial += s.u[k - 1][2][q] * br;
      }
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 2; ++k)
          inertial += s.u[l - 1][1][q] * s.u[k - 1][1][q] *
                      pc.a(3).dot(pc.da(k, l));
      double visc = 0.0;
      {
        double div2 = du2[0][0][q] + du2[1][1][q];
        for (int k = 1; k <= 3; ++k) {
          const double u2k = (k <= 2) ? s.u[k - 1][2][q] : s.u3[2][q];
          for (int l = 1; l <= 2; ++l) div2 += u2k * pc.H(0, l, l, k);
        }
        div2 -= 2.0 / h[q] * (s.u[0][2][q] * h1[q] + s.u[1][2][q] * h2[q]);
        double hs = 0.0;
        for (int m = 1; m <= 2; ++m) hs += pc.H(0, m, m, 3);
        visc -= div2 * hs;
      }
      for (int k = 1; k <= 2; ++k) {
        for (int l = 1; l <= 2; ++l)
          visc += du2[k - 1][l - 1][q] * pc.Lh(coeffs::L20, k, l, 3);
        visc += s.u[k - 1][2][q] * pc.Sh(coeffs::S20, 3, k);
      }
      double fsrc = 0.0;
      if (params.force)
        fsrc = params.force->fbar(3, 2, pc.fr.xi1, pc.fr.xi2, pc.fr.t);
      p3[q] = -eps * rho0 * h[q] / 3.0 * inertial +
              eps * mu * h[q] / 3.0 * visc + eps * rho0 * h[q] / 3.0 * fsrc;
    }
    s.p3 = p3;
  }
}

double vertical_closure_defect(const FieldStack& s,
                               const CoefficientTable& table) {
  const Grid2D& g = s.grid;
  const Array dht = field(table, [](const auto& p) { return p.gp.dht; });
  double worst = 0.0;
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 1; i < g.n1 - 1; ++i) {
      const int q = g.idx(i, j);
      const double sum = s.u3[1][q] + s.u3[2][q] + s.u3[3][q];
      worst = std::max(worst, std::abs(sum - s.eps * dht[q]));
    }
  return worst;
}

StackDerivs stack_derivs(const FieldStack& s) {
  StackDerivs d;
  const Grid2D& g = s.grid;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 4; ++k) {
      d.du[i][k][0] = fd::dx(g, s.u[i][k]);
      d.du[i][k][1] = fd::dy(g, s.u[i][k]);
      d.d2u[i][k][0] = fd::dxx(g, s.u[i][k]);
      d.d2u[i][k][1] = fd::dxy(g, s.u[i][k]);
      d.d2u[i][k][2] = fd::dyy(g, s.u[i][k]);
    }
  for (int k = 0; k < 4; ++k) {
    d.du3[k][0] = fd::dx(g, s.u3[k]);
    d.du3[k][1] = fd::dy(g, s.u3[k]);
  }
  const Array* ps[4] = {&s.p0, &s.p1, &s.p2, &s.p3};
  for (int k = 0; k < 4; ++k) {
    d.dp[k][0] = fd::dx(g, *ps[k]);
    d.dp[k][1] = fd::dy(g, *ps[k]);
  }
  return d;
}

namespace {

struct NodeView {
  const FieldStack& s;
  const StackDerivs& d;
  int q;
  // one-based accessors at one node; k = 3 returns the vertical slot
  double u(int k, int n) const {
    return k == 3 ? s.u3[n][q] : s.u[k - 1][n][q];
  }
  double du(int k, int n, int l) const {
    return k == 3 ? d.du3[n][l - 1][q] : d.du[k - 1][n][l - 1][q];
  }
  double d2u(int i, int n, int l, int m) const {
    const int slot = (l == 1 && m == 1) ? 0 : (l == 2 && m == 2) ? 2 : 1;
    return d.d2u[i - 1][n][slot][q];
  }
  double p(int n) const {
    return n == 0 ? s.p0[q] : n == 1 ? s.p1[q] : n == 2 ? s.p2[q] : s.p3[q];
  }
  double dp(int n, int l) const { return d.dp[n][l - 1][q]; }
};

double body_force(const ModelParams& params, const coeffs::PointCoefficients& pc,
                  int i, int n) {
  if (!params.force || n > params.force->max_order()) return 0.0;
  return params.force->fbar(i, n, pc.fr.xi1, pc.fr.xi2, pc.fr.t);
}

void require_eps(double eps) {
  if (eps < 1e-4)
    throw EpsilonTooSmall("eps = " + std::to_string(eps) +
                          " below the 1e-4 conditioning guard");
}

}  // namespace

std::pair<Array, Array> u0_tendency(const FieldStack& s,
                                    const CoefficientTable& table,
                                    const ModelParams& params,
                                    bool include_diffusion) {
  require_eps(s.eps);
  const Grid2D& g = s.grid;
  const double eps = s.eps, nu = params.nu(), rho0 = params.rho0;
  const StackDerivs d = stack_derivs(s);
  Array T1(g.size()), T2(g.size());
  for (int q = 0; q < g.size(); ++q) {
    const auto& pc = table.node[q];
    const NodeView nv{s, d, q};
    const double h = pc.gp.h;
    for (int i = 1; i <= 2; ++i) {
      double T = 0.0;
      for (int l = 1; l <= 2; ++l)
        T -= nv.du(i, 0, l) * (nv.u(l, 0) - pc.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double br = pc.Q0(i, k);
        for (int l = 1; l <= 2; ++l) br += nv.u(l, 0) * pc.H(0, i, l, k);
        T -= nv.u(k, 0) * br;
      }
      // vanishes when ubar_3^0 carries the surface normal velocity
      T -= nv.u(i, 1) * (nv.u(3, 0) - pc.w_n()) / (eps * h);
      T -= (pc.al(i, 0) * nv.dp(0, 1) + pc.be(i, 0) * nv.dp(0, 2)) / rho0;

      double visc = 0.0;
      if (include_diffusion)
        visc += pc.J(0, 0, 1, 1) * nv.d2u(i, 0, 1, 1) +
                2.0 * pc.J(0, 0, 1, 2) * nv.d2u(i, 0, 1, 2) +
                pc.J(0, 0, 2, 2) * nv.d2u(i, 0, 2, 2);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          visc += nv.du(k, 0, l) * pc.L0(k, l, i);
      for (int k = 1; k <= 3; ++k) visc += nv.u(k, 0) * pc.S0(i, k);
      visc += nv.u(i, 1) * (pc.fr.A1 / pc.fr.A0) / (eps * h);
      visc += 2.0 * nv.u(i, 2) / (eps * eps * h * h);
      T += nu * visc;

      T += body_force(params, pc, i, 0);
      (i == 1 ? T1[q] : T2[q]) = T;
    }
  }
  return {T1, T2};
}

Group1Residuals residual_group1(const FieldStack& s,
                                const CoefficientTable& table,
                                const ModelParams& params) {
  require_eps(s.eps);
  const Grid2D& g = s.grid;
  const double eps = s.eps, nu = params.nu(), rho0 = params.rho0;
  const StackDerivs d = stack_derivs(s);

  Group1Residuals out;
  {
    auto [t1, t2] = u0_tendency(s, table, params, true);
    out.r_u0[0] = t1;
    out.r_u0[1] = t2;
  }
  for (auto& a : out.r_u1) a.resize(g.size());
  for (auto& a : out.r_u2) a.resize(g.size());
  for (auto& a : out.r_u3) a.resize(g.size());
  out.r_div3.resize(g.size());

  for (int q = 0; q < g.size(); ++q) {
    const auto& pc = table.node[q];
    const NodeView nv{s, d, q};
    const double h = pc.gp.h;
    const double h_l[2] = {pc.gp.dh[0], pc.gp.dh[1]};
    const double wn = pc.w_n();

    // ---- tendency of ubar_i^1 ----
    for (int i = 1; i <= 2; ++i) {
      double T = 0.0;
      for (int l = 1; l <= 2; ++l)
        T -= nv.du(i, 1, l) * (nv.u(l, 0) - pc.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double br = pc.Q0(i, k);
        for (int l = 1; l <= 2; ++l) {
          double hd = pc.H(0, i, l, k);
          if (k == i) hd -= h_l[l - 1] / h;
          br += nv.u(l, 0) * hd;
        }
        T -= nv.u(k, 1) * br;
      }
      for (int l = 1; l <= 2; ++l) {
        double br = nv.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) br += nv.u(k, 0) * pc.H(0, i, l, k);
        T -= nv.u(l, 1) * br;
      }
      T += nv.u(i, 1) * (pc.gp.dht + pc.C0(3)) / h;
      for (int l = 1; l <= 2; ++l) {
        double br = nv.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) br += nv.u(k, 0) * pc.H(0, i, l, k);
        double inner = -pc.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) inner += pc.B(1, l, m) * nv.u(m, 0);
        T -= eps * h * br * inner;
      }
      T -= 2.0 * nv.u(i, 2) * (nv.u(3, 0) - wn) / (eps * h);
      T -= nv.u(i, 1) * nv.u(3, 1) / (eps * h);

      for (int l = 1; l <= 2; ++l) {
        T -= nv.dp(1, l) * pc.J(0, 0, i, l) / rho0;
        T -= eps * h * nv.dp(0, l) * pc.J(0, 1, i, l) / rho0;
      }
      T -= nv.p(1) * pc.J(0, 0, i, 3) / (rho0 * h);

      double visc = pc.J(0, 0, 1, 1) * nv.d2u(i, 1, 1, 1) +
                    2.0 * pc.J(0, 0, 1, 2) * nv.d2u(i, 1, 1, 2) +
                    pc.J(0, 0, 2, 2) * nv.d2u(i, 1, 2, 2);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          visc += nv.du(k, 1, l) * pc.Lh(coeffs::L10, k, l, i);
        visc += nv.u(k, 1) * pc.Sh(coeffs::S10, i, k);
      }
      {
        double e1 = 2.0 * h *
                    (pc.J(1, 0, 1, 1) * nv.d2u(i, 0, 1, 1) +
                     (pc.J(1, 0, 1, 2) + pc.J(1, 0, 2, 1)) * nv.d2u(i, 0, 1, 2) +
                     pc.J(1, 0, 2, 2) * nv.d2u(i, 0, 2, 2));
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e1 += nv.du(k, 0, l) * pc.Lh(coeffs::L01, k, l, i);
          e1 += nv.u(k, 0) * pc.Sh(coeffs::S01, i, k);
        }
        visc += eps * e1;
      }
      visc += 2.0 * nv.u(i, 2) * (pc.fr.A1 / pc.fr.A0) / (eps * h);
      visc += 6.0 * nv.u(i, 3) / (eps * eps * h * h);
      T += nu * visc;

      T += body_force(params, pc, i, 1);
      out.r_u1[i - 1][q] = T;
    }

    // ---- tendency of ubar_i^2 ----
    for (int i = 1; i <= 2; ++i) {
      double T = 0.0;
      for (int l = 1; l <= 2; ++l)
        T -= nv.du(i, 2, l) * (nv.u(l, 0) - pc.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double br = pc.Q0(i, k);
        for (int l = 1; l <= 2; ++l) br += nv.u(l, 0) * pc.H(0, i, l, k);
        T -= nv.u(k, 2) * br;
      }
      {
        double br = nv.u(3, 1) / eps - pc.gp.dht - pc.C0(3);
        for (int l = 1; l <= 2; ++l) br -= nv.u(l, 0) * h_l[l - 1];
        T -= 2.0 * nv.u(i, 2) * br / h;
      }
      T -= nv.u(3, 2) * nv.u(i, 1) / (eps * h);
      for (int l = 1; l <= 2; ++l) {
        double lhs = nv.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) lhs += nv.u(k, 0) * pc.H(0, i, l, k);
        double rhs = nv.u(l, 2);
        for (int m = 1; m <= 2; ++m) rhs += eps * h * nv.u(m, 1) * pc.B(1, l, m);
        double inner2 = -pc.Cij(2, 1, l);
        for (int m = 1; m <= 2; ++m) inner2 += nv.u(m, 0) * pc.B(2, l, m);
        rhs += eps * eps * h * h * inner2;
        T -= lhs * rhs;
      }
      for (int l = 1; l <= 2; ++l) {
        double lhs = nv.du(i, 1, l);
        for (int k = 1; k <= 3; ++k) lhs += nv.u(k, 1) * pc.H(0, i, l, k);
        double rhs = nv.u(l, 1) - eps * h * pc.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) rhs += eps * h * nv.u(m, 0) * pc.B(1, l, m);
        T -= lhs * rhs;
      }
      {
        double br = -eps * pc.Cij(1, 0, 3);
        for (int l = 1; l <= 2; ++l) {
          br += eps * nv.u(l, 0) * pc.B(1, 3, l);
          br -= nv.u(l, 1) * h_l[l - 1] / h;
        }
        T -= nv.u(i, 1) * br;
      }
      T -= 3.0 * nv.u(i, 3) * (nv.u(3, 0) - wn) / (eps * h);

      for (int l = 1; l <= 2; ++l) {
        T -= nv.dp(2, l) * pc.J(0, 0, i, l) / rho0;
        T -= eps * h * nv.dp(1, l) * pc.J(0, 1, i, l) / rho0;
        T -= eps * eps * h * h * nv.dp(0, l) * pc.J(0, 2, i, l) / rho0;
      }
      T -= 2.0 * nv.p(2) * pc.J(0, 0, i, 3) / (rho0 * h);
      T -= eps * nv.p(1) * pc.J(0, 1, i, 3) / rho0;

      double visc = 0.0;
      {
        double hs = 0.0;
        for (int m = 1; m <= 2; ++m) hs += pc.H(0, m, m, 3);
        visc += 3.0 * nv.u(i, 3) * hs / (eps * h);
      }
      visc += pc.J(0, 0, 1, 1) * nv.d2u(i, 2, 1, 1) +
              2.0 * pc.J(0, 0, 1, 2) * nv.d2u(i, 2, 1, 2) +
              pc.J(0, 0, 2, 2) * nv.d2u(i, 2, 2, 2);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          visc += nv.du(k, 2, l) * pc.Lh(coeffs::L20, k, l, i);
        visc += nv.u(k, 2) * pc.Sh(coeffs::S20, i, k);
      }
      {
        double e1 = 2.0 * h *
                    (pc.J(1, 0, 1, 1) * nv.d2u(i, 1, 1, 1) +
                     (pc.J(1, 0, 1, 2) + pc.J(1, 0, 2, 1)) * nv.d2u(i, 1, 1, 2) +
                     pc.J(1, 0, 2, 2) * nv.d2u(i, 1, 2, 2));
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e1 += nv.du(k, 1, l) * pc.Lh(coeffs::L11, k, l, i);
          e1 += nv.u(k, 1) * pc.Sh(coeffs::S11, i, k);
        }
        visc += eps * e1;
      }
      {
        double e2 = pc.iota21(1, 1) * nv.d2u(i, 0, 1, 1) +
                    (pc.iota21(1, 2) + pc.iota21(2, 1)) * nv.d2u(i, 0, 1, 2) +
                    pc.iota21(2, 2) * nv.d2u(i, 0, 2, 2);
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e2 += nv.du(k, 0, l) * pc.Lh(coeffs::L02, k, l, i);
          e2 += nv.u(k, 0) * pc.Sh(coeffs::S02, i, k);
        }
        visc += eps * eps * e2;
      }
      T += nu * visc;

      T += body_force(params, pc, i, 2);
      out.r_u2[i - 1][q] = T;
    }

    // ---- tendency of ubar_i^3 ----
    for (int i = 1; i <= 2; ++i) {
      double T = 0.0;
      for (int l = 1; l <= 2; ++l)
        T -= nv.du(i, 3, l) * (nv.u(l, 0) - pc.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double br = pc.Q0(i, k);
        for (int l = 1; l <= 2; ++l) br += pc.H(0, i, l, k) * nv.u(l, 0);
        T -= nv.u(k, 3) * br;
      }
      for (int k = 1; k <= 2; ++k) {
        double br = nv.du(i, 0, k);
        for (int m = 1; m <= 3; ++m) br += nv.u(m, 0) * pc.H(0, i, k, m);
        T -= nv.u(k, 3) * br;
      }
      {
        double br = nv.u(3, 1) / eps - pc.gp.dht - pc.C0(3);
        for (int m = 1; m <= 2; ++m) br -= nv.u(m, 0) * h_l[m - 1];
        T -= 3.0 * nv.u(i, 3) * br / h;
      }
      T -= nv.u(3, 3) * nv.u(i, 1) / (eps * h);
      for (int l = 1; l <= 2; ++l) {
        double rhs = nv.u(l, 1) - eps * h * pc.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) rhs += eps * h * nv.u(m, 0) * pc.B(1, l, m);
        T -= nv.du(i, 2, l) * rhs;
      }
      for (int k = 1; k <= 3; ++k) {
        double hsum = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double rhs = nv.u(l, 1) - eps * h * pc.Cij(1, 0, l);
          for (int m = 1; m <= 2; ++m)
            rhs += eps * h * nv.u(m, 0) * pc.B(1, l, m);
          hsum += pc.H(0, i, l, k) * rhs;
        }
        T -= nv.u(k, 2) * hsum;
      }
      for (int k = 1; k <= 2; ++k) {
        double br = nv.du(i, 1, k) - h_l[k - 1] / h * nv.u(i, 1);
        for (int m = 1; m <= 3; ++m) br += nv.u(m, 1) * pc.H(0, i, k, m);
        // eps h sum_l (du_i^0/dxi_l + sum_m u_m^0 H^0_{ilm}) B^1_{lk}:
        // the display leaves both inner indices dangling; read with the
        // covariant-derivative combination in l,m and B paired to k.
        double einner = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double lhs = nv.du(i, 0, l);
          for (int m = 1; m <= 3; ++m) lhs += nv.u(m, 0) * pc.H(0, i, l, m);
          einner += lhs * pc.B(1, l, k);
        }
        br += eps * h * einner;
        T -= nv.u(k, 2) * br;
      }
      {
        double br = nv.u(3, 2) / (eps * h) - eps * pc.Cij(1, 0, 3);
        for (int k = 1; k <= 2; ++k) {
          br -= nv.u(k, 1) * h_l[k - 1] / h;
          br += eps * nv.u(k, 0) * pc.B(1, 3, k);
        }
        T -= 2.0 * nv.u(i, 2) * br;
      }
      for (int l = 1; l <= 2; ++l) {
        double lhs = nv.du(i, 1, l);
        for (int k = 1; k <= 3; ++k) lhs += nv.u(k, 1) * pc.H(0, i, l, k);
        double rhs = -eps * h * pc.Cij(2, 1, l);
        for (int m = 1; m <= 2; ++m)
          rhs += nv.u(m, 1) * pc.B(1, l, m) + eps * h * nv.u(m, 0) * pc.B(2, l, m);
        T -= eps * h * lhs * rhs;
      }
      {
        double br = 0.0;
        for (int k = 1; k <= 2; ++k)
          br += nv.u(k, 1) * pc.B(1, 3, k) + eps * h * nv.u(k, 0) * pc.B(2, 3, k) -
                eps * h * pc.Cij(2, 1, 3);
        T -= eps * nv.u(i, 1) * br;
      }
      for (int k = 1; k <= 2; ++k) {
        double lsum = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double lhs = nv.du(i, 0, l);
          for (int m = 1; m <= 3; ++m) lhs += nv.u(m, 0) * pc.H(0, i, l, m);
          lsum += lhs * pc.B(2, l, k);
        }
        T -= eps * eps * h * h * nv.u(k, 1) * lsum;
      }
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l) {
          const double lhs = nv.du(i, 0, l) + nv.u(k, 0) * pc.H(0, i, l, k);
          double rhs = -pc.Cij(3, 2, l);
          for (int m = 1; m <= 2; ++m) rhs += nv.u(m, 0) * pc.B(3, l, m);
          T -= std::pow(eps * h, 3) * lhs * rhs;
        }
      }

      for (int l = 1; l <= 2; ++l) {
        T -= nv.dp(3, l) * pc.J(0, 0, i, l) / rho0;
        T -= eps * h * nv.dp(2, l) * pc.J(0, 1, i, l) / rho0;
        T -= eps * eps * h * h * nv.dp(1, l) * pc.J(0, 2, i, l) / rho0;
        T -= std::pow(eps * h, 3) * nv.dp(0, l) * pc.J(0, 3, i, l) / rho0;
      }
      T -= 3.0 * nv.p(3) * pc.J(0, 0, i, 3) / (rho0 * h);
      T -= 2.0 * eps * nv.p(2) * pc.J(0, 1, i, 3) / rho0;
      T -= eps * eps * h * nv.p(1) * pc.J(0, 2, i, 3) / rho0;

      double visc = pc.J(0, 0, 1, 1) * nv.d2u(i, 3, 1, 1) +
                    2.0 * pc.J(0, 0, 1, 2) * nv.d2u(i, 3, 1, 2) +
                    pc.J(0, 0, 2, 2) * nv.d2u(i, 3, 2, 2);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          visc += nv.du(k, 3, l) * pc.Lh(coeffs::L30, k, l, i);
        visc += nv.u(k, 3) * pc.Sh(coeffs::S30, i, k);
      }
      visc += 2.0 * eps * h *
              (pc.J(1, 0, 1, 1) * nv.d2u(i, 2, 1, 1) +
               (pc.J(1, 0, 1, 2) + pc.J(1, 0, 2, 1)) * nv.d2u(i, 2, 1, 2) +
               pc.J(1, 0, 2, 2) * nv.d2u(i, 2, 2, 2));
      {
        double e1 = 0.0;
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e1 += nv.du(k, 2, l) * pc.Lh(coeffs::L21, k, l, i);
          e1 += nv.u(k, 2) * pc.Sh(coeffs::S21, i, k);
        }
        visc += eps * e1;
      }
      {
        double e2 = pc.iota21(1, 1) * nv.d2u(i, 1, 1, 1) +
                    (pc.iota21(1, 2) + pc.iota21(2, 1)) * nv.d2u(i, 1, 1, 2) +
                    pc.iota21(2, 2) * nv.d2u(i, 1, 2, 2);
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e2 += nv.du(k, 1, l) * pc.Lh(coeffs::L12, k, l, i);
          e2 += nv.u(k, 1) * pc.Sh(coeffs::S12, i, k);
        }
        visc += eps * eps * e2;
      }
      {
        double e3 = pc.iota3(1, 1) * nv.d2u(i, 0, 1, 1) +
                    (pc.iota3(1, 2) + pc.iota3(2, 1)) * nv.d2u(i, 0, 1, 2) +
                    pc.iota3(2, 2) * nv.d2u(i, 0, 2, 2);
        for (int k = 1; k <= 3; ++k) {
          for (int l = 1; l <= 2; ++l)
            e3 += nv.du(k, 0, l) * pc.Lh(coeffs::L03, k, l, i);
          e3 += nv.u(k, 0) * pc.Sh(coeffs::S03, i, k);
        }
        visc += std::pow(eps, 3) * e3;
      }
      T += nu * visc;

      T += body_force(params, pc, i, 3);
      out.r_u3[i - 1][q] = T;
    }

    // ---- cubic-order incompressibility constraint residual ----
    {
      double R = nv.du(1, 3, 1) + nv.du(2, 3, 2);
      for (int k = 1; k <= 3; ++k) {
        double hs = 0.0;
        for (int l = 1; l <= 2; ++l) hs += pc.H(0, l, l, k);
        R += nv.u(k, 3) * hs;
      }
      for (int k = 1; k <= 2; ++k) R -= 3.0 / h * nv.u(k, 3) * h_l[k - 1];
      {
        double e1 = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e1 += h * nv.du(k, 2, l) * pc.B(1, l, k);
        for (int k = 1; k <= 3; ++k) {
          double hs = 0.0;
          for (int l = 1; l <= 2; ++l) hs += pc.H(1, l, l, k);
          e1 += h * nv.u(k, 2) * hs;
        }
        for (int k = 1; k <= 2; ++k) e1 += 2.0 * nv.u(k, 2) * pc.B(1, 3, k);
        R += eps * e1;
      }
      {
        double e2 = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e2 += h * h * nv.du(k, 1, l) * pc.B(2, l, k);
        for (int k = 1; k <= 3; ++k) {
          double hs = 0.0;
          for (int l = 1; l <= 2; ++l) hs += pc.H(2, l, l, k);
          e2 += h * h * nv.u(k, 1) * hs;
        }
        for (int k = 1; k <= 2; ++k) e2 += h * nv.u(k, 1) * pc.B(2, 3, k);
        R += eps * eps * e2;
      }
      {
        double e3 = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e3 += nv.du(k, 0, l) * pc.B(3, l, k);
        for (int k = 1; k <= 3; ++k) {
          double hs = 0.0;
          for (int l = 1; l <= 2; ++l) hs += pc.H(3, l, l, k);
          e3 += nv.u(k, 0) * hs;
        }
        R += std::pow(eps * h, 3) * e3;
      }
      out.r_div3[q] = R;
    }
  }
  return out;
}

}  // namespace filmflow::newmodel
