#include "literal_equations.hpp"

#include <cmath>

#include "filmflow/fd/ops.hpp"

namespace filmflow::testsupport {

namespace {

// Per-node view with one-based accessors (k = 3
// addressing the vertical slot).
struct P {
  const FieldStack& s;
  const StackDerivs& d;
  const coeffs::PointCoefficients& pc;
  int q;

  double u(int k, int n) const { return k == 3 ? s.u3[n][q] : s.u[k - 1][n][q]; }
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
  double dh(int l) const { return pc.gp.dh[l - 1]; }
  double h() const { return pc.gp.h; }
  double wn() const { return pc.w_n(); }
  double f(const ModelParams& prm, int i, int n) const {
    if (!prm.force || n > prm.force->max_order()) return 0.0;
    return prm.force->fbar(i, n, pc.fr.xi1, pc.fr.xi2, pc.fr.t);
  }
};

}  // namespace

LiteralGroup1 literal_group1(const FieldStack& s, const CoefficientTable& tab,
                             const ModelParams& prm) {
  const auto d = newmodel::stack_derivs(s);
  const fd::Grid2D& g = s.grid;
  const double eps = s.eps, nu = prm.nu(), rho0 = prm.rho0;
  LiteralGroup1 out;
  for (auto* a : {&out.r_u0, &out.r_u1, &out.r_u2, &out.r_u3})
    for (auto& f : *a) f.resize(g.size());
  out.r_div3.resize(g.size());

  for (int q = 0; q < g.size(); ++q) {
    const P v{s, d, tab.node[q], q};
    const auto& c = tab.node[q];
    const double h = v.h();

    for (int i = 1; i <= 2; ++i) {
      // ---------- terms multiplied by xi3^0 ----------
      double lhs = 0.0;
      for (int l = 1; l <= 2; ++l)
        lhs += v.du(i, 0, l) * (v.u(l, 0) - c.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double inner = c.Q0(i, k);
        for (int l = 1; l <= 2; ++l) inner += v.u(l, 0) * c.H(0, i, l, k);
        lhs += v.u(k, 0) * inner;
      }
      lhs += 1.0 / (eps * h) * v.u(i, 1) * (v.u(3, 0) - v.wn());

      double rhs = -1.0 / rho0 *
                   (c.al(i, 0) * v.dp(0, 1) + c.be(i, 0) * v.dp(0, 2));
      double vis = 0.0;
      for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
          vis += v.d2u(i, 0, l, m) * c.J(0, 0, l, m);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l) vis += v.du(k, 0, l) * c.L0(k, l, i);
      for (int k = 1; k <= 3; ++k) vis += v.u(k, 0) * c.S0(i, k);
      vis += 1.0 / (eps * h) * (c.fr.A1 / c.fr.A0) * v.u(i, 1);
      vis += 2.0 / (eps * eps * h * h) * v.u(i, 2);
      rhs += nu * vis + v.f(prm, i, 0);
      out.r_u0[i - 1][q] = rhs - lhs;
    }

    for (int i = 1; i <= 2; ++i) {
      // ---------- terms multiplied by xi3^1 ----------
      double lhs = 0.0;
      for (int l = 1; l <= 2; ++l)
        lhs += v.du(i, 1, l) * (v.u(l, 0) - c.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double inner = c.Q0(i, k);
        for (int l = 1; l <= 2; ++l)
          inner +=
              v.u(l, 0) * (c.H(0, i, l, k) -
                           ((k == i) ? v.dh(l) / h : 0.0));
        lhs += v.u(k, 1) * inner;
      }
      for (int l = 1; l <= 2; ++l) {
        double inner = v.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) inner += v.u(k, 0) * c.H(0, i, l, k);
        lhs += v.u(l, 1) * inner;
      }
      lhs -= 1.0 / h * v.u(i, 1) * (c.gp.dht + c.C0(3));
      for (int l = 1; l <= 2; ++l) {
        double inner = v.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) inner += v.u(k, 0) * c.H(0, i, l, k);
        double brk = -c.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) brk += c.B(1, l, m) * v.u(m, 0);
        lhs += eps * h * inner * brk;
      }
      lhs += 2.0 / (eps * h) * v.u(i, 2) * (v.u(3, 0) - v.wn());
      lhs += 1.0 / (eps * h) * v.u(i, 1) * v.u(3, 1);

      double rhs = 0.0;
      for (int l = 1; l <= 2; ++l) rhs -= v.dp(1, l) * c.J(0, 0, i, l) / rho0;
      for (int l = 1; l <= 2; ++l)
        rhs -= eps * h / rho0 * v.dp(0, l) * c.J(0, 1, i, l);
      rhs -= 1.0 / (rho0 * h) * v.p(1) * c.J(0, 0, i, 3);
      double vis = 0.0;
      for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
          vis += v.d2u(i, 1, l, m) * c.J(0, 0, l, m);
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k)
          vis += v.du(k, 1, l) * c.Lh(coeffs::L10, k, l, i);
      for (int k = 1; k <= 3; ++k) vis += v.u(k, 1) * c.Sh(coeffs::S10, i, k);
      {
        double e = 0.0;
        for (int m = 1; m <= 2; ++m)
          for (int l = 1; l <= 2; ++l)
            e += 2.0 * h * v.d2u(i, 0, l, m) * c.J(1, 0, l, m);
        for (int l = 1; l <= 2; ++l)
          for (int k = 1; k <= 3; ++k)
            e += v.du(k, 0, l) * c.Lh(coeffs::L01, k, l, i);
        for (int k = 1; k <= 3; ++k) e += v.u(k, 0) * c.Sh(coeffs::S01, i, k);
        vis += eps * e;
      }
      vis += 2.0 / (eps * h) * v.u(i, 2) * c.fr.A1 / c.fr.A0;
      vis += 6.0 / (eps * eps * h * h) * v.u(i, 3);
      rhs += nu * vis + v.f(prm, i, 1);
      out.r_u1[i - 1][q] = rhs - lhs;
    }

    for (int i = 1; i <= 2; ++i) {
      // ---------- terms multiplied by xi3^2 ----------
      double lhs = 0.0;
      for (int l = 1; l <= 2; ++l)
        lhs += v.du(i, 2, l) * (v.u(l, 0) - c.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double inner = c.Q0(i, k);
        for (int l = 1; l <= 2; ++l) inner += v.u(l, 0) * c.H(0, i, l, k);
        lhs += v.u(k, 2) * inner;
      }
      {
        double brk = v.u(3, 1) / eps;
        for (int l = 1; l <= 2; ++l) brk -= v.u(l, 0) * v.dh(l);
        brk -= c.gp.dht + c.C0(3);
        lhs += 2.0 / h * v.u(i, 2) * brk;
      }
      lhs += 1.0 / (eps * h) * v.u(3, 2) * v.u(i, 1);
      for (int l = 1; l <= 2; ++l) {
        double inner = v.du(i, 0, l);
        for (int k = 1; k <= 3; ++k) inner += v.u(k, 0) * c.H(0, i, l, k);
        double brk = v.u(l, 2);
        for (int m = 1; m <= 2; ++m) brk += eps * h * v.u(m, 1) * c.B(1, l, m);
        double b2 = -c.Cij(2, 1, l);
        for (int m = 1; m <= 2; ++m) b2 += v.u(m, 0) * c.B(2, l, m);
        brk += eps * h * eps * h * b2;
        lhs += inner * brk;
      }
      for (int l = 1; l <= 2; ++l) {
        double inner = v.du(i, 1, l);
        for (int k = 1; k <= 3; ++k) inner += v.u(k, 1) * c.H(0, i, l, k);
        double brk = v.u(l, 1) - eps * h * c.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) brk += eps * h * v.u(m, 0) * c.B(1, l, m);
        lhs += inner * brk;
      }
      {
        double brk = -eps * c.Cij(1, 0, 3);
        for (int l = 1; l <= 2; ++l) brk += eps * v.u(l, 0) * c.B(1, 3, l);
        for (int l = 1; l <= 2; ++l) brk -= v.u(l, 1) * v.dh(l) / h;
        lhs += v.u(i, 1) * brk;
      }
      lhs += 3.0 / (eps * h) * v.u(i, 3) * (v.u(3, 0) - v.wn());

      double rhs = 0.0;
      for (int l = 1; l <= 2; ++l) {
        rhs -= (v.dp(2, l) * c.J(0, 0, i, l) +
                eps * h * v.dp(1, l) * c.J(0, 1, i, l) +
                eps * h * eps * h * v.dp(0, l) * c.J(0, 2, i, l)) /
               rho0;
      }
      rhs -= 2.0 / (rho0 * h) * v.p(2) * c.J(0, 0, i, 3);
      rhs -= eps / rho0 * v.p(1) * c.J(0, 1, i, 3);
      double vis = 0.0;
      {
        double hs = 0.0;
        for (int m = 1; m <= 2; ++m) hs += c.H(0, m, m, 3);
        vis += 3.0 / (eps * h) * v.u(i, 3) * hs;
      }
      for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m)
          vis += v.d2u(i, 2, l, m) * c.J(0, 0, l, m);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          vis += v.du(k, 2, l) * c.Lh(coeffs::L20, k, l, i);
      for (int k = 1; k <= 3; ++k) vis += v.u(k, 2) * c.Sh(coeffs::S20, i, k);
      {
        double e = 0.0;
        for (int l = 1; l <= 2; ++l)
          for (int m = 1; m <= 2; ++m)
            e += 2.0 * h * v.d2u(i, 1, l, m) * c.J(1, 0, l, m);
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l)
            e += v.du(k, 1, l) * c.Lh(coeffs::L11, k, l, i);
        for (int k = 1; k <= 3; ++k) e += v.u(k, 1) * c.Sh(coeffs::S11, i, k);
        vis += eps * e;
      }
      {
        double e = 0.0;
        for (int l = 1; l <= 2; ++l)
          for (int m = 1; m <= 2; ++m)
            e += v.d2u(i, 0, l, m) * c.iota21(l, m);
        for (int l = 1; l <= 2; ++l)
          for (int k = 1; k <= 3; ++k)
            e += v.du(k, 0, l) * c.Lh(coeffs::L02, k, l, i);
        for (int k = 1; k <= 3; ++k) e += v.u(k, 0) * c.Sh(coeffs::S02, i, k);
        vis += eps * eps * e;
      }
      rhs += nu * vis + v.f(prm, i, 2);
      out.r_u2[i - 1][q] = rhs - lhs;
    }

    for (int i = 1; i <= 2; ++i) {
      // ---------- terms multiplied by xi3^3 ----------
      double lhs = 0.0;
      for (int l = 1; l <= 2; ++l)
        lhs += v.du(i, 3, l) * (v.u(l, 0) - c.C0(l));
      for (int k = 1; k <= 3; ++k) {
        double inner = c.Q0(i, k);
        for (int l = 1; l <= 2; ++l) inner += c.H(0, i, l, k) * v.u(l, 0);
        lhs += v.u(k, 3) * inner;
      }
      for (int k = 1; k <= 2; ++k) {
        double inner = v.du(i, 0, k);
        for (int m = 1; m <= 3; ++m) inner += v.u(m, 0) * c.H(0, i, k, m);
        lhs += v.u(k, 3) * inner;
      }
      {
        double brk = v.u(3, 1) / eps - c.gp.dht - c.C0(3);
        for (int m = 1; m <= 2; ++m) brk -= v.u(m, 0) * v.dh(m);
        lhs += 3.0 / h * v.u(i, 3) * brk;
      }
      lhs += 1.0 / (eps * h) * v.u(3, 3) * v.u(i, 1);
      for (int l = 1; l <= 2; ++l) {
        double brk = v.u(l, 1) - eps * h * c.Cij(1, 0, l);
        for (int m = 1; m <= 2; ++m) brk += eps * h * v.u(m, 0) * c.B(1, l, m);
        lhs += v.du(i, 2, l) * brk;
      }
      for (int k = 1; k <= 3; ++k) {
        double acc = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double brk = v.u(l, 1) - eps * h * c.Cij(1, 0, l);
          for (int m = 1; m <= 2; ++m)
            brk += eps * h * v.u(m, 0) * c.B(1, l, m);
          acc += c.H(0, i, l, k) * brk;
        }
        lhs += v.u(k, 2) * acc;
      }
      for (int k = 1; k <= 2; ++k) {
        double brk = v.du(i, 1, k) - v.dh(k) / h * v.u(i, 1);
        for (int m = 1; m <= 3; ++m) brk += v.u(m, 1) * c.H(0, i, k, m);
        double e = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double inner = v.du(i, 0, l);
          for (int m = 1; m <= 3; ++m) inner += v.u(m, 0) * c.H(0, i, l, m);
          e += inner * c.B(1, l, k);
        }
        brk += eps * h * e;
        lhs += v.u(k, 2) * brk;
      }
      {
        double brk = v.u(3, 2) / (eps * h);
        for (int k = 1; k <= 2; ++k) brk -= v.u(k, 1) * v.dh(k) / h;
        brk -= eps * c.Cij(1, 0, 3);
        for (int k = 1; k <= 2; ++k) brk += eps * v.u(k, 0) * c.B(1, 3, k);
        lhs += 2.0 * v.u(i, 2) * brk;
      }
      for (int l = 1; l <= 2; ++l) {
        double inner = v.du(i, 1, l);
        for (int k = 1; k <= 3; ++k) inner += v.u(k, 1) * c.H(0, i, l, k);
        double brk = 0.0;
        for (int m = 1; m <= 2; ++m)
          brk += v.u(m, 1) * c.B(1, l, m) + eps * h * v.u(m, 0) * c.B(2, l, m);
        brk -= eps * h * c.Cij(2, 1, l);
        lhs += eps * h * inner * brk;
      }
      {
        double brk = 0.0;
        for (int k = 1; k <= 2; ++k)
          brk += v.u(k, 1) * c.B(1, 3, k) + eps * h * v.u(k, 0) * c.B(2, 3, k) -
                 eps * h * c.Cij(2, 1, 3);
        lhs += eps * v.u(i, 1) * brk;
      }
      for (int k = 1; k <= 2; ++k) {
        double e = 0.0;
        for (int l = 1; l <= 2; ++l) {
          double inner = v.du(i, 0, l);
          for (int m = 1; m <= 3; ++m) inner += v.u(m, 0) * c.H(0, i, l, m);
          e += inner * c.B(2, l, k);
        }
        lhs += eps * h * eps * h * v.u(k, 1) * e;
      }
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l) {
          const double inner = v.du(i, 0, l) + v.u(k, 0) * c.H(0, i, l, k);
          double brk = -c.Cij(3, 2, l);
          for (int m = 1; m <= 2; ++m) brk += v.u(m, 0) * c.B(3, l, m);
          lhs += std::pow(eps * h, 3) * inner * brk;
        }

      double rhs = 0.0;
      for (int l = 1; l <= 2; ++l)
        rhs -= (v.dp(3, l) * c.J(0, 0, i, l) +
                eps * h * v.dp(2, l) * c.J(0, 1, i, l) +
                std::pow(eps * h, 2) * v.dp(1, l) * c.J(0, 2, i, l) +
                std::pow(eps * h, 3) * v.dp(0, l) * c.J(0, 3, i, l)) /
               rho0;
      rhs -= (3.0 / h * v.p(3) * c.J(0, 0, i, 3) +
              2.0 * eps * v.p(2) * c.J(0, 1, i, 3) +
              eps * eps * h * v.p(1) * c.J(0, 2, i, 3)) /
             rho0;
      double vis = 0.0;
      for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
          vis += v.d2u(i, 3, l, m) * c.J(0, 0, l, m);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          vis += v.du(k, 3, l) * c.Lh(coeffs::L30, k, l, i);
      for (int k = 1; k <= 3; ++k) vis += v.u(k, 3) * c.Sh(coeffs::S30, i, k);
      for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
          vis += 2.0 * eps * h * v.d2u(i, 2, l, m) * c.J(1, 0, l, m);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          vis += eps * v.du(k, 2, l) * c.Lh(coeffs::L21, k, l, i);
        vis += eps * v.u(k, 2) * c.Sh(coeffs::S21, i, k);
      }
      for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m)
          vis += eps * eps * v.d2u(i, 1, l, m) * c.iota21(l, m);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          vis += eps * eps * v.du(k, 1, l) * c.Lh(coeffs::L12, k, l, i);
        vis += eps * eps * v.u(k, 1) * c.Sh(coeffs::S12, i, k);
      }
      for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
          vis += std::pow(eps, 3) * v.d2u(i, 0, l, m) * c.iota3(l, m);
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 2; ++l)
          vis += std::pow(eps, 3) * v.du(k, 0, l) * c.Lh(coeffs::L03, k, l, i);
        vis += std::pow(eps, 3) * v.u(k, 0) * c.Sh(coeffs::S03, i, k);
      }
      rhs += nu * vis + v.f(prm, i, 3);
      out.r_u3[i - 1][q] = rhs - lhs;
    }

    // ---------- xi3^3 incompressibility ----------
    {
      double r = 0.0;
      for (int k = 1; k <= 2; ++k) r += v.du(k, 3, k);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l) r += v.u(k, 3) * c.H(0, l, l, k);
      for (int k = 1; k <= 2; ++k) r -= 3.0 / h * v.u(k, 3) * v.dh(k);
      {
        double e = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e += h * v.du(k, 2, l) * c.B(1, l, k);
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l)
            e += h * v.u(k, 2) * c.H(1, l, l, k);
        for (int k = 1; k <= 2; ++k) e += 2.0 * v.u(k, 2) * c.B(1, 3, k);
        r += eps * e;
      }
      {
        double e = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e += h * h * v.du(k, 1, l) * c.B(2, l, k);
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l)
            e += h * h * v.u(k, 1) * c.H(2, l, l, k);
        for (int k = 1; k <= 2; ++k) e += h * v.u(k, 1) * c.B(2, 3, k);
        r += eps * eps * e;
      }
      {
        double e = 0.0;
        for (int k = 1; k <= 2; ++k)
          for (int l = 1; l <= 2; ++l)
            e += v.du(k, 0, l) * c.B(3, l, k);
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l)
            e += v.u(k, 0) * c.H(3, l, l, k);
        r += std::pow(eps * h, 3) * e;
      }
      out.r_div3[q] = r;
    }
  }
  return out;
}

LiteralVertical literal_vertical(const FieldStack& s,
                                 const CoefficientTable& tab,
                                 const ModelParams& prm) {
  const fd::Grid2D& g = s.grid;
  const auto d = newmodel::stack_derivs(s);
  const double eps = s.eps, mu = prm.mu, rho0 = prm.rho0;
  LiteralVertical out;
  out.u3_1.resize(g.size());
  out.u3_2.resize(g.size());
  out.u3_3.resize(g.size());
  out.p1_full.resize(g.size());
  out.p1_lead.resize(g.size());
  out.p2.resize(g.size());
  out.p3.resize(g.size());

  // div(sqrtA0 u^n)/sqrtA0 via the expanded product form
  // div(u) + grad A0.(u)/(2A0).
  Array dA0[2];
  {
    Array A0(g.size());
    for (int q = 0; q < g.size(); ++q) A0[q] = tab.node[q].fr.A0;
    dA0[0] = fd::dx(g, A0);
    dA0[1] = fd::dy(g, A0);
  }
  const Array dwn[2] = {fd::dx(g, s.u3[0]), fd::dy(g, s.u3[0])};
  const Array d2wn[3] = {fd::dxx(g, s.u3[0]), fd::dxy(g, s.u3[0]),
                         fd::dyy(g, s.u3[0])};

  for (int q = 0; q < g.size(); ++q) {
    const P v{s, d, tab.node[q], q};
    const auto& c = tab.node[q];
    const double h = v.h();
    const double A0 = c.fr.A0, A1 = c.fr.A1;

    // first vertical coefficient, bracket form
    {
      double brk = v.du(1, 0, 1) + v.du(2, 0, 2);
      brk += 1.0 / (2.0 * A0) *
             (dA0[0][q] * v.u(1, 0) + dA0[1][q] * v.u(2, 0));
      brk += v.u(3, 0) * A1 / A0;
      out.u3_1[q] = -eps * h * brk;
    }
    // second vertical coefficient
    {
      double divb = v.du(1, 1, 1) + v.du(2, 1, 2);
      divb += 1.0 / (2.0 * A0) *
              (dA0[0][q] * v.u(1, 1) + dA0[1][q] * v.u(2, 1));
      double res = -eps * h / 2.0 * divb;
      res += eps / 2.0 * (v.dh(1) * v.u(1, 1) + v.dh(2) * v.u(2, 1));
      res -= eps * h * out.u3_1[q] * A1 / A0;
      double bh = 0.0;
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k)
          bh += v.du(k, 0, l) * c.B(1, l, k) + v.u(k, 0) * c.H(1, l, l, k);
      res -= eps * eps * h * h / 2.0 * bh;
      out.u3_2[q] = res;
    }
    // third vertical coefficient; the vertical slot of the leading
    // H-sum uses this u3_2
    {
      double lead = 0.0;
      for (int k = 1; k <= 2; ++k) lead += v.du(k, 2, k);
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) lead += v.u(k, 2) * c.H(0, l, l, k);
      for (int l = 1; l <= 2; ++l)
        lead += out.u3_2[q] * c.H(0, l, l, 3);
      for (int k = 1; k <= 2; ++k)
        lead -= 2.0 / h * v.u(k, 2) * v.dh(k);
      double e1 = 0.0;
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          e1 += h * v.du(k, 1, l) * c.B(1, l, k);
      for (int k = 1; k <= 2; ++k) e1 += v.u(k, 1) * c.B(1, 3, k);
      for (int l = 1; l <= 2; ++l) {
        for (int k = 1; k <= 2; ++k)
          e1 += h * v.u(k, 1) * c.H(1, l, l, k);
        e1 += h * out.u3_1[q] * c.H(1, l, l, 3);
      }
      double e2 = 0.0;
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          e2 += v.du(k, 0, l) * c.B(2, l, k);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          e2 += v.u(k, 0) * c.H(2, l, l, k);
      out.u3_3[q] = -eps * h / 3.0 * lead - eps * eps * h / 3.0 * e1 -
                    std::pow(eps, 3) * h * h * h / 3.0 * e2;
    }
    // leading first pressure coefficient
    {
      double divb = v.du(1, 1, 1) + v.du(2, 1, 2);
      divb += 1.0 / (2.0 * A0) *
              (dA0[0][q] * v.u(1, 1) + dA0[1][q] * v.u(2, 1));
      out.p1_lead[q] =
          mu * (-divb + (v.dh(1) * v.u(1, 1) + v.dh(2) * v.u(2, 1)) / h);
    }
    // full first pressure coefficient, multiplied through by rho0
    {
      double acc = -eps * h * c.wn_dt;
      for (int l = 1; l <= 2; ++l)
        acc -= eps * h * dwn[l - 1][q] * (v.u(l, 0) - c.C0(l));
      for (int k = 1; k <= 2; ++k) {
        double brk = c.Q0(3, k);
        for (int l = 1; l <= 2; ++l)
          brk += v.u(l, 0) * c.a(3).dot(c.da(l, k));
        acc -= eps * h * v.u(k, 0) * brk;
      }
      acc *= rho0;
      double vis = 0.0;
      vis += eps * h *
             (c.J(0, 0, 1, 1) * d2wn[0][q] + 2.0 * c.J(0, 0, 1, 2) * d2wn[1][q] +
              c.J(0, 0, 2, 2) * d2wn[2][q]);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          vis += eps * h * v.du(k, 0, l) * c.L0(k, l, 3);
      for (int k = 1; k <= 3; ++k)
        vis += eps * h * v.u(k, 0) * c.S0(3, k);
      {
        double divb = v.du(1, 1, 1) + v.du(2, 1, 2);
        divb += 1.0 / (2.0 * A0) *
                (dA0[0][q] * v.u(1, 1) + dA0[1][q] * v.u(2, 1));
        vis -= divb;
        vis += (v.dh(1) * v.u(1, 1) + v.dh(2) * v.u(2, 1)) / h;
      }
      {
        double div0 = v.du(1, 0, 1) + v.du(2, 0, 2);
        div0 += 1.0 / (2.0 * A0) *
                (dA0[0][q] * v.u(1, 0) + dA0[1][q] * v.u(2, 0));
        vis += eps * h * (div0 + v.u(3, 0) * A1 / A0) * A1 / A0;
      }
      {
        double bh = 0.0;
        for (int l = 1; l <= 2; ++l)
          for (int k = 1; k <= 3; ++k)
            bh += v.du(k, 0, l) * c.B(1, l, k) + v.u(k, 0) * c.H(1, l, l, k);
        vis -= eps * h * bh;
      }
      acc += mu * vis;
      acc += eps * h * rho0 * v.f(prm, 3, 0);
      out.p1_full[q] = acc;
    }
    // second pressure coefficient
    {
      double brk = 0.0;
      for (int k = 1; k <= 2; ++k) brk += v.du(k, 2, k);
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l) brk += v.u(k, 2) * c.H(0, l, l, k);
      for (int k = 1; k <= 2; ++k) brk -= 2.0 / h * v.u(k, 2) * v.dh(k);
      out.p2[q] = -mu * brk;
    }
    // third pressure coefficient
    {
      double in1 = 0.0;
      for (int k = 1; k <= 2; ++k) {
        double brk = c.Q0(3, k) + dwn[k - 1][q];
        for (int l = 1; l <= 2; ++l)
          brk += v.u(l, 0) * (c.a(3).dot(c.da(k, l)) + c.a(3).dot(c.da(l, k)));
        in1 += v.u(k, 2) * brk;
      }
      for (int l = 1; l <= 2; ++l) {
        double inner = 0.0;
        for (int k = 1; k <= 2; ++k)
          inner += v.u(k, 1) * c.a(3).dot(c.da(k, l));
        in1 += v.u(l, 1) * inner;
      }
      double in2 = 0.0;
      {
        double brk = 0.0;
        for (int k = 1; k <= 2; ++k) brk += v.du(k, 2, k);
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l) brk += v.u(k, 2) * c.H(0, l, l, k);
        for (int k = 1; k <= 2; ++k) brk -= 2.0 / h * v.u(k, 2) * v.dh(k);
        double hs = 0.0;
        for (int m = 1; m <= 2; ++m) hs += c.H(0, m, m, 3);
        in2 -= brk * hs;
      }
      for (int k = 1; k <= 2; ++k) {
        for (int l = 1; l <= 2; ++l)
          in2 += v.du(k, 2, l) * c.Lh(coeffs::L20, k, l, 3);
        in2 += v.u(k, 2) * c.Sh(coeffs::S20, 3, k);
      }
      out.p3[q] = -eps * rho0 * h / 3.0 * in1 + eps * mu * h / 3.0 * in2 +
                  eps * rho0 * h / 3.0 * v.f(prm, 3, 2);
    }
  }
  return out;
}

}  // namespace filmflow::testsupport
