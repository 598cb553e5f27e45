#include "filmflow/newmodel/vertical_closure.hpp"

#include "filmflow/fd/ops.hpp"

namespace filmflow::newmodel {

Array table_field(const CoefficientTable& table,
                  const std::function<double(const coeffs::PointCoefficients&)>& f) {
  Array out(table.grid.size());
  for (int k = 0; k < table.grid.size(); ++k) out[k] = f(table.node[k]);
  return out;
}

namespace {

SpMat diag(const Array& d) { return SpMat(d.matrix().asDiagonal()); }

}  // namespace

VerticalClosureSystem assemble_vertical_closure(const Grid2D& grid,
                                                const CoefficientTable& table,
                                                const Array& V1, const Array& V2,
                                                const Array& W1, const Array& W2,
                                                double eps, double mu,
                                                double rho0) {
  VerticalClosureSystem out;
  const SpMat Dx = fd::dx_matrix(grid);
  const SpMat Dy = fd::dy_matrix(grid);
  auto tf = [&](auto&& fn) { return table_field(table, fn); };

  const Array h = tf([](const auto& p) { return p.gp.h; });
  const Array h1 = tf([](const auto& p) { return p.gp.dh[0]; });
  const Array h2 = tf([](const auto& p) { return p.gp.dh[1]; });
  const Array dht = tf([](const auto& p) { return p.gp.dht; });
  const Array sA0 = tf([](const auto& p) { return p.fr.sqrtA0; });
  const Array A1oA0 = tf([](const auto& p) { return p.fr.A1 / p.fr.A0; });
  const Array wn = tf([](const auto& p) { return p.w_n(); });

  // u2_i(q) = (h^2 / 2mu) (J_i1 Dx + J_i2 Dy) q
  for (int i = 1; i <= 2; ++i) {
    const Array ji1 = tf([i](const auto& p) { return p.J(0, 0, i, 1); });
    const Array ji2 = tf([i](const auto& p) { return p.J(0, 0, i, 2); });
    out.U2[i - 1] = diag(h * h / (2.0 * mu)) *
                    SpMat(diag(ji1) * Dx + diag(ji2) * Dy);
    const Array j01_1 = tf([i](const auto& p) { return p.J(0, 1, i, 1); });
    const Array j01_2 = tf([i](const auto& p) { return p.J(0, 1, i, 2); });
    out.U3[i - 1] =
        SpMat(diag(-eps * h * A1oA0 / 3.0) * out.U2[i - 1]) -
        SpMat(diag(eps * h / rho0) * SpMat(diag(j01_1) * Dx + diag(j01_2) * Dy));
    out.u1_const[i - 1] = (i == 1) ? Array(W1 - V1) : Array(W2 - V2);
  }

  // u1(q) = (W - V) - u2(q): in the eliminated equation the u3 part of
  // the upper-velocity condition is folded into the O(eps) remainder,
  // matching how the lubrication reduction closes u1.
  const SpMat U1m[2] = {SpMat(-out.U2[0]), SpMat(-out.U2[1])};

  // --- u3bar^1 / eps (q-free) ---
  const Array div_sV =
      fd::dx(grid, sA0 * V1) + fd::dy(grid, sA0 * V2);
  const Array v31 = -h / sA0 * div_sV - h * wn * A1oA0;  // u3bar^1 / eps

  // --- u3bar^2 / eps ---
  // -(h/(2 sqrtA0)) div(sqrtA0 u1) + (1/2) grad h . u1
  //  - eps h (A1/A0) (u3bar^1/eps)
  //  - (eps h^2/2) [sum_{l,k} du0_k B^1_{lk} + u0_k H^1_{llk}]
  const SpMat div_su1_m =
      SpMat(Dx * SpMat(diag(sA0) * U1m[0])) + SpMat(Dy * SpMat(diag(sA0) * U1m[1]));
  SpMat M32 = SpMat(diag(-h / (2.0 * sA0)) * div_su1_m) +
              SpMat(diag(0.5 * h1) * U1m[0]) + SpMat(diag(0.5 * h2) * U1m[1]);
  Array v32 =
      (-h / (2.0 * sA0)) *
          (fd::dx(grid, sA0 * out.u1_const[0]) + fd::dy(grid, sA0 * out.u1_const[1])) +
      0.5 * (h1 * out.u1_const[0] + h2 * out.u1_const[1]) -
      eps * h * A1oA0 * v31;
  {
    Array corr = Array::Zero(grid.size());
    const Array du0[2][2] = {{fd::dx(grid, V1), fd::dy(grid, V1)},
                             {fd::dx(grid, V2), fd::dy(grid, V2)}};
    for (int l = 1; l <= 2; ++l) {
      for (int k = 1; k <= 2; ++k) {
        const Array b1 = tf([l, k](const auto& p) { return p.B(1, l, k); });
        corr += du0[k - 1][l - 1] * b1;
      }
      // u0_k H^1_{llk} for k = 1..3 (k = 3 carries the normal motion)
      for (int k = 1; k <= 3; ++k) {
        const Array h1llk = tf([l, k](const auto& p) { return p.H(1, l, l, k); });
        const Array u0k = (k == 1) ? V1 : (k == 2) ? V2 : wn;
        corr += u0k * h1llk;
      }
    }
    v32 -= 0.5 * eps * h * h * corr;
  }

  // --- u3bar^3 / eps ---
  // -(h/3)[ sum_k d(u2_k)/dxi_k + sum_{k=1..3} u2_k sum_l H^0_{llk}
  //         - (2/h) sum_k u2_k dh_k ]
  // -(eps h/3)[ h sum_{l,k} d(u1_k)/dxi_l B^1_{lk} + sum_k u1_k B^1_{3k}
  //             + h sum_{k=1..3} u1_k sum_l H^1_{llk} ]
  // -(eps^2 h^3/3)[ sum_{l,k} d(u0_k)/dxi_l B^2_{lk}
  //                 + sum_{k=1..3} u0_k sum_l H^2_{llk} ]
  const Array sumH0ll[3] = {
      tf([](const auto& p) { return p.H(0, 1, 1, 1) + p.H(0, 2, 2, 1); }),
      tf([](const auto& p) { return p.H(0, 1, 1, 2) + p.H(0, 2, 2, 2); }),
      tf([](const auto& p) { return p.H(0, 1, 1, 3) + p.H(0, 2, 2, 3); })};
  SpMat M33 = SpMat(Dx * out.U2[0]) + SpMat(Dy * out.U2[1]);
  for (int k = 1; k <= 2; ++k)
    M33 = M33 + SpMat(diag(sumH0ll[k - 1]) * out.U2[k - 1]) -
          SpMat(diag(2.0 / h * ((k == 1) ? h1 : h2)) * out.U2[k - 1]);
  // u3bar^2 (true scale eps*(M32 q + v32)) enters through the k = 3
  // slot of the H^0 sum, one order higher than the tangential slots.
  M33 = M33 + SpMat(diag(Array(eps * sumH0ll[2])) * M32);
  Array v33 = eps * sumH0ll[2] * v32;
  M33 = SpMat(diag(-h / 3.0) * M33);
  v33 *= -h / 3.0;

  if (eps != 0.0) {
    SpMat Meps(grid.size(), grid.size());
    Array veps = Array::Zero(grid.size());
    const Array du1c[2][2] = {
        {fd::dx(grid, out.u1_const[0]), fd::dy(grid, out.u1_const[0])},
        {fd::dx(grid, out.u1_const[1]), fd::dy(grid, out.u1_const[1])}};
    for (int l = 1; l <= 2; ++l) {
      const SpMat& Dl = (l == 1) ? Dx : Dy;
      for (int k = 1; k <= 2; ++k) {
        const Array b1 = tf([l, k](const auto& p) { return p.B(1, l, k); });
        Meps = Meps + SpMat(diag(h * b1) * SpMat(Dl * U1m[k - 1]));
        veps += h * b1 * du1c[k - 1][l - 1];
      }
    }
    for (int k = 1; k <= 2; ++k) {
      const Array b13k = tf([k](const auto& p) { return p.B(1, 3, k); });
      Meps = Meps + SpMat(diag(b13k) * U1m[k - 1]);
      veps += b13k * out.u1_const[k - 1];
      const Array h1ll = tf([k](const auto& p) { return p.H(1, 1, 1, k) + p.H(1, 2, 2, k); });
      Meps = Meps + SpMat(diag(h * h1ll) * U1m[k - 1]);
      veps += h * h1ll * out.u1_const[k - 1];
    }
    {  // k = 3: u3bar^1 (true scale = eps * v31)
      const Array h1ll3 = tf([](const auto& p) { return p.H(1, 1, 1, 3) + p.H(1, 2, 2, 3); });
      veps += h * h1ll3 * (eps * v31);
    }
    M33 = M33 + SpMat(diag(-eps * h / 3.0) * Meps);
    v33 += -eps * h / 3.0 * veps;

    Array c2 = Array::Zero(grid.size());
    const Array du0[2][2] = {{fd::dx(grid, V1), fd::dy(grid, V1)},
                             {fd::dx(grid, V2), fd::dy(grid, V2)}};
    for (int l = 1; l <= 2; ++l) {
      for (int k = 1; k <= 2; ++k) {
        const Array b2 = tf([l, k](const auto& p) { return p.B(2, l, k); });
        c2 += du0[k - 1][l - 1] * b2;
      }
      for (int k = 1; k <= 3; ++k) {
        const Array h2llk = tf([l, k](const auto& p) { return p.H(2, l, l, k); });
        const Array u0k = (k == 1) ? V1 : (k == 2) ? V2 : wn;
        c2 += u0k * h2llk;
      }
    }
    v33 += -eps * eps * h * h * h / 3.0 * c2;
  }

  out.A = M32 + M33;
  out.rhs = dht - (v31 + v32 + v33);
  return out;
}

}  // namespace filmflow::newmodel
