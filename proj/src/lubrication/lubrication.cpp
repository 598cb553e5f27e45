#include "filmflow/lubrication/lubrication.hpp"

#include <cmath>

#include "filmflow/fd/ops.hpp"
#include "filmflow/newmodel/vertical_closure.hpp"

namespace filmflow::lubrication {

namespace {

struct NodalGeometry {
  Array j11, j12, j22, h, dh1, dh2, sA0, A1oA0, wn, dht;
  Array sumH0ll[3];
};

NodalGeometry nodal_geometry(const Grid2D& g,
                             const geometry::SurfaceChart& chart,
                             const geometry::GapField& gap, double t) {
  NodalGeometry n;
  const int sz = g.size();
  n.j11.resize(sz); n.j12.resize(sz); n.j22.resize(sz);
  n.h.resize(sz); n.dh1.resize(sz); n.dh2.resize(sz);
  n.sA0.resize(sz); n.A1oA0.resize(sz); n.wn.resize(sz); n.dht.resize(sz);
  for (auto& f : n.sumH0ll) f.resize(sz);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const int id = g.idx(i, j);
      const auto fr = geometry::build_frame(chart, g.x1(i), g.x2(j), t);
      const auto gp = coeffs::sample_gap(gap, g.x1(i), g.x2(j), t);
      n.j11[id] = fr.M(0, 0) / fr.A0;
      n.j12[id] = fr.M(0, 1) / fr.A0;
      n.j22[id] = fr.M(1, 1) / fr.A0;
      n.h[id] = gp.h;
      n.dh1[id] = gp.dh[0];
      n.dh2[id] = gp.dh[1];
      n.sA0[id] = fr.sqrtA0;
      n.A1oA0[id] = fr.A1 / fr.A0;
      n.wn[id] = fr.dX_dt.dot(fr.a[2]);
      n.dht[id] = gp.dht;
      // sum_l H^0_{llk} = sum_l alpha_l^0 (a1 . da_k/dxil) + beta_l^0 (...)
      const auto ab = coeffs::alpha_beta_series(fr, gp, 0);
      for (int k = 1; k <= 3; ++k) {
        double acc = 0.0;
        for (int l = 1; l <= 2; ++l)
          acc += ab.al(l, 0) * fr.a[0].dot(fr.da_dxi[k - 1][l - 1]) +
                 ab.be(l, 0) * fr.a[1].dot(fr.da_dxi[k - 1][l - 1]);
        n.sumH0ll[k - 1][id] = acc;
      }
    }
  return n;
}

Array reynolds_rhs(const Grid2D& g, const NodalGeometry& n,
                   const LubricationBC& bc, double mu) {
  const Array sumV1 = n.sA0 * (bc.W1 + bc.V1);
  const Array sumV2 = n.sA0 * (bc.W2 + bc.V2);
  return 12.0 * mu * n.dht + 12.0 * mu * n.h * n.A1oA0 * n.wn -
         6.0 * mu * (n.dh1 * (bc.W1 - bc.V1) + n.dh2 * (bc.W2 - bc.V2)) +
         6.0 * mu * n.h / n.sA0 *
             (fd::dx(g, sumV1) + fd::dy(g, sumV2));
}

// Cell-centered weight tensor of the Reynolds operator.
void cell_weights(const Grid2D& g, const geometry::SurfaceChart& chart,
                  const geometry::GapField& gap, double t, bool lubric_form,
                  Array& w11, Array& w12, Array& w22) {
  const int nc1 = g.n1 - 1, nc2 = g.n2 - 1;
  w11.resize(nc1 * nc2);
  w12.resize(nc1 * nc2);
  w22.resize(nc1 * nc2);
  for (int cj = 0; cj < nc2; ++cj)
    for (int ci = 0; ci < nc1; ++ci) {
      const double x1 = (ci + 0.5) * g.d1, x2 = (cj + 0.5) * g.d2;
      const auto fr = geometry::build_frame(chart, x1, x2, t);
      const double h = gap.h(x1, x2, t);
      if (!(h > 0.0)) throw NonPositiveGap("reynolds weights: h <= 0");
      const double h3 = h * h * h;
      const int c = cj * nc1 + ci;
      if (lubric_form) {
        // h^3 sqrtA0 J^{0,0}
        w11[c] = h3 * fr.sqrtA0 * fr.M(0, 0) / fr.A0;
        w12[c] = h3 * fr.sqrtA0 * fr.M(0, 1) / fr.A0;
        w22[c] = h3 * fr.sqrtA0 * fr.M(1, 1) / fr.A0;
      } else {
        // (h^3 / sqrtA0) M
        w11[c] = h3 / fr.sqrtA0 * fr.M(0, 0);
        w12[c] = h3 / fr.sqrtA0 * fr.M(0, 1);
        w22[c] = h3 / fr.sqrtA0 * fr.M(1, 1);
      }
    }
}

}  // namespace

fd::LinearSystem assemble_reynolds(const Grid2D& grid,
                                   const geometry::SurfaceChart& chart,
                                   const geometry::GapField& gap,
                                   const LubricationBC& bc, double mu,
                                   double t, ReynoldsScheme scheme,
                                   bool use_lubric_form) {
  const NodalGeometry n = nodal_geometry(grid, chart, gap, t);
  const auto mask = fd::boundary_mask(grid);

  if (scheme == ReynoldsScheme::SymmetricFem) {
    Array w11, w12, w22;
    cell_weights(grid, chart, gap, t, use_lubric_form, w11, w12, w22);
    const fd::SpMat K = fd::weighted_stiffness(grid, w11, w12, w22);
    const Array R = reynolds_rhs(grid, n, bc, mu);
    const Array ml = fd::lumped_mass(grid);
    const Eigen::VectorXd b = (-(ml * n.sA0 * R)).matrix();
    return fd::make_dirichlet_system(K, b, mask, bc.pressure_trace.matrix(),
                                     true);
  }

  // FluxChain: the eps -> 0 vertical-closure operator of the new model,
  // composed from the shared central-difference stencils.
  const auto table = coeffs::build_table(chart, gap, grid, t, 1, coeffs::kBase);
  const auto sys = newmodel::assemble_vertical_closure(
      grid, table, bc.V1, bc.V2, bc.W1, bc.W2, /*eps=*/0.0, mu, 1.0);
  fd::LinearSystem out = fd::make_dirichlet_system(
      sys.A, sys.rhs.matrix(), mask, bc.pressure_trace.matrix(), false);
  out.symmetric_hint = false;
  return out;
}

LubricationSolution solve_lubrication(const Grid2D& grid,
                                      const geometry::SurfaceChart& chart,
                                      const geometry::GapField& gap,
                                      const LubricationBC& bc, double mu,
                                      double t, ReynoldsScheme scheme) {
  LubricationSolution sol;
  sol.grid = grid;
  sol.t = t;
  sol.mu = mu;
  sol.bc = bc;

  const NodalGeometry n = nodal_geometry(grid, chart, gap, t);
  const auto sys = assemble_reynolds(grid, chart, gap, bc, mu, t, scheme);
  const Eigen::VectorXd x = fd::solve_sparse(sys);
  sol.pm2 = x.array();

  if (scheme == ReynoldsScheme::SymmetricFem) {
    Array w11, w12, w22;
    cell_weights(grid, chart, gap, t, false, w11, w12, w22);
    const fd::SpMat K = fd::weighted_stiffness(grid, w11, w12, w22);
    const Array R = reynolds_rhs(grid, n, bc, mu);
    const Array ml = fd::lumped_mass(grid);
    sol.compat_gap =
        reynolds_compatibility_gap(grid, K, Array(-(ml * n.sA0 * R)), sol.pm2);
  } else {
    sol.compat_gap = std::numeric_limits<double>::quiet_NaN();
  }

  sol.dpm2_d1 = fd::dx(grid, sol.pm2);
  sol.dpm2_d2 = fd::dy(grid, sol.pm2);
  sol.u3 = n.wn;
  sol.j11 = n.j11;
  sol.j12 = n.j12;
  sol.j22 = n.j22;
  sol.h = n.h;
  sol.dh1 = n.dh1;
  sol.dh2 = n.dh2;
  sol.sqrtA0 = n.sA0;
  for (int k = 0; k < 3; ++k) sol.sumH0ll[k] = n.sumH0ll[k];
  return sol;
}

VelocityProfile velocity_profile(const LubricationSolution& sol, int i, int j) {
  const int id = sol.grid.idx(i, j);
  VelocityProfile vp;
  const double hh = sol.h[id] * sol.h[id] / (2.0 * sol.mu);
  vp.quad1 = hh * (sol.j11[id] * sol.dpm2_d1[id] + sol.j12[id] * sol.dpm2_d2[id]);
  vp.quad2 = hh * (sol.j12[id] * sol.dpm2_d1[id] + sol.j22[id] * sol.dpm2_d2[id]);
  vp.v1 = sol.bc.V1[id];
  vp.v2 = sol.bc.V2[id];
  vp.w1 = sol.bc.W1[id];
  vp.w2 = sol.bc.W2[id];
  vp.u3 = sol.u3[id];
  return vp;
}

FullFieldReconstruction::FullFieldReconstruction(const LubricationSolution& sol,
                                                 double eps)
    : sol_(sol), eps_(eps) {
  const Grid2D& g = sol.grid;
  // u2_i = (h^2 / 2 mu) sum_l J_il d p^{-2}; u1 = W - V - u2.
  Array u2_1(g.size()), u2_2(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double hh = sol.h[k] * sol.h[k] / (2.0 * sol.mu);
    u2_1[k] = hh * (sol.j11[k] * sol.dpm2_d1[k] + sol.j12[k] * sol.dpm2_d2[k]);
    u2_2[k] = hh * (sol.j12[k] * sol.dpm2_d1[k] + sol.j22[k] * sol.dpm2_d2[k]);
  }
  const Array u1_1 = sol.bc.W1 - sol.bc.V1 - u2_1;
  const Array u1_2 = sol.bc.W2 - sol.bc.V2 - u2_2;

  // pbar1 = mu (-div(sqrtA0 u1)/sqrtA0 + grad h . u1 / h)
  pbar1_ = sol.mu * (-(fd::dx(g, sol.sqrtA0 * u1_1) +
                       fd::dy(g, sol.sqrtA0 * u1_2)) /
                         sol.sqrtA0 +
                     (sol.dh1 * u1_1 + sol.dh2 * u1_2) / sol.h);
  // pbar2 = -mu (sum_k du2_k/dxik + sum_k u2_k sum_l H^0_{llk}
  //              - (2/h) sum_k u2_k dh_k)
  pbar2_ = -sol.mu * (fd::dx(g, u2_1) + fd::dy(g, u2_2) +
                      u2_1 * sol.sumH0ll[0] + u2_2 * sol.sumH0ll[1] -
                      2.0 / sol.h * (u2_1 * sol.dh1 + u2_2 * sol.dh2));
}

namespace {
double bilinear(const Grid2D& g, const Array& f, double x1, double x2) {
  const double s = std::clamp(x1, 0.0, 1.0) / g.d1;
  const double r = std::clamp(x2, 0.0, 1.0) / g.d2;
  const int i = std::min(static_cast<int>(s), g.n1 - 2);
  const int j = std::min(static_cast<int>(r), g.n2 - 2);
  const double a = s - i, b = r - j;
  return (1 - a) * (1 - b) * f[g.idx(i, j)] + a * (1 - b) * f[g.idx(i + 1, j)] +
         (1 - a) * b * f[g.idx(i, j + 1)] + a * b * f[g.idx(i + 1, j + 1)];
}
}  // namespace

FilmSample FullFieldReconstruction::operator()(double xi1, double xi2,
                                               double xi3) const {
  const Grid2D& g = sol_.grid;
  FilmSample out;
  const double h = bilinear(g, sol_.h, xi1, xi2);
  const double hh = h * h / (2.0 * sol_.mu);
  const double d1 = bilinear(g, sol_.dpm2_d1, xi1, xi2);
  const double d2 = bilinear(g, sol_.dpm2_d2, xi1, xi2);
  const double j11 = bilinear(g, sol_.j11, xi1, xi2);
  const double j12 = bilinear(g, sol_.j12, xi1, xi2);
  const double j22 = bilinear(g, sol_.j22, xi1, xi2);
  const double v1 = bilinear(g, sol_.bc.V1, xi1, xi2);
  const double v2 = bilinear(g, sol_.bc.V2, xi1, xi2);
  const double w1 = bilinear(g, sol_.bc.W1, xi1, xi2);
  const double w2 = bilinear(g, sol_.bc.W2, xi1, xi2);
  const double quad = xi3 * xi3 - xi3;
  out.u1 = hh * (j11 * d1 + j12 * d2) * quad + xi3 * (w1 - v1) + v1;
  out.u2 = hh * (j12 * d1 + j22 * d2) * quad + xi3 * (w2 - v2) + v2;
  out.u3 = bilinear(g, sol_.u3, xi1, xi2);
  const double p0 = bilinear(g, sol_.pm2, xi1, xi2) / (eps_ * eps_);
  out.p = p0 + xi3 * bilinear(g, pbar1_, xi1, xi2) +
          xi3 * xi3 * bilinear(g, pbar2_, xi1, xi2);
  return out;
}

double reynolds_compatibility_gap(const Grid2D& grid, const fd::SpMat& K_full,
                                  const Array& weak_rhs, const Array& solution) {
  const Eigen::VectorXd Kx = K_full * solution.matrix();
  double interior_rhs = 0.0, boundary_flux = 0.0;
  for (int j = 0; j < grid.n2; ++j)
    for (int i = 0; i < grid.n1; ++i) {
      const int id = grid.idx(i, j);
      if (grid.on_boundary(i, j))
        boundary_flux += Kx[id];
      else
        interior_rhs += weak_rhs[id];
    }
  return std::abs(interior_rhs + boundary_flux);
}

}  // namespace filmflow::lubrication
