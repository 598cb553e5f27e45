#include "filmflow/shallow/shallow_water.hpp"

#include <cmath>

#include "filmflow/fd/ops.hpp"
#include "filmflow/newmodel/vertical_closure.hpp"

namespace filmflow::shallow {

using newmodel::table_field;

ShallowWaterSolver::ShallowWaterSolver(geometry::ChartPtr chart,
                                       geometry::GapPtr gap, const Grid2D& grid,
                                       TractionBC bc, double mu, double rho0,
                                       SwForm form, SwForcing forcing,
                                       const coeffs::BodyForce* force)
    : chart_(std::move(chart)),
      gap_(std::move(gap)),
      grid_(grid),
      bc_(std::move(bc)),
      mu_(mu),
      rho0_(rho0),
      form_(form),
      forcing_(forcing),
      force_(force) {
  if (!bc_.C1R.has_value())
    throw MissingFriction(
        "traction regime requires the friction coefficient C1R");
  // Static-geometry probe: skip table rebuilds when nothing moves.
  static_geometry_ = true;
  for (double p : {0.17, 0.53, 0.86}) {
    const auto fr = geometry::build_frame(*chart_, p, 1.0 - p, 0.0);
    if (fr.dX_dt.norm() > 1e-15 || fr.da_dt[0].norm() > 1e-15 ||
        fr.da_dt[1].norm() > 1e-15)
      static_geometry_ = false;
    if (std::abs(gap_->dh_dt(p, 1.0 - p, 0.0)) > 1e-15 ||
        std::abs(gap_->dh_dt(p, 1.0 - p, 0.37)) > 1e-15)
      static_geometry_ = false;
  }
}

const CoefficientTable& ShallowWaterSolver::table(double t) const {
  if (!table_valid_ || (!static_geometry_ && table_.t != t)) {
    table_ = coeffs::build_table(*chart_, *gap_, grid_, t, 3,
                                 coeffs::kAllFamilies, force_);
    table_valid_ = true;
  }
  return table_;
}

Array ShallowWaterSolver::diagnostic_p0(double t) const {
  const auto& tab = table(t);
  Array p0(grid_.size());
  for (int k = 0; k < grid_.size(); ++k) {
    const auto& pc = tab.node[k];
    p0[k] = 2.0 * mu_ * pc.gp.dht / pc.gp.h + bc_.pi0[k];
  }
  return p0;
}

ShallowWaterState ShallowWaterSolver::initial_state(double v1, double v2,
                                                    double t0) const {
  ShallowWaterState s;
  s.V1 = Array::Constant(grid_.size(), v1);
  s.V2 = Array::Constant(grid_.size(), v2);
  s.t = t0;
  s.p0 = diagnostic_p0(t0);
  return s;
}

std::pair<Array, Array> ShallowWaterSolver::tendency(const ShallowWaterState& s,
                                                     SwForm form,
                                                     bool include_diffusion) const {
  const auto& tab = table(s.t);
  const int n = grid_.size();
  const double nu = mu_ / rho0_;
  const double c1r = *bc_.C1R;

  const Array dV1[2] = {fd::dx(grid_, s.V1), fd::dy(grid_, s.V1)};
  const Array dV2[2] = {fd::dx(grid_, s.V2), fd::dy(grid_, s.V2)};
  const Array d2V1[3] = {fd::dxx(grid_, s.V1), fd::dxy(grid_, s.V1),
                         fd::dyy(grid_, s.V1)};
  const Array d2V2[3] = {fd::dxx(grid_, s.V2), fd::dxy(grid_, s.V2),
                         fd::dyy(grid_, s.V2)};
  const Array dpi0[2] = {fd::dx(grid_, bc_.pi0), fd::dy(grid_, bc_.pi0)};

  Array T1(n), T2(n);
  for (int q = 0; q < n; ++q) {
    const auto& pc = tab.node[q];
    const double V[2] = {s.V1[q], s.V2[q]};
    const double dV[2][2] = {{dV1[0][q], dV1[1][q]}, {dV2[0][q], dV2[1][q]}};
    const double d2V[2][3] = {{d2V1[0][q], d2V1[1][q], d2V1[2][q]},
                              {d2V2[0][q], d2V2[1][q], d2V2[2][q]}};
    const double wn = pc.w_n();

    // Leading-order surface velocity (same on both surfaces in this
    // regime) driving the friction law.
    const Vec3 usurf = V[0] * pc.a(1) + V[1] * pc.a(2) + wn * pc.a(3);
    const Vec3 fric = coeffs::quadratic_friction(c1r, rho0_, usurf);

    for (int i = 1; i <= 2; ++i) {
      double T = 0.0;
      // advection: - sum_l (V_l - C^0_l) dV_i/dxi_l
      for (int l = 1; l <= 2; ++l)
        T -= (V[l - 1] - pc.C0(l)) * dV[i - 1][l - 1];
      // reaction: - sum_k (R^0_{ik} + sum_l H^0_{ilk} V_l) V_k
      for (int k = 1; k <= 2; ++k) {
        double r = pc.R0(i, k);
        for (int l = 1; l <= 2; ++l) r += pc.H(0, i, l, k) * V[l - 1];
        T -= r * V[k - 1];
      }
      // pressure: -(1/rho0) sum_l dpi0/dxi_l J^{0,0}_{il}
      for (int l = 1; l <= 2; ++l)
        T -= dpi0[l - 1][q] * pc.J(0, 0, i, l) / rho0_;

      // viscous block
      double visc = 0.0;
      if (include_diffusion) {
        visc += pc.J(0, 0, 1, 1) * d2V[i - 1][0] +
                2.0 * pc.J(0, 0, 1, 2) * d2V[i - 1][1] +
                pc.J(0, 0, 2, 2) * d2V[i - 1][2];
      }
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          visc += dV[k - 1][l - 1] * (pc.L0(k, l, i) + pc.psi0(i, k, l));
      if (form == SwForm::Compact) {
        for (int k = 1; k <= 2; ++k) visc += V[k - 1] * pc.Sbar(i, k);
      } else {
        for (int k = 1; k <= 2; ++k)
          visc += V[k - 1] * (pc.P0(i, k) + pc.chi0(i, k));
      }
      visc += pc.kappa0(i);
      T += nu * visc;

      // body + friction forcing
      const double fbody =
          (forcing_ == SwForcing::FbarLeading) ? pc.Fbar0(i) : pc.F0(i);
      T += fbody + coeffs::friction_forcing(pc, i, fric, fric, bc_.s0, rho0_);

      // normal-motion source
      T -= pc.Q0(i, 3) * wn;

      (i == 1 ? T1[q] : T2[q]) = T;
    }
  }
  return {T1, T2};
}

void ShallowWaterSolver::refresh_diffusion(double t, double dt) {
  if (diffusion_ && diffusion_dt_ == dt &&
      (static_geometry_ || diffusion_t_ == t))
    return;
  const auto& tab = table(t);
  const Array j11 = table_field(tab, [](const auto& p) { return p.J(0, 0, 1, 1); });
  const Array j12 = table_field(tab, [](const auto& p) { return p.J(0, 0, 1, 2); });
  const Array j22 = table_field(tab, [](const auto& p) { return p.J(0, 0, 2, 2); });
  diffusion_ = std::make_unique<fd::ImplicitDiffusion>(
      grid_, j11, j12, j22, mu_ / rho0_, dt, bc_.edges);
  diffusion_dt_ = dt;
  diffusion_t_ = t;
}

ShallowWaterState ShallowWaterSolver::step(const ShallowWaterState& s,
                                           double dt) {
  const auto& tab = table(s.t);
  const Array c1 = table_field(tab, [](const auto& p) { return p.C0(1); });
  const Array c2 = table_field(tab, [](const auto& p) { return p.C0(2); });
  fd::check_advective_cfl(grid_, s.V1 - c1, s.V2 - c2, dt);
  refresh_diffusion(s.t, dt);

  fd::TendencyFn rhs = [&](double t, const std::vector<Array>& f) {
    ShallowWaterState tmp{f[0], f[1], s.p0, t};
    auto [t1, t2] = tendency(tmp, form_, /*include_diffusion=*/false);
    return std::vector<Array>{t1, t2};
  };
  fd::BoundaryFn bcfn = [&](std::vector<Array>& f) {
    fd::apply_boundary(grid_, bc_.edges, f[0], bc_.Vdir1);
    fd::apply_boundary(grid_, bc_.edges, f[1], bc_.Vdir2);
  };
  const auto out =
      fd::time_step_imex(s.t, dt, {s.V1, s.V2}, rhs,
                         {diffusion_.get(), diffusion_.get()},
                         {&bc_.Vdir1, &bc_.Vdir2}, bcfn);
  ShallowWaterState next;
  next.V1 = out[0];
  next.V2 = out[1];
  next.t = s.t + dt;
  next.p0 = diagnostic_p0(next.t);
  return next;
}

Array ShallowWaterSolver::pi1_consistency(const ShallowWaterState& s,
                                          const Array* W1,
                                          const Array* W2) const {
  const auto& tab = table(s.t);
  const Array sA0 = table_field(tab, [](const auto& p) { return p.fr.sqrtA0; });
  const Array h = table_field(tab, [](const auto& p) { return p.gp.h; });
  const Array h1 = table_field(tab, [](const auto& p) { return p.gp.dh[0]; });
  const Array h2 = table_field(tab, [](const auto& p) { return p.gp.dh[1]; });
  const Array d1 = (W1 ? *W1 : s.V1) - s.V1;
  const Array d2 = (W2 ? *W2 : s.V2) - s.V2;
  const Array div_s = fd::dx(grid_, sA0 * d1) + fd::dy(grid_, sA0 * d2);
  return bc_.pi0 + mu_ / sA0 * div_s + mu_ / h * (h1 * d1 + h2 * d2) - bc_.pi1;
}

}  // namespace filmflow::shallow
