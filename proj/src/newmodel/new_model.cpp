#include "filmflow/newmodel/new_model.hpp"

#include <cmath>

#include "filmflow/errors.hpp"
#include "filmflow/fd/ops.hpp"

namespace filmflow::newmodel {

void apply_bc_velocity(FieldStack& s, const Array& V1, const Array& V2,
                       const Array& W1, const Array& W2) {
  s.u[0][0] = V1;
  s.u[1][0] = V2;
  s.u[0][1] = W1 - V1 - s.u[0][2] - s.u[0][3];
  s.u[1][1] = W2 - V2 - s.u[1][2] - s.u[1][3];
}

void apply_bc_traction(FieldStack& s, const shallow::TractionBC& bc,
                       const CoefficientTable& table,
                       const ModelParams& params) {
  if (!bc.C1R.has_value())
    throw MissingFriction("traction closure requires C1R");
  const Grid2D& g = s.grid;
  const double eps = s.eps, mu = params.mu, rho0 = params.rho0;
  const double c1r = *bc.C1R, s0 = bc.s0;

  const Array sA0 = table_field(table, [](const auto& p) { return p.fr.sqrtA0; });
  const Array wn = table_field(table, [](const auto& p) { return p.w_n(); });
  s.u3[0] = wn;

  // pbar^0 = 2 mu u3bar^1/(eps h) + pi0, with u3bar^1 eliminated:
  // the eps cancels against the closure's own prefactor.
  const Array div_su0 =
      fd::dx(g, sA0 * s.u[0][0]) + fd::dy(g, sA0 * s.u[1][0]);
  const Array A1oA0 =
      table_field(table, [](const auto& p) { return p.fr.A1 / p.fr.A0; });
  s.p0 = -2.0 * mu * (div_su0 / sA0 + wn * A1oA0) + bc.pi0;

  const Array dwn[2] = {fd::dx(g, wn), fd::dy(g, wn)};
  const Array du0[2][2] = {{fd::dx(g, s.u[0][0]), fd::dy(g, s.u[0][0])},
                           {fd::dx(g, s.u[1][0]), fd::dy(g, s.u[1][0])}};

  // u1bar, u2bar from the surface-traction closures, u3bar (tangential)
  // from the order ladder.
  for (int q = 0; q < g.size(); ++q) {
    const auto& pc = table.node[q];
    const double h = pc.gp.h;
    const Vec3 usurf =
        s.u[0][0][q] * pc.a(1) + s.u[1][0][q] * pc.a(2) + wn[q] * pc.a(3);
    const Vec3 fr0 = coeffs::quadratic_friction(c1r, rho0, usurf);
    const Vec3 fr1 = fr0;  // same leading-order surface velocity

    for (int i = 1; i <= 2; ++i) {
      double br = pc.al(i, 0) * dwn[0][q] + pc.be(i, 0) * dwn[1][q];
      for (int k = 1; k <= 2; ++k)
        br += s.u[k - 1][0][q] * pc.D(0, i, k);
      br += s0 * eps / mu *
            (pc.al(i, 0) * fr0.dot(pc.a(1)) + pc.be(i, 0) * fr0.dot(pc.a(2)));
      s.u[i - 1][1][q] = -eps * h * br;
    }

    for (int i = 1; i <= 2; ++i) {
      double acc = 0.0;
      for (int l = 1; l <= 2; ++l) {
        acc -= pc.J(0, 0, 3, l) * du0[i - 1][l - 1][q];
        double dvh = 0.0, vhH = 0.0;
        for (int k = 1; k <= 2; ++k) {
          dvh += du0[k - 1][l - 1][q] * pc.gp.dh[k - 1];
          vhH += s.u[k - 1][0][q] * pc.H(0, i, l, k);
        }
        acc += pc.J(0, 0, l, i) * dvh;
        acc -= pc.J(0, 0, 3, l) * vhH;
      }
      for (int k = 1; k <= 2; ++k) {
        const double br = h * pc.I() * pc.D(0, i, k) -
                          pc.al(i, 0) * pc.da(k, 1).dot(pc.eta) -
                          pc.be(i, 0) * pc.da(k, 2).dot(pc.eta);
        acc += s.u[k - 1][0][q] * br / pc.fr.sqrtA0;
      }
      acc += pc.J(0, 0, 3, i) / h * pc.gp.dht;
      for (int k = 1; k <= 2; ++k)
        acc -= pc.J(0, 0, k, i) * pc.gp.d2h_dxidt[k - 1];
      {
        double br = 0.0;
        for (int l = 1; l <= 2; ++l) {
          br += pc.J(0, 0, 3, l) * pc.H(0, i, l, 3);
          br += pc.J(0, 0, l, i) / pc.fr.sqrtA0 * pc.da(3, l).dot(pc.eta);
        }
        acc -= wn[q] * br;
      }
      acc += s0 / mu *
             (pc.al(i, 0) * (fr0 + fr1).dot(pc.a(1)) +
              pc.be(i, 0) * (fr0 + fr1).dot(pc.a(2)));
      s.u[i - 1][2][q] = 0.5 * eps * eps * h * acc;
    }
  }

  // u3bar tangential: u_i^3 = -(eps h A1/3A0) u_i^2
  //                   - (eps^3 h / rho0) sum_l J^{0,1}_{il} d pbar0 (true scale)
  const Array dp0[2] = {fd::dx(g, s.p0), fd::dy(g, s.p0)};
  for (int q = 0; q < g.size(); ++q) {
    const auto& pc = table.node[q];
    const double h = pc.gp.h;
    for (int i = 1; i <= 2; ++i) {
      double jp = 0.0;
      for (int l = 1; l <= 2; ++l) jp += pc.J(0, 1, i, l) * dp0[l - 1][q];
      s.u[i - 1][3][q] = -eps * h * (pc.fr.A1 / pc.fr.A0) / 3.0 *
                             s.u[i - 1][2][q] -
                         std::pow(eps, 3) * h / params.rho0 * jp;
    }
  }
}

NewModelSolver::NewModelSolver(geometry::ChartPtr chart, geometry::GapPtr gap,
                               const Grid2D& grid, BCRegime regime,
                               ModelParams params, double eps)
    : chart_(std::move(chart)),
      gap_(std::move(gap)),
      grid_(grid),
      regime_(std::move(regime)),
      params_(params),
      eps_(eps) {
  if (eps_ < 1e-4 || eps_ > 0.5)
    throw ConfigInvalid("eps = " + std::to_string(eps_) +
                        " outside the supported range (1e-4, 0.5]");
  static_geometry_ = true;
  for (double p : {0.19, 0.47, 0.83}) {
    const auto fr = geometry::build_frame(*chart_, p, 1.0 - p, 0.0);
    if (fr.dX_dt.norm() > 1e-15 || fr.da_dt[0].norm() > 1e-15 ||
        fr.da_dt[1].norm() > 1e-15)
      static_geometry_ = false;
    if (std::abs(gap_->dh_dt(p, 1.0 - p, 0.0)) > 1e-15 ||
        std::abs(gap_->dh_dt(p, 1.0 - p, 0.41)) > 1e-15)
      static_geometry_ = false;
  }
}

const CoefficientTable& NewModelSolver::table(double t) const {
  if (!table_valid_ || (!static_geometry_ && table_.t != t)) {
    table_ = coeffs::build_table(*chart_, *gap_, grid_, t, 3,
                                 coeffs::kAllFamilies, params_.force);
    table_valid_ = true;
  }
  return table_;
}

FieldStack NewModelSolver::velocity_solve(double t) const {
  const auto& vr = std::get<VelocityRegime>(regime_);
  const auto& tab = table(t);
  const auto sys = assemble_vertical_closure(grid_, tab, vr.V1, vr.V2, vr.W1,
                                             vr.W2, eps_, params_.mu,
                                             params_.rho0);
  const auto mask = fd::boundary_mask(grid_);
  const Array trace = eps_ * eps_ * vr.pbar0_trace;
  fd::LinearSystem lin = fd::make_dirichlet_system(
      sys.A, sys.rhs.matrix(), mask, trace.matrix(), false);
  lin.symmetric_hint = false;
  const Eigen::VectorXd q = fd::solve_sparse(lin);

  FieldStack s = FieldStack::zeros(grid_, eps_, t);
  s.p0 = q.array() / (eps_ * eps_);
  for (int i = 0; i < 2; ++i) {
    s.u[i][2] = (sys.U2[i] * q).array();
    s.u[i][3] = (sys.U3[i] * q).array();
  }
  apply_bc_velocity(s, vr.V1, vr.V2, vr.W1, vr.W2);
  eliminate_vertical(s, tab, params_);
  return s;
}

void NewModelSolver::traction_close(FieldStack& s) const {
  const auto& tr = std::get<TractionRegime>(regime_);
  const auto& tab = table(s.t);
  apply_bc_traction(s, tr.bc, tab, params_);
  eliminate_vertical(s, tab, params_);
}

FieldStack NewModelSolver::initial_stack(double t0) const {
  if (!std::holds_alternative<VelocityRegime>(regime_))
    throw ConfigInvalid("initial_stack(t0): velocity regime only");
  return velocity_solve(t0);
}

FieldStack NewModelSolver::initial_stack(double v1, double v2,
                                         double t0) const {
  if (!std::holds_alternative<TractionRegime>(regime_))
    throw ConfigInvalid("initial_stack(v1, v2, t0): traction regime only");
  FieldStack s = FieldStack::zeros(grid_, eps_, t0);
  s.u[0][0] = Array::Constant(grid_.size(), v1);
  s.u[1][0] = Array::Constant(grid_.size(), v2);
  traction_close(s);
  return s;
}

FieldStack NewModelSolver::advance(const FieldStack& s, double dt) {
  if (std::holds_alternative<VelocityRegime>(regime_)) {
    // Quasi-static regime: every snapshot is fully determined by the
    // boundary data; the evolution equations are residual diagnostics.
    return velocity_solve(s.t + dt);
  }

  const auto& tr = std::get<TractionRegime>(regime_);
  const auto& tab = table(s.t);
  const Array c1 = table_field(tab, [](const auto& p) { return p.C0(1); });
  const Array c2 = table_field(tab, [](const auto& p) { return p.C0(2); });
  fd::check_advective_cfl(grid_, s.u[0][0] - c1, s.u[1][0] - c2, dt);

  if (!diffusion_ || diffusion_dt_ != dt ||
      (!static_geometry_ && diffusion_t_ != s.t)) {
    const Array j11 = table_field(tab, [](const auto& p) { return p.J(0, 0, 1, 1); });
    const Array j12 = table_field(tab, [](const auto& p) { return p.J(0, 0, 1, 2); });
    const Array j22 = table_field(tab, [](const auto& p) { return p.J(0, 0, 2, 2); });
    diffusion_ = std::make_unique<fd::ImplicitDiffusion>(
        grid_, j11, j12, j22, params_.nu(), dt, tr.bc.edges);
    diffusion_dt_ = dt;
    diffusion_t_ = s.t;
  }

  fd::TendencyFn rhs = [&](double t, const std::vector<Array>& f) {
    FieldStack tmp = s;
    tmp.t = t;
    tmp.u[0][0] = f[0];
    tmp.u[1][0] = f[1];
    traction_close(tmp);
    auto [t1, t2] =
        u0_tendency(tmp, table(t), params_, /*include_diffusion=*/false);
    return std::vector<Array>{t1, t2};
  };
  fd::BoundaryFn bcfn = [&](std::vector<Array>& f) {
    fd::apply_boundary(grid_, tr.bc.edges, f[0], tr.bc.Vdir1);
    fd::apply_boundary(grid_, tr.bc.edges, f[1], tr.bc.Vdir2);
  };
  const auto out = fd::time_step_imex(
      s.t, dt, {s.u[0][0], s.u[1][0]}, rhs,
      {diffusion_.get(), diffusion_.get()}, {&tr.bc.Vdir1, &tr.bc.Vdir2}, bcfn);

  FieldStack next = s;
  next.t = s.t + dt;
  next.u[0][0] = out[0];
  next.u[1][0] = out[1];
  traction_close(next);
  return next;
}

Group1Residuals NewModelSolver::residuals(const FieldStack& s) const {
  return residual_group1(s, table(s.t), params_);
}

double NewModelSolver::closure_defect(const FieldStack& s) const {
  return vertical_closure_defect(s, table(s.t));
}

}  // namespace filmflow::newmodel
