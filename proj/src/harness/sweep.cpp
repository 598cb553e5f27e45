#include "filmflow/harness/sweep.hpp"

#include <json.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>

#include "filmflow/coeffs/jacobian_oracle.hpp"
#include "filmflow/fd/ops.hpp"
#include "filmflow/harness/outputs.hpp"
#include "filmflow/lubrication/lubrication.hpp"
#include "filmflow/newmodel/new_model.hpp"
#include "filmflow/shallow/shallow_water.hpp"

namespace filmflow::harness {

using fd::Array;
using fd::Grid2D;

namespace {

double l2_norm(const Grid2D& g, const Array& f) {
  return std::sqrt(fd::integrate(g, f.square()));
}

Array pi0_field_local(const ScenarioConfig& c, const Grid2D& g) {
  Array out(g.size());
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      double v = c.traction.pi0_value;
      if (c.traction.pi0_type == "linear_x1")
        v += c.traction.pi0_amplitude * g.x1(i);
      else if (c.traction.pi0_type == "cosine")
        v += c.traction.pi0_amplitude * std::cos(M_PI * g.x1(i)) *
             std::cos(M_PI * g.x2(j));
      out[g.idx(i, j)] = v;
    }
  return out;
}

struct MemberResult {
  double err_linf, err_l2;
  double ratio21 = 0.0, ratio32 = 0.0;
  double closure = 0.0;
  double seconds = 0.0;
};

}  // namespace

ConvergenceReport run_epsilon_sweep(const ScenarioConfig& c, int threads) {
  if (c.eps.size() < 3)
    throw ConfigInvalid("epsilon sweep needs at least 3 values, got " +
                        std::to_string(c.eps.size()));
  for (size_t k = 1; k < c.eps.size(); ++k)
    if (!(c.eps[k] < c.eps[k - 1]))
      throw ConfigInvalid("epsilon sweep values must decrease monotonically");
  if (c.model != ModelKind::NewModel)
    throw ConfigInvalid("epsilon sweep requires model = new_model");

  const Grid2D g(c.n1, c.n2);
  auto chart = c.make_chart();
  auto gap = c.make_gap();
  newmodel::ModelParams prm;
  prm.mu = c.mu;
  prm.rho0 = c.rho0;

  ConvergenceReport rep;
  rep.regime = c.regime;
  rep.epsilons = c.eps;

  if (c.regime == "velocity") {
    lubrication::LubricationBC bc;
    bc.V1 = Array::Constant(g.size(), c.velocity.V[0]);
    bc.V2 = Array::Constant(g.size(), c.velocity.V[1]);
    bc.W1 = Array::Constant(g.size(), c.velocity.W[0]);
    bc.W2 = Array::Constant(g.size(), c.velocity.W[1]);
    bc.pressure_trace =
        Array::Constant(g.size(), c.velocity.trace_type == "constant"
                                      ? c.velocity.trace_value
                                      : 0.0);
    // Limit solve with the operator-matched discretization so the
    // comparison isolates the epsilon trend.
    const auto lim = lubrication::solve_lubrication(
        g, *chart, *gap, bc, c.mu, 0.0, lubrication::ReynoldsScheme::FluxChain);
    const double scale_inf = lim.pm2.abs().maxCoeff();
    const double scale_l2 = l2_norm(g, lim.pm2);

    auto member = [&](double eps) {
      const auto t0 = std::chrono::steady_clock::now();
      newmodel::VelocityRegime vr;
      vr.V1 = bc.V1;
      vr.V2 = bc.V2;
      vr.W1 = bc.W1;
      vr.W2 = bc.W2;
      vr.pbar0_trace = bc.pressure_trace / (eps * eps);
      newmodel::NewModelSolver solver(chart, gap, g, vr, prm, eps);
      const auto s = solver.initial_stack(0.0);
      const Array scaled = eps * eps * s.p0;
      MemberResult m;
      m.err_linf = (scaled - lim.pm2).abs().maxCoeff() / scale_inf;
      m.err_l2 = l2_norm(g, Array(scaled - lim.pm2)) / scale_l2;
      m.closure = solver.closure_defect(s);
      m.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      return m;
    };

    std::vector<MemberResult> results(c.eps.size());
    if (threads > 1) {
      std::vector<std::future<MemberResult>> futs;
      for (double e : c.eps)
        futs.push_back(std::async(std::launch::async, member, e));
      for (size_t k = 0; k < futs.size(); ++k) results[k] = futs[k].get();
    } else {
      for (size_t k = 0; k < c.eps.size(); ++k) results[k] = member(c.eps[k]);
    }
    for (const auto& m : results) {
      rep.err_linf.push_back(m.err_linf);
      rep.err_l2.push_back(m.err_l2);
      rep.closure_defect.push_back(m.closure);
      rep.runtime_seconds.push_back(m.seconds);
    }
    rep.closure_order = coeffs::fit_loglog_slope(rep.epsilons, rep.closure_defect);
  } else {
    if (!(c.T > 0.0))
      throw ConfigInvalid("traction sweep requires time.T > 0");
    shallow::TractionBC bc;
    bc.pi0 = pi0_field_local(c, g);
    bc.pi1 = bc.pi0 + c.traction.pi1_offset.value_or(0.0);
    bc.C1R = c.traction.C1R;
    bc.s0 = c.traction.s0;
    bc.edges = c.traction_edges();
    bc.Vdir1 = Array::Constant(g.size(), c.traction.V_init[0]);
    bc.Vdir2 = Array::Constant(g.size(), c.traction.V_init[1]);
    const int steps = static_cast<int>(std::llround(c.T / c.dt));

    shallow::ShallowWaterSolver sw(chart, gap, g, bc, c.mu, c.rho0);
    auto sws = sw.initial_state(c.traction.V_init[0], c.traction.V_init[1]);
    for (int k = 0; k < steps; ++k) sws = sw.step(sws, c.dt);
    const double vscale =
        std::max({sws.V1.abs().maxCoeff(), sws.V2.abs().maxCoeff(), 1e-12});
    const double vscale_l2 = std::max(
        {l2_norm(g, sws.V1), l2_norm(g, sws.V2), 1e-12});

    auto member = [&](double eps) {
      const auto t0 = std::chrono::steady_clock::now();
      newmodel::TractionRegime tr;
      tr.bc = bc;
      newmodel::NewModelSolver solver(chart, gap, g, tr, prm, eps);
      auto s = solver.initial_stack(c.traction.V_init[0], c.traction.V_init[1],
                                    0.0);
      for (int k = 0; k < steps; ++k) s = solver.advance(s, c.dt);
      MemberResult m;
      m.err_linf = std::max((s.u[0][0] - sws.V1).abs().maxCoeff(),
                            (s.u[1][0] - sws.V2).abs().maxCoeff()) /
                   vscale;
      m.err_l2 = std::sqrt(fd::integrate(g, Array((s.u[0][0] - sws.V1).square() +
                                                  (s.u[1][0] - sws.V2).square()))) /
                 vscale_l2;
      const double n1 = std::max(s.u[0][1].abs().maxCoeff(),
                                 s.u[1][1].abs().maxCoeff());
      const double n2 = std::max(s.u[0][2].abs().maxCoeff(),
                                 s.u[1][2].abs().maxCoeff());
      const double n3 = std::max(s.u[0][3].abs().maxCoeff(),
                                 s.u[1][3].abs().maxCoeff());
      m.ratio21 = n2 / std::max(n1, 1e-300);
      m.ratio32 = n3 / std::max(n2, 1e-300);
      m.closure = solver.closure_defect(s);
      m.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      return m;
    };

    std::vector<MemberResult> results(c.eps.size());
    if (threads > 1) {
      std::vector<std::future<MemberResult>> futs;
      for (double e : c.eps)
        futs.push_back(std::async(std::launch::async, member, e));
      for (size_t k = 0; k < futs.size(); ++k) results[k] = futs[k].get();
    } else {
      for (size_t k = 0; k < c.eps.size(); ++k) results[k] = member(c.eps[k]);
    }
    for (const auto& m : results) {
      rep.err_linf.push_back(m.err_linf);
      rep.err_l2.push_back(m.err_l2);
      rep.ratio_u2_u1.push_back(m.ratio21);
      rep.ratio_u3_u2.push_back(m.ratio32);
      rep.closure_defect.push_back(m.closure);
      rep.runtime_seconds.push_back(m.seconds);
    }
    rep.order_u2_u1 = coeffs::fit_loglog_slope(rep.epsilons, rep.ratio_u2_u1);
    rep.order_u3_u2 = coeffs::fit_loglog_slope(rep.epsilons, rep.ratio_u3_u2);
  }

  rep.slope_linf = coeffs::fit_loglog_slope(rep.epsilons, rep.err_linf);
  rep.slope_l2 = coeffs::fit_loglog_slope(rep.epsilons, rep.err_l2);
  return rep;
}

void write_report(const ConvergenceReport& rep, const std::string& path) {
  nlohmann::json j;
  j["regime"] = rep.regime;
  j["epsilons"] = rep.epsilons;
  j["err_linf"] = rep.err_linf;
  j["err_l2"] = rep.err_l2;
  j["slope_linf"] = rep.slope_linf;
  j["slope_l2"] = rep.slope_l2;
  if (!rep.ratio_u2_u1.empty()) {
    j["ratio_u2_over_u1"] = rep.ratio_u2_u1;
    j["ratio_u3_over_u2"] = rep.ratio_u3_u2;
    j["order_u2_over_u1"] = rep.order_u2_u1;
    j["order_u3_over_u2"] = rep.order_u3_u2;
  }
  if (!rep.closure_defect.empty()) {
    j["closure_defect"] = rep.closure_defect;
    j["closure_order"] = rep.closure_order;
  }
  j["runtime_seconds"] = rep.runtime_seconds;  // informational only
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write report '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace filmflow::harness
