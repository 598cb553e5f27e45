#include "filmflow/harness/scenario.hpp"

#include <json.hpp>
#include <cmath>
#include <fstream>

#include "filmflow/fd/ops.hpp"
#include "filmflow/harness/outputs.hpp"
#include "filmflow/lubrication/lubrication.hpp"
#include "filmflow/newmodel/new_model.hpp"
#include "filmflow/shallow/shallow_water.hpp"

namespace filmflow::harness {

using fd::Array;
using fd::Grid2D;

namespace {

Array pi0_field(const ScenarioConfig& c, const Grid2D& g) {
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

shallow::TractionBC traction_bc(const ScenarioConfig& c, const Grid2D& g) {
  shallow::TractionBC bc;
  bc.pi0 = pi0_field(c, g);
  bc.pi1 = bc.pi0 + c.traction.pi1_offset.value_or(0.0);
  bc.C1R = c.traction.C1R;
  bc.s0 = c.traction.s0;
  bc.edges = c.traction_edges();
  bc.Vdir1 = Array::Constant(g.size(), c.traction.V_init[0]);
  bc.Vdir2 = Array::Constant(g.size(), c.traction.V_init[1]);
  return bc;
}

lubrication::LubricationBC velocity_bc(const ScenarioConfig& c,
                                       const Grid2D& g) {
  lubrication::LubricationBC bc;
  bc.V1 = Array::Constant(g.size(), c.velocity.V[0]);
  bc.V2 = Array::Constant(g.size(), c.velocity.V[1]);
  bc.W1 = Array::Constant(g.size(), c.velocity.W[0]);
  bc.W2 = Array::Constant(g.size(), c.velocity.W[1]);
  bc.pressure_trace =
      Array::Constant(g.size(), c.velocity.trace_type == "constant"
                                    ? c.velocity.trace_value
                                    : 0.0);
  return bc;
}

std::vector<std::string> run_lubrication(const ScenarioConfig& c,
                                         const std::string& dir) {
  const Grid2D g(c.n1, c.n2);
  auto chart = c.make_chart();
  auto gap = c.make_gap();
  const auto bc = velocity_bc(c, g);
  const auto sol =
      lubrication::solve_lubrication(g, *chart, *gap, bc, c.mu, 0.0);

  CsvWriter csv(dir + "/lubrication.csv");
  std::vector<std::string> cols = {"xi1", "xi2", "pm2"};
  for (const char* comp : {"u1", "u2"})
    for (const char* lv : {"000", "025", "050", "075", "100"})
      cols.push_back(std::string(comp) + "_" + lv);
  cols.push_back("u3");
  csv.header(cols);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const auto vp = lubrication::velocity_profile(sol, i, j);
      std::vector<double> row = {g.x1(i), g.x2(j), sol.pm2[g.idx(i, j)]};
      for (double x3 : {0.0, 0.25, 0.5, 0.75, 1.0}) row.push_back(vp.u1(x3));
      for (double x3 : {0.0, 0.25, 0.5, 0.75, 1.0}) row.push_back(vp.u2(x3));
      row.push_back(vp.u3);
      csv.row(row);
    }

  // pressure-peak summary
  int ipk = 0, jpk = 0;
  double pk = -1e300;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      if (sol.pm2[g.idx(i, j)] > pk) {
        pk = sol.pm2[g.idx(i, j)];
        ipk = i;
        jpk = j;
      }
  nlohmann::json s;
  s["pressure_peak"] = {{"value", pk}, {"xi1", g.x1(ipk)}, {"xi2", g.x2(jpk)}};
  s["load_integral"] = fd::integrate(g, sol.pm2);
  s["compatibility_gap"] = sol.compat_gap;
  std::ofstream out(dir + "/summary.json", std::ios::binary);
  out << s.dump(2) << "\n";
  return {"lubrication.csv", "summary.json"};
}

std::vector<std::string> run_shallow(const ScenarioConfig& c,
                                     const std::string& dir) {
  const Grid2D g(c.n1, c.n2);
  auto chart = c.make_chart();
  auto gap = c.make_gap();
  shallow::ShallowWaterSolver solver(chart, gap, g, traction_bc(c, g), c.mu,
                                     c.rho0);
  auto state = solver.initial_state(c.traction.V_init[0], c.traction.V_init[1]);

  CsvWriter csv(dir + "/shallow_timeseries.csv");
  csv.header({"t", "node", "V1", "V2", "p0"});
  auto dump_state = [&](const shallow::ShallowWaterState& s) {
    for (int q = 0; q < g.size(); ++q)
      csv.row({s.t, double(q), s.V1[q], s.V2[q], s.p0[q]});
  };
  dump_state(state);
  const double m1_0 = state.V1.mean(), m2_0 = state.V2.mean();

  const int steps =
      c.T > 0 ? static_cast<int>(std::llround(c.T / c.dt)) : 0;
  for (int k = 0; k < steps; ++k) {
    state = solver.step(state, c.dt);
    if (c.output_every > 0 && (k + 1) % c.output_every == 0 && k + 1 < steps)
      dump_state(state);
  }
  if (steps > 0) dump_state(state);

  nlohmann::json s;
  s["steps"] = steps;
  s["mean_drift"] = {{"V1", state.V1.mean() - m1_0},
                     {"V2", state.V2.mean() - m2_0}};
  s["kinetic_energy"] =
      fd::integrate(g, Array(state.V1.square() + state.V2.square()));
  std::ofstream out(dir + "/summary.json", std::ios::binary);
  out << s.dump(2) << "\n";
  return {"shallow_timeseries.csv", "summary.json"};
}

void dump_stack(const Grid2D& g, const newmodel::FieldStack& s,
                const std::string& path) {
  CsvWriter csv(path);
  std::vector<std::string> cols = {"xi1", "xi2"};
  for (int i = 1; i <= 2; ++i)
    for (int k = 0; k <= 3; ++k)
      cols.push_back("u" + std::to_string(i) + "_" + std::to_string(k));
  for (int k = 0; k <= 3; ++k) cols.push_back("p" + std::to_string(k));
  for (int k = 0; k <= 3; ++k) cols.push_back("u3_" + std::to_string(k));
  csv.header(cols);
  const Array* ps[4] = {&s.p0, &s.p1, &s.p2, &s.p3};
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const int q = g.idx(i, j);
      std::vector<double> row = {g.x1(i), g.x2(j)};
      for (int ci = 0; ci < 2; ++ci)
        for (int k = 0; k <= 3; ++k) row.push_back(s.u[ci][k][q]);
      for (int k = 0; k <= 3; ++k) row.push_back((*ps[k])[q]);
      for (int k = 0; k <= 3; ++k) row.push_back(s.u3[k][q]);
      csv.row(row);
    }
}

std::vector<std::string> run_new_model(const ScenarioConfig& c,
                                       const std::string& dir) {
  const Grid2D g(c.n1, c.n2);
  auto chart = c.make_chart();
  auto gap = c.make_gap();
  newmodel::ModelParams prm;
  prm.mu = c.mu;
  prm.rho0 = c.rho0;
  const double eps = c.eps.front();

  nlohmann::json rlog = nlohmann::json::array();
  auto log_residuals = [&](newmodel::NewModelSolver& solver,
                           const newmodel::FieldStack& s) {
    const auto r = solver.residuals(s);
    nlohmann::json e;
    e["t"] = s.t;
    e["res_linf"] = {
        r.r_u0[0].abs().maxCoeff(), r.r_u0[1].abs().maxCoeff(),
        r.r_u1[0].abs().maxCoeff(), r.r_u1[1].abs().maxCoeff(),
        r.r_u2[0].abs().maxCoeff(), r.r_u2[1].abs().maxCoeff(),
        r.r_u3[0].abs().maxCoeff(), r.r_u3[1].abs().maxCoeff(),
        r.r_div3.abs().maxCoeff()};
    e["closure_defect"] = solver.closure_defect(s);
    rlog.push_back(e);
  };

  newmodel::FieldStack s;
  if (c.regime == "velocity") {
    const auto bc = velocity_bc(c, g);
    newmodel::VelocityRegime vr;
    vr.V1 = bc.V1;
    vr.V2 = bc.V2;
    vr.W1 = bc.W1;
    vr.W2 = bc.W2;
    vr.pbar0_trace = bc.pressure_trace / (eps * eps);
    newmodel::NewModelSolver solver(chart, gap, g, vr, prm, eps);
    s = solver.initial_stack(0.0);
    log_residuals(solver, s);
    const int steps = c.T > 0 ? static_cast<int>(std::llround(c.T / c.dt)) : 0;
    for (int k = 0; k < steps; ++k) {
      s = solver.advance(s, c.dt);
      if (c.output_every > 0 && (k + 1) % c.output_every == 0)
        log_residuals(solver, s);
    }
    if (steps > 0) log_residuals(solver, s);
  } else {
    newmodel::TractionRegime tr;
    tr.bc = traction_bc(c, g);
    newmodel::NewModelSolver solver(chart, gap, g, tr, prm, eps);
    s = solver.initial_stack(c.traction.V_init[0], c.traction.V_init[1], 0.0);
    log_residuals(solver, s);
    const int steps = c.T > 0 ? static_cast<int>(std::llround(c.T / c.dt)) : 0;
    for (int k = 0; k < steps; ++k) {
      s = solver.advance(s, c.dt);
      if (c.output_every > 0 && (k + 1) % c.output_every == 0)
        log_residuals(solver, s);
    }
    if (steps > 0) log_residuals(solver, s);
  }

  dump_stack(g, s, dir + "/newmodel_stack.csv");
  std::ofstream out(dir + "/residuals.json", std::ios::binary);
  out << rlog.dump(2) << "\n";
  return {"newmodel_stack.csv", "residuals.json"};
}

}  // namespace

std::vector<std::string> run_scenario(const ScenarioConfig& c,
                                      const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::string> files;
  switch (c.model) {
    case ModelKind::Lubrication:
      if (c.regime != "velocity")
        throw ConfigInvalid("lubrication model requires the velocity regime");
      files = run_lubrication(c, out_dir);
      break;
    case ModelKind::ShallowWater:
      if (c.regime != "traction")
        throw ConfigInvalid("shallow_water model requires the traction regime");
      files = run_shallow(c, out_dir);
      break;
    case ModelKind::NewModel:
      files = run_new_model(c, out_dir);
      break;
  }
  write_manifest(out_dir, canonical_config(c), files);
  files.push_back("manifest.json");
  return files;
}

void dump_coefficients(const ScenarioConfig& c, double t,
                       const std::string& path) {
  const Grid2D g(c.n1, c.n2);
  auto chart = c.make_chart();
  auto gap = c.make_gap();
  const auto tab = coeffs::build_table(*chart, *gap, g, t, 3);

  CsvWriter csv(path);
  csv.header({"i", "j", "name", "value"});
  auto emit = [&](int i, int j, const std::string& name, double v) {
    csv.raw_row(std::to_string(i) + "," + std::to_string(j) + "," + name +
                "," + format_g17(v));
  };
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const auto& pc = tab.at(i, j);
      emit(i, j, "E", pc.fr.E);
      emit(i, j, "F", pc.fr.F);
      emit(i, j, "G", pc.fr.G);
      emit(i, j, "e", pc.fr.e);
      emit(i, j, "f", pc.fr.f);
      emit(i, j, "g", pc.fr.g);
      emit(i, j, "A0", pc.fr.A0);
      emit(i, j, "A1", pc.fr.A1);
      emit(i, j, "A2", pc.fr.A2);
      emit(i, j, "I", pc.I());
      emit(i, j, "h", pc.gp.h);
      for (int l = 1; l <= 3; ++l)
        for (int n = 0; n <= 3; ++n) {
          emit(i, j, "alpha." + std::to_string(l) + "." + std::to_string(n),
               pc.al(l, n));
          emit(i, j, "beta." + std::to_string(l) + "." + std::to_string(n),
               pc.be(l, n));
        }
      for (int jj = 0; jj <= 3; ++jj)
        for (int l = 1; l <= 3; ++l)
          for (int k = 1; k <= 2; ++k)
            emit(i, j,
                 "B." + std::to_string(jj) + "." + std::to_string(l) + "." +
                     std::to_string(k),
                 pc.B(jj, l, k));
      for (int l = 1; l <= 3; ++l)
        emit(i, j, "C0." + std::to_string(l), pc.C0(l));
      for (int jj = 0; jj <= 1; ++jj)
        for (int ii = 1; ii <= 3; ++ii)
          for (int k = 1; k <= 2; ++k)
            emit(i, j,
                 "D." + std::to_string(jj) + "." + std::to_string(ii) + "." +
                     std::to_string(k),
                 pc.D(jj, ii, k));
      for (int jj = 0; jj <= 2; ++jj)
        for (int ii = 1; ii <= 3; ++ii)
          for (int l = 1; l <= 2; ++l)
            for (int k = 1; k <= 3; ++k)
              emit(i, j,
                   "H." + std::to_string(jj) + "." + std::to_string(ii) + "." +
                       std::to_string(l) + "." + std::to_string(k),
                   pc.H(jj, ii, l, k));
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
          for (int l = 1; l <= 3; ++l)
            for (int m = 1; m <= 3; ++m)
              emit(i, j,
                   "J." + std::to_string(a) + "." + std::to_string(b) + "." +
                       std::to_string(l) + "." + std::to_string(m),
                   pc.J(a, b, l, m));
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
          for (int l = 1; l <= 3; ++l)
            emit(i, j,
                 "K." + std::to_string(a) + "." + std::to_string(b) + "." +
                     std::to_string(l),
                 pc.K(a, b, l));
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 2; ++l)
          for (int ii = 1; ii <= 3; ++ii)
            emit(i, j,
                 "L0." + std::to_string(k) + "." + std::to_string(l) + "." +
                     std::to_string(ii),
                 pc.L0(k, l, ii));
      for (int ii = 1; ii <= 2; ++ii)
        for (int k = 1; k <= 3; ++k) {
          emit(i, j, "P0." + std::to_string(ii) + "." + std::to_string(k),
               pc.P0(ii, k));
          emit(i, j, "S0." + std::to_string(ii) + "." + std::to_string(k),
               pc.S0(ii, k));
          emit(i, j, "Q0." + std::to_string(ii) + "." + std::to_string(k),
               pc.Q0(ii, k));
          emit(i, j, "Sbar." + std::to_string(ii) + "." + std::to_string(k),
               pc.Sbar(ii, k));
          emit(i, j, "chi0." + std::to_string(ii) + "." + std::to_string(k),
               pc.chi0(ii, k));
        }
      for (int k = 1; k <= 3; ++k)
        emit(i, j, "S0.3." + std::to_string(k), pc.S0(3, k));
      for (int ii = 1; ii <= 2; ++ii)
        for (int k = 1; k <= 2; ++k)
          emit(i, j, "R0." + std::to_string(ii) + "." + std::to_string(k),
               pc.R0(ii, k));
      for (int ii = 1; ii <= 2; ++ii) {
        emit(i, j, "kappa0." + std::to_string(ii), pc.kappa0(ii));
        emit(i, j, "F0." + std::to_string(ii), pc.F0(ii));
        emit(i, j, "Fbar0." + std::to_string(ii), pc.Fbar0(ii));
      }
      for (int ii = 1; ii <= 2; ++ii)
        for (int jj = 1; jj <= 2; ++jj)
          for (int l = 1; l <= 2; ++l)
            emit(i, j,
                 "psi0." + std::to_string(ii) + "." + std::to_string(jj) +
                     "." + std::to_string(l),
                 pc.psi0(ii, jj, l));
      emit(i, j, "phi1", pc.phi1);
      emit(i, j, "phi12", pc.phi12);
      emit(i, j, "phi22", pc.phi22);
      emit(i, j, "phi33", pc.phi33);
      emit(i, j, "phi23", pc.phi23);
      emit(i, j, "phi13", pc.phi13);
      for (int l = 1; l <= 2; ++l) {
        emit(i, j, "tau01." + std::to_string(l), pc.tau(coeffs::L01, l));
        emit(i, j, "tau12." + std::to_string(l), pc.tau(coeffs::L11, l));
        emit(i, j, "tau02." + std::to_string(l), pc.tau(coeffs::L02, l));
        emit(i, j, "tau23." + std::to_string(l), pc.tau(coeffs::L21, l));
        emit(i, j, "tau13." + std::to_string(l), pc.tau(coeffs::L12, l));
        emit(i, j, "tau03." + std::to_string(l), pc.tau(coeffs::L03, l));
      }
      for (int a = 1; a <= 3; ++a)
        for (int b = 0; b <= 2 && a + b <= 3; ++b)
          for (int l = 1; l <= 3; ++l)
            emit(i, j,
                 "C." + std::to_string(a) + "." + std::to_string(b) + "." +
                     std::to_string(l),
                 pc.Cij(a, b, l));
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3 && a + b <= 3; ++b) {
          if (a <= 2 && b <= 2) continue;  // lower orders already listed
          for (int l = 1; l <= 3; ++l) {
            for (int m = 1; m <= 3; ++m)
              emit(i, j,
                   "J." + std::to_string(a) + "." + std::to_string(b) + "." +
                       std::to_string(l) + "." + std::to_string(m),
                   pc.J(a, b, l, m));
          }
          for (int l = 1; l <= 3; ++l)
            emit(i, j,
                 "K." + std::to_string(a) + "." + std::to_string(b) + "." +
                     std::to_string(l),
                 pc.K(a, b, l));
        }
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
          if (!(a <= 1 && b <= 1))
            for (int l = 1; l <= 3; ++l)
              emit(i, j,
                   "K." + std::to_string(a) + "." + std::to_string(b) + "." +
                       std::to_string(l),
                   pc.K(a, b, l));
      static const char* lh_names[coeffs::kLhCount] = {
          "L10", "L01", "L20", "L11", "L02", "L30", "L21", "L12", "L03"};
      for (int w = 0; w < coeffs::kLhCount; ++w)
        for (int k = 1; k <= 3; ++k)
          for (int l = 1; l <= 2; ++l)
            for (int ii = 1; ii <= 3; ++ii)
              emit(i, j,
                   std::string(lh_names[w]) + "." + std::to_string(k) + "." +
                       std::to_string(l) + "." + std::to_string(ii),
                   pc.Lh(static_cast<coeffs::LhKind>(w), k, l, ii));
      static const char* sh_names[coeffs::kShCount] = {
          "S10", "S01", "S20", "S11", "S02", "S30", "S21", "S12", "S03"};
      for (int w = 0; w < coeffs::kShCount; ++w)
        for (int ii = 1; ii <= 3; ++ii)
          for (int k = 1; k <= 3; ++k)
            emit(i, j,
                 std::string(sh_names[w]) + "." + std::to_string(ii) + "." +
                     std::to_string(k),
                 pc.Sh(static_cast<coeffs::ShKind>(w), ii, k));
      for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m) {
          emit(i, j,
               "iota21." + std::to_string(l) + "." + std::to_string(m),
               pc.iota21(l, m));
          emit(i, j, "iota3." + std::to_string(l) + "." + std::to_string(m),
               pc.iota3(l, m));
        }
      for (int cc = 0; cc < 3; ++cc)
        emit(i, j, "eta." + std::to_string(cc + 1), pc.eta[cc]);
    }
}

}  // namespace filmflow::harness
