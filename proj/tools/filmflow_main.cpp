// Scenario-driven command line for the thin-film solvers: run a single
// model, sweep the film parameter against the limit models, dump the
// geometric coefficient catalogue, or run the built-in verification
// suites.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "filmflow/errors.hpp"
#include "filmflow/harness/outputs.hpp"
#include "filmflow/harness/scenario.hpp"
#include "filmflow/harness/sweep.hpp"
#include "filmflow/harness/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kVerifyFailure = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filmflow: viscous film flow between two close moving surfaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  unsigned long long seed = 0;
  bool seed_given = false;
  double dump_t = 0.0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* copt = cmd->add_option("--config", config_path, "scenario JSON");
    if (needs_config) copt->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--threads", threads,
                    "parallel sweep members (default 1; runs are\n"
                    "single-threaded for determinism)");
    cmd->add_option("--seed", seed, "sampling seed (overrides config)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  auto* run = app.add_subcommand("run", "run the configured model once");
  add_common(run, true);
  auto* sweep =
      app.add_subcommand("sweep", "epsilon sweep against the limit model");
  add_common(sweep, true);
  auto* dump = app.add_subcommand("dump-coeffs",
                                  "dump the coefficient catalogue as CSV");
  add_common(dump, true);
  dump->add_option("--t", dump_t, "evaluation time (default 0)");
  auto* verify =
      app.add_subcommand("verify", "run the built-in oracle suites");
  add_common(verify, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      unsigned long long s = seed;
      if (!seed_given && !config_path.empty())
        s = filmflow::harness::load_config(config_path).seed;
      const auto results = filmflow::harness::run_verification(s);
      for (const auto& r : results)
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
      return filmflow::harness::all_passed(results) ? kOk : kVerifyFailure;
    }

    auto config = filmflow::harness::load_config(config_path);
    if (seed_given) config.seed = seed;
    const std::string dir = out_dir.empty() ? config.out_dir : out_dir;

    if (run->parsed()) {
      const auto files = filmflow::harness::run_scenario(config, dir);
      for (const auto& f : files) std::printf("wrote %s/%s\n", dir.c_str(), f.c_str());
      return kOk;
    }
    if (sweep->parsed()) {
      const auto rep = filmflow::harness::run_epsilon_sweep(config, threads);
      filmflow::harness::ensure_dir(dir);
      filmflow::harness::write_report(rep, dir + "/report.json");
      std::printf("regime %s: slope_linf = %.3f, slope_l2 = %.3f\n",
                  rep.regime.c_str(), rep.slope_linf, rep.slope_l2);
      std::printf("wrote %s/report.json\n", dir.c_str());
      return kOk;
    }
    if (dump->parsed()) {
      filmflow::harness::ensure_dir(dir);
      filmflow::harness::dump_coefficients(config, dump_t,
                                           dir + "/coefficients.csv");
      std::printf("wrote %s/coefficients.csv\n", dir.c_str());
      return kOk;
    }
  } catch (const filmflow::ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const filmflow::Error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolverError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolverError;
  }
  return kOk;
}
