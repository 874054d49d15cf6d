#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pvtol/config.hpp"

namespace fs = std::filesystem;
using namespace pvtol;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int jobs = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value)");
  cmd->add_option("--out", opts.out_dir, "output directory for CSV files");
  cmd->add_option("--seed", opts.seed, "master random seed");
  cmd->add_option("--jobs", opts.jobs, "parallel workers (0 = all cores)");
  cmd->add_option("--set", opts.overrides, "config override key=value (repeatable)");
}

CliConfig load_config(const CommonOpts& opts) {
  CliConfig cfg = opts.config_path.empty() ? CliConfig{}
                                           : CliConfig::from_file(opts.config_path);
  for (const std::string& ov : opts.overrides) cfg.set(ov);
  return cfg;
}

std::ofstream open_output(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path.string() + "'");
  return out;
}

int cmd_simulate(const CommonOpts& opts) {
  const SimConfig cfg = load_config(opts).sim_config();
  const RunResult result = run(cfg);
  auto out = open_output(opts, "sim.csv");
  write_timeseries_csv(out, result.records);
  if (result.status != RunStatus::Completed) {
    std::cerr << "run " << to_string(result.status) << " at t = " << result.t_end
              << " s\n";
    return 2;
  }
  return 0;
}

int cmd_compare(const CommonOpts& opts) {
  Scenario s;
  s.name = "configured";
  s.config = load_config(opts).sim_config();
  const CompareResult res = compare_nominal(s);
  {
    auto out = open_output(opts, "invopt.csv");
    write_timeseries_csv(out, res.invopt.records);
  }
  {
    auto out = open_output(opts, "fbl.csv");
    write_timeseries_csv(out, res.fbl.records);
  }
  std::cout << "J_invopt=" << format_double(res.J_invopt)
            << " J_fbl=" << format_double(res.J_fbl)
            << " ratio=" << format_double(res.J_fbl / res.J_invopt) << "\n";
  if (res.invopt.status != RunStatus::Completed ||
      res.fbl.status != RunStatus::Completed) {
    std::cerr << "compare: invopt " << to_string(res.invopt.status) << ", fbl "
              << to_string(res.fbl.status) << "\n";
    return 2;
  }
  return 0;
}

int cmd_montecarlo(const CommonOpts& opts) {
  const CliConfig cli = load_config(opts);
  Scenario s;
  s.name = "configured";
  s.config = cli.sim_config();
  const MonteCarloConfig mc = cli.mc_config(opts.seed);
  const MonteCarloResult res = monte_carlo(s, mc, s.config.controller, opts.jobs);
  {
    auto out = open_output(opts, "summary.csv");
    write_summary_csv(out, res.summaries);
  }
  {
    auto out = open_output(opts, "envelope.csv");
    write_envelope_csv(out, res.envelope);
  }
  std::cout << "completed=" << res.n_completed << " diverged=" << res.n_diverged
            << " singular=" << res.n_singular << "\n";
  return res.n_completed == mc.n_runs ? 0 : 3;
}

int cmd_verify_clf(const CommonOpts& opts) {
  const CliConfig cli = load_config(opts);
  const double lo = cli.grid_lo();
  const double hi = cli.grid_hi();
  const auto grid = sweep_gain_grid(lo, hi, cli.grid_n());

  // P itself must certify at unit gains before any sweep verdict.
  const auto p_cert = certify_negative_definite(-Mat8(build_clf(1.0, 1.0).P));

  auto out = open_output(opts, "clf_grid.csv");
  write_grid_csv(out, grid);

  // Points outside the claimed gain range are reported but do not
  // affect the exit code.
  bool all_claimed_pass = p_cert.negative_definite;
  for (const GridPoint& g : grid) {
    const bool in_claim = g.kx >= 0.2 && g.kx <= 1e6 && g.ky >= 0.2 && g.ky <= 1e6;
    if (in_claim && !g.negdef) {
      std::cerr << "violation at kx=" << g.kx << " ky=" << g.ky << "\n";
      all_claimed_pass = false;
    }
  }
  return all_claimed_pass ? 0 : 4;
}

int cmd_zero_dynamics(const CommonOpts& opts, double theta0, double duration,
                      double dt) {
  const SimConfig cfg = load_config(opts).sim_config();
  const auto samples = run_zero_dynamics(theta0, duration, dt, cfg.plant);
  auto out = open_output(opts, "zero_dynamics.csv");
  out << "# schema=1\n";
  out << "t,theta\n";
  for (const auto& [t, th] : samples)
    out << format_double(t) << ',' << format_double(th) << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PVTOL inverse-optimal control simulation toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  double theta0 = 1e-3;
  double duration = 10.0;
  double zd_dt = 1e-3;

  auto* simulate = app.add_subcommand("simulate", "run one closed-loop simulation");
  add_common(simulate, opts);
  auto* compare = app.add_subcommand("compare", "run both controllers on one scenario");
  add_common(compare, opts);
  auto* montecarlo =
      app.add_subcommand("montecarlo", "input-gain perturbation study");
  add_common(montecarlo, opts);
  auto* verify = app.add_subcommand("verify-clf", "certify the CLF over a gain grid");
  add_common(verify, opts);
  auto* zerodyn = app.add_subcommand("zero-dynamics", "integrate the zero dynamics");
  add_common(zerodyn, opts);
  zerodyn->add_option("--theta0", theta0, "initial attitude (rad)");
  zerodyn->add_option("--duration", duration, "duration (s)");
  zerodyn->add_option("--dt", zd_dt, "step (s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (compare->parsed()) return cmd_compare(opts);
    if (montecarlo->parsed()) return cmd_montecarlo(opts);
    if (verify->parsed()) return cmd_verify_clf(opts);
    if (zerodyn->parsed()) return cmd_zero_dynamics(opts, theta0, duration, zd_dt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
