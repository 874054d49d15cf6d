#pragma once

#include <cstdint>
#include <map>

#include "pvtol/sim.hpp"

// Canonical scenarios, the nominal two-controller comparison, and the
// Monte-Carlo input-gain robustness study.

namespace pvtol {

struct Scenario {
  std::string name;
  std::string description;
  SimConfig config;
};

// Rest at the origin at hover thrust, setpoint (5, 5), epsilon = 1,
// g = 9.81, 30 s at dt = 1e-3.
Scenario canonical_scenario();

// Registered alternates, keyed by name. Always contains "canonical".
const std::map<std::string, Scenario>& scenario_registry();

struct CompareResult {
  RunResult invopt;
  RunResult fbl;
  double J_invopt;
  double J_fbl;
};

// Runs both controllers on the identical scenario; both are scored with
// the same cost functional (mu from the CLF machinery along each
// trajectory).
CompareResult compare_nominal(const Scenario& s);

struct MonteCarloConfig {
  int n_runs = 100;
  double delta_lo = 0.2;
  double delta_hi = 5.0;
  std::uint64_t seed = 42;

  void validate() const;
};

struct RunSummary {
  int id = 0;
  double delta_f = 1.0;
  double delta_tau = 1.0;
  RunStatus status = RunStatus::Completed;
  // final_err, final_cost, and tail_osc are NaN for runs that did not
  // complete; peak_theta always covers the recorded portion.
  double final_err = 0.0;   // ||z(T) - ref||
  double final_cost = 0.0;  // J(T)
  double peak_theta = 0.0;  // max |theta| over the run
  double tail_osc = 0.0;    // max |theta| minus mean |theta| over t in [25, 30]
};

struct SignalEnvelope {
  std::vector<double> min;
  std::vector<double> max;
};

// Per-sample min/max over runs for the plotted signals. A sample's
// envelope covers every run that reached that time.
struct Envelope {
  std::vector<double> t;
  SignalEnvelope x, y, theta, f, tau;
};

struct MonteCarloResult {
  std::vector<RunSummary> summaries; // ordered by run id
  Envelope envelope;
  int n_completed = 0;
  int n_diverged = 0;
  int n_singular = 0;
};

// The i-th run draws (delta_f, delta_tau) independently uniform on
// [lo, hi] from a generator seeded by (seed, i); draws are identical
// regardless of worker count.
std::pair<double, double> draw_deltas(const MonteCarloConfig& mc, int run_id);

MonteCarloResult monte_carlo(const Scenario& s, const MonteCarloConfig& mc,
                             ControllerKind kind, int jobs = 0);

// Metrics for one finished run. Throws std::invalid_argument on an empty
// record sequence. The tail window is [25, 30] s.
RunSummary summarize(const RunResult& result, const SimConfig& cfg);

void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& summaries);
void write_envelope_csv(std::ostream& os, const Envelope& env);
void write_grid_csv(std::ostream& os, const std::vector<GridPoint>& grid);

} // namespace pvtol
