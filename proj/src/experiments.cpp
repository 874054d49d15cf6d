#include "pvtol/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace pvtol {

Scenario canonical_scenario() {
  Scenario s;
  s.name = "canonical";
  s.description = "step to (5, 5) from rest at hover, strong coupling";
  s.config.setpoint = SetPoint{5.0, 5.0};
  // Remaining fields are the SimConfig defaults: dt 1e-3, 30 s,
  // epsilon 1, g 9.81, unit gains, hover compensator.
  return s;
}

const std::map<std::string, Scenario>& scenario_registry() {
  static const std::map<std::string, Scenario> reg = [] {
    std::map<std::string, Scenario> m;
    Scenario canonical = canonical_scenario();
    m[canonical.name] = canonical;

    Scenario hover;
    hover.name = "hover";
    hover.description = "equilibrium hold at the origin";
    m[hover.name] = hover;

    Scenario small_step = canonical_scenario();
    small_step.name = "small-step";
    small_step.description = "step to (0.2, 0.2) from rest at hover";
    small_step.config.setpoint = SetPoint{0.2, 0.2};
    m[small_step.name] = small_step;
    return m;
  }();
  return reg;
}

CompareResult compare_nominal(const Scenario& s) {
  CompareResult out;
  SimConfig cfg = s.config;
  cfg.controller = ControllerKind::InvOpt;
  out.invopt = run(cfg);
  cfg.controller = ControllerKind::Fbl;
  out.fbl = run(cfg);
  out.J_invopt = out.invopt.records.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : out.invopt.records.back().J;
  out.J_fbl = out.fbl.records.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : out.fbl.records.back().J;
  return out;
}

void MonteCarloConfig::validate() const {
  if (n_runs < 1) throw std::domain_error("mc.runs must be >= 1");
  if (!(delta_lo > 0.0 && delta_hi >= delta_lo))
    throw std::domain_error("mc delta range must satisfy 0 < lo <= hi");
}

std::pair<double, double> draw_deltas(const MonteCarloConfig& mc, int run_id) {
  std::seed_seq seq{static_cast<std::uint64_t>(mc.seed),
                    static_cast<std::uint64_t>(run_id)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> dist(mc.delta_lo, mc.delta_hi);
  const double df = dist(gen);
  const double dtau = dist(gen);
  return {df, dtau};
}

RunSummary summarize(const RunResult& result, const SimConfig& cfg) {
  if (result.records.empty())
    throw std::invalid_argument("summarize: empty record sequence");

  RunSummary s;
  s.status = result.status;
  s.delta_f = cfg.delta_f;
  s.delta_tau = cfg.delta_tau;

  double peak = 0.0;
  for (const SimRecord& r : result.records)
    peak = std::max(peak, std::abs(r.state.theta));
  s.peak_theta = peak;

  if (result.status != RunStatus::Completed) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.final_err = nan;
    s.final_cost = nan;
    s.tail_osc = nan;
    return s;
  }

  const SimRecord& last = result.records.back();
  const Vec8 e = reference_shift(
      lift_to_normal_form(last.state, last.comp, cfg.plant), cfg.setpoint);
  s.final_err = e.norm();
  s.final_cost = last.J;

  // Fixed [25, 30] s window for the sustained-oscillation metric.
  double tail_max = 0.0, tail_sum = 0.0;
  std::size_t tail_n = 0;
  for (const SimRecord& r : result.records) {
    if (r.t < 25.0 || r.t > 30.0) continue;
    const double a = std::abs(r.state.theta);
    tail_max = std::max(tail_max, a);
    tail_sum += a;
    ++tail_n;
  }
  s.tail_osc = tail_n ? tail_max - tail_sum / static_cast<double>(tail_n) : 0.0;
  return s;
}

namespace {

void envelope_fold(Envelope& env, const RunResult& result) {
  auto grow = [&](std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    for (SignalEnvelope* sig : {&env.x, &env.y, &env.theta, &env.f, &env.tau}) {
      sig->min.resize(n, inf);
      sig->max.resize(n, -inf);
    }
  };
  if (result.records.size() > env.t.size()) {
    env.t.resize(result.records.size());
    for (std::size_t i = 0; i < result.records.size(); ++i)
      env.t[i] = result.records[i].t;
    grow(result.records.size());
  }
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const SimRecord& r = result.records[i];
    auto fold = [i](SignalEnvelope& sig, double v) {
      sig.min[i] = std::min(sig.min[i], v);
      sig.max[i] = std::max(sig.max[i], v);
    };
    fold(env.x, r.state.x);
    fold(env.y, r.state.y);
    fold(env.theta, r.state.theta);
    fold(env.f, r.applied.f);
    fold(env.tau, r.applied.tau);
  }
}

} // namespace

MonteCarloResult monte_carlo(const Scenario& s, const MonteCarloConfig& mc,
                             ControllerKind kind, int jobs) {
  mc.validate();
  s.config.validate();

  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, mc.n_runs);

  std::vector<RunResult> results(static_cast<std::size_t>(mc.n_runs));
  std::vector<SimConfig> cfgs(static_cast<std::size_t>(mc.n_runs));
  for (int i = 0; i < mc.n_runs; ++i) {
    SimConfig cfg = s.config;
    cfg.controller = kind;
    const auto [df, dtau] = draw_deltas(mc, i);
    cfg.delta_f = df;
    cfg.delta_tau = dtau;
    cfgs[static_cast<std::size_t>(i)] = cfg;
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= mc.n_runs) return;
      results[static_cast<std::size_t>(i)] = run(cfgs[static_cast<std::size_t>(i)]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // Aggregation is a deterministic fold in run-id order.
  MonteCarloResult out;
  out.summaries.reserve(static_cast<std::size_t>(mc.n_runs));
  for (int i = 0; i < mc.n_runs; ++i) {
    const auto& res = results[static_cast<std::size_t>(i)];
    RunSummary sum = summarize(res, cfgs[static_cast<std::size_t>(i)]);
    sum.id = i;
    out.summaries.push_back(sum);
    envelope_fold(out.envelope, res);
    switch (res.status) {
      case RunStatus::Completed: ++out.n_completed; break;
      case RunStatus::Diverged: ++out.n_diverged; break;
      case RunStatus::Singular: ++out.n_singular; break;
    }
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& summaries) {
  os << "# schema=1\n";
  os << "id,delta_f,delta_tau,status,final_err,final_cost,peak_theta,tail_osc\n";
  for (const RunSummary& s : summaries) {
    os << s.id << ',' << format_double(s.delta_f) << ',' << format_double(s.delta_tau)
       << ',' << to_string(s.status) << ',' << format_double(s.final_err) << ','
       << format_double(s.final_cost) << ',' << format_double(s.peak_theta) << ','
       << format_double(s.tail_osc) << '\n';
  }
}

void write_envelope_csv(std::ostream& os, const Envelope& env) {
  os << "# schema=1\n";
  os << "t,x_min,x_max,y_min,y_max,theta_min,theta_max,f_min,f_max,tau_min,tau_max\n";
  for (std::size_t i = 0; i < env.t.size(); ++i) {
    const double cols[] = {env.t[i],        env.x.min[i],     env.x.max[i],
                           env.y.min[i],    env.y.max[i],     env.theta.min[i],
                           env.theta.max[i], env.f.min[i],    env.f.max[i],
                           env.tau.min[i],  env.tau.max[i]};
    for (std::size_t k = 0; k < std::size(cols); ++k) {
      if (k) os << ',';
      os << format_double(cols[k]);
    }
    os << '\n';
  }
}

void write_grid_csv(std::ostream& os, const std::vector<GridPoint>& grid) {
  os << "# schema=1\n";
  os << "kx,ky,negdef,margin\n";
  for (const GridPoint& g : grid) {
    os << format_double(g.kx) << ',' << format_double(g.ky) << ','
       << (g.negdef ? 1 : 0) << ',' << format_double(g.margin) << '\n';
  }
}

} // namespace pvtol
