#include "pvtol/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace pvtol {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::Singular: return "singular";
  }
  return "unknown";
}

const char* to_string(ControllerKind k) {
  return k == ControllerKind::Fbl ? "fbl" : "invopt";
}

CompensatorState SimConfig::initial_compensator() const {
  return init_comp.value_or(CompensatorState{plant.gravity, 0.0});
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::domain_error("sim.dt must be > 0");
  if (!(t_final > 0.0)) throw std::domain_error("sim.t_final must be > 0");
  if (decimation < 1) throw std::domain_error("sim.decimation must be >= 1");
  if (!(delta_f > 0.0)) throw std::domain_error("sim.delta_f must be > 0");
  if (!(delta_tau > 0.0)) throw std::domain_error("sim.delta_tau must be > 0");
  if (!(kx > 0.0 && ky > 0.0)) throw std::domain_error("control gains kx, ky must be > 0");
  if (!std::isfinite(setpoint.x_ref) || !std::isfinite(setpoint.y_ref))
    throw std::domain_error("control.setpoint must be finite");
  plant.validate();
  sontag.validate();
}

bool AugmentedState::finite_and_bounded(double limit) const {
  const double vals[] = {plant.x,     plant.y,        plant.xdot, plant.ydot,
                         plant.theta, plant.thetadot, comp.fhat,  comp.fhatdot,
                         cost};
  for (double v : vals)
    if (!std::isfinite(v) || std::abs(v) > limit) return false;
  return true;
}

LoopContext LoopContext::make(const SimConfig& cfg) {
  cfg.validate();
  return LoopContext{cfg, build_clf(cfg.kx, cfg.ky), FblGains::from_k0(cfg.k0)};
}

ControlCommand LoopContext::command(const AugmentedState& a) const {
  const NormalFormFields nf = normal_form_fields(a.plant, a.comp, cfg.plant);
  const Vec8 z = lift_to_normal_form(a.plant, a.comp, cfg.plant);
  const Vec8 e = reference_shift(z, cfg.setpoint);
  if (cfg.controller == ControllerKind::InvOpt)
    return sontag_control(evaluate_clf(clf, e, nf.phi, nf.gamma), cfg.sontag);
  const Vec2 phi_tail{nf.phi[3], nf.phi[7]};
  Mat2 G;
  G << nf.gamma(3, 0), nf.gamma(3, 1), nf.gamma(7, 0), nf.gamma(7, 1);
  return fbl_control(e, phi_tail, G, gains, a.comp.fhat, cfg.sontag.fhat_floor);
}

AugmentedState closed_loop_deriv(const AugmentedState& a, const LoopContext& ctx) {
  const NormalFormFields nf = normal_form_fields(a.plant, a.comp, ctx.cfg.plant);
  const Vec8 z = lift_to_normal_form(a.plant, a.comp, ctx.cfg.plant);
  const Vec8 e = reference_shift(z, ctx.cfg.setpoint);
  const ClfEvaluation ev = evaluate_clf(ctx.clf, e, nf.phi, nf.gamma);

  ControlCommand cmd;
  if (ctx.cfg.controller == ControllerKind::InvOpt) {
    cmd = sontag_control(ev, ctx.cfg.sontag);
  } else {
    const Vec2 phi_tail{nf.phi[3], nf.phi[7]};
    Mat2 G;
    G << nf.gamma(3, 0), nf.gamma(3, 1), nf.gamma(7, 0), nf.gamma(7, 1);
    cmd = fbl_control(e, phi_tail, G, ctx.gains, a.comp.fhat, ctx.cfg.sontag.fhat_floor);
  }
  const ControlCommand applied{ctx.cfg.delta_f * cmd.u1, ctx.cfg.delta_tau * cmd.u2};

  const PlantInput u = recover_plant_input(a.comp, a.plant, applied.u2, ctx.cfg.plant);

  AugmentedState d;
  d.plant = plant_deriv(a.plant, u, ctx.cfg.plant);
  d.comp.fhat = a.comp.fhatdot;
  d.comp.fhatdot = applied.u1;
  d.cost = cost_integrand(ev, applied, mu_value(ev, ctx.cfg.sontag));
  return d;
}

namespace {

AugmentedState axpy(const AugmentedState& a, double h, const AugmentedState& d) {
  AugmentedState r;
  r.plant.x = a.plant.x + h * d.plant.x;
  r.plant.y = a.plant.y + h * d.plant.y;
  r.plant.xdot = a.plant.xdot + h * d.plant.xdot;
  r.plant.ydot = a.plant.ydot + h * d.plant.ydot;
  r.plant.theta = a.plant.theta + h * d.plant.theta;
  r.plant.thetadot = a.plant.thetadot + h * d.plant.thetadot;
  r.comp.fhat = a.comp.fhat + h * d.comp.fhat;
  r.comp.fhatdot = a.comp.fhatdot + h * d.comp.fhatdot;
  r.cost = a.cost + h * d.cost;
  return r;
}

AugmentedState rk4_combine(const AugmentedState& a, double dt, const AugmentedState& k1,
                           const AugmentedState& k2, const AugmentedState& k3,
                           const AugmentedState& k4) {
  AugmentedState s = axpy(a, dt / 6.0, k1);
  s = axpy(s, dt / 3.0, k2);
  s = axpy(s, dt / 3.0, k3);
  return axpy(s, dt / 6.0, k4);
}

} // namespace

AugmentedState rk4_step(const AugmentedState& a, double dt, const LoopContext& ctx) {
  const AugmentedState k1 = closed_loop_deriv(a, ctx);
  const AugmentedState k2 = closed_loop_deriv(axpy(a, dt / 2.0, k1), ctx);
  const AugmentedState k3 = closed_loop_deriv(axpy(a, dt / 2.0, k2), ctx);
  const AugmentedState k4 = closed_loop_deriv(axpy(a, dt, k3), ctx);
  return rk4_combine(a, dt, k1, k2, k3, k4);
}

namespace {

SimRecord make_record(double t, const AugmentedState& a, const LoopContext& ctx) {
  SimRecord rec;
  rec.t = t;
  rec.state = a.plant;
  rec.comp = a.comp;
  rec.cmd = ctx.command(a);
  const ControlCommand applied{ctx.cfg.delta_f * rec.cmd.u1, ctx.cfg.delta_tau * rec.cmd.u2};
  rec.applied = recover_plant_input(a.comp, a.plant, applied.u2, ctx.cfg.plant);
  const NormalFormFields nf = normal_form_fields(a.plant, a.comp, ctx.cfg.plant);
  const Vec8 e = reference_shift(lift_to_normal_form(a.plant, a.comp, ctx.cfg.plant),
                                 ctx.cfg.setpoint);
  rec.V = evaluate_clf(ctx.clf, e, nf.phi, nf.gamma).V;
  rec.J = a.cost;
  return rec;
}

} // namespace

RunResult run(const SimConfig& cfg) {
  const LoopContext ctx = LoopContext::make(cfg);
  AugmentedState a;
  a.plant = cfg.init_plant;
  a.comp = cfg.initial_compensator();
  a.cost = 0.0;

  RunResult result;
  const long n = std::lround(cfg.t_final / cfg.dt);
  result.records.reserve(static_cast<std::size_t>(n / cfg.decimation) + 2);

  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    try {
      if (i % cfg.decimation == 0) result.records.push_back(make_record(t, a, ctx));
      a = rk4_step(a, cfg.dt, ctx);
    } catch (const SingularThrustError&) {
      result.status = RunStatus::Singular;
      result.t_end = t;
      return result;
    }
    if (!a.finite_and_bounded()) {
      result.status = RunStatus::Diverged;
      result.t_end = static_cast<double>(i + 1) * cfg.dt;
      return result;
    }
  }
  try {
    result.records.push_back(make_record(static_cast<double>(n) * cfg.dt, a, ctx));
  } catch (const SingularThrustError&) {
    result.status = RunStatus::Singular;
    result.t_end = static_cast<double>(n) * cfg.dt;
    return result;
  }
  result.status = RunStatus::Completed;
  result.t_end = static_cast<double>(n) * cfg.dt;
  return result;
}

namespace {

// (theta, thetadot, fhat, fhatdot) recovered from z; valid while fhat > 0.
struct RecoveredState {
  double theta;
  double thetadot;
  double fhat;
  double fhatdot;
};

RecoveredState recover_from_z(const Vec8& z, double gravity) {
  RecoveredState r;
  r.fhat = std::hypot(z[2], z[6] + gravity);
  r.theta = std::atan2(-z[2], z[6] + gravity);
  const double st = std::sin(r.theta);
  const double ct = std::cos(r.theta);
  // Solve G [fhatdot thetadot]' = [z4 z8]', det G = fhat.
  r.fhatdot = -st * z[3] + ct * z[7];
  r.thetadot = (-ct * z[3] - st * z[7]) / r.fhat;
  return r;
}

struct NfState {
  Vec8 z;
  double cost;
};

NfState nf_deriv(const NfState& s, const LoopContext& ctx) {
  const RecoveredState rec = recover_from_z(s.z, ctx.cfg.plant.gravity);
  PlantState ps;
  ps.theta = rec.theta;
  ps.thetadot = rec.thetadot;
  const CompensatorState cs{rec.fhat, rec.fhatdot};
  const NormalFormFields tail = normal_form_fields(ps, cs, ctx.cfg.plant);

  Vec8 phi;
  phi << s.z[1], s.z[2], s.z[3], tail.phi[3], s.z[5], s.z[6], s.z[7], tail.phi[7];
  const Mat82& gamma = tail.gamma;
  const Vec8 e = reference_shift(s.z, ctx.cfg.setpoint);
  const ClfEvaluation ev = evaluate_clf(ctx.clf, e, phi, gamma);

  ControlCommand cmd;
  if (ctx.cfg.controller == ControllerKind::InvOpt) {
    cmd = sontag_control(ev, ctx.cfg.sontag);
  } else {
    const Vec2 phi_tail{phi[3], phi[7]};
    Mat2 G;
    G << gamma(3, 0), gamma(3, 1), gamma(7, 0), gamma(7, 1);
    cmd = fbl_control(e, phi_tail, G, ctx.gains, cs.fhat, ctx.cfg.sontag.fhat_floor);
  }
  const Vec2 applied{ctx.cfg.delta_f * cmd.u1, ctx.cfg.delta_tau * cmd.u2};

  NfState d;
  d.z = phi + gamma * applied;
  d.cost = cost_integrand(ev, ControlCommand{applied[0], applied[1]},
                          mu_value(ev, ctx.cfg.sontag));
  return d;
}

NfState nf_axpy(const NfState& a, double h, const NfState& d) {
  return NfState{a.z + h * d.z, a.cost + h * d.cost};
}

} // namespace

NormalFormRun run_normal_form(const SimConfig& cfg) {
  const LoopContext ctx = LoopContext::make(cfg);
  NfState s{lift_to_normal_form(cfg.init_plant, cfg.initial_compensator(), cfg.plant),
            0.0};

  NormalFormRun out;
  const long n = std::lround(cfg.t_final / cfg.dt);
  for (long i = 0; i < n; ++i) {
    if (i % cfg.decimation == 0)
      out.samples.push_back({static_cast<double>(i) * cfg.dt, s.z});
    try {
      const NfState k1 = nf_deriv(s, ctx);
      const NfState k2 = nf_deriv(nf_axpy(s, cfg.dt / 2.0, k1), ctx);
      const NfState k3 = nf_deriv(nf_axpy(s, cfg.dt / 2.0, k2), ctx);
      const NfState k4 = nf_deriv(nf_axpy(s, cfg.dt, k3), ctx);
      NfState next = nf_axpy(s, cfg.dt / 6.0, k1);
      next = nf_axpy(next, cfg.dt / 3.0, k2);
      next = nf_axpy(next, cfg.dt / 3.0, k3);
      s = nf_axpy(next, cfg.dt / 6.0, k4);
    } catch (const SingularThrustError&) {
      out.status = RunStatus::Singular;
      return out;
    }
    if (!s.z.allFinite() || s.z.cwiseAbs().maxCoeff() > 1e9) {
      out.status = RunStatus::Diverged;
      return out;
    }
  }
  out.samples.push_back({static_cast<double>(n) * cfg.dt, s.z});
  return out;
}

std::vector<std::pair<double, double>> run_zero_dynamics(double theta0, double duration,
                                                         double dt,
                                                         const PlantParams& p) {
  if (!(dt > 0.0 && duration > 0.0))
    throw std::domain_error("run_zero_dynamics: dt and duration must be > 0");
  double th = theta0;
  double td = 0.0;
  std::vector<std::pair<double, double>> out;
  const long n = std::lround(duration / dt);
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    out.emplace_back(static_cast<double>(i) * dt, th);
    if (i == n) break;
    const auto [k1t, k1d] = zero_dynamics_deriv(th, td, p);
    const auto [k2t, k2d] = zero_dynamics_deriv(th + dt / 2 * k1t, td + dt / 2 * k1d, p);
    const auto [k3t, k3d] = zero_dynamics_deriv(th + dt / 2 * k2t, td + dt / 2 * k2d, p);
    const auto [k4t, k4d] = zero_dynamics_deriv(th + dt * k3t, td + dt * k3d, p);
    th += dt / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
    td += dt / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_timeseries_csv(std::ostream& os, const std::vector<SimRecord>& records) {
  os << "# schema=1\n";
  os << "t,x,y,theta,xdot,ydot,thetadot,fhat,fhatdot,f,tau,u1,u2,V,J\n";
  for (const SimRecord& r : records) {
    const double cols[] = {r.t,          r.state.x,     r.state.y,      r.state.theta,
                           r.state.xdot, r.state.ydot,  r.state.thetadot,
                           r.comp.fhat,  r.comp.fhatdot, r.applied.f,   r.applied.tau,
                           r.cmd.u1,     r.cmd.u2,      r.V,            r.J};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) os << ',';
      os << format_double(cols[i]);
    }
    os << '\n';
  }
}

} // namespace pvtol
