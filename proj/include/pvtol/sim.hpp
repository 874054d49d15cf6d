#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pvtol/control.hpp"

// Fixed-step RK4 integration of the closed loop: physical plant +
// thrust compensator + cumulative-cost accumulator, with an optional
// diagonal input-gain perturbation diag(delta_f, delta_tau) applied to
// the commanded uhat.

namespace pvtol {

enum class ControllerKind { Fbl, InvOpt };

enum class RunStatus { Completed, Diverged, Singular };

const char* to_string(RunStatus s);
const char* to_string(ControllerKind k);

struct SimConfig {
  double dt = 1e-3;
  double t_final = 30.0;
  int decimation = 10; // record every decimation-th step

  ControllerKind controller = ControllerKind::InvOpt;
  SontagParams sontag;
  Eigen::RowVector4d k0 = FblGains::standard().K0;
  double kx = 1.0;
  double ky = 1.0;
  SetPoint setpoint;

  double delta_f = 1.0;
  double delta_tau = 1.0;

  PlantParams plant;
  PlantState init_plant;
  // Defaults to hover thrust (g, 0) when unset, away from det G = 0.
  std::optional<CompensatorState> init_comp;

  CompensatorState initial_compensator() const;
  void validate() const;
};

struct SimRecord {
  double t;
  PlantState state;
  CompensatorState comp;
  PlantInput applied; // perturbed input actually entering the plant
  ControlCommand cmd; // unperturbed controller output
  double V;
  double J; // cumulative cost up to t
};

struct RunResult {
  std::vector<SimRecord> records;
  RunStatus status = RunStatus::Completed;
  double t_end = 0.0; // time of divergence/singularity, else t_final
};

// Plant (6) + compensator (2) + cost accumulator (1).
struct AugmentedState {
  PlantState plant;
  CompensatorState comp;
  double cost = 0.0;

  bool finite_and_bounded(double limit = 1e9) const;
};

// Everything the derivative evaluation needs besides the state; built
// once per run.
struct LoopContext {
  SimConfig cfg;
  ClfMatrix clf;
  FblGains gains;

  static LoopContext make(const SimConfig& cfg);

  ControlCommand command(const AugmentedState& a) const;
};

AugmentedState closed_loop_deriv(const AugmentedState& a, const LoopContext& ctx);

AugmentedState rk4_step(const AugmentedState& a, double dt, const LoopContext& ctx);

RunResult run(const SimConfig& cfg);

// Integrates zdot = phi + gamma uhat directly, recovering
// (theta, thetadot, fhat, fhatdot) from z at every stage. Used to check
// that the lifted physical trajectory and the normal-form trajectory
// are the same curve. Returns samples of (t, z) at the decimation rate.
struct NormalFormSample {
  double t;
  Vec8 z;
};
struct NormalFormRun {
  std::vector<NormalFormSample> samples;
  RunStatus status = RunStatus::Completed;
};
NormalFormRun run_normal_form(const SimConfig& cfg);

// theta'' = (g/eps) sin(theta), integrated alone; (t, theta) samples.
std::vector<std::pair<double, double>> run_zero_dynamics(double theta0, double duration,
                                                         double dt,
                                                         const PlantParams& p);

// Time-series CSV: "# schema=1" comment, then header
// t,x,y,theta,xdot,ydot,thetadot,fhat,fhatdot,f,tau,u1,u2,V,J with
// 17-significant-digit floats.
void write_timeseries_csv(std::ostream& os, const std::vector<SimRecord>& records);

// 17-significant-digit float formatting shared by all CSV writers.
std::string format_double(double v);

} // namespace pvtol
