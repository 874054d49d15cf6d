#pragma once

#include <Eigen/Dense>

// Planar VTOL (PVTOL) dynamics in normalized units, the center-of-
// oscillation coordinate change that removes the input coupling from
// the translational outputs, and the lift to the 8-state normal form
// used by the dynamic-extension controllers.
//
// All functions here are pure; they can be called concurrently.

namespace pvtol {

using Vec2 = Eigen::Vector2d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat82 = Eigen::Matrix<double, 8, 2>;

struct PlantParams {
  double epsilon = 1.0;  // roll/lateral coupling factor, >= 0
  double gravity = 9.81; // normalized gravity, > 0

  void validate() const;
};

// Dimensional Harrier-style model (m, J, r). Only used to derive the
// normalized parameters; all control code works on the normalized plant.
struct DimensionalParams {
  double mass;    // kg
  double inertia; // kg m^2
  double arm;     // m, moment arm of the maneuvering thrusters
  double gravity; // m/s^2

  void validate() const;
  PlantParams normalized() const; // epsilon = J/(m r)
};

// theta is kept unwrapped on purpose: zero-dynamics divergence and the
// Monte-Carlo oscillation metrics need the full winding.
struct PlantState {
  double x = 0.0;
  double y = 0.0;
  double xdot = 0.0;
  double ydot = 0.0;
  double theta = 0.0;
  double thetadot = 0.0;
};

struct PlantInput {
  double f = 0.0;   // normalized thrust
  double tau = 0.0; // normalized rolling moment
};

// Dynamic-extension states owned by the control loop. Hover equilibrium
// is (fhat, fhatdot) = (g, 0).
struct CompensatorState {
  double fhat = 0.0;
  double fhatdot = 0.0;
};

struct Transformed {
  double xhat;
  double yhat;
  double xhat_dot;
  double yhat_dot;
};

// Drift and input matrix of zdot = phi + gamma * uhat.
struct NormalFormFields {
  Vec8 phi;
  Mat82 gamma;
};

// xddot = eps*tau*cos(theta) - f*sin(theta)
// yddot = eps*tau*sin(theta) + f*cos(theta) - g
// thetaddot = tau
PlantState plant_deriv(const PlantState& s, const PlantInput& u, const PlantParams& p);

// [[-sin, eps*cos], [cos, eps*sin]]; det = -eps for all theta.
Mat2 decoupling_matrix(double theta, const PlantParams& p);

// Static feedback linearization on (x, y): composing with plant_deriv
// yields xddot = v1, yddot = v2 exactly. Requires epsilon > 0.
PlantInput static_fbl(double theta, const Vec2& v, const PlantParams& p);

// Zero dynamics thetaddot = (g/eps) * sin(theta). Requires epsilon > 0.
// Returns (thetadot, thetaddot).
std::pair<double, double> zero_dynamics_deriv(double theta, double thetadot,
                                              const PlantParams& p);

// xhat = x - eps*sin(theta), yhat = y + eps*(cos(theta) - 1), plus their
// time derivatives.
Transformed to_transformed(const PlantState& s, const PlantParams& p);

// z = [xhat, xhat', xhat'', xhat''', yhat, yhat', yhat'', yhat'''].
// The second derivatives are -fhat*sin(theta) and fhat*cos(theta) - g;
// the third derivatives follow by differentiating those.
Vec8 lift_to_normal_form(const PlantState& s, const CompensatorState& c,
                         const PlantParams& p);

NormalFormFields normal_form_fields(const PlantState& s, const CompensatorState& c,
                                    const PlantParams& p);

// Inverts fhat = f - eps*thetadot^2; tau passes through.
PlantInput recover_plant_input(const CompensatorState& c, const PlantState& s,
                               double tau, const PlantParams& p);

} // namespace pvtol
