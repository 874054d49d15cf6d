#include "pvtol/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pvtol {

void PlantParams::validate() const {
  if (!(epsilon >= 0.0)) throw std::domain_error("plant.epsilon must be >= 0");
  if (!(gravity > 0.0)) throw std::domain_error("plant.gravity must be > 0");
}

void DimensionalParams::validate() const {
  if (!(mass > 0.0 && inertia > 0.0 && arm > 0.0 && gravity > 0.0))
    throw std::domain_error("dimensional parameters must be strictly positive");
}

PlantParams DimensionalParams::normalized() const {
  validate();
  return PlantParams{inertia / (mass * arm), gravity};
}

PlantState plant_deriv(const PlantState& s, const PlantInput& u, const PlantParams& p) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  PlantState d;
  d.x = s.xdot;
  d.y = s.ydot;
  d.xdot = p.epsilon * u.tau * ct - u.f * st;
  d.ydot = p.epsilon * u.tau * st + u.f * ct - p.gravity;
  d.theta = s.thetadot;
  d.thetadot = u.tau;
  return d;
}

Mat2 decoupling_matrix(double theta, const PlantParams& p) {
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  Mat2 m;
  m << -st, p.epsilon * ct, ct, p.epsilon * st;
  return m;
}

PlantInput static_fbl(double theta, const Vec2& v, const PlantParams& p) {
  if (!(p.epsilon > 0.0))
    throw std::domain_error("static_fbl: epsilon = 0 makes the decoupling matrix singular");
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  // Explicit inverse of the decoupling matrix applied to (v + [0 g]').
  PlantInput u;
  u.f = -st * v[0] + ct * (v[1] + p.gravity);
  u.tau = (ct * v[0] + st * (v[1] + p.gravity)) / p.epsilon;
  return u;
}

std::pair<double, double> zero_dynamics_deriv(double theta, double thetadot,
                                              const PlantParams& p) {
  if (!(p.epsilon > 0.0))
    throw std::domain_error("zero_dynamics_deriv: epsilon must be > 0");
  return {thetadot, (p.gravity / p.epsilon) * std::sin(theta)};
}

Transformed to_transformed(const PlantState& s, const PlantParams& p) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  Transformed t;
  t.xhat = s.x - p.epsilon * st;
  t.yhat = s.y + p.epsilon * (ct - 1.0);
  t.xhat_dot = s.xdot - p.epsilon * s.thetadot * ct;
  t.yhat_dot = s.ydot - p.epsilon * s.thetadot * st;
  return t;
}

Vec8 lift_to_normal_form(const PlantState& s, const CompensatorState& c,
                         const PlantParams& p) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const Transformed t = to_transformed(s, p);
  Vec8 z;
  z[0] = t.xhat;
  z[1] = t.xhat_dot;
  z[2] = -c.fhat * st;
  z[3] = -c.fhatdot * st - c.fhat * s.thetadot * ct;
  z[4] = t.yhat;
  z[5] = t.yhat_dot;
  z[6] = c.fhat * ct - p.gravity;
  z[7] = c.fhatdot * ct - c.fhat * s.thetadot * st;
  return z;
}

NormalFormFields normal_form_fields(const PlantState& s, const CompensatorState& c,
                                    const PlantParams& p) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double td = s.thetadot;
  const Vec8 z = lift_to_normal_form(s, c, p);

  NormalFormFields nf;
  nf.phi << z[1], z[2], z[3],
      c.fhat * td * td * st - 2.0 * c.fhatdot * td * ct,
      z[5], z[6], z[7],
      -c.fhat * td * td * ct - 2.0 * c.fhatdot * td * st;
  nf.gamma.setZero();
  nf.gamma(3, 0) = -st;
  nf.gamma(3, 1) = -c.fhat * ct;
  nf.gamma(7, 0) = ct;
  nf.gamma(7, 1) = -c.fhat * st;
  return nf;
}

PlantInput recover_plant_input(const CompensatorState& c, const PlantState& s,
                               double tau, const PlantParams& p) {
  return PlantInput{c.fhat + p.epsilon * s.thetadot * s.thetadot, tau};
}

} // namespace pvtol
