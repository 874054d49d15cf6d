#include "pvtol/control.hpp"

#include <cmath>

namespace pvtol {

FblGains FblGains::from_k0(const Eigen::RowVector4d& k0) {
  FblGains g;
  g.K0 = k0;
  g.K.setZero();
  g.K.block<1, 4>(0, 0) = k0;
  g.K.block<1, 4>(1, 4) = k0;
  return g;
}

FblGains FblGains::standard() {
  return from_k0(Eigen::RowVector4d{0.1875, 1.0375, 2.4, 2.55});
}

void SontagParams::validate() const {
  if (!(c0 > 0.0)) throw std::domain_error("control.c0 must be > 0");
  if (!(b_floor > 0.0)) throw std::domain_error("control.b_floor must be > 0");
  if (!(fhat_floor > 0.0)) throw std::domain_error("control.fhat_floor must be > 0");
}

Vec8 reference_shift(const Vec8& z, const SetPoint& r) {
  Vec8 e = z;
  e[0] -= r.x_ref;
  e[4] -= r.y_ref;
  return e;
}

ControlCommand fbl_control(const Vec8& e, const Vec2& phi_tail, const Mat2& G,
                           const FblGains& gains, double fhat, double fhat_floor) {
  if (std::abs(fhat) < fhat_floor)
    throw SingularThrustError("fbl_control: |fhat| below the G-inversion floor");
  const Vec2 v = -(gains.K * e);
  // det G = fhat; invert the 2x2 directly.
  const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
  const Vec2 rhs = v - phi_tail;
  ControlCommand u;
  u.u1 = (G(1, 1) * rhs[0] - G(0, 1) * rhs[1]) / det;
  u.u2 = (-G(1, 0) * rhs[0] + G(0, 0) * rhs[1]) / det;
  return u;
}

namespace {
inline bool beta_floor_active(const ClfEvaluation& ev, const SontagParams& p) {
  return ev.b <= p.b_floor * (1.0 + ev.z_sq);
}
inline double lambda_value(const ClfEvaluation& ev) {
  return (ev.alpha + std::sqrt(ev.alpha * ev.alpha + ev.b * ev.b)) / ev.b;
}
} // namespace

ControlCommand sontag_control(const ClfEvaluation& eval, const SontagParams& params) {
  if (beta_floor_active(eval, params)) return {0.0, 0.0};
  const double gain = params.c0 + lambda_value(eval);
  return {-gain * eval.beta[0], -gain * eval.beta[1]};
}

double mu_value(const ClfEvaluation& eval, const SontagParams& params) {
  if (beta_floor_active(eval, params)) return params.c0;
  return params.c0 + lambda_value(eval);
}

double cost_integrand(const ClfEvaluation& eval, const ControlCommand& u, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("cost_integrand: mu must be > 0");
  const double uu = u.u1 * u.u1 + u.u2 * u.u2;
  return 0.5 * mu * eval.b + 0.5 * uu / mu;
}

double theorem2_Q(const ClfEvaluation& eval, const ControlCommand& u_sontag,
                  double mu) {
  (void)u_sontag; // identity -alpha - 1/2 beta'u = -alpha + 1/2 mu b
  return -eval.alpha + 0.5 * mu * eval.b;
}

double vdot_closed_form(const ClfEvaluation& eval, const SontagParams& params) {
  return -params.c0 * eval.b - std::sqrt(eval.alpha * eval.alpha + eval.b * eval.b);
}

bool routh_hurwitz_quartic(const std::array<double, 5>& c) {
  if (!(c[0] > 0.0))
    throw std::domain_error("routh_hurwitz_quartic: leading coefficient must be > 0");
  // Routh array for a0 s^4 + a1 s^3 + a2 s^2 + a3 s + a4.
  const double a0 = c[0], a1 = c[1], a2 = c[2], a3 = c[3], a4 = c[4];
  if (a1 == 0.0) throw std::runtime_error("routh_hurwitz_quartic: zero pivot");
  const double b1 = (a1 * a2 - a0 * a3) / a1;
  const double b2 = a4;
  if (b1 == 0.0) throw std::runtime_error("routh_hurwitz_quartic: zero pivot");
  const double c1 = (b1 * a3 - a1 * b2) / b1;
  if (c1 == 0.0) throw std::runtime_error("routh_hurwitz_quartic: zero pivot");
  const double d1 = b2;
  return a1 > 0.0 && b1 > 0.0 && c1 > 0.0 && d1 > 0.0;
}

} // namespace pvtol
