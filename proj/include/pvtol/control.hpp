#pragma once

#include <array>
#include <stdexcept>

#include "pvtol/clf.hpp"
#include "pvtol/model.hpp"

// The two controllers on the normal form: dynamic feedback linearization
// with pole-placement state feedback, and the Sontag-formula inverse
// optimal law, plus the cost integrand and consistency checks.

namespace pvtol {

// uhat = [fhat'', tau]'.
struct ControlCommand {
  double u1 = 0.0;
  double u2 = 0.0;
};

// Thrown when |fhat| drops below the G-inversion floor (det G = fhat).
struct SingularThrustError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FblGains {
  Eigen::RowVector4d K0;
  Eigen::Matrix<double, 2, 8> K; // I2 (x) K0

  static FblGains from_k0(const Eigen::RowVector4d& k0);
  // Pole-placement gains from the reference design.
  static FblGains standard();
};

struct SontagParams {
  double c0 = 1.0;
  // Effective floor on b is b_floor * (1 + z'z); lambda is a 0/0 form at
  // b = 0 so the guard has to scale with the trajectory magnitude.
  double b_floor = 1e-12;
  double fhat_floor = 1e-6;

  void validate() const;
};

struct SetPoint {
  double x_ref = 0.0;
  double y_ref = 0.0;
};

// e = z - [x_ref 0 0 0 y_ref 0 0 0]'. Valid as a regulation error because
// phi and gamma do not depend on z1, z5.
Vec8 reference_shift(const Vec8& z, const SetPoint& r);

// uhat = G^-1 (-phi_tail + v), v = -K e, where phi_tail and G are rows
// 4 and 8 of the normal-form fields. Throws SingularThrustError when
// |fhat| < fhat_floor.
ControlCommand fbl_control(const Vec8& e, const Vec2& phi_tail, const Mat2& G,
                           const FblGains& gains, double fhat, double fhat_floor);

// Sontag's formula: uhat = -(c0 + lambda) beta with
// lambda = (alpha + sqrt(alpha^2 + b^2)) / b, zero when b is at the floor.
ControlCommand sontag_control(const ClfEvaluation& eval, const SontagParams& params);

// mu = c0 + lambda on the active branch, c0 otherwise. Always >= c0.
double mu_value(const ClfEvaluation& eval, const SontagParams& params);

// (mu/2) b + 1/(2 mu) uhat'uhat. Throws std::domain_error for mu <= 0.
double cost_integrand(const ClfEvaluation& eval, const ControlCommand& u, double mu);

// State penalty reconstructed from the value function:
// Q = -alpha - 1/2 beta'uhat = -alpha + 1/2 mu b.
double theorem2_Q(const ClfEvaluation& eval, const ControlCommand& u_sontag,
                  double mu);

// Closed-form V' under the Sontag law: -c0 b - sqrt(alpha^2 + b^2).
double vdot_closed_form(const ClfEvaluation& eval, const SontagParams& params);

// Routh array first-column test for a0 s^4 + ... + a4. Requires a0 > 0;
// throws std::runtime_error on a zero pivot (inconclusive).
bool routh_hurwitz_quartic(const std::array<double, 5>& coeffs);

} // namespace pvtol
