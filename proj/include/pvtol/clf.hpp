#pragma once

#include <vector>

#include "pvtol/model.hpp"

// Control Lyapunov Function V = 1/2 z'Pz with the Kronecker-structured
// P = diag(kx, ky) (x) P0, its Riccati-inequality certificate, and the
// quantities (V, alpha, beta, b) the Sontag law consumes.

namespace pvtol {

// A = I2 (x) (4x4 upper shift), B = I2 (x) [0 0 0 1]'.
struct LinearPair {
  Mat8 A;
  Mat82 B;
};

LinearPair linear_pair();

struct ClfMatrix {
  Mat8 P;
  double kx;
  double ky;

  // The constant 4x4 block; positive definite.
  static const Eigen::Matrix4d& P0();
};

struct DefinitenessResult {
  bool negative_definite;
  double margin; // smallest Cholesky pivot of -M (meaningful when positive)
};

struct GridPoint {
  double kx;
  double ky;
  bool negdef;
  double margin;
};

struct ClfEvaluation {
  double V;     // 1/2 z'Pz
  double alpha; // z'P phi
  Vec2 beta;    // gamma'P z
  double b;     // beta'beta
  double z_sq;  // z'z, used to scale the beta ~ 0 floor
};

// Throws std::domain_error on non-positive gains, std::runtime_error if
// the assembled P fails its Cholesky certificate.
ClfMatrix build_clf(double kx, double ky);

// A'P + PA - PBB'P. Negative definiteness is the caller's check.
Mat8 riccati_residual(const ClfMatrix& clf);

// Cholesky-pivot test of -M. M must be symmetric to 1e-12 (relative);
// asymmetric input throws std::invalid_argument.
DefinitenessResult certify_negative_definite(const Eigen::MatrixXd& M);

// Log-spaced n x n grid over [lo, hi] on both gain axes; one GridPoint
// per sample, row-major in (kx, ky).
std::vector<GridPoint> sweep_gain_grid(double lo, double hi, int n);

ClfEvaluation evaluate_clf(const ClfMatrix& clf, const Vec8& z, const Vec8& phi,
                           const Mat82& gamma);

} // namespace pvtol
