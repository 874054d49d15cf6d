#include "pvtol/clf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pvtol {
namespace {

// Lower Cholesky with the pivot (the value under the square root)
// tracked; pivot sign is an exact definiteness certificate.
struct CholeskyOutcome {
  bool success;
  double min_pivot;
};

CholeskyOutcome cholesky_min_pivot(Eigen::MatrixXd m) {
  const Eigen::Index n = m.rows();
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= m(j, k) * m(j, k);
    min_pivot = std::min(min_pivot, d);
    if (!(d > 0.0)) return {false, min_pivot};
    const double l = std::sqrt(d);
    m(j, j) = l;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= m(i, k) * m(j, k);
      m(i, j) = v / l;
    }
  }
  return {true, min_pivot};
}

} // namespace

const Eigen::Matrix4d& ClfMatrix::P0() {
  static const Eigen::Matrix4d p0 = [] {
    Eigen::Matrix4d m;
    m << 0.25, 0.40, 0.95, 0.70,
         0.40, 2.40, 4.00, 3.80,
         0.95, 4.00, 9.80, 9.40,
         0.70, 3.80, 9.40, 13.0;
    return m;
  }();
  return p0;
}

LinearPair linear_pair() {
  LinearPair lp;
  lp.A.setZero();
  lp.B.setZero();
  for (int blk = 0; blk < 2; ++blk) {
    const int o = 4 * blk;
    lp.A(o + 0, o + 1) = 1.0;
    lp.A(o + 1, o + 2) = 1.0;
    lp.A(o + 2, o + 3) = 1.0;
    lp.B(o + 3, blk) = 1.0;
  }
  return lp;
}

ClfMatrix build_clf(double kx, double ky) {
  if (!(kx > 0.0) || !(ky > 0.0))
    throw std::domain_error("build_clf: gains must be positive");
  ClfMatrix clf;
  clf.kx = kx;
  clf.ky = ky;
  clf.P.setZero();
  clf.P.topLeftCorner<4, 4>() = kx * ClfMatrix::P0();
  clf.P.bottomRightCorner<4, 4>() = ky * ClfMatrix::P0();
  const auto chol = cholesky_min_pivot(clf.P);
  if (!chol.success)
    throw std::runtime_error("build_clf: P failed its positive definiteness certificate");
  return clf;
}

Mat8 riccati_residual(const ClfMatrix& clf) {
  const LinearPair lp = linear_pair();
  const Mat8& P = clf.P;
  return lp.A.transpose() * P + P * lp.A - P * lp.B * lp.B.transpose() * P;
}

DefinitenessResult certify_negative_definite(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols())
    throw std::invalid_argument("certify_negative_definite: matrix must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (((M - M.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw std::invalid_argument("certify_negative_definite: matrix is not symmetric");
  const auto chol = cholesky_min_pivot(-M);
  return {chol.success, chol.min_pivot};
}

std::vector<GridPoint> sweep_gain_grid(double lo, double hi, int n) {
  if (n < 2) throw std::domain_error("sweep_gain_grid: need at least 2 points per axis");
  if (!(lo > 0.0 && hi >= lo)) throw std::domain_error("sweep_gain_grid: bad range");

  std::vector<double> gains(n);
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    gains[i] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));

  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (double kx : gains) {
    for (double ky : gains) {
      const auto res = certify_negative_definite(riccati_residual(build_clf(kx, ky)));
      out.push_back({kx, ky, res.negative_definite, res.margin});
    }
  }
  return out;
}

ClfEvaluation evaluate_clf(const ClfMatrix& clf, const Vec8& z, const Vec8& phi,
                           const Mat82& gamma) {
  ClfEvaluation ev;
  const Vec8 pz = clf.P * z;
  ev.V = 0.5 * z.dot(pz);
  ev.alpha = pz.dot(phi);
  ev.beta = gamma.transpose() * pz;
  ev.b = ev.beta.squaredNorm();
  ev.z_sq = z.squaredNorm();
  return ev;
}

} // namespace pvtol
