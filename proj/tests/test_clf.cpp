#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pvtol/clf.hpp"

using namespace pvtol;

TEST_CASE("P0 is positive definite (leading principal minors)") {
  const Eigen::Matrix4d& p0 = ClfMatrix::P0();
  for (int k = 1; k <= 4; ++k)
    CHECK(p0.topLeftCorner(k, k).determinant() > 0.0);
}

TEST_CASE("build_clf assembles the Kronecker structure") {
  SUBCASE("unit gains give two P0 blocks") {
    const ClfMatrix clf = build_clf(1.0, 1.0);
    CHECK((clf.P.topLeftCorner<4, 4>() - ClfMatrix::P0()).norm() ==
          doctest::Approx(0.0));
    CHECK((clf.P.bottomRightCorner<4, 4>() - ClfMatrix::P0()).norm() ==
          doctest::Approx(0.0));
    CHECK(clf.P.topRightCorner<4, 4>().norm() == doctest::Approx(0.0));
  }
  SUBCASE("kx scales the upper-left block") {
    const ClfMatrix clf = build_clf(2.0, 1.0);
    CHECK((clf.P.topLeftCorner<4, 4>() - 2.0 * ClfMatrix::P0()).norm() ==
          doctest::Approx(0.0));
  }
  SUBCASE("low end of the certified gain range is still definite") {
    CHECK_NOTHROW(build_clf(0.2, 0.2));
  }
  SUBCASE("non-positive gains are rejected") {
    CHECK_THROWS_AS(build_clf(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(build_clf(1.0, -2.0), std::domain_error);
  }
}

TEST_CASE("linear pair has the double-integrator-chain structure") {
  const LinearPair lp = linear_pair();
  CHECK(lp.A.cwiseAbs().sum() == doctest::Approx(6.0)); // six unit shifts
  CHECK(lp.A(0, 1) == 1.0);
  CHECK(lp.A(4, 5) == 1.0);
  CHECK(lp.A(3, 4) == 0.0); // no coupling across blocks
  CHECK(lp.B(3, 0) == 1.0);
  CHECK(lp.B(7, 1) == 1.0);
  CHECK(lp.B.cwiseAbs().sum() == doctest::Approx(2.0));
}

TEST_CASE("riccati residual") {
  SUBCASE("negative definite at unit gains") {
    const auto res = certify_negative_definite(riccati_residual(build_clf(1.0, 1.0)));
    CHECK(res.negative_definite);
    CHECK(res.margin > 0.0);
  }
  SUBCASE("(1,1) entry at unit gains is -0.49") {
    const Mat8 r = riccati_residual(build_clf(1.0, 1.0));
    CHECK(r(0, 0) == doctest::Approx(-0.49).epsilon(1e-12));
  }
  SUBCASE("block-diagonal decomposition matches the full computation") {
    const double kx = 3.7, ky = 0.9;
    const Mat8 full = riccati_residual(build_clf(kx, ky));

    Eigen::Matrix4d a0 = Eigen::Matrix4d::Zero();
    a0(0, 1) = a0(1, 2) = a0(2, 3) = 1.0;
    Eigen::Vector4d b0{0.0, 0.0, 0.0, 1.0};
    const Eigen::Matrix4d& p0 = ClfMatrix::P0();
    const Eigen::Matrix4d m0 = a0.transpose() * p0 + p0 * a0;
    const Eigen::Matrix4d o0 = p0 * b0 * b0.transpose() * p0;

    Mat8 expected = Mat8::Zero();
    expected.topLeftCorner<4, 4>() = kx * m0 - kx * kx * o0;
    expected.bottomRightCorner<4, 4>() = ky * m0 - ky * ky * o0;
    CHECK((full - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("definiteness certificate") {
  CHECK(certify_negative_definite(-Eigen::MatrixXd::Identity(5, 5)).negative_definite);
  CHECK_FALSE(
      certify_negative_definite(Eigen::MatrixXd::Zero(4, 4)).negative_definite);

  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(certify_negative_definite(asym), std::invalid_argument);
}

TEST_CASE("gain grid sweep") {
  const auto grid = sweep_gain_grid(0.2, 1e6, 3);
  REQUIRE(grid.size() == 9);
  CHECK(grid.front().kx == doctest::Approx(0.2));
  CHECK(grid.back().ky == doctest::Approx(1e6));
  for (const GridPoint& g : grid) CHECK(g.negdef);

  CHECK_THROWS_AS(sweep_gain_grid(0.2, 1e6, 1), std::domain_error);
  CHECK_THROWS_AS(sweep_gain_grid(-1.0, 1.0, 3), std::domain_error);
}

TEST_CASE("evaluate_clf") {
  const ClfMatrix clf = build_clf(1.0, 1.0);
  const Vec8 phi0 = Vec8::Zero();
  const Mat82 gamma0 = Mat82::Zero();

  SUBCASE("origin") {
    const ClfEvaluation ev = evaluate_clf(clf, Vec8::Zero(), phi0, gamma0);
    CHECK(ev.V == doctest::Approx(0.0));
    CHECK(ev.alpha == doctest::Approx(0.0));
    CHECK(ev.b == doctest::Approx(0.0));
  }
  SUBCASE("unit offset in the first coordinate") {
    Vec8 z = Vec8::Zero();
    z[0] = 1.0;
    CHECK(evaluate_clf(clf, z, phi0, gamma0).V == doctest::Approx(0.125));
  }
  SUBCASE("quadratic and linear scaling") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
      Vec8 z, phi;
      Mat82 gamma = Mat82::Zero();
      for (int k = 0; k < 8; ++k) {
        z[k] = d(gen);
        phi[k] = d(gen);
      }
      gamma(3, 0) = d(gen);
      gamma(3, 1) = d(gen);
      gamma(7, 0) = d(gen);
      gamma(7, 1) = d(gen);
      const double c = std::abs(d(gen)) + 0.1;
      const ClfEvaluation e1 = evaluate_clf(clf, z, phi, gamma);
      const ClfEvaluation ec = evaluate_clf(clf, Vec8(c * z), phi, gamma);
      CHECK(ec.V == doctest::Approx(c * c * e1.V).epsilon(1e-10));
      CHECK(ec.beta[0] == doctest::Approx(c * e1.beta[0]).epsilon(1e-10));
      CHECK(ec.beta[1] == doctest::Approx(c * e1.beta[1]).epsilon(1e-10));
    }
  }
}
