#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sincmf/dense.hpp"
#include "sincmf/problems.hpp"
#include "support/oracles.hpp"

using sincmf::DenseSymMatrix;
using std::numbers::pi;

TEST(FunmSym, ZeroMatrixGivesIdentity) {
  const auto r = sincmf::funm_sym(DenseSymMatrix(Eigen::MatrixXd::Zero(4, 4)), [](double x) { return sincmf::sinc(x); });
  EXPECT_EQ(r.matrix(), Eigen::MatrixXd::Identity(4, 4));
}

TEST(FunmSym, DiagonalExamples) {
  const Eigen::MatrixXd d1 = Eigen::VectorXd::Constant(3, pi * pi).asDiagonal();
  const auto s = sincmf::funm_sym(DenseSymMatrix(d1), [](double x) { return sincmf::sigma(x); });
  EXPECT_LE(s.matrix().cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::MatrixXd d2 = Eigen::VectorXd::Constant(2, 4.0).asDiagonal();
  const auto t = sincmf::funm_sym(DenseSymMatrix(d2), [](double x) { return sincmf::sinc(x); });
  EXPECT_NEAR(t.matrix()(0, 0), std::sin(4.0) / 4.0, 1e-15);
  EXPECT_NEAR(t.matrix()(0, 0), -0.18920, 1e-5);
  EXPECT_EQ(t.matrix()(0, 1), 0.0);
}

TEST(DenseApply, ZeroMatrixReturnsInput) {
  const DenseSymMatrix z(Eigen::MatrixXd::Zero(5, 5));
  std::mt19937_64 gen(1);
  const auto v = oracle::random_vector(5, gen);
  EXPECT_LE((sincmf::sinc_apply_dense(z, v) - v).norm(), 1e-15);
  EXPECT_LE((sincmf::psi_apply_dense(z, v) - v).norm(), 1e-15);
  EXPECT_LE((sincmf::sigma_apply_dense(z, v) - v).norm(), 1e-15);
}

TEST(DenseApply, DiagonalUnitVector) {
  Eigen::VectorXd lam(4);
  lam << 0.0, 0.7, 3.0, 11.0;
  const DenseSymMatrix a(Eigen::MatrixXd(lam.asDiagonal()));
  for (int j = 0; j < 4; ++j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(4, j);
    const auto r = sincmf::sinc_apply_dense(a, e);
    EXPECT_NEAR(r(j), sincmf::sinc(lam(j)), 1e-15);
    EXPECT_NEAR((r - r(j) * e).norm(), 0.0, 1e-15);
    EXPECT_NEAR(sincmf::psi_apply_dense(a, e)(j), sincmf::psi(lam(j)), 1e-15);
    EXPECT_NEAR(sincmf::sigma_apply_dense(a, e)(j), sincmf::sigma(lam(j)), 1e-15);
  }
}

TEST(DenseApply, DimensionMismatch) {
  const DenseSymMatrix a(Eigen::MatrixXd::Identity(3, 3));
  try {
    sincmf::sinc_apply_dense(a, Eigen::VectorXd::Ones(4));
    FAIL();
  } catch (const sincmf::Error& e) {
    EXPECT_EQ(e.category(), sincmf::ErrorCategory::dimension_mismatch);
  }
}

TEST(DenseApply, TaylorOracleOnLaplacian) {
  const auto a = sincmf::laplacian_1d(64);
  std::mt19937_64 gen(2);
  const auto v = oracle::random_vector(64, gen);
  const auto got = sincmf::sinc_apply_dense(DenseSymMatrix(a), v);
  const auto ref = oracle::sinc_taylor(a.to_dense(), v, 50);
  EXPECT_LE((got - ref).norm(), 1e-10);
}

TEST(DenseSymMatrix, Guards) {
  Eigen::MatrixXd ns(2, 2);
  ns << 1.0, 2.0, 2.5, 1.0;
  EXPECT_THROW(DenseSymMatrix{ns}, sincmf::Error);
  try {
    DenseSymMatrix big(Eigen::MatrixXd::Zero(5001, 1));
    FAIL();
  } catch (const sincmf::Error& e) {
    EXPECT_EQ(e.category(), sincmf::ErrorCategory::dimension_mismatch);
  }
  try {
    DenseSymMatrix big(sincmf::laplacian_1d(5001));
    FAIL();
  } catch (const sincmf::Error& e) {
    EXPECT_EQ(e.category(), sincmf::ErrorCategory::scale_guard);
  }
}

TEST(ExpmI, Examples) {
  std::mt19937_64 gen(3);
  const DenseSymMatrix a(oracle::random_spd(12, 0.0, 5.0, gen));
  EXPECT_LE((sincmf::expm_i_dense(a, 0.0) - Eigen::MatrixXcd::Identity(12, 12)).norm(), 1e-13);
  const DenseSymMatrix d(Eigen::MatrixXd(Eigen::VectorXd::Constant(3, pi).asDiagonal()));
  EXPECT_LE((sincmf::expm_i_dense(d, 1.0) + Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-15);
}

TEST(ExpmIProperty, Unitary) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial;
    const DenseSymMatrix a(oracle::random_spd(n, 0.0, 10.0, gen));
    const Eigen::VectorXcd v = oracle::random_vector(n, gen).cast<sincmf::cplx>();
    const double t = 0.37 * trial - 3.0;
    EXPECT_NEAR((sincmf::expm_i_dense(a, t) * v).norm(), v.norm(), 1e-12 * v.norm());
  }
}

TEST(FunmSymProperty, IdentityFunction) {
  std::mt19937_64 gen(5);
  for (int n : {2, 7, 16, 32}) {
    const Eigen::MatrixXd a = oracle::random_spd(n, 0.0, 20.0, gen);
    const auto r = sincmf::funm_sym(DenseSymMatrix(a), [](double x) { return x; });
    EXPECT_LE((r.matrix() - a).norm(), 1e-12 * a.norm());
  }
}

TEST(FunmSymProperty, CommutesWithOrthogonalSimilarity) {
  std::mt19937_64 gen(6);
  auto f = [](double x) { return sincmf::sinc(x); };
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + 3 * trial;
    const Eigen::MatrixXd a = oracle::random_spd(n, 0.0, 15.0, gen);
    const Eigen::MatrixXd q = oracle::random_orthogonal(n, gen);
    Eigen::MatrixXd b = q.transpose() * a * q;
    b = 0.5 * (b + b.transpose()).eval();
    const Eigen::MatrixXd lhs = sincmf::funm_sym(DenseSymMatrix(b), f).matrix();
    const Eigen::MatrixXd rhs = q.transpose() * sincmf::funm_sym(DenseSymMatrix(a), f).matrix() * q;
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << n;
  }
}

TEST(DenseProperty, PsiIsQuarterSigmaTwice) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 4 + 5 * trial;
    const Eigen::MatrixXd a = oracle::random_spd(n, 0.0, 60.0, gen);
    const auto v = oracle::random_vector(n, gen);
    const DenseSymMatrix quarter(Eigen::MatrixXd(a / 4.0));
    const auto twice = sincmf::sigma_apply_dense(quarter, sincmf::sigma_apply_dense(quarter, v));
    EXPECT_LE((sincmf::psi_apply_dense(DenseSymMatrix(a), v) - twice).norm(), 1e-11 * v.norm()) << n;
  }
}
