#include <gtest/gtest.h>

#include <cmath>

#include "remark/analysis.hpp"
#include "remark/oracle.hpp"
#include "remark/summation.hpp"

using namespace remark;

TEST(PredictMarkingMoments, Examples) {
  const MomentSummary po = predict_marking_moments(Poisson{4.0}, {0.25, 0.5});
  EXPECT_EQ(po.mean, (Vector{1.0, 2.0}));
  EXPECT_EQ(po.disp, Matrix(2, 2));

  EXPECT_NEAR(predict_marking_moments(NegativeBinomial{2, 0.5}, {0.3, 0.6}).disp(0, 1), 0.36, 1e-15);
  EXPECT_NEAR(predict_marking_moments(Binomial{10, 0.5}, {0.5, 0.5}).disp(0, 1), -0.625, 1e-15);
}

TEST(PredictMarkingMoments, CovarianceAgreesWithOracle) {
  const MomentSummary nb =
      oracle::summarize(oracle::mark_exact(NegativeBinomial{2, 0.5}, {0.3, 0.6}, 1e-15));
  EXPECT_NEAR(nb.disp(0, 1), 0.36, 1e-10);
  const MomentSummary bin = oracle::summarize(oracle::mark_exact(Binomial{10, 0.5}, {0.5, 0.5}, 0.0));
  EXPECT_NEAR(bin.disp(0, 1), -0.625, 1e-12);
}

TEST(PredictMarkingFactorialMoment, Examples) {
  EXPECT_NEAR(predict_marking_factorial_moment(Poisson{2.0}, {0.5, 0.5}, {1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(predict_marking_factorial_moment(Binomial{3, 0.5}, {0.4, 0.6}, {2, 0}), 0.24, 1e-15);
  EXPECT_EQ(predict_marking_factorial_moment(Hermite{2.0, 1.0}, {0.4, 0.6}, {0, 0}), 1.0);
  EXPECT_THROW(predict_marking_factorial_moment(Poisson{2.0}, {0.5, 0.5}, {1}), DimensionMismatch);
}

TEST(PredictMarkingFmgf, Examples) {
  EXPECT_NEAR(predict_marking_fmgf(Binomial{2, 0.5}, {0.4, 0.6}, {1.0, 1.0}), 2.25, 1e-15);
  EXPECT_NEAR(predict_marking_fmgf(Poisson{2.0}, {0.5, 0.25}, {0.2, 0.4}), std::exp(0.4), 1e-15);
  EXPECT_EQ(predict_marking_fmgf(NegativeBinomial{2, 0.2}, {0.4, 0.6}, {0.0, 0.0}), 1.0);
  const JointPmf j = oracle::mark_exact(Poisson{2.0}, {0.5, 0.25}, 1e-15);
  EXPECT_NEAR(oracle::fmgf_exact(j, {0.2, 0.4}), std::exp(0.4), 1e-12);
}

TEST(PredictMarking, ScalarCaseIsThinning) {
  const UnivariateLaw x = NegativeBinomial{3, 0.25};
  const double a = 0.4;
  const MomentSummary s = predict_marking_moments(x, {a});
  EXPECT_DOUBLE_EQ(s.mean[0], a * mean(x));
  EXPECT_DOUBLE_EQ(s.disp(0, 0), a * a * dispersion(x));
  EXPECT_NEAR(predict_marking_factorial_moment(x, {a}, {3}), std::pow(a, 3) * factorial_moment(x, 3), 1e-14);
  EXPECT_DOUBLE_EQ(predict_marking_fmgf(x, {a}, {0.5}), fmgf(x, a * 0.5));
}

TEST(PredictRemarking, Examples) {
  const SubstochasticMatrix A{{0.5, 0.25}, {0.5, 0.5}};
  const MomentSummary s = predict_remarking_moments(ProductPoisson{{1.0, 2.0}}, A);
  EXPECT_EQ(s.mean, (Vector{1.0, 1.5}));
  EXPECT_EQ(s.disp, Matrix(2, 2));
  EXPECT_NEAR(predict_remarking_fmgf(ProductPoisson{{1.0, 2.0}}, A, {1.0, 1.0}), std::exp(2.5), 1e-12);
  EXPECT_EQ(predict_remarking_fmgf(ProductPoisson{{1.0, 2.0}}, A, {0.0, 0.0}), 1.0);

  const MultivariateLaw h =
      MultivariateHermite::from_moments({1.0, 1.0}, Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}}));
  const MomentSummary hs = predict_remarking_moments(h, SubstochasticMatrix::identity(2));
  EXPECT_EQ(hs.mean, (Vector{1.0, 1.0}));
  EXPECT_LE(max_abs_diff(hs.disp, Matrix::from_rows({{0.25, 0.25}, {0.25, 0.25}})), 1e-15);
  EXPECT_THROW(predict_remarking_moments(h, SubstochasticMatrix{{1.0}}), DimensionMismatch);
}

TEST(PredictRemarking, JointFinitePmfAgainstSummation) {
  JointPmf::Support s{{{0, 0}, 0.2}, {{1, 2}, 0.3}, {{3, 1}, 0.4}, {{2, 2}, 0.1}};
  const MultivariateLaw x = JointFinitePmf{JointPmf(2, s)};
  const SubstochasticMatrix A{{0.3, 0.6}, {0.5, 0.1}, {0.1, 0.2}};
  const JointPmf y = oracle::remark_exact(x, A, 0.0);
  for (double t1 : {-0.5, 0.0, 0.5})
    for (double t2 : {-0.25, 0.25})
      for (double t3 : {-0.5, 0.5}) {
        const Vector t{t1, t2, t3};
        EXPECT_NEAR(predict_remarking_fmgf(x, A, t), oracle::fmgf_exact(y, t), 1e-13);
      }
}

TEST(SecondFactorial, CrossMomentIdentity) {
  const MultivariateLaw x = NegativeMultinomial{2, {0.1, 0.2}};
  const SubstochasticMatrix A{{0.3, 0.6}, {0.5, 0.1}};
  const Matrix m = predict_remarking_second_factorial(second_factorial_matrix(moment_summary(x)), A);
  const JointPmf y = oracle::remark_exact(x, A, 1e-15);
  EXPECT_NEAR(m(0, 0), oracle::factorial_moment_exact(y, {2, 0}), 1e-9);
  EXPECT_NEAR(m(1, 1), oracle::factorial_moment_exact(y, {0, 2}), 1e-9);
  EXPECT_NEAR(m(0, 1), oracle::factorial_moment_exact(y, {1, 1}), 1e-9);
}

TEST(BallForms, Examples) {
  const BallForms b = ball_variance_forms(Binomial{10, 0.5}, 0.5);
  EXPECT_DOUBLE_EQ(b.cov_rb, -0.625);
  EXPECT_DOUBLE_EQ(b.var_r, 0.25 * 2.5 + 0.25 * 5.0);
  EXPECT_DOUBLE_EQ(b.disp_r, 0.25 * -2.5);
  for (double r : {0.1, 0.3, 0.8}) EXPECT_NEAR(ball_variance_forms(Poisson{3.0}, r).cov_rb, 0.0, 1e-15);
  const FinitePmf two_point{{{0, 1.0 / 3.0}, {3, 2.0 / 3.0}}};
  EXPECT_NEAR(ball_variance_forms(two_point, 0.3).cov_rb, 0.0, 1e-14);
  EXPECT_THROW(ball_variance_forms(Poisson{1.0}, 0.0), InvalidParameter);
  EXPECT_THROW(ball_variance_forms(Poisson{1.0}, 1.0), InvalidParameter);
}

TEST(BallForms, MatchOracle) {
  const UnivariateLaw x = NegativeBinomial{2, 0.4};
  const double r = 0.35;
  const BallForms b = ball_variance_forms(x, r);
  const MomentSummary s = oracle::summarize(oracle::mark_exact(x, {r, 1.0 - r}, 1e-15));
  EXPECT_NEAR(b.var_r, s.disp(0, 0) + s.mean[0], 1e-10);
  EXPECT_NEAR(b.var_b, s.disp(1, 1) + s.mean[1], 1e-10);
  EXPECT_NEAR(b.cov_rb, s.disp(0, 1), 1e-10);
  EXPECT_NEAR(b.disp_r, s.disp(0, 0), 1e-10);
}

TEST(CorrelationSign, Trichotomy) {
  EXPECT_EQ(correlation_sign(Binomial{10, 0.5}), -1);
  EXPECT_EQ(correlation_sign(NegativeBinomial{2, 0.5}), 1);
  EXPECT_EQ(correlation_sign(Poisson{7.0}), 0);
  EXPECT_EQ(correlation_sign(FinitePmf{{{0, 1.0 / 3.0}, {3, 2.0 / 3.0}}}), 0);
  EXPECT_EQ(dispersion_label(-1), "underdispersed");
  EXPECT_EQ(dispersion_label(1), "overdispersed");
  EXPECT_EQ(dispersion_label(0), "equidispersed");
}
