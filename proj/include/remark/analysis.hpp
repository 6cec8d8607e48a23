#pragma once

#include <cmath>
#include <string_view>

#include "remark/core.hpp"
#include "remark/laws.hpp"

// Moments, factorial moments and FMGFs of markings and re-markings predicted
// from the input law alone, without building the output law.

namespace remark {

/// E Y_i = a_i E X, Disp(Y_i) = a_i^2 Disp(X), Cov(Y_i, Y_j) = a_i a_j Disp(X).
inline MomentSummary predict_marking_moments(const UnivariateLaw& x, const ProbVector& a) {
  const double m = mean(x);
  const double disp = dispersion(x);
  const std::size_t c = a.size();
  MomentSummary s{Vector(c), Matrix(c, c)};
  for (std::size_t i = 0; i < c; ++i) {
    s.mean[i] = a[i] * m;
    for (std::size_t j = 0; j < c; ++j) s.disp(i, j) = a[i] * a[j] * disp;
  }
  return s;
}

/// E Y^(k) = (prod_i a_i^{k_i}) E X^(|k|).
inline double predict_marking_factorial_moment(const UnivariateLaw& x, const ProbVector& a,
                                               const MultiIndex& k) {
  if (k.size() != a.size()) throw DimensionMismatch("multi-index length differs from a");
  double scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale *= std::pow(a[i], k[i]);
  return scale * factorial_moment(x, k.order());
}

/// Phi_Y(t) = Phi_X(a^T t).
inline double predict_marking_fmgf(const UnivariateLaw& x, const ProbVector& a, const Vector& t) {
  return fmgf(x, dot(a.values(), t));
}

/// E Y = A E X, Disp(Y) = A Disp(X) A^T.
inline MomentSummary predict_remarking_moments(const MultivariateLaw& x,
                                               const SubstochasticMatrix& A) {
  if (A.cols() != dimension(x)) throw DimensionMismatch("A columns differ from law dimension");
  const MomentSummary in = moment_summary(x);
  const Matrix& a = A.matrix();
  return MomentSummary{a * in.mean, a * in.disp * a.transpose()};
}

/// Phi_Y(t) = Phi_X(A^T t).
inline double predict_remarking_fmgf(const MultivariateLaw& x, const SubstochasticMatrix& A,
                                     const Vector& t) {
  if (t.size() != A.rows()) throw DimensionMismatch("t length differs from the rows of A");
  return fmgf(x, A.matrix().transpose() * t);
}

/// Second factorial cross-moments of A o X from those of X. With
/// F_kl = E X_k X_l (k != l) and F_kk = E X_k (X_k - 1), returns M where
/// M_ij = E Y_i Y_j (i != j) and M_ii = E Y_i (Y_i - 1); M = A F A^T.
inline Matrix predict_remarking_second_factorial(const Matrix& second_factorial,
                                                 const SubstochasticMatrix& A) {
  const Matrix& a = A.matrix();
  return a * second_factorial * a.transpose();
}

/// F matrix of a law from its mean and dispersion-covariance: F = Disp + m m^T.
inline Matrix second_factorial_matrix(const MomentSummary& s) {
  Matrix f = s.disp;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) f(i, j) += s.mean[i] * s.mean[j];
  return f;
}

struct BallForms {
  double var_r = 0.0;
  double var_b = 0.0;
  double cov_rb = 0.0;
  double disp_r = 0.0;
  double disp_b = 0.0;
};

/// Red/blue split of X balls painted red with probability r, blue otherwise.
inline BallForms ball_variance_forms(const UnivariateLaw& x, double r) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidParameter("r = " + format_number(r) + " outside (0, 1)");
  const double b = 1.0 - r;
  const double m = mean(x);
  const double var = variance(x);
  const double disp = dispersion(x);
  return BallForms{
      r * r * var + r * (1.0 - r) * m,
      b * b * var + b * (1.0 - b) * m,
      r * b * var - r * b * m,
      r * r * disp,
      b * b * disp,
  };
}

/// Sign of Disp(X): -1 underdispersed, 0 equidispersed, +1 overdispersed.
inline int correlation_sign(const UnivariateLaw& x) {
  const double d = dispersion(x);
  if (std::abs(d) < tol::kZeroDispersion) return 0;
  return d < 0.0 ? -1 : 1;
}

inline std::string_view dispersion_label(int sign) {
  if (sign < 0) return "underdispersed";
  if (sign > 0) return "overdispersed";
  return "equidispersed";
}

}  // namespace remark
