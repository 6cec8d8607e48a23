#pragma once

#include <cmath>
#include <cstddef>

#include "remark/joint_pmf.hpp"
#include "remark/numeric.hpp"

// Direct-summation summaries of a stored JointPmf. These are the oracle side
// of every moment and FMGF comparison.

namespace remark::oracle {

/// Mean and dispersion-covariance by direct summation; dispersions use
/// E Y_i (Y_i - 1) - (E Y_i)^2.
inline MomentSummary summarize(const JointPmf& j) {
  const std::size_t d = j.dim();
  std::vector<numeric::KahanSum> first(d);
  std::vector<numeric::KahanSum> second(d * d);
  for (const auto& [y, p] : j.mass()) {
    for (std::size_t a = 0; a < d; ++a) {
      const double ya = static_cast<double>(y[a]);
      first[a] += p * ya;
      for (std::size_t b = 0; b < d; ++b) {
        const double yb = static_cast<double>(y[b]);
        second[a * d + b] += a == b ? p * ya * (ya - 1.0) : p * ya * yb;
      }
    }
  }
  MomentSummary s{Vector(d), Matrix(d, d)};
  for (std::size_t a = 0; a < d; ++a) s.mean[a] = first[a].value();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      s.disp(a, b) = second[a * d + b].value() - s.mean[a] * s.mean[b];
  return s;
}

/// E prod_i Y_i^(k_i) over the stored support.
inline double factorial_moment_exact(const JointPmf& j, const MultiIndex& k) {
  if (k.size() != j.dim()) throw DimensionMismatch("multi-index length differs from pmf dimension");
  numeric::KahanSum s;
  for (const auto& [y, p] : j.mass()) {
    double term = p;
    for (std::size_t i = 0; i < k.size(); ++i)
      term *= numeric::falling_factorial(static_cast<double>(y[i]), k[i]);
    s += term;
  }
  return s.value();
}

/// E prod_i (1 + t_i)^{Y_i} over the stored support.
inline double fmgf_exact(const JointPmf& j, const Vector& t) {
  if (t.size() != j.dim()) throw DimensionMismatch("t length differs from pmf dimension");
  numeric::KahanSum s;
  for (const auto& [y, p] : j.mass()) {
    double term = p;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (y[i] != 0) term *= std::pow(1.0 + t[i], static_cast<double>(y[i]));
    s += term;
  }
  return s.value();
}

}  // namespace remark::oracle
