#pragma once

#include <string_view>
#include <variant>

#include "remark/core.hpp"
#include "remark/laws.hpp"
#include "remark/oracle.hpp"

namespace remark {

enum class ClosureRule {
  BinomialToMultinomial,
  PoissonToProductPoisson,
  NegativeBinomialToNegativeMultinomial,
  HermiteToMultivariateHermite,
  ProductPoissonRemark,
  MultivariateHermiteRemark,
  Oracle,
};

inline std::string_view rule_label(ClosureRule r) {
  switch (r) {
    case ClosureRule::BinomialToMultinomial: return "binomial->multinomial";
    case ClosureRule::PoissonToProductPoisson: return "poisson->product-poisson";
    case ClosureRule::NegativeBinomialToNegativeMultinomial: return "negbin->negative-multinomial";
    case ClosureRule::HermiteToMultivariateHermite: return "hermite->multivariate-hermite";
    case ClosureRule::ProductPoissonRemark: return "product-poisson->product-poisson";
    case ClosureRule::MultivariateHermiteRemark: return "multivariate-hermite->multivariate-hermite";
    case ClosureRule::Oracle: return "oracle";
  }
  return "unknown";
}

struct MarkResult {
  MultivariateLaw law;
  ClosureRule rule;
};

/// Law of a o X. Named families use their closure rule; a finite pmf goes
/// through the enumeration oracle at oracle_eps.
inline MarkResult mark(const UnivariateLaw& x, const ProbVector& a,
                       double oracle_eps = tol::kFixtureEps) {
  validate(x);
  const std::size_t c = a.size();
  return std::visit(
      detail::overloaded{
          [&](const Binomial& b) {
            Vector p(c);
            for (std::size_t i = 0; i < c; ++i) p[i] = b.p * a[i];
            return MarkResult{Multinomial{b.n, ProbVector(p)}, ClosureRule::BinomialToMultinomial};
          },
          [&](const Poisson& po) {
            Vector l(c);
            for (std::size_t i = 0; i < c; ++i) l[i] = po.lambda * a[i];
            return MarkResult{ProductPoisson{l}, ClosureRule::PoissonToProductPoisson};
          },
          [&](const NegativeBinomial& nb) {
            // Scaled odds s_i = q_i / (1 - |q|) must equal a_i q / (1 - q), which
            // solves to q_i = s_i / (1 + |s|).
            const double r = nb.odds();
            Vector s(c);
            double total = 0.0;
            for (std::size_t i = 0; i < c; ++i) {
              s[i] = a[i] * r;
              total += s[i];
            }
            Vector q(c);
            for (std::size_t i = 0; i < c; ++i) q[i] = s[i] / (1.0 + total);
            return MarkResult{NegativeMultinomial{nb.n, q},
                              ClosureRule::NegativeBinomialToNegativeMultinomial};
          },
          [&](const Hermite& h) {
            Vector mu(c);
            Matrix sigma(c, c);
            for (std::size_t i = 0; i < c; ++i) {
              mu[i] = h.mu * a[i];
              for (std::size_t j = 0; j < c; ++j) sigma(i, j) = h.sigma2 * a[i] * a[j];
            }
            return MarkResult{MultivariateHermite::from_moments(mu, sigma),
                              ClosureRule::HermiteToMultivariateHermite};
          },
          [&](const FinitePmf&) {
            return MarkResult{JointFinitePmf{oracle::mark_exact(x, a, oracle_eps)},
                              ClosureRule::Oracle};
          },
      },
      x);
}

/// Binomial thinning a o X: marking with a single colour.
inline UnivariateLaw thin(const UnivariateLaw& x, double a) {
  return to_univariate(mark(x, ProbVector{a}).law);
}

/// Law of A o X. Product Poisson and multivariate Hermite inputs use their
/// closure rule; everything else is enumerated by the oracle.
inline MarkResult remark(const MultivariateLaw& x, const SubstochasticMatrix& A,
                         double oracle_eps = tol::kFixtureEps) {
  validate(x);
  const std::size_t d = dimension(x);
  if (A.cols() != d)
    throw DimensionMismatch("A has " + std::to_string(A.cols()) +
                            " columns but the law has dimension " + std::to_string(d));
  if (const auto* p = std::get_if<ProductPoisson>(&x))
    return {ProductPoisson{A.matrix() * p->lambda}, ClosureRule::ProductPoissonRemark};
  if (const auto* h = std::get_if<MultivariateHermite>(&x)) {
    const Matrix& a = A.matrix();
    const Matrix sigma = a * h->disp() * a.transpose();
    return {MultivariateHermite::from_moments(a * h->mean(), sigma),
            ClosureRule::MultivariateHermiteRemark};
  }
  return {JointFinitePmf{oracle::remark_exact(x, A, oracle_eps)}, ClosureRule::Oracle};
}

}  // namespace remark
