#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "remark/core.hpp"
#include "remark/joint_pmf.hpp"
#include "remark/numeric.hpp"
#include "remark/summation.hpp"

namespace remark {

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace detail

// ---------------------------------------------------------------------------
// Univariate families

struct Binomial {
  Count n = 0;
  double p = 0.0;
};

struct Poisson {
  double lambda = 0.0;
};

/// Failures before the n-th success, with failure probability q:
/// P(x) = C(n+x-1, x) q^x (1-q)^n.
struct NegativeBinomial {
  Count n = 1;
  double q = 0.0;
  double odds() const { return q / (1.0 - q); }
};

/// Law of U + 2V with U ~ Po(alpha), V ~ Po(beta), parametrised by the mean
/// mu = alpha + 2 beta and the dispersion sigma2 = 2 beta.
struct Hermite {
  double mu = 0.0;
  double sigma2 = 0.0;
  double alpha() const { return std::max(0.0, mu - sigma2); }
  double beta() const { return 0.5 * sigma2; }
};

struct FinitePmf {
  std::map<Count, double> weights;
};

using UnivariateLaw = std::variant<Binomial, Poisson, NegativeBinomial, Hermite, FinitePmf>;

// ---------------------------------------------------------------------------
// Multivariate families

struct Multinomial {
  Count n = 0;
  ProbVector p;
};

/// Independent coordinates Y_i ~ Po(lambda_i).
struct ProductPoisson {
  Vector lambda;
};

/// P(y) = Gamma(n+|y|) / (Gamma(n) prod y_i!) prod q_i^{y_i} (1-|q|)^n.
struct NegativeMultinomial {
  Count n = 1;
  Vector q;

  double total() const {
    double s = 0.0;
    for (double v : q) s += v;
    return s;
  }
  /// s_i = q_i / (1 - |q|); the FMGF is (1 - s^T t)^{-n}.
  Vector scaled_odds() const {
    const double rest = 1.0 - total();
    Vector s(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) s[i] = q[i] / rest;
    return s;
  }
};

/// Y_i = U_i + sum_j V_ij + sum_k V_ki with independent U_i ~ Po(alpha_i),
/// V_ij ~ Po(beta_ij).
struct MultivariateHermite {
  Vector alpha;
  Matrix beta;

  std::size_t dim() const noexcept { return alpha.size(); }

  Vector mean() const {
    Vector mu(alpha);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) mu[i] += beta(i, j) + beta(j, i);
    return mu;
  }

  Matrix disp() const {
    Matrix s(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        s(i, j) = i == j ? 2.0 * beta(i, i) : beta(i, j) + beta(j, i);
    return s;
  }

  /// Builds the (alpha, beta) parametrisation from a mean vector and a
  /// dispersion-covariance matrix: beta = Sigma / 2, alpha = mu - rowsums(Sigma).
  static MultivariateHermite from_moments(const Vector& mu, const Matrix& sigma) {
    const std::size_t c = mu.size();
    if (sigma.rows() != c || sigma.cols() != c)
      throw DimensionMismatch("Hermite mean and dispersion-covariance dimensions disagree");
    MultivariateHermite h{Vector(c), Matrix(c, c)};
    for (std::size_t i = 0; i < c; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        if (sigma(i, j) < -tol::kInvariantSlack)
          throw InvalidParameter("Hermite dispersion-covariance entries must be nonnegative");
        h.beta(i, j) = 0.5 * std::max(0.0, sigma(i, j));
        row += sigma(i, j);
      }
      const double a = mu[i] - row;
      if (a < -tol::kInvariantSlack * std::max(1.0, std::abs(mu[i])))
        throw InvalidParameter("Hermite alpha_" + std::to_string(i + 1) + " = " +
                               format_number(a) + " is negative");
      h.alpha[i] = std::max(0.0, a);
    }
    return h;
  }
};

struct JointFinitePmf {
  JointPmf pmf;
};

using MultivariateLaw = std::variant<Multinomial, ProductPoisson, NegativeMultinomial,
                                     MultivariateHermite, JointFinitePmf>;

// ---------------------------------------------------------------------------
// Validation and description

inline void validate(const UnivariateLaw& law) {
  std::visit(
      detail::overloaded{
          [](const Binomial& b) {
            if (b.n < 0) throw InvalidParameter("binomial n must be nonnegative");
            if (!(b.p >= 0.0 && b.p <= 1.0))
              throw InvalidParameter("binomial p = " + format_number(b.p) + " outside [0, 1]");
          },
          [](const Poisson& p) {
            if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda))
              throw InvalidParameter("poisson lambda = " + format_number(p.lambda) +
                                     " must be nonnegative");
          },
          [](const NegativeBinomial& nb) {
            if (nb.n < 1) throw InvalidParameter("negative binomial n must be a positive integer");
            if (!(nb.q >= 0.0 && nb.q < 1.0))
              throw InvalidParameter("negative binomial q = " + format_number(nb.q) +
                                     " outside [0, 1)");
          },
          [](const Hermite& h) {
            if (!(h.mu >= 0.0) || !std::isfinite(h.mu))
              throw InvalidParameter("hermite mu = " + format_number(h.mu) + " must be nonnegative");
            if (!(h.sigma2 >= 0.0))
              throw InvalidParameter("hermite sigma2 = " + format_number(h.sigma2) +
                                     " must be nonnegative");
            if (h.sigma2 > h.mu + tol::kInvariantSlack * std::max(1.0, h.mu))
              throw InvalidParameter("hermite sigma2 = " + format_number(h.sigma2) +
                                     " exceeds mu = " + format_number(h.mu));
          },
          [](const FinitePmf& f) {
            if (f.weights.empty()) throw InvalidParameter("finite pmf has empty support");
            numeric::KahanSum s;
            for (const auto& [x, w] : f.weights) {
              if (x < 0) throw InvalidParameter("finite pmf support must be nonnegative");
              if (!(w >= 0.0)) throw InvalidParameter("finite pmf weights must be nonnegative");
              s += w;
            }
            if (std::abs(s.value() - 1.0) > tol::kInvariantSlack)
              throw InvalidParameter("finite pmf weights sum to " + format_number(s.value()) +
                                     ", expected 1");
          },
      },
      law);
}

inline std::size_t dimension(const MultivariateLaw& law) {
  return std::visit(
      detail::overloaded{
          [](const Multinomial& m) { return m.p.size(); },
          [](const ProductPoisson& p) { return p.lambda.size(); },
          [](const NegativeMultinomial& nm) { return nm.q.size(); },
          [](const MultivariateHermite& h) { return h.dim(); },
          [](const JointFinitePmf& j) { return j.pmf.dim(); },
      },
      law);
}

inline void validate(const MultivariateLaw& law) {
  std::visit(
      detail::overloaded{
          [](const Multinomial& m) {
            if (m.n < 0) throw InvalidParameter("multinomial n must be nonnegative");
            if (m.p.size() == 0) throw InvalidParameter("multinomial p must be non-empty");
          },
          [](const ProductPoisson& p) {
            if (p.lambda.empty()) throw InvalidParameter("product poisson needs at least one rate");
            for (double l : p.lambda)
              if (!(l >= 0.0) || !std::isfinite(l))
                throw InvalidParameter("poisson rate " + format_number(l) + " must be nonnegative");
          },
          [](const NegativeMultinomial& nm) {
            if (nm.n < 1) throw InvalidParameter("negative multinomial n must be a positive integer");
            if (nm.q.empty()) throw InvalidParameter("negative multinomial q must be non-empty");
            for (double v : nm.q)
              if (!(v >= 0.0 && v < 1.0))
                throw InvalidParameter("negative multinomial q entry " + format_number(v) +
                                       " outside [0, 1)");
            if (!(nm.total() < 1.0))
              throw InvalidParameter("negative multinomial |q| = " + format_number(nm.total()) +
                                     " must be below 1");
          },
          [](const MultivariateHermite& h) {
            if (h.alpha.empty()) throw InvalidParameter("multivariate hermite must be non-empty");
            if (h.beta.rows() != h.dim() || h.beta.cols() != h.dim())
              throw DimensionMismatch("multivariate hermite beta must be " +
                                      std::to_string(h.dim()) + "x" + std::to_string(h.dim()));
            for (double a : h.alpha)
              if (!(a >= 0.0)) throw InvalidParameter("multivariate hermite alpha must be >= 0");
            for (std::size_t i = 0; i < h.dim(); ++i)
              for (std::size_t j = 0; j < h.dim(); ++j)
                if (!(h.beta(i, j) >= 0.0))
                  throw InvalidParameter("multivariate hermite beta must be >= 0");
          },
          [](const JointFinitePmf&) {},
      },
      law);
}

inline std::string describe(const UnivariateLaw& law) {
  return std::visit(
      detail::overloaded{
          [](const Binomial& b) {
            return "Binomial(n=" + std::to_string(b.n) + ", p=" + format_number(b.p) + ")";
          },
          [](const Poisson& p) { return "Poisson(lambda=" + format_number(p.lambda) + ")"; },
          [](const NegativeBinomial& nb) {
            return "NegativeBinomial(n=" + std::to_string(nb.n) + ", q=" + format_number(nb.q) +
                   ")";
          },
          [](const Hermite& h) {
            return "Hermite(mu=" + format_number(h.mu) + ", sigma2=" + format_number(h.sigma2) +
                   ")";
          },
          [](const FinitePmf& f) {
            std::string s = "FinitePmf{";
            bool first = true;
            for (const auto& [x, w] : f.weights) {
              if (!first) s += ", ";
              first = false;
              s += std::to_string(x) + ": " + format_number(w);
            }
            return s + "}";
          },
      },
      law);
}

inline std::string format_matrix(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += format_number(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

inline std::string describe(const MultivariateLaw& law) {
  return std::visit(
      detail::overloaded{
          [](const Multinomial& m) {
            return "Multinomial(n=" + std::to_string(m.n) + ", p=" + format_vector(m.p.values()) +
                   ")";
          },
          [](const ProductPoisson& p) {
            return "ProductPoisson(lambda=" + format_vector(p.lambda) + ")";
          },
          [](const NegativeMultinomial& nm) {
            return "NegativeMultinomial(n=" + std::to_string(nm.n) + ", q=" + format_vector(nm.q) +
                   ")";
          },
          [](const MultivariateHermite& h) {
            return "MultivariateHermite(mu=" + format_vector(h.mean()) +
                   ", Sigma=" + format_matrix(h.disp()) + ")";
          },
          [](const JointFinitePmf& j) {
            return "JointFinitePmf(dim=" + std::to_string(j.pmf.dim()) +
                   ", support=" + std::to_string(j.pmf.size()) +
                   " points, tail<=" + format_number(j.pmf.tail_bound()) + ")";
          },
      },
      law);
}

// ---------------------------------------------------------------------------
// Probability mass functions (log space)

inline double log_pmf(const UnivariateLaw& law, Count x) {
  using numeric::kNegInf;
  using numeric::log_factorial;
  using numeric::xlogy;
  if (x < 0) return kNegInf;
  return std::visit(
      detail::overloaded{
          [x](const Binomial& b) {
            if (x > b.n) return kNegInf;
            return log_factorial(b.n) - log_factorial(x) - log_factorial(b.n - x) + xlogy(x, b.p) +
                   xlogy(b.n - x, 1.0 - b.p);
          },
          [x](const Poisson& p) { return numeric::log_poisson_pmf(p.lambda, x); },
          [x](const NegativeBinomial& nb) {
            const double n = static_cast<double>(nb.n);
            return std::lgamma(n + static_cast<double>(x)) - std::lgamma(n) - log_factorial(x) +
                   xlogy(x, nb.q) + n * std::log1p(-nb.q);
          },
          [x](const Hermite& h) {
            const double alpha = h.alpha();
            const double beta = h.beta();
            std::vector<double> terms;
            for (Count v = 0; 2 * v <= x; ++v)
              terms.push_back(numeric::log_poisson_pmf(alpha, x - 2 * v) +
                              numeric::log_poisson_pmf(beta, v));
            return numeric::log_sum_exp(terms);
          },
          [x](const FinitePmf& f) {
            auto it = f.weights.find(x);
            return it == f.weights.end() || it->second <= 0.0 ? kNegInf : std::log(it->second);
          },
      },
      law);
}

inline double pmf(const UnivariateLaw& law, Count x) {
  validate(law);
  return std::exp(log_pmf(law, x));
}

namespace detail {

// log P(U + 2V = r) for U ~ Po(alpha), V ~ Po(beta).
inline double log_hermite_residual(double alpha, double beta, Count r) {
  std::vector<double> terms;
  for (Count v = 0; 2 * v <= r; ++v)
    terms.push_back(numeric::log_poisson_pmf(alpha, r - 2 * v) + numeric::log_poisson_pmf(beta, v));
  return numeric::log_sum_exp(terms);
}

// Multivariate Hermite pmf. V_ij and V_ji (i != j) both add one to Y_i and
// Y_j, so they merge into W_ij ~ Po(beta_ij + beta_ji); the rest of Y_i is
// U_i + 2 V_ii. Enumerates all W with residuals r_i >= 0.
inline double log_multivariate_hermite(const MultivariateHermite& h, const CountVector& y) {
  const std::size_t c = h.dim();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> rates;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) {
      const double r = h.beta(i, j) + h.beta(j, i);
      if (r > 0.0) {
        pairs.emplace_back(i, j);
        rates.push_back(r);
      }
    }
  // residual_lp[i][r] = log P(U_i + 2 V_ii = r) for r <= y_i.
  std::vector<std::vector<double>> residual_lp(c);
  for (std::size_t i = 0; i < c; ++i)
    for (Count r = 0; r <= y[i]; ++r)
      residual_lp[i].push_back(log_hermite_residual(h.alpha[i], h.beta(i, i), r));
  CountVector residual(y);
  std::vector<double> terms;
  std::function<void(std::size_t, double)> rec = [&](std::size_t k, double acc) {
    if (k == pairs.size()) {
      double lp = acc;
      for (std::size_t i = 0; i < c && lp > numeric::kNegInf; ++i)
        lp += residual_lp[i][static_cast<std::size_t>(residual[i])];
      if (lp > numeric::kNegInf) terms.push_back(lp);
      return;
    }
    const auto [i, j] = pairs[k];
    const Count top = std::min(residual[i], residual[j]);
    for (Count w = 0; w <= top; ++w) {
      residual[i] -= w;
      residual[j] -= w;
      rec(k + 1, acc + numeric::log_poisson_pmf(rates[k], w));
      residual[i] += w;
      residual[j] += w;
    }
  };
  rec(0, 0.0);
  return numeric::log_sum_exp(terms);
}

}  // namespace detail

inline double log_pmf(const MultivariateLaw& law, const CountVector& y) {
  using numeric::kNegInf;
  using numeric::log_factorial;
  using numeric::xlogy;
  if (y.size() != dimension(law))
    throw DimensionMismatch("count vector of length " + std::to_string(y.size()) +
                            " for a dimension-" + std::to_string(dimension(law)) + " law");
  for (Count v : y)
    if (v < 0) return kNegInf;
  const Count total = numeric::weight(y);
  return std::visit(
      detail::overloaded{
          [&](const Multinomial& m) {
            if (total > m.n) return kNegInf;
            double lp = log_factorial(m.n) - log_factorial(m.n - total) +
                        xlogy(m.n - total, m.p.discard());
            for (std::size_t i = 0; i < y.size(); ++i)
              lp += xlogy(y[i], m.p[i]) - log_factorial(y[i]);
            return lp;
          },
          [&](const ProductPoisson& p) {
            double lp = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
              lp += numeric::log_poisson_pmf(p.lambda[i], y[i]);
            return lp;
          },
          [&](const NegativeMultinomial& nm) {
            const double n = static_cast<double>(nm.n);
            double lp = std::lgamma(n + static_cast<double>(total)) - std::lgamma(n) +
                        n * std::log1p(-nm.total());
            for (std::size_t i = 0; i < y.size(); ++i)
              lp += xlogy(y[i], nm.q[i]) - log_factorial(y[i]);
            return lp;
          },
          [&](const MultivariateHermite& h) { return detail::log_multivariate_hermite(h, y); },
          [&](const JointFinitePmf& j) {
            const double p = j.pmf.at(y);
            return p > 0.0 ? std::log(p) : kNegInf;
          },
      },
      law);
}

inline double pmf(const MultivariateLaw& law, const CountVector& y) {
  validate(law);
  return std::exp(log_pmf(law, y));
}

// ---------------------------------------------------------------------------
// Moments

inline double factorial_moment(const UnivariateLaw& law, int order);

inline double mean(const UnivariateLaw& law) { return factorial_moment(law, 1); }

/// Disp(X) = E X(X-1) - (E X)^2 = Var(X) - E X.
inline double dispersion(const UnivariateLaw& law) {
  validate(law);
  return std::visit(
      detail::overloaded{
          [](const Binomial& b) { return -static_cast<double>(b.n) * b.p * b.p; },
          [](const Poisson&) { return 0.0; },
          [](const NegativeBinomial& nb) {
            const double r = nb.odds();
            return static_cast<double>(nb.n) * r * r;
          },
          [](const Hermite& h) { return h.sigma2; },
          [&law](const FinitePmf&) {
            const double m = factorial_moment(law, 1);
            return factorial_moment(law, 2) - m * m;
          },
      },
      law);
}

inline double variance(const UnivariateLaw& law) { return dispersion(law) + mean(law); }

/// E X^(m) for 0 <= m <= tol::kMaxFactorialOrder.
inline double factorial_moment(const UnivariateLaw& law, int order) {
  validate(law);
  if (order < 0) throw InvalidParameter("factorial moment order must be nonnegative");
  if (order > tol::kMaxFactorialOrder)
    throw UnsupportedOrder("factorial moment order " + std::to_string(order) + " exceeds the cap " +
                           std::to_string(tol::kMaxFactorialOrder));
  return std::visit(
      detail::overloaded{
          [order](const Binomial& b) {
            return numeric::falling_factorial(static_cast<double>(b.n), order) *
                   std::pow(b.p, order);
          },
          [order](const Poisson& p) { return std::pow(p.lambda, order); },
          [order](const NegativeBinomial& nb) {
            return numeric::rising_factorial(static_cast<double>(nb.n), order) *
                   std::pow(nb.odds(), order);
          },
          [order](const Hermite& h) {
            // Coefficient of t^m / m! in exp(mu t + sigma2 t^2 / 2).
            double s = 0.0;
            for (int j = 0; 2 * j <= order; ++j)
              s += std::pow(h.mu, order - 2 * j) * std::pow(h.beta(), j) /
                   (std::tgamma(order - 2 * j + 1.0) * std::tgamma(j + 1.0));
            return std::tgamma(order + 1.0) * s;
          },
          [order](const FinitePmf& f) {
            numeric::KahanSum s;
            for (const auto& [x, w] : f.weights)
              s += w * numeric::falling_factorial(static_cast<double>(x), order);
            return s.value();
          },
      },
      law);
}

inline MomentSummary moment_summary(const UnivariateLaw& law) {
  MomentSummary s{Vector{mean(law)}, Matrix(1, 1)};
  s.disp(0, 0) = dispersion(law);
  return s;
}

inline MomentSummary moment_summary(const MultivariateLaw& law) {
  validate(law);
  const std::size_t c = dimension(law);
  return std::visit(
      detail::overloaded{
          [c](const Multinomial& m) {
            const double n = static_cast<double>(m.n);
            MomentSummary s{Vector(c), Matrix(c, c)};
            for (std::size_t i = 0; i < c; ++i) {
              s.mean[i] = n * m.p[i];
              for (std::size_t j = 0; j < c; ++j) s.disp(i, j) = -n * m.p[i] * m.p[j];
            }
            return s;
          },
          [c](const ProductPoisson& p) { return MomentSummary{p.lambda, Matrix(c, c)}; },
          [c](const NegativeMultinomial& nm) {
            const double n = static_cast<double>(nm.n);
            const Vector s_odds = nm.scaled_odds();
            MomentSummary s{Vector(c), Matrix(c, c)};
            for (std::size_t i = 0; i < c; ++i) {
              s.mean[i] = n * s_odds[i];
              for (std::size_t j = 0; j < c; ++j) s.disp(i, j) = n * s_odds[i] * s_odds[j];
            }
            return s;
          },
          [](const MultivariateHermite& h) { return MomentSummary{h.mean(), h.disp()}; },
          [](const JointFinitePmf& j) { return oracle::summarize(j.pmf); },
      },
      law);
}

// ---------------------------------------------------------------------------
// Factorial moment generating functions

inline double fmgf(const UnivariateLaw& law, double t) {
  validate(law);
  return std::visit(
      detail::overloaded{
          [t](const Binomial& b) { return std::pow(1.0 + b.p * t, static_cast<double>(b.n)); },
          [t](const Poisson& p) { return std::exp(p.lambda * t); },
          [t](const NegativeBinomial& nb) {
            const double base = 1.0 - nb.odds() * t;
            if (!(base > 0.0))
              throw DomainError("negative binomial FMGF diverges at t = " + format_number(t));
            return std::pow(base, -static_cast<double>(nb.n));
          },
          [t](const Hermite& h) { return std::exp(h.mu * t + 0.5 * h.sigma2 * t * t); },
          [t](const FinitePmf& f) {
            numeric::KahanSum s;
            for (const auto& [x, w] : f.weights) s += w * std::pow(1.0 + t, static_cast<double>(x));
            return s.value();
          },
      },
      law);
}

inline double fmgf(const MultivariateLaw& law, const Vector& t) {
  validate(law);
  if (t.size() != dimension(law)) throw DimensionMismatch("t length differs from law dimension");
  return std::visit(
      detail::overloaded{
          [&t](const Multinomial& m) {
            return std::pow(1.0 + dot(m.p.values(), t), static_cast<double>(m.n));
          },
          [&t](const ProductPoisson& p) { return std::exp(dot(p.lambda, t)); },
          [&t](const NegativeMultinomial& nm) {
            const double base = 1.0 - dot(nm.scaled_odds(), t);
            if (!(base > 0.0))
              throw DomainError("negative multinomial FMGF diverges at t = " + format_vector(t));
            return std::pow(base, -static_cast<double>(nm.n));
          },
          [&t](const MultivariateHermite& h) {
            const Vector st = h.disp() * t;
            return std::exp(dot(h.mean(), t) + 0.5 * dot(t, st));
          },
          [&t](const JointFinitePmf& j) { return oracle::fmgf_exact(j.pmf, t); },
      },
      law);
}

// ---------------------------------------------------------------------------
// Conversions between univariate laws and one-dimensional multivariate laws

/// Coordinate marginal of a multivariate law as a univariate law.
inline UnivariateLaw marginal_law(const MultivariateLaw& law, std::size_t i) {
  validate(law);
  if (i >= dimension(law)) throw DimensionMismatch("marginal index out of range");
  return std::visit(
      detail::overloaded{
          [i](const Multinomial& m) -> UnivariateLaw { return Binomial{m.n, m.p[i]}; },
          [i](const ProductPoisson& p) -> UnivariateLaw { return Poisson{p.lambda[i]}; },
          [i](const NegativeMultinomial& nm) -> UnivariateLaw {
            const double s = nm.scaled_odds()[i];
            return NegativeBinomial{nm.n, s / (1.0 + s)};
          },
          [i](const MultivariateHermite& h) -> UnivariateLaw {
            return Hermite{h.mean()[i], 2.0 * h.beta(i, i)};
          },
          [i](const JointFinitePmf& j) -> UnivariateLaw {
            FinitePmf f;
            const JointPmf m = j.pmf.marginal(i);
            for (const auto& [y, p] : m.mass()) f.weights[y[0]] = p;
            return f;
          },
      },
      law);
}

/// A univariate law viewed as a one-dimensional multivariate law.
inline MultivariateLaw embed(const UnivariateLaw& law) {
  validate(law);
  return std::visit(
      detail::overloaded{
          [](const Binomial& b) -> MultivariateLaw { return Multinomial{b.n, ProbVector{b.p}}; },
          [](const Poisson& p) -> MultivariateLaw { return ProductPoisson{{p.lambda}}; },
          [](const NegativeBinomial& nb) -> MultivariateLaw {
            return NegativeMultinomial{nb.n, {nb.q}};
          },
          [](const Hermite& h) -> MultivariateLaw {
            return MultivariateHermite{{h.alpha()}, Matrix{{h.beta()}}};
          },
          [](const FinitePmf& f) -> MultivariateLaw {
            JointPmf::Support s;
            for (const auto& [x, w] : f.weights) s.emplace(CountVector{x}, w);
            return JointFinitePmf{JointPmf(1, std::move(s))};
          },
      },
      law);
}

/// Inverse of embed for one-dimensional laws.
inline UnivariateLaw to_univariate(const MultivariateLaw& law) {
  if (dimension(law) != 1) throw DimensionMismatch("law is not one-dimensional");
  return marginal_law(law, 0);
}

// ---------------------------------------------------------------------------
// Truncation

namespace detail {

inline JointPmf truncate_unbounded(const UnivariateLaw& law, double eps) {
  const double m = mean(law);
  JointPmf::Support s;
  numeric::KahanSum cum;
  double prev = 1.0;
  constexpr Count kLimit = 100'000'000;
  for (Count x = 0; x < kLimit; ++x) {
    const double p = std::exp(log_pmf(law, x));
    s.emplace(CountVector{x}, p);
    cum += p;
    if (1.0 - cum.value() <= eps) break;
    // Two consecutive underflowed terms past the mean: nothing left to add.
    if (p == 0.0 && prev == 0.0 && static_cast<double>(x) > m) break;
    prev = p;
    if (x + 1 == kLimit) throw DomainError("truncation did not converge");
  }
  return JointPmf(1, std::move(s), std::max(0.0, 1.0 - cum.value()));
}

}  // namespace detail

/// Finite support [0, K] holding mass >= 1 - eps, as a one-dimensional JointPmf.
inline JointPmf truncate(const UnivariateLaw& law, double eps) {
  validate(law);
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidParameter("eps must lie in [0, 1)");
  if (const auto* b = std::get_if<Binomial>(&law)) {
    JointPmf::Support s;
    for (Count x = 0; x <= b->n; ++x) s.emplace(CountVector{x}, std::exp(log_pmf(law, x)));
    return JointPmf(1, std::move(s), 0.0);
  }
  if (const auto* f = std::get_if<FinitePmf>(&law)) {
    JointPmf::Support s;
    for (const auto& [x, w] : f->weights) s.emplace(CountVector{x}, w);
    return JointPmf(1, std::move(s), 0.0);
  }
  return detail::truncate_unbounded(law, eps);
}

/// Box support [0, K]^dim holding mass >= 1 - eps. K is the largest of the
/// coordinate marginal cut-offs at eps / dim, so the union bound certifies the
/// recorded tail.
inline JointPmf truncate(const MultivariateLaw& law, double eps) {
  validate(law);
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidParameter("eps must lie in [0, 1)");
  if (const auto* j = std::get_if<JointFinitePmf>(&law)) return j->pmf;
  const std::size_t c = dimension(law);
  Count k = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const JointPmf m = truncate(marginal_law(law, i), eps / static_cast<double>(c));
    k = std::max(k, m.max_counts()[0]);
  }
  JointPmf::Support s;
  numeric::KahanSum cum;
  numeric::for_each_in_box(CountVector(c, k + 1), [&](const CountVector& y) {
    const double p = std::exp(log_pmf(law, y));
    s.emplace(y, p);
    cum += p;
  });
  const bool bounded = std::holds_alternative<Multinomial>(law);
  return JointPmf(c, std::move(s), bounded ? 0.0 : std::max(0.0, 1.0 - cum.value()));
}

}  // namespace remark
