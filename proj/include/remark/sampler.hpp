#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "remark/core.hpp"
#include "remark/joint_pmf.hpp"
#include "remark/laws.hpp"

namespace remark {

/// xoshiro256** seeded through splitmix64. The draw sequence for a given seed
/// is part of the reproducibility contract; do not change the algorithm.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4]{};
};

// ---------------------------------------------------------------------------
// Primitive variates

/// Poisson: inversion below lambda = 10, Hormann's PTRS transformed
/// rejection above.
inline Count sample_poisson(Rng& rng, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidParameter("poisson rate must be nonnegative");
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) {
    const double u = rng.uniform();
    double p = std::exp(-lambda);
    double cum = p;
    Count k = 0;
    while (u >= cum && p > 0.0) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cum += p;
    }
    return k;
  }
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double kd = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<Count>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lambda + kd * loglam - std::lgamma(kd + 1.0))
      return static_cast<Count>(kd);
  }
}

namespace detail {

inline Count binomial_inversion(Rng& rng, Count n, double p) {
  const double q = 1.0 - p;
  const double r = p / q;
  const double g = r * static_cast<double>(n + 1);
  double u = rng.uniform();
  double f = std::pow(q, static_cast<double>(n));
  Count k = 0;
  while (u >= f && k < n) {
    u -= f;
    ++k;
    f *= g / static_cast<double>(k) - r;
  }
  return k;
}

// Hormann's BTRS with the exact log-gamma acceptance test. Requires p <= 0.5.
inline Count binomial_btrs(Rng& rng, Count n, double p) {
  const double nd = static_cast<double>(n);
  const double spq = std::sqrt(nd * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double vr = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / (1.0 - p));
  const double m = std::floor((nd + 1.0) * p);
  const double h = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > nd) continue;
    if (us >= 0.07 && v <= vr) return static_cast<Count>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    if (v <= h - std::lgamma(k + 1.0) - std::lgamma(nd - k + 1.0) + (k - m) * lpq)
      return static_cast<Count>(k);
  }
}

}  // namespace detail

/// Binomial: inversion when n min(p, 1-p) < 10, BTRS otherwise.
inline Count sample_binomial(Rng& rng, Count n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw InvalidParameter("invalid binomial parameters");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const double q = std::min(p, 1.0 - p);
  const Count k = static_cast<double>(n) * q < 10.0 ? detail::binomial_inversion(rng, n, q)
                                                     : detail::binomial_btrs(rng, n, q);
  return p > 0.5 ? n - k : k;
}

/// Negative binomial as a sum of n geometric failure counts, each by inversion.
inline Count sample_negative_binomial(Rng& rng, Count n, double q) {
  if (q == 0.0) return 0;
  const double log_q = std::log(q);
  Count total = 0;
  for (Count i = 0; i < n; ++i)
    total += static_cast<Count>(std::floor(std::log(rng.uniform_open()) / log_q));
  return total;
}

/// Exact Multi(n, a) by sequential conditional binomials; the discard
/// category absorbs whatever is left.
inline CountVector sample_multinomial(Rng& rng, Count n, const ProbVector& a) {
  if (n < 0) throw InvalidParameter("multinomial n must be nonnegative");
  CountVector y(a.size(), 0);
  Count remaining = n;
  double rest = 1.0;
  for (std::size_t i = 0; i < a.size() && remaining > 0; ++i) {
    const double p = rest > 0.0 ? std::clamp(a[i] / rest, 0.0, 1.0) : 0.0;
    y[i] = sample_binomial(rng, remaining, p);
    remaining -= y[i];
    rest -= a[i];
  }
  return y;
}

// ---------------------------------------------------------------------------
// Laws

inline Count sample(Rng& rng, const UnivariateLaw& law) {
  validate(law);
  return std::visit(
      detail::overloaded{
          [&](const Binomial& b) { return sample_binomial(rng, b.n, b.p); },
          [&](const Poisson& p) { return sample_poisson(rng, p.lambda); },
          [&](const NegativeBinomial& nb) { return sample_negative_binomial(rng, nb.n, nb.q); },
          [&](const Hermite& h) {
            const Count u = sample_poisson(rng, h.alpha());
            const Count v = sample_poisson(rng, h.beta());
            return u + 2 * v;
          },
          [&](const FinitePmf& f) {
            const double u = rng.uniform();
            double cum = 0.0;
            Count last = 0;
            for (const auto& [x, w] : f.weights) {
              cum += w;
              last = x;
              if (u < cum) return x;
            }
            return last;
          },
      },
      law);
}

inline CountVector sample(Rng& rng, const MultivariateLaw& law) {
  validate(law);
  return std::visit(
      detail::overloaded{
          [&](const Multinomial& m) { return sample_multinomial(rng, m.n, m.p); },
          [&](const ProductPoisson& p) {
            CountVector y(p.lambda.size());
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = sample_poisson(rng, p.lambda[i]);
            return y;
          },
          [&](const NegativeMultinomial& nm) {
            // |Y| ~ NegBin(n, |q|), then split by Multi(|Y|, q / |q|).
            const double total = nm.total();
            if (total == 0.0) return CountVector(nm.q.size(), 0);
            const Count t = sample_negative_binomial(rng, nm.n, total);
            Vector split(nm.q.size());
            for (std::size_t i = 0; i < split.size(); ++i) split[i] = nm.q[i] / total;
            double w = 0.0;
            for (double v : split) w += v;
            if (w > 1.0) split.back() = std::max(0.0, split.back() - (w - 1.0));
            return sample_multinomial(rng, t, ProbVector(split));
          },
          [&](const MultivariateHermite& h) {
            const std::size_t c = h.dim();
            CountVector y(c, 0);
            for (std::size_t i = 0; i < c; ++i) y[i] += sample_poisson(rng, h.alpha[i]);
            for (std::size_t i = 0; i < c; ++i)
              for (std::size_t j = 0; j < c; ++j) {
                const Count v = sample_poisson(rng, h.beta(i, j));
                y[i] += v;
                y[j] += v;
              }
            return y;
          },
          [&](const JointFinitePmf& j) {
            const double u = rng.uniform() * j.pmf.stored_mass();
            double cum = 0.0;
            CountVector last(j.pmf.dim(), 0);
            for (const auto& [y, p] : j.pmf.mass()) {
              cum += p;
              last = y;
              if (u < cum) return y;
            }
            return last;
          },
      },
      law);
}

/// Draw X, then Multi(X, a).
inline CountVector sample_marking(Rng& rng, const UnivariateLaw& x, const ProbVector& a) {
  return sample_multinomial(rng, sample(rng, x), a);
}

/// Draw X, then Z^(j) ~ Multi(X_j, a_j) independently, and return sum_j Z^(j).
inline CountVector sample_remarking(Rng& rng, const MultivariateLaw& x,
                                    const SubstochasticMatrix& A) {
  if (A.cols() != dimension(x)) throw DimensionMismatch("A columns differ from law dimension");
  const CountVector xs = sample(rng, x);
  CountVector y(A.rows(), 0);
  for (std::size_t j = 0; j < A.cols(); ++j) {
    const CountVector z = sample_multinomial(rng, xs[j], A.column(j));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += z[i];
  }
  return y;
}

// ---------------------------------------------------------------------------
// Monte Carlo moment estimation

/// Streaming mean and co-moment accumulator (Welford update, Chan merge).
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t dim) : mean_(dim, 0.0), comoment_(dim, dim) {}

  void add(const CountVector& y) {
    if (y.size() != mean_.size()) throw DimensionMismatch("sample dimension changed");
    ++n_;
    const double nd = static_cast<double>(n_);
    Vector delta(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      delta[i] = static_cast<double>(y[i]) - mean_[i];
      mean_[i] += delta[i] / nd;
    }
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j)
        comoment_(i, j) += delta[i] * (static_cast<double>(y[j]) - mean_[j]);
  }

  void merge(const MomentAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    Vector delta(mean_.size());
    for (std::size_t i = 0; i < mean_.size(); ++i) delta[i] = other.mean_[i] - mean_[i];
    for (std::size_t i = 0; i < mean_.size(); ++i)
      for (std::size_t j = 0; j < mean_.size(); ++j)
        comoment_(i, j) += other.comoment_(i, j) + delta[i] * delta[j] * na * nb / n;
    for (std::size_t i = 0; i < mean_.size(); ++i) mean_[i] += delta[i] * nb / n;
    n_ += other.n_;
  }

  std::uint64_t count() const noexcept { return n_; }
  const Vector& mean() const noexcept { return mean_; }

  /// Unbiased covariance matrix.
  Matrix covariance() const {
    Matrix c = comoment_;
    const double denom = static_cast<double>(n_) - 1.0;
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) /= denom;
    return c;
  }

  /// Covariance matrix with the sample mean subtracted on the diagonal.
  Matrix disp() const {
    Matrix c = covariance();
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) -= mean_[i];
    return c;
  }

 private:
  std::uint64_t n_ = 0;
  Vector mean_;
  Matrix comoment_;
};

struct McReport {
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  Vector mean;
  Matrix disp;
  Vector std_err_mean;
  // Batch-means standard errors of the dispersion-covariance entries; empty
  // when fewer than two batches of two samples fit.
  std::optional<Matrix> std_err_disp;
  std::uint64_t batches = 0;
};

/// Runs generator(rng) n_samples times from Rng(seed). Samples are split into
/// contiguous batches whose accumulators merge in batch order, so the report
/// is a deterministic function of (generator, n_samples, seed).
template <class Generator>
McReport mc_report(Generator&& generator, std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw InvalidParameter("Monte Carlo report needs at least 2 samples");
  Rng rng(seed);
  const std::uint64_t batches =
      std::min<std::uint64_t>(stat_config::kBatches, std::max<std::uint64_t>(1, n_samples / 2));

  std::optional<MomentAccumulator> total;
  std::vector<Matrix> batch_disp;
  for (std::uint64_t b = 0; b < batches; ++b) {
    const std::uint64_t lo = b * n_samples / batches;
    const std::uint64_t hi = (b + 1) * n_samples / batches;
    std::optional<MomentAccumulator> acc;
    for (std::uint64_t s = lo; s < hi; ++s) {
      const CountVector y = generator(rng);
      if (!acc) acc.emplace(y.size());
      acc->add(y);
    }
    batch_disp.push_back(acc->disp());
    if (!total)
      total = *acc;
    else
      total->merge(*acc);
  }

  McReport r;
  r.n_samples = n_samples;
  r.seed = seed;
  r.batches = batches;
  r.mean = total->mean();
  r.disp = total->disp();
  const Matrix cov = total->covariance();
  r.std_err_mean.resize(r.mean.size());
  for (std::size_t i = 0; i < r.mean.size(); ++i)
    r.std_err_mean[i] = std::sqrt(cov(i, i) / static_cast<double>(n_samples));
  if (batches >= 2) {
    const std::size_t d = r.mean.size();
    Matrix se(d, d);
    const double nb = static_cast<double>(batches);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (const Matrix& bd : batch_disp) m += bd(i, j);
        m /= nb;
        double ss = 0.0;
        for (const Matrix& bd : batch_disp) ss += (bd(i, j) - m) * (bd(i, j) - m);
        se(i, j) = std::sqrt(ss / (nb - 1.0) / nb);
      }
    r.std_err_disp = se;
  }
  return r;
}

}  // namespace remark
