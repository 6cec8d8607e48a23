#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "remark/core.hpp"

namespace remark::numeric {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_factorial(Count n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// k * log(p) with the conventions 0 * log(anything) = 0 and k * log(0) = -inf.
inline double xlogy(Count k, double p) {
  if (k == 0) return 0.0;
  if (p <= 0.0) return kNegInf;
  return static_cast<double>(k) * std::log(p);
}

inline double log_poisson_pmf(double lambda, Count k) {
  if (k < 0) return kNegInf;
  return xlogy(k, lambda) - lambda - log_factorial(k);
}

inline double log_sum_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

inline double falling_factorial(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x - i;
  return r;
}

inline double rising_factorial(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x + i;
  return r;
}

/// Neumaier-compensated summation.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(k!) for k = 0..n, precomputed for enumeration loops.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(Count n) : table_(static_cast<std::size_t>(n) + 1) {
    for (Count k = 0; k <= n; ++k) table_[static_cast<std::size_t>(k)] = log_factorial(k);
  }
  double operator()(Count k) const { return table_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<double> table_;
};

/// Calls visit(y) for every y in N^dim with |y| <= total, in lexicographic
/// order. The vector passed to visit is reused between calls.
inline void for_each_composition(std::size_t dim, Count total,
                                 const std::function<void(const CountVector&)>& visit) {
  CountVector y(dim, 0);
  std::function<void(std::size_t, Count)> rec = [&](std::size_t i, Count left) {
    if (i == dim) {
      visit(y);
      return;
    }
    for (Count v = 0; v <= left; ++v) {
      y[i] = v;
      rec(i + 1, left - v);
    }
    y[i] = 0;
  };
  rec(0, total);
}

/// Calls visit(y) for every y in the box [0, extent_0) x ... x [0, extent_{dim-1}).
inline void for_each_in_box(const CountVector& extents,
                            const std::function<void(const CountVector&)>& visit) {
  for (Count e : extents)
    if (e <= 0) return;
  CountVector y(extents.size(), 0);
  while (true) {
    visit(y);
    bool wrapped = true;
    for (std::size_t i = extents.size(); i-- > 0;) {
      if (++y[i] < extents[i]) {
        wrapped = false;
        break;
      }
      y[i] = 0;
    }
    if (wrapped) return;
  }
}

inline Count weight(const CountVector& y) {
  Count s = 0;
  for (Count v : y) s += v;
  return s;
}

// Relative-or-absolute discrepancy |a - b| / max(1, |b|).
inline double scaled_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace remark::numeric
