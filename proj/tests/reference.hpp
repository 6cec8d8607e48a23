#pragma once

// Reference computations for tests. Written from the textbook definitions
// with plain loops and tgamma/pow, sharing no code with the library's
// log-space evaluators.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace ref {

inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

inline double binomial(int n, double p, int x) {
  return choose(n, x) * std::pow(p, x) * std::pow(1.0 - p, n - x);
}

inline double poisson(double lambda, int x) {
  return std::exp(-lambda) * std::pow(lambda, x) / factorial(x);
}

inline double negbin(int n, double q, int x) {
  return choose(n + x - 1, x) * std::pow(q, x) * std::pow(1.0 - q, n);
}

/// U + 2V, U ~ Po(alpha), V ~ Po(beta), by direct convolution.
inline double hermite(double alpha, double beta, int x) {
  double s = 0.0;
  for (int v = 0; 2 * v <= x; ++v) s += poisson(alpha, x - 2 * v) * poisson(beta, v);
  return s;
}

/// Multinomial pmf with implicit discard category.
inline double multinomial(int n, const std::vector<double>& p, const std::vector<int>& y) {
  int used = 0;
  double rest = 1.0;
  double out = factorial(n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    used += y[i];
    rest -= p[i];
    out *= std::pow(p[i], y[i]) / factorial(y[i]);
  }
  if (used > n) return 0.0;
  if (rest < 0.0) rest = 0.0;
  return out * std::pow(rest, n - used) / factorial(n - used);
}

inline double negmulti(int n, const std::vector<double>& q, const std::vector<int>& y) {
  int total = 0;
  double qs = 0.0;
  double out = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    total += y[i];
    qs += q[i];
    out *= std::pow(q[i], y[i]) / factorial(y[i]);
  }
  return out * std::tgamma(n + total) / std::tgamma(n) * std::pow(1.0 - qs, n);
}

/// Law of a o X at y by conditioning on X = x for x up to xmax.
inline double marked(const std::function<double(int)>& px, int xmax, const std::vector<double>& a,
                     const std::vector<int>& y) {
  double s = 0.0;
  for (int x = 0; x <= xmax; ++x) s += px(x) * multinomial(x, a, y);
  return s;
}

/// Bivariate Hermite pmf by summing over the shared component
/// W = V_12 + V_21 ~ Po(b12 + b21) and the V_ii.
inline double bivariate_hermite(double a1, double a2, double b11, double b22, double b12, double b21,
                                int y1, int y2) {
  double s = 0.0;
  for (int w = 0; w <= std::min(y1, y2); ++w)
    for (int v1 = 0; 2 * v1 <= y1 - w; ++v1)
      for (int v2 = 0; 2 * v2 <= y2 - w; ++v2)
        s += poisson(b12 + b21, w) * poisson(b11, v1) * poisson(b22, v2) *
             poisson(a1, y1 - w - 2 * v1) * poisson(a2, y2 - w - 2 * v2);
  return s;
}

inline double falling(int x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x - i;
  return out;
}

}  // namespace ref
