#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "remark/core.hpp"
#include "remark/joint_pmf.hpp"
#include "remark/laws.hpp"
#include "remark/numeric.hpp"
#include "remark/summation.hpp"

// Brute-force enumeration of marking and re-marking laws straight from their
// definitions. Everything else in the library is tested against these.

namespace remark::oracle {

/// p(y) = sum_x P(X = x) Multi(x, a)(y), for x over truncate(x, eps). The
/// stored support is every y with |y| <= the largest enumerated x.
inline JointPmf mark_exact(const UnivariateLaw& x, const ProbVector& a, double eps) {
  const JointPmf base = truncate(x, eps);
  std::vector<std::pair<Count, double>> support;
  Count xmax = 0;
  for (const auto& [k, p] : base.mass()) {
    if (p <= 0.0) continue;
    support.emplace_back(k[0], p);
    xmax = std::max(xmax, k[0]);
  }
  const numeric::LogFactorialTable lf(xmax);
  const std::size_t c = a.size();
  const double discard = a.discard();
  const double log_discard = discard > 0.0 ? std::log(discard) : numeric::kNegInf;

  JointPmf::Support out;
  numeric::for_each_composition(c, xmax, [&](const CountVector& y) {
    const Count w = numeric::weight(y);
    double colour_part = 0.0;
    for (std::size_t i = 0; i < c; ++i) colour_part += numeric::xlogy(y[i], a[i]) - lf(y[i]);
    numeric::KahanSum s;
    if (colour_part > numeric::kNegInf) {
      for (const auto& [k, p] : support) {
        if (k < w) continue;
        const Count rest = k - w;
        if (rest > 0 && discard <= 0.0) continue;
        const double lp = lf(k) - lf(rest) + (rest > 0 ? rest * log_discard : 0.0) + colour_part;
        s += p * std::exp(lp);
      }
    }
    out.emplace(y, s.value());
  });
  return JointPmf(c, std::move(out), base.tail_bound());
}

namespace detail {

// Dense c-dimensional grid with a common extent, so that flat offsets add:
// offset(y + z) = offset(y) + offset(z) whenever every coordinate stays in range.
class Grid {
 public:
  Grid(std::size_t dim, Count extent) : dim_(dim), extent_(extent) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim; ++i) n *= static_cast<std::size_t>(extent);
    size_ = n;
  }
  std::size_t size() const noexcept { return size_; }
  std::size_t offset(const CountVector& y) const {
    std::size_t o = 0;
    for (std::size_t i = dim_; i-- > 0;) o = o * static_cast<std::size_t>(extent_) + static_cast<std::size_t>(y[i]);
    return o;
  }

 private:
  std::size_t dim_;
  Count extent_;
  std::size_t size_ = 1;
};

using SparseTable = std::vector<std::pair<std::size_t, double>>;

}  // namespace detail

/// Law of Y = sum_j Z^(j), Z^(j) | X ~ Multi(X_j, a_j) conditionally
/// independent, enumerated over every point of truncate(x, eps).
inline JointPmf remark_exact(const MultivariateLaw& x, const SubstochasticMatrix& A, double eps) {
  const std::size_t d = dimension(x);
  if (A.cols() != d)
    throw DimensionMismatch("A has " + std::to_string(A.cols()) + " columns but the law has dimension " +
                            std::to_string(d));
  const std::size_t c = A.rows();
  const JointPmf base = truncate(x, eps);

  Count max_total = 0;
  for (const auto& [k, p] : base.mass())
    if (p > 0.0) max_total = std::max(max_total, numeric::weight(k));
  const detail::Grid grid(c, max_total + 1);
  const numeric::LogFactorialTable lf(max_total);

  std::vector<ProbVector> columns;
  for (std::size_t j = 0; j < d; ++j) columns.push_back(A.column(j));

  // Multi(n, a_j) as (offset, prob) pairs, skipping structural zeros.
  std::map<std::pair<std::size_t, Count>, detail::SparseTable> tables;
  auto table = [&](std::size_t j, Count n) -> const detail::SparseTable& {
    auto key = std::make_pair(j, n);
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    const ProbVector& a = columns[j];
    const double discard = a.discard();
    detail::SparseTable t;
    numeric::for_each_composition(c, n, [&](const CountVector& z) {
      const Count rest = n - numeric::weight(z);
      double lp = lf(n) - lf(rest) + numeric::xlogy(rest, discard);
      for (std::size_t i = 0; i < c; ++i) lp += numeric::xlogy(z[i], a[i]) - lf(z[i]);
      if (lp > numeric::kNegInf) t.emplace_back(grid.offset(z), std::exp(lp));
    });
    return tables.emplace(key, std::move(t)).first->second;
  };

  std::vector<double> sum(grid.size(), 0.0);
  std::vector<double> comp(grid.size(), 0.0);
  std::vector<double> scratch(grid.size(), 0.0);
  std::vector<std::size_t> touched;
  detail::SparseTable cur;

  for (const auto& [point, px] : base.mass()) {
    if (px <= 0.0) continue;
    cur.assign(1, {0, 1.0});
    for (std::size_t j = 0; j < d; ++j) {
      const detail::SparseTable& t = table(j, point[j]);
      touched.clear();
      for (const auto& [o1, p1] : cur)
        for (const auto& [o2, p2] : t) {
          const std::size_t o = o1 + o2;
          if (scratch[o] == 0.0) touched.push_back(o);
          scratch[o] += p1 * p2;
        }
      cur.clear();
      for (std::size_t o : touched) {
        cur.emplace_back(o, scratch[o]);
        scratch[o] = 0.0;
      }
    }
    for (const auto& [o, p] : cur) {
      // Neumaier update of sum[o] += px * p.
      const double v = px * p;
      const double t = sum[o] + v;
      comp[o] += std::abs(sum[o]) >= std::abs(v) ? (sum[o] - t) + v : (v - t) + sum[o];
      sum[o] = t;
    }
  }

  JointPmf::Support out;
  numeric::for_each_composition(c, max_total, [&](const CountVector& y) {
    const std::size_t o = grid.offset(y);
    out.emplace(y, sum[o] + comp[o]);
  });
  return JointPmf(c, std::move(out), base.tail_bound());
}

/// max_y |p(y) - prod_i p_i(y_i)| over the box spanned by the marginal supports.
inline double independence_discrepancy(const JointPmf& j) {
  std::vector<JointPmf> marginals;
  for (std::size_t i = 0; i < j.dim(); ++i) marginals.push_back(j.marginal(i));
  CountVector extents = j.max_counts();
  for (Count& e : extents) ++e;
  double worst = 0.0;
  numeric::for_each_in_box(extents, [&](const CountVector& y) {
    double prod = 1.0;
    for (std::size_t i = 0; i < y.size(); ++i) prod *= marginals[i].at(CountVector{y[i]});
    worst = std::max(worst, std::abs(j.at(y) - prod));
  });
  return worst;
}

/// True iff the coordinates factorise within tol. Requires tail_bound <= tol / 10.
inline bool independence_check(const JointPmf& j, double tol) {
  if (j.tail_bound() > tol / 10.0)
    throw InvalidParameter("tail bound " + format_number(j.tail_bound()) +
                           " too large for an independence check at tolerance " + format_number(tol));
  return independence_discrepancy(j) <= tol;
}

}  // namespace remark::oracle
