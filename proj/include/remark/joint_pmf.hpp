#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "remark/core.hpp"
#include "remark/numeric.hpp"

namespace remark {

/// Finite map from count vectors to probabilities, plus a bound on the mass
/// that may lie outside the stored support.
class JointPmf {
 public:
  using Support = std::map<CountVector, double>;

  JointPmf() = default;
  JointPmf(std::size_t dim, Support mass, double tail_bound = 0.0)
      : dim_(dim), mass_(std::move(mass)), tail_bound_(tail_bound) {
    validate();
  }

  static JointPmf point_mass(CountVector y) {
    const std::size_t dim = y.size();
    return JointPmf(dim, Support{{std::move(y), 1.0}});
  }

  std::size_t dim() const noexcept { return dim_; }
  const Support& mass() const noexcept { return mass_; }
  double tail_bound() const noexcept { return tail_bound_; }
  std::size_t size() const noexcept { return mass_.size(); }

  double at(const CountVector& y) const {
    auto it = mass_.find(y);
    return it == mass_.end() ? 0.0 : it->second;
  }

  double stored_mass() const {
    numeric::KahanSum s;
    for (const auto& [y, p] : mass_) s += p;
    return s.value();
  }

  /// Largest stored count in each coordinate.
  CountVector max_counts() const {
    CountVector m(dim_, 0);
    for (const auto& [y, p] : mass_)
      for (std::size_t i = 0; i < dim_; ++i) m[i] = std::max(m[i], y[i]);
    return m;
  }

  /// Coordinate marginal as a one-dimensional JointPmf with the same tail bound.
  JointPmf marginal(std::size_t i) const {
    if (i >= dim_) throw DimensionMismatch("marginal index out of range");
    std::map<CountVector, numeric::KahanSum> acc;
    for (const auto& [y, p] : mass_) acc[CountVector{y[i]}] += p;
    Support out;
    for (const auto& [k, s] : acc) out.emplace(k, s.value());
    return JointPmf(1, std::move(out), tail_bound_);
  }

 private:
  void validate() const {
    if (dim_ == 0) throw InvalidParameter("JointPmf dimension must be positive");
    if (!(tail_bound_ >= 0.0)) throw InvalidParameter("JointPmf tail bound must be nonnegative");
    for (const auto& [y, p] : mass_) {
      if (y.size() != dim_)
        throw DimensionMismatch("JointPmf key of length " + std::to_string(y.size()) +
                                " in a dimension-" + std::to_string(dim_) + " pmf");
      for (Count v : y)
        if (v < 0) throw InvalidParameter("JointPmf keys must be nonnegative counts");
      if (!(p >= 0.0)) throw InvalidParameter("JointPmf masses must be nonnegative");
    }
    const double total = stored_mass() + tail_bound_;
    if (total < 1.0 - tol::kJointMassSlack || total > 1.0 + tol::kJointMassSlack)
      throw InvalidParameter("JointPmf stored mass + tail bound = " + format_number(total) +
                             ", expected 1");
  }

  std::size_t dim_ = 0;
  Support mass_;
  double tail_bound_ = 0.0;
};

/// Mean vector and dispersion-covariance matrix: diagonal Var - mean,
/// off-diagonal covariances.
struct MomentSummary {
  Vector mean;
  Matrix disp;

  std::size_t dim() const noexcept { return mean.size(); }

  void validate() const {
    if (disp.rows() != mean.size() || disp.cols() != mean.size())
      throw DimensionMismatch("MomentSummary mean and disp dimensions disagree");
    for (std::size_t i = 0; i < disp.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(disp(i, j) - disp(j, i)) >
            tol::kInvariantSlack * std::max(1.0, std::abs(disp(i, j))))
          throw InvalidParameter("dispersion-covariance matrix is not symmetric");
  }
};

}  // namespace remark
