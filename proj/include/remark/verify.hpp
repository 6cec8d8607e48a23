#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remark/analysis.hpp"
#include "remark/core.hpp"
#include "remark/laws.hpp"
#include "remark/marking.hpp"
#include "remark/numeric.hpp"
#include "remark/oracle.hpp"
#include "remark/sampler.hpp"

// Oracle-vs-prediction batteries over a fixed, seeded parameter grid. Each
// case yields one record; a suite passes when every record does.

namespace remark::verify {

inline constexpr std::uint64_t kGridSeed = 0x5eed'0f'ba11ULL;
inline constexpr std::size_t kCasesPerFamily = 50;
inline constexpr std::size_t kRemarkCases = 60;

struct CaseRecord {
  std::string suite;
  std::string name;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct MarkingCase {
  std::string name;
  UnivariateLaw law;
  ProbVector a;
};

struct RemarkingCase {
  std::string name;
  MultivariateLaw law;
  SubstochasticMatrix A;
};

inline std::vector<std::string_view> suite_names() {
  return {"closure", "moments", "fmgf", "independence", "all"};
}

inline bool is_suite(std::string_view s) {
  for (auto n : suite_names())
    if (n == s) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Parameter grids

namespace detail {

// Random a in the simplex. With keep_all the discard probability is zero.
inline Vector random_simplex_point(Rng& rng, std::size_t c, bool keep_all) {
  Vector e(c + 1);
  for (double& v : e) v = -std::log(rng.uniform_open());
  double total = 0.0;
  for (std::size_t i = 0; i < (keep_all ? c : c + 1); ++i) total += e[i];
  Vector a(c);
  for (std::size_t i = 0; i < c; ++i) a[i] = e[i] / total;
  // Rounding can push the weight a hair above 1.
  double w = 0.0;
  for (double v : a) w += v;
  if (w > 1.0) a.back() -= w - 1.0;
  return a;
}

inline SubstochasticMatrix random_remark_matrix(Rng& rng, std::size_t c, std::size_t d) {
  Matrix m(c, d);
  for (std::size_t j = 0; j < d; ++j) {
    const Vector col = random_simplex_point(rng, c, rng() % 4 == 0);
    for (std::size_t i = 0; i < c; ++i) m(i, j) = col[i];
  }
  return SubstochasticMatrix(m);
}

}  // namespace detail

/// per_family cases for each of Binomial, Poisson, NegativeBinomial, Hermite,
/// with c cycling through 1, 2, 3.
inline std::vector<MarkingCase> marking_grid(std::size_t per_family = kCasesPerFamily,
                                             std::uint64_t seed = kGridSeed) {
  Rng rng(seed);
  std::vector<MarkingCase> out;
  for (int family = 0; family < 4; ++family) {
    for (std::size_t i = 0; i < per_family; ++i) {
      const std::size_t c = 1 + i % 3;
      UnivariateLaw law;
      switch (family) {
        case 0: law = Binomial{static_cast<Count>(rng() % 11), rng.uniform()}; break;
        case 1: law = Poisson{0.1 + 3.9 * rng.uniform()}; break;
        case 2: law = NegativeBinomial{1 + static_cast<Count>(rng() % 4), 0.05 + 0.30 * rng.uniform()}; break;
        default: {
          const double mu = 0.1 + 2.9 * rng.uniform();
          law = Hermite{mu, mu * rng.uniform()};
        }
      }
      ProbVector a(detail::random_simplex_point(rng, c, i % 5 == 0));
      out.push_back({describe(law) + " a=" + format_vector(a.values()), law, a});
    }
  }
  return out;
}

/// Re-marking cases cycling through product Poisson, multivariate Hermite,
/// multinomial, negative multinomial and joint finite pmfs.
inline std::vector<RemarkingCase> remarking_grid(std::size_t count = kRemarkCases,
                                                 std::uint64_t seed = kGridSeed + 1) {
  Rng rng(seed);
  std::vector<RemarkingCase> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int family = static_cast<int>(i % 5);
    std::size_t d = 1 + (i / 5) % 2;
    MultivariateLaw law;
    switch (family) {
      case 0: {
        Vector l(d);
        for (double& v : l) v = 0.1 + 1.9 * rng.uniform();
        law = ProductPoisson{l};
        break;
      }
      case 1: {
        MultivariateHermite h{Vector(d), Matrix(d, d)};
        for (double& v : h.alpha) v = rng.uniform();
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t s = 0; s < d; ++s) h.beta(r, s) = 0.3 * rng.uniform();
        law = h;
        break;
      }
      case 2: {
        d = 1 + (i / 5) % 3;
        law = Multinomial{static_cast<Count>(rng() % 7),
                          ProbVector(detail::random_simplex_point(rng, d, rng() % 3 == 0))};
        break;
      }
      case 3: {
        const double total = 0.05 + 0.30 * rng.uniform();
        Vector q = detail::random_simplex_point(rng, d, true);
        for (double& v : q) v *= total;
        law = NegativeMultinomial{1 + static_cast<Count>(rng() % 3), q};
        break;
      }
      default: {
        d = 2;
        JointPmf::Support s;
        const std::size_t points = 4 + rng() % 5;
        double total = 0.0;
        std::vector<std::pair<CountVector, double>> raw;
        for (std::size_t k = 0; k < points; ++k) {
          CountVector y{static_cast<Count>(rng() % 5), static_cast<Count>(rng() % 5)};
          const double w = 0.05 + rng.uniform();
          raw.emplace_back(y, w);
          total += w;
        }
        for (auto& [y, w] : raw) s[y] += w / total;
        law = JointFinitePmf{JointPmf(2, std::move(s))};
      }
    }
    const bool small = family == 2 || family == 4 || d == 1;
    const std::size_t c = 1 + rng() % (small ? 3 : 2);
    SubstochasticMatrix A = detail::random_remark_matrix(rng, c, d);
    out.push_back({describe(law) + " A=" + format_matrix(A.matrix()), law, A});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Individual checks

inline CaseRecord finish(std::string suite, std::string name, double worst, double tol) {
  return {std::move(suite), std::move(name), worst, tol, worst <= tol};
}

/// Closed-form marked law vs enumeration, pointwise on the oracle support.
inline CaseRecord check_mark_closure(const MarkingCase& mc) {
  const JointPmf exact = oracle::mark_exact(mc.law, mc.a, tol::kFixtureEps);
  const MarkResult closed = mark(mc.law, mc.a);
  double worst = closed.rule == ClosureRule::Oracle ? 1.0 : 0.0;
  for (const auto& [y, p] : exact.mass()) worst = std::max(worst, std::abs(pmf(closed.law, y) - p));
  return finish("closure", "mark " + mc.name, worst, tol::kOracleCompare);
}

inline bool has_remark_closure(const MultivariateLaw& law) {
  return std::holds_alternative<ProductPoisson>(law) ||
         std::holds_alternative<MultivariateHermite>(law);
}

inline CaseRecord check_remark_closure(const RemarkingCase& rc) {
  const JointPmf exact = oracle::remark_exact(rc.law, rc.A, tol::kFixtureEps);
  const MarkResult closed = remark(rc.law, rc.A);
  double worst = closed.rule == ClosureRule::Oracle ? 1.0 : 0.0;
  for (const auto& [y, p] : exact.mass()) worst = std::max(worst, std::abs(pmf(closed.law, y) - p));
  return finish("closure", "remark " + rc.name, worst, tol::kOracleCompare);
}

inline double summary_discrepancy(const MomentSummary& predicted, const MomentSummary& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.dim(); ++i) {
    worst = std::max(worst, numeric::scaled_diff(predicted.mean[i], exact.mean[i]));
    for (std::size_t j = 0; j < exact.dim(); ++j)
      worst = std::max(worst, numeric::scaled_diff(predicted.disp(i, j), exact.disp(i, j)));
  }
  return worst;
}

/// Mean, dispersion-covariance and every factorial moment with |k| <= 4.
inline CaseRecord check_marking_moments(const MarkingCase& mc) {
  const JointPmf exact = oracle::mark_exact(mc.law, mc.a, tol::kMomentEps);
  double worst = summary_discrepancy(predict_marking_moments(mc.law, mc.a), oracle::summarize(exact));
  numeric::for_each_composition(mc.a.size(), 4, [&](const CountVector& kv) {
    const MultiIndex k(std::vector<int>(kv.begin(), kv.end()));
    worst = std::max(worst, numeric::scaled_diff(predict_marking_factorial_moment(mc.law, mc.a, k),
                                                 oracle::factorial_moment_exact(exact, k)));
  });
  return finish("moments", "mark " + mc.name, worst, tol::kOracleCompare);
}

/// Mean, A Disp A^T, and the second factorial cross-moments A F A^T.
inline CaseRecord check_remarking_moments(const RemarkingCase& rc) {
  const JointPmf exact = oracle::remark_exact(rc.law, rc.A, tol::kMomentEps);
  double worst = summary_discrepancy(predict_remarking_moments(rc.law, rc.A), oracle::summarize(exact));
  const Matrix predicted =
      predict_remarking_second_factorial(second_factorial_matrix(moment_summary(rc.law)), rc.A);
  const std::size_t c = rc.A.rows();
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      std::vector<int> k(c, 0);
      ++k[i];
      ++k[j];
      worst = std::max(worst, numeric::scaled_diff(predicted(i, j),
                                                   oracle::factorial_moment_exact(exact, MultiIndex(k))));
    }
  return finish("moments", "remark " + rc.name, worst, tol::kOracleCompare);
}

/// Calls visit(t) for the 5^c grid of t in [-0.5, 0.5]^c.
inline void for_each_t(std::size_t c, const std::function<void(const Vector&)>& visit) {
  numeric::for_each_in_box(CountVector(c, 5), [&](const CountVector& idx) {
    Vector t(c);
    for (std::size_t i = 0; i < c; ++i) t[i] = -0.5 + 0.25 * static_cast<double>(idx[i]);
    visit(t);
  });
}

/// Phi_Y(t) by summation vs Phi_X(a^T t) and vs the closed-form law's FMGF.
inline CaseRecord check_marking_fmgf(const MarkingCase& mc) {
  const JointPmf exact = oracle::mark_exact(mc.law, mc.a, tol::kMomentEps);
  const MarkResult closed = mark(mc.law, mc.a);
  double worst = 0.0;
  for_each_t(mc.a.size(), [&](const Vector& t) {
    const double summed = oracle::fmgf_exact(exact, t);
    worst = std::max(worst, numeric::scaled_diff(predict_marking_fmgf(mc.law, mc.a, t), summed));
    worst = std::max(worst, numeric::scaled_diff(fmgf(closed.law, t), summed));
  });
  return finish("fmgf", "mark " + mc.name, worst, tol::kOracleCompare);
}

inline CaseRecord check_remarking_fmgf(const RemarkingCase& rc) {
  const JointPmf exact = oracle::remark_exact(rc.law, rc.A, tol::kMomentEps);
  double worst = 0.0;
  for_each_t(rc.A.rows(), [&](const Vector& t) {
    const double summed = oracle::fmgf_exact(exact, t);
    worst = std::max(worst, numeric::scaled_diff(predict_remarking_fmgf(rc.law, rc.A, t), summed));
  });
  return finish("fmgf", "remark " + rc.name, worst, tol::kOracleCompare);
}

/// Poisson markings factorise; Binomial, NegBin, Hermite and the
/// equidispersed two-point law do not (the latter despite zero covariance).
inline std::vector<CaseRecord> independence_battery() {
  struct Case {
    UnivariateLaw law;
    ProbVector a;
    bool independent;
  };
  const FinitePmf two_point{{{0, 1.0 / 3.0}, {3, 2.0 / 3.0}}};
  const std::vector<Case> cases = {
      {Poisson{2.0}, {0.5, 0.5}, true},
      {Poisson{1.0}, {0.2, 0.3, 0.4}, true},
      {Poisson{3.5}, {0.6, 0.4}, true},
      {Poisson{0.7}, {0.9, 0.05}, true},
      {Binomial{2, 0.5}, {0.5, 0.5}, false},
      {Binomial{10, 0.3}, {0.3, 0.3, 0.2}, false},
      {NegativeBinomial{2, 0.5}, {0.3, 0.6}, false},
      {NegativeBinomial{1, 0.2}, {0.5, 0.5}, false},
      {Hermite{2.0, 1.0}, {0.5, 0.5}, false},
      {Hermite{1.5, 0.3}, {0.4, 0.4}, false},
      {two_point, {0.5, 0.5}, false},
  };
  std::vector<CaseRecord> out;
  for (const Case& c : cases) {
    const JointPmf j = oracle::mark_exact(c.law, c.a, 1e-12);
    const double disc = oracle::independence_discrepancy(j);
    const bool verdict = oracle::independence_check(j, tol::kOracleCompare);
    bool pass = verdict == c.independent;
    std::string name = describe(c.law) + " a=" + format_vector(c.a.values()) +
                       (c.independent ? " independent" : " dependent");
    if (std::holds_alternative<FinitePmf>(c.law)) {
      const double cov = oracle::summarize(j).disp(0, 1);
      pass = pass && std::abs(cov) <= 1e-9;
      name += " (|Cov| = " + format_number(std::abs(cov)) + ")";
    }
    out.push_back({"independence", name, disc, tol::kOracleCompare, pass});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

inline std::vector<CaseRecord> run_suite(std::string_view suite) {
  if (!is_suite(suite)) throw InvalidParameter("unknown suite '" + std::string(suite) + "'");
  const bool all = suite == "all";
  std::vector<CaseRecord> out;
  const auto marks = marking_grid();
  const auto remarks = remarking_grid();
  if (all || suite == "closure") {
    for (const auto& mc : marks) out.push_back(check_mark_closure(mc));
    for (const auto& rc : remarks)
      if (has_remark_closure(rc.law)) out.push_back(check_remark_closure(rc));
  }
  if (all || suite == "moments") {
    for (const auto& mc : marks) out.push_back(check_marking_moments(mc));
    for (const auto& rc : remarks) out.push_back(check_remarking_moments(rc));
  }
  if (all || suite == "fmgf") {
    for (const auto& mc : marks) out.push_back(check_marking_fmgf(mc));
    for (const auto& rc : remarks) out.push_back(check_remarking_fmgf(rc));
  }
  if (all || suite == "independence") {
    for (auto& r : independence_battery()) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace remark::verify
