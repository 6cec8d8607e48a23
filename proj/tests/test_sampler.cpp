#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "remark/marking.hpp"
#include "remark/sampler.hpp"

using namespace remark;

namespace {

constexpr std::uint64_t kDraws = 100000;

// Pearson chi-square p-value of draws against pmf. Cells with expected count
// below 5 are pooled, scanning outward in key order.
template <class Key>
double chi_square_p(const std::map<Key, std::uint64_t>& counts, const std::map<Key, double>& probs,
                    std::uint64_t n) {
  double stat = 0.0;
  int cells = 0;
  double pooled_expected = 0.0;
  double pooled_observed = 0.0;
  double covered = 0.0;
  for (const auto& [k, p] : probs) {
    covered += p;
    const auto it = counts.find(k);
    pooled_observed += it == counts.end() ? 0.0 : static_cast<double>(it->second);
    pooled_expected += p * static_cast<double>(n);
    if (pooled_expected >= 5.0) {
      stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
      ++cells;
      pooled_expected = pooled_observed = 0.0;
    }
  }
  // Everything outside probs, plus any unfinished pool, forms the last cell.
  std::uint64_t seen = 0;
  for (const auto& [k, c] : counts)
    if (!probs.count(k)) seen += c;
  pooled_observed += static_cast<double>(seen);
  pooled_expected += (1.0 - covered) * static_cast<double>(n);
  if (pooled_expected > 0.0) {
    stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++cells;
  }
  EXPECT_GE(cells, 2);
  const boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

void expect_univariate_fit(const UnivariateLaw& law) {
  std::map<Count, double> probs;
  for (Count x = 0; x < 2000; ++x) {
    const double p = pmf(law, x);
    if (p > 1e-12) probs[x] = p;
  }
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    Rng rng(seed);
    std::map<Count, std::uint64_t> counts;
    for (std::uint64_t i = 0; i < kDraws; ++i) ++counts[sample(rng, law)];
    EXPECT_GE(chi_square_p(counts, probs, kDraws), stat_config::kChiSquareAlpha)
        << describe(law) << " seed " << seed;
  }
}

void expect_multivariate_fit(const MultivariateLaw& law) {
  std::map<CountVector, double> probs;
  const JointPmf joint = truncate(law, 1e-12);
  for (const auto& [y, p] : joint.mass())
    if (p > 1e-12) probs[y] = p;
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    Rng rng(seed);
    std::map<CountVector, std::uint64_t> counts;
    for (std::uint64_t i = 0; i < kDraws; ++i) ++counts[sample(rng, law)];
    EXPECT_GE(chi_square_p(counts, probs, kDraws), stat_config::kChiSquareAlpha)
        << describe(law) << " seed " << seed;
  }
}

}  // namespace

TEST(Rng, DeterministicAndInRange) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    const double u = a.uniform();
    b.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_GT(c.uniform_open(), 0.0);
  }
  EXPECT_NE(Rng(1)(), Rng(2)());
}

TEST(ChiSquare, Poisson) {
  expect_univariate_fit(Poisson{0.5});
  expect_univariate_fit(Poisson{4.0});
  expect_univariate_fit(Poisson{25.0});
}

TEST(ChiSquare, Binomial) {
  expect_univariate_fit(Binomial{20, 0.3});
  expect_univariate_fit(Binomial{200, 0.4});
  expect_univariate_fit(Binomial{100, 0.95});
}

TEST(ChiSquare, NegativeBinomialAndHermite) {
  expect_univariate_fit(NegativeBinomial{3, 0.4});
  expect_univariate_fit(NegativeBinomial{1, 0.8});
  expect_univariate_fit(Hermite{2.0, 1.0});
  expect_univariate_fit(FinitePmf{{{0, 1.0 / 3.0}, {3, 2.0 / 3.0}}});
}

TEST(ChiSquare, Multivariate) {
  expect_multivariate_fit(Multinomial{5, {0.2, 0.3}});
  expect_multivariate_fit(ProductPoisson{{1.0, 2.5}});
  expect_multivariate_fit(NegativeMultinomial{2, {0.1, 0.2}});
  expect_multivariate_fit(MultivariateHermite{{0.4, 0.7}, Matrix::from_rows({{0.2, 0.15}, {0.05, 0.3}})});
}

TEST(ChiSquare, MarkingMatchesClosure) {
  const UnivariateLaw x = NegativeBinomial{2, 0.4};
  const ProbVector a{0.3, 0.5};
  std::map<CountVector, double> probs;
  const JointPmf joint = truncate(mark(x, a).law, 1e-12);
  for (const auto& [y, p] : joint.mass())
    if (p > 1e-12) probs[y] = p;
  Rng rng(7);
  std::map<CountVector, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < kDraws; ++i) ++counts[sample_marking(rng, x, a)];
  EXPECT_GE(chi_square_p(counts, probs, kDraws), stat_config::kChiSquareAlpha);
}

TEST(Sampler, TrivialCases) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample(rng, Binomial{0, 0.7}), 0);
    EXPECT_EQ(sample_multinomial(rng, 5, {1.0}), CountVector{5});
    EXPECT_EQ(sample_multinomial(rng, 0, {0.3, 0.3}), (CountVector{0, 0}));
    const CountVector y = sample_remarking(rng, JointFinitePmf{JointPmf::point_mass({1, 1})},
                                           {{0.0, 1.0}, {1.0, 0.0}});
    EXPECT_EQ(y, (CountVector{1, 1}));
  }
}

TEST(Sampler, PoissonMean) {
  Rng rng(9);
  MomentAccumulator acc(1);
  for (int i = 0; i < 1000000; ++i) acc.add({sample_poisson(rng, 4.0)});
  EXPECT_NEAR(acc.mean()[0], 4.0, 3.0 * 2.0 / 1000.0);
}

TEST(Sampler, HermiteMeanAndVariance) {
  const McReport r = mc_report([](Rng& rng) { return CountVector{sample(rng, Hermite{2.0, 1.0})}; }, 1000000, 3);
  EXPECT_NEAR(r.mean[0], 2.0, 4.0 * r.std_err_mean[0]);
  EXPECT_NEAR(r.disp(0, 0) + r.mean[0], 3.0, 0.02);
}

TEST(Sampler, MultinomialCellFrequency) {
  Rng rng(17);
  int hits = 0;
  for (int i = 0; i < 1000000; ++i) hits += sample_multinomial(rng, 2, {0.3, 0.2}) == CountVector{1, 1};
  EXPECT_NEAR(hits / 1e6, 0.12, 0.001);
}

TEST(Sampler, MarkingCovariances) {
  const ProbVector a{0.5, 1.0 / 3.0};
  const McReport po = mc_report([&](Rng& rng) { return sample_marking(rng, Poisson{6.0}, a); }, 1000000, 21);
  EXPECT_NEAR(po.disp(0, 1), 0.0, 3.0 * (*po.std_err_disp)(0, 1));
  const McReport bin =
      mc_report([](Rng& rng) { return sample_marking(rng, Binomial{10, 0.5}, {0.5, 0.5}); }, 1000000, 22);
  EXPECT_NEAR(bin.disp(0, 1), -0.625, 3.0 * (*bin.std_err_disp)(0, 1));
}

TEST(Sampler, RemarkingMean) {
  const SubstochasticMatrix A{{0.5, 0.25}, {0.5, 0.5}};
  const McReport r =
      mc_report([&](Rng& rng) { return sample_remarking(rng, ProductPoisson{{1.0, 2.0}}, A); }, 1000000, 23);
  EXPECT_NEAR(r.mean[0], 1.0, 3.0 * r.std_err_mean[0]);
  EXPECT_NEAR(r.mean[1], 1.5, 3.0 * r.std_err_mean[1]);
}

TEST(MomentAccumulator, MergeMatchesSequential) {
  Rng rng(31);
  MomentAccumulator all(2), left(2), right(2);
  for (int i = 0; i < 1000; ++i) {
    const CountVector y = sample(rng, NegativeMultinomial{2, {0.2, 0.3}});
    all.add(y);
    (i < 400 ? left : right).add(y);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(left.mean()[i], all.mean()[i], 1e-12);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(left.disp()(i, j), all.disp()(i, j), 1e-10);
  }
}

TEST(McReport, DeterministicAndDegenerate) {
  auto gen = [](Rng& rng) { return sample_marking(rng, NegativeBinomial{2, 0.5}, {0.3, 0.6}); };
  const McReport a = mc_report(gen, 50000, 99);
  const McReport b = mc_report(gen, 50000, 99);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.disp, b.disp);
  EXPECT_EQ(*a.std_err_disp, *b.std_err_disp);
  EXPECT_NE(mc_report(gen, 50000, 100).mean, a.mean);

  const McReport two = mc_report([](Rng& rng) { return CountVector{sample_poisson(rng, 1.0)}; }, 2, 1);
  EXPECT_EQ(two.n_samples, 2u);
  EXPECT_EQ(two.batches, 1u);
  EXPECT_FALSE(two.std_err_disp.has_value());
  EXPECT_THROW(mc_report([](Rng& rng) { return CountVector{sample_poisson(rng, 1.0)}; }, 1, 1),
               InvalidParameter);
}

TEST(McReport, PoissonSeedSweep) {
  // True standard error of the mean is sqrt(4 / n).
  constexpr std::uint64_t n = 10000;
  const double se = std::sqrt(4.0 / n);
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const McReport r = mc_report([](Rng& rng) { return CountVector{sample_poisson(rng, 4.0)}; }, n, seed);
    inside += std::abs(r.mean[0] - 4.0) <= stat_config::kSigmaBand * se;
  }
  EXPECT_GE(inside, 99);
}
