#pragma once

// Numeric tolerances and statistical thresholds shared by the library, the
// CLI verification batteries and the test suites.

namespace remark::tol {

// Slack on probability-vector weights, FinitePmf normalisation and symmetry.
inline constexpr double kInvariantSlack = 1e-12;
// Stored mass + tail bound of a JointPmf must land in [1 - slack, 1 + slack].
inline constexpr double kJointMassSlack = 1e-9;
// Closed form vs enumeration comparisons.
inline constexpr double kOracleCompare = 1e-8;
// |Disp| below this counts as equidispersed.
inline constexpr double kZeroDispersion = 1e-10;

// Truncation eps for test fixtures and interactive CLI use.
inline constexpr double kFixtureEps = 1e-10;
inline constexpr double kInteractiveEps = 1e-6;
// Truncation eps for moment / FMGF comparisons where the tail is weighted by
// y^4 or (1 + t)^y.
inline constexpr double kMomentEps = 1e-14;

inline constexpr int kMaxFactorialOrder = 8;

}  // namespace remark::tol

namespace remark::stat_config {

// Monte Carlo estimates must land within this many standard errors.
inline constexpr double kSigmaBand = 4.0;
// Chi-square goodness-of-fit significance level and retry seeds.
inline constexpr double kChiSquareAlpha = 1e-3;
inline constexpr int kChiSquareSeeds = 3;
// Batch count for batch-means standard errors of dispersion estimates.
inline constexpr int kBatches = 100;

}  // namespace remark::stat_config
