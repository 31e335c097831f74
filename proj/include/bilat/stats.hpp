#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bilat/config_model.hpp"
#include "bilat/scores.hpp"

namespace bilat {

/// one_sided_greater: H1 says group 2 (the second sample) is larger.
enum class Sidedness { one_sided_greater, two_sided };
enum class TestMethod { pooled_t, welch_t, mann_whitney_exact, mann_whitney_approx };

std::string_view to_string(Sidedness sided);
std::string_view to_string(TestMethod method);

struct TestResult {
  double statistic;
  double p_value;
  Sidedness sidedness;
  TestMethod method;
  std::optional<double> df;
};

/// Two-sample t test with common variance on mean(u2) - mean(u1).
/// Throws zero_variance when the pooled variance is below 1e-300.
TestResult pooled_t_test(std::span<const double> u1, std::span<const double> u2, Sidedness sided);

/// Welch t test with Welch-Satterthwaite degrees of freedom.
TestResult welch_t_test(std::span<const double> u1, std::span<const double> u2, Sidedness sided);

/// U = #{(i,k): u2[k] > u1[i]} + 1/2 per tie. Exact null distribution when N <= 20
/// and there are no ties, else the tie-corrected normal approximation with continuity correction.
TestResult mann_whitney_u(std::span<const double> u1, std::span<const double> u2, Sidedness sided);

/// "***" below 0.001, "**" below 0.01, "*" below 0.05, otherwise empty.
std::string significance_stars(double p_value);

// ---------------------------------------------------------------- union-intersection test

struct FeatureTStats {
  std::vector<double> v;                // (mean2 - mean1) / (s * sqrt(1/n1 + 1/n2))
  std::vector<double> mean_difference;  // mean2 - mean1
  std::vector<double> pooled_sd;        // s
  std::vector<bool> zero_variance;      // v set to 0 for these
};

/// Per-feature pooled two-sample t statistics; larger means group 2 more asymmetric.
FeatureTStats feature_t_stats(const TwoGroupDataset& dataset);

/// Same, on a pooled N x J matrix whose first n1 rows are group 1.
FeatureTStats feature_t_stats(const Matrix& pooled, std::size_t n1);

/// max_j v_j.
double uit_max(std::span<const double> v);

enum class Resampling {
  pooled,       // draw N vectors with replacement from the pooled sample
  permutation,  // random relabelling of the pooled sample
};

struct BootstrapOptions {
  Resampling resampling = Resampling::pooled;
  std::size_t workers = 1;
};

struct UitResult {
  std::vector<double> v;
  double V;
  double V_crit;
  double alpha;
  std::size_t B;
  std::uint64_t seed;
  Resampling resampling;
  std::vector<std::size_t> selected;  // j with v_j > V_crit
  std::vector<double> lower_bounds;   // simultaneous one-sided lower bounds on mean2 - mean1
  std::vector<double> mean_difference;
  std::vector<double> pooled_sd;
  std::vector<bool> zero_variance;
  FeatureIndexMap index_map;
};

/// Bootstrap critical value of the max statistic and the features that exceed it.
/// Replicate b draws from its own substream of `seed`, so results do not depend on workers.
UitResult bootstrap_critical(const TwoGroupDataset& dataset, std::size_t B, double alpha, std::uint64_t seed,
                             const BootstrapOptions& options = {});

/// The B replicate maxima in replicate order (for diagnostics and tests).
std::vector<double> bootstrap_max_statistics(const TwoGroupDataset& dataset, std::size_t B, std::uint64_t seed,
                                             const BootstrapOptions& options = {});

/// Empirical (1 - alpha) quantile: the ceil((1 - alpha) B)-th smallest value.
double upper_quantile(std::vector<double> values, double alpha);

// ---------------------------------------------------------------- comparison tables

enum class RequestedTest { pooled_t, welch_t, mann_whitney };
RequestedTest parse_requested_test(std::string_view text);
std::string_view to_string(RequestedTest test);

struct ComparisonRow {
  std::string score;
  RequestedTest test;
  TestMethod method;
  Sidedness sidedness;
  std::size_t n1, n2;
  double mean1, sd1, mean2, sd2;
  double statistic;
  std::optional<double> df;
  double p_value;
  std::string stars;
  std::string note;  // e.g. zero-variance degenerate separation
};

std::vector<ComparisonRow> run_comparison(const Cohort& cohort, std::span<const ScoreSpec> specs,
                                          std::span<const RequestedTest> tests, Sidedness sided);

/// Single-spec form on scores that were already computed.
ComparisonRow compare_scores(const std::string& score_name, const GroupScores& scores, RequestedTest test,
                             Sidedness sided);

}  // namespace bilat
