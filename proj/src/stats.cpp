#include "bilat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "bilat/distributions.hpp"

namespace bilat {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased; 0 when n < 2
};

Moments moments(std::span<const double> u) {
  Moments m;
  if (u.empty()) return m;
  m.mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  if (u.size() < 2) return m;
  double ss = 0.0;
  for (double x : u) ss += (x - m.mean) * (x - m.mean);
  m.var = ss / static_cast<double>(u.size() - 1);
  return m;
}

void require_finite(std::span<const double> u) {
  for (double x : u) {
    if (!std::isfinite(x)) throw Error(ErrorCode::non_finite, "test input contains a non-finite score");
  }
}

void require_min_size(std::span<const double> u1, std::span<const double> u2, std::size_t n) {
  if (u1.size() < n || u2.size() < n) {
    throw Error(ErrorCode::invalid_argument,
                "each group needs at least " + std::to_string(n) + " observations");
  }
  require_finite(u1);
  require_finite(u2);
}

double t_p_value(double t, double df, Sidedness sided) {
  if (sided == Sidedness::one_sided_greater) return student_t_sf(t, df);
  return std::min(1.0, 2.0 * student_t_sf(std::abs(t), df));
}

// Number of k-subsets of ranks {1..n} with each rank sum, as exact integer counts.
std::vector<std::uint64_t> rank_sum_counts(std::size_t n, std::size_t k) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<std::vector<std::uint64_t>> ways(k + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
  ways[0][0] = 1;
  for (std::size_t item = 1; item <= n; ++item) {
    for (std::size_t c = std::min(item, k); c >= 1; --c) {
      for (std::size_t s = max_sum; s >= item; --s) ways[c][s] += ways[c - 1][s - item];
    }
  }
  return ways[k];
}

}  // namespace

std::string_view to_string(Sidedness sided) { return sided == Sidedness::one_sided_greater ? "one" : "two"; }

std::string_view to_string(TestMethod method) {
  switch (method) {
    case TestMethod::pooled_t: return "pooled-t";
    case TestMethod::welch_t: return "welch-t";
    case TestMethod::mann_whitney_exact: return "mann-whitney-exact";
    case TestMethod::mann_whitney_approx: return "mann-whitney-approx";
  }
  return "?";
}

TestResult pooled_t_test(std::span<const double> u1, std::span<const double> u2, Sidedness sided) {
  require_min_size(u1, u2, 2);
  const Moments m1 = moments(u1);
  const Moments m2 = moments(u2);
  const double n1 = static_cast<double>(u1.size());
  const double n2 = static_cast<double>(u2.size());
  const double df = n1 + n2 - 2.0;
  const double pooled = ((n1 - 1.0) * m1.var + (n2 - 1.0) * m2.var) / df;
  if (pooled < 1e-300) throw Error(ErrorCode::zero_variance, "pooled variance is zero");
  const double t = (m2.mean - m1.mean) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
  return {t, t_p_value(t, df, sided), sided, TestMethod::pooled_t, df};
}

TestResult welch_t_test(std::span<const double> u1, std::span<const double> u2, Sidedness sided) {
  require_min_size(u1, u2, 2);
  const Moments m1 = moments(u1);
  const Moments m2 = moments(u2);
  const double n1 = static_cast<double>(u1.size());
  const double n2 = static_cast<double>(u2.size());
  const double e1 = m1.var / n1;
  const double e2 = m2.var / n2;
  const double se2 = e1 + e2;
  if (se2 < 1e-300) throw Error(ErrorCode::zero_variance, "both groups have zero variance");
  const double t = (m2.mean - m1.mean) / std::sqrt(se2);
  const double df = se2 * se2 / (e1 * e1 / (n1 - 1.0) + e2 * e2 / (n2 - 1.0));
  return {t, t_p_value(t, df, sided), sided, TestMethod::welch_t, df};
}

TestResult mann_whitney_u(std::span<const double> u1, std::span<const double> u2, Sidedness sided) {
  require_min_size(u1, u2, 1);
  const std::size_t n1 = u1.size();
  const std::size_t n2 = u2.size();
  const std::size_t n = n1 + n2;

  double u = 0.0;
  for (double b : u2) {
    for (double a : u1) u += b > a ? 1.0 : (b == a ? 0.5 : 0.0);
  }

  std::vector<double> pooled(u1.begin(), u1.end());
  pooled.insert(pooled.end(), u2.begin(), u2.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }

  if (n <= 20 && tie_sum == 0.0) {
    // Exact: every one of the C(N, n2) equally likely assignments is counted through
    // the rank-sum distribution of group 2; U = R2 - n2 (n2 + 1) / 2.
    const std::vector<std::uint64_t> counts = rank_sum_counts(n, n2);
    const std::size_t offset = n2 * (n2 + 1) / 2;
    const auto u_obs = static_cast<std::size_t>(u);
    std::uint64_t total = 0, ge = 0, le = 0;
    for (std::size_t s = offset; s < counts.size(); ++s) {
      total += counts[s];
      if (s - offset >= u_obs) ge += counts[s];
      if (s - offset <= u_obs) le += counts[s];
    }
    const double p_ge = static_cast<double>(ge) / static_cast<double>(total);
    const double p_le = static_cast<double>(le) / static_cast<double>(total);
    const double p = sided == Sidedness::one_sided_greater ? p_ge : std::min(1.0, 2.0 * std::min(p_ge, p_le));
    return {u, p, sided, TestMethod::mann_whitney_exact, std::nullopt};
  }

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);
  const double mu = 0.5 * dn1 * dn2;
  const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
  double p;
  if (!(var > 0.0)) {
    p = sided == Sidedness::one_sided_greater ? (u > mu ? 0.0 : 1.0) : (u == mu ? 1.0 : 0.0);
  } else if (sided == Sidedness::one_sided_greater) {
    p = normal_sf((u - mu - 0.5) / std::sqrt(var));
  } else {
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    p = std::min(1.0, 2.0 * normal_sf(z));
  }
  return {u, p, sided, TestMethod::mann_whitney_approx, std::nullopt};
}

std::string significance_stars(double p_value) {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

// ---------------------------------------------------------------- UIT

FeatureTStats feature_t_stats(const Matrix& pooled, std::size_t n1) {
  const auto n = static_cast<std::size_t>(pooled.rows());
  if (n1 < 2 || n < n1 + 2) throw Error(ErrorCode::invalid_argument, "each group needs at least 2 subjects");
  const std::size_t n2 = n - n1;
  const auto j_count = static_cast<std::size_t>(pooled.cols());
  const double scale = std::sqrt(1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  const auto r1 = static_cast<Eigen::Index>(n1);
  const auto r2 = static_cast<Eigen::Index>(n2);

  FeatureTStats out;
  out.v.resize(j_count);
  out.mean_difference.resize(j_count);
  out.pooled_sd.resize(j_count);
  out.zero_variance.resize(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    const auto col = pooled.col(static_cast<Eigen::Index>(j));
    const double m1 = col.head(r1).mean();
    const double m2 = col.tail(r2).mean();
    const double ss = (col.head(r1).array() - m1).square().sum() + (col.tail(r2).array() - m2).square().sum();
    const double var = ss / static_cast<double>(n - 2);
    const double sd = std::sqrt(var);
    out.mean_difference[j] = m2 - m1;
    out.pooled_sd[j] = sd;
    const bool degenerate = var < 1e-300 || sd <= 1e-14 * (std::abs(m1) + std::abs(m2));
    out.zero_variance[j] = degenerate;
    out.v[j] = degenerate ? 0.0 : (m2 - m1) / (sd * scale);
  }
  return out;
}

FeatureTStats feature_t_stats(const TwoGroupDataset& dataset) {
  return feature_t_stats(dataset.pooled_matrix(), dataset.n1());
}

double uit_max(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::empty_input, "max statistic of an empty vector");
  return *std::max_element(v.begin(), v.end());
}

// ---------------------------------------------------------------- comparisons

RequestedTest parse_requested_test(std::string_view text) {
  if (text == "pooled-t" || text == "t") return RequestedTest::pooled_t;
  if (text == "welch-t" || text == "welch") return RequestedTest::welch_t;
  if (text == "mann-whitney" || text == "mw") return RequestedTest::mann_whitney;
  throw Error(ErrorCode::unknown_spec, "unknown test method '" + std::string(text) + "'");
}

std::string_view to_string(RequestedTest test) {
  switch (test) {
    case RequestedTest::pooled_t: return "pooled-t";
    case RequestedTest::welch_t: return "welch-t";
    case RequestedTest::mann_whitney: return "mann-whitney";
  }
  return "?";
}

ComparisonRow compare_scores(const std::string& score_name, const GroupScores& scores, RequestedTest test,
                             Sidedness sided) {
  const Moments m1 = moments(scores.group1);
  const Moments m2 = moments(scores.group2);
  ComparisonRow row{score_name, test, TestMethod::pooled_t, sided, scores.group1.size(), scores.group2.size(),
                    m1.mean, std::sqrt(m1.var), m2.mean, std::sqrt(m2.var), 0.0, std::nullopt, 1.0, "", ""};
  try {
    TestResult r;
    switch (test) {
      case RequestedTest::pooled_t: r = pooled_t_test(scores.group1, scores.group2, sided); break;
      case RequestedTest::welch_t: r = welch_t_test(scores.group1, scores.group2, sided); break;
      case RequestedTest::mann_whitney: r = mann_whitney_u(scores.group1, scores.group2, sided); break;
    }
    row.method = r.method;
    row.statistic = r.statistic;
    row.df = r.df;
    row.p_value = r.p_value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::zero_variance) throw;
    // Both groups constant: report the separation itself.
    row.method = test == RequestedTest::welch_t ? TestMethod::welch_t : TestMethod::pooled_t;
    row.note = "zero variance";
    const double diff = m2.mean - m1.mean;
    if (diff > 0.0) {
      row.statistic = std::numeric_limits<double>::infinity();
      row.p_value = 0.0;
    } else if (diff < 0.0) {
      row.statistic = -std::numeric_limits<double>::infinity();
      row.p_value = sided == Sidedness::one_sided_greater ? 1.0 : 0.0;
    } else {
      row.statistic = 0.0;
      row.p_value = sided == Sidedness::one_sided_greater ? 0.5 : 1.0;
    }
  }
  row.stars = significance_stars(row.p_value);
  return row;
}

std::vector<ComparisonRow> run_comparison(const Cohort& cohort, std::span<const ScoreSpec> specs,
                                          std::span<const RequestedTest> tests, Sidedness sided) {
  std::vector<ComparisonRow> rows;
  rows.reserve(specs.size() * tests.size());
  for (const auto& spec : specs) {
    const GroupScores scores = score_cohort(cohort, spec);
    for (RequestedTest test : tests) rows.push_back(compare_scores(spec.name, scores, test, sided));
  }
  return rows;
}

}  // namespace bilat
