#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bilat/random.hpp"
#include "bilat/stats.hpp"

namespace bilat {

namespace {

// max_j v_j for the resample whose rows are data(idx[0..n1)) vs data(idx[n1..n)).
double replicate_max(const Matrix& data, const std::vector<std::size_t>& idx, std::size_t n1) {
  const std::size_t n = idx.size();
  const std::size_t n2 = n - n1;
  const double scale = std::sqrt(1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double* col = data.col(j).data();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) s1 += col[idx[i]];
    for (std::size_t i = n1; i < n; ++i) s2 += col[idx[i]];
    const double m1 = s1 / static_cast<double>(n1);
    const double m2 = s2 / static_cast<double>(n2);
    double ss = 0.0;
    for (std::size_t i = 0; i < n1; ++i) ss += (col[idx[i]] - m1) * (col[idx[i]] - m1);
    for (std::size_t i = n1; i < n; ++i) ss += (col[idx[i]] - m2) * (col[idx[i]] - m2);
    const double var = ss / static_cast<double>(n - 2);
    const double sd = std::sqrt(var);
    const bool degenerate = var < 1e-300 || sd <= 1e-14 * (std::abs(m1) + std::abs(m2));
    best = std::max(best, degenerate ? 0.0 : (m2 - m1) / (sd * scale));
  }
  return best;
}

void draw_indices(Rng& rng, Resampling resampling, std::vector<std::size_t>& idx) {
  const std::size_t n = idx.size();
  if (resampling == Resampling::pooled) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = rng.index(n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.index(i + 1)]);
}

void check_inputs(const TwoGroupDataset& dataset, std::size_t B) {
  if (B < 1000) {
    throw Error(ErrorCode::insufficient_replicates,
                "at least 1000 bootstrap replicates are required, got " + std::to_string(B));
  }
  if (dataset.n1() < 2 || dataset.n2() < 2) {
    throw Error(ErrorCode::invalid_argument, "each group needs at least 2 subjects");
  }
  if (dataset.feature_count() == 0) throw Error(ErrorCode::empty_input, "dataset has no features");
}

}  // namespace

std::vector<double> bootstrap_max_statistics(const TwoGroupDataset& dataset, std::size_t B, std::uint64_t seed,
                                             const BootstrapOptions& options) {
  check_inputs(dataset, B);
  const Matrix data = dataset.pooled_matrix();
  const std::size_t n = dataset.size();
  const std::size_t n1 = dataset.n1();
  std::vector<double> maxima(B);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(n);
    for (std::size_t b = begin; b < end; ++b) {
      Rng rng(seed, b);
      draw_indices(rng, options.resampling, idx);
      maxima[b] = replicate_max(data, idx, n1);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, B);
  if (workers == 1) {
    run_range(0, B);
    return maxima;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back(run_range, B * w / workers, B * (w + 1) / workers);
  }
  for (auto& t : threads) t.join();
  return maxima;
}

double upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "quantile of an empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  const double b = static_cast<double>(values.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * b - 1e-9));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
  return values[k - 1];
}

UitResult bootstrap_critical(const TwoGroupDataset& dataset, std::size_t B, double alpha, std::uint64_t seed,
                             const BootstrapOptions& options) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 0.5)");
  const FeatureTStats stats = feature_t_stats(dataset);
  const double v_crit = upper_quantile(bootstrap_max_statistics(dataset, B, seed, options), alpha);

  const double scale = std::sqrt(1.0 / static_cast<double>(dataset.n1()) + 1.0 / static_cast<double>(dataset.n2()));
  UitResult out;
  out.v = stats.v;
  out.V = uit_max(stats.v);
  out.V_crit = v_crit;
  out.alpha = alpha;
  out.B = B;
  out.seed = seed;
  out.resampling = options.resampling;
  out.mean_difference = stats.mean_difference;
  out.pooled_sd = stats.pooled_sd;
  out.zero_variance = stats.zero_variance;
  out.index_map = dataset.index_map();
  out.lower_bounds.resize(stats.v.size());
  for (std::size_t j = 0; j < stats.v.size(); ++j) {
    if (stats.zero_variance[j]) {
      out.lower_bounds[j] = -std::numeric_limits<double>::infinity();
      continue;
    }
    out.lower_bounds[j] = (stats.v[j] - v_crit) * stats.pooled_sd[j] * scale;
    if (stats.v[j] > v_crit) out.selected.push_back(j);
  }
  return out;
}

}  // namespace bilat
