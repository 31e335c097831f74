#include "bilat/scores.hpp"

#include <cmath>

#include "bilat/features.hpp"

namespace bilat {

namespace {

double apply_psi(Psi psi, double a) { return psi == Psi::linear ? a : a * a; }

void require_length(std::size_t got, std::size_t want, std::string_view what) {
  if (got != want) {
    throw Error(ErrorCode::length_mismatch, std::string(what) + ": expected " + std::to_string(want) +
                                                " values, got " + std::to_string(got));
  }
}

std::size_t cohort_dim(const Cohort& cohort) {
  if (!cohort.group1.empty()) return cohort.group1.front().dim();
  if (!cohort.group2.empty()) return cohort.group2.front().dim();
  throw Error(ErrorCode::empty_input, "cohort has no subjects");
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights, WeightSource source)
    : weights_(std::move(weights)), source_(source) {
  bool any_positive = false;
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::non_finite, "weights must be finite");
    if (w < 0.0) throw Error(ErrorCode::negative_weight, "weights must be nonnegative");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw Error(ErrorCode::invalid_argument, "at least one weight must be positive");
}

ScoreName parse_score_name(std::string_view text) {
  if (text == "l1") return ScoreName::l1;
  if (text == "l2") return ScoreName::l2;
  if (text == "star-l1") return ScoreName::star_l1;
  if (text == "star-l2") return ScoreName::star_l2;
  if (text == "bock") return ScoreName::bock;
  throw Error(ErrorCode::unknown_spec, "unknown score '" + std::string(text) + "'");
}

std::string_view to_string(ScoreName name) {
  switch (name) {
    case ScoreName::l1: return "l1";
    case ScoreName::l2: return "l2";
    case ScoreName::star_l1: return "star-l1";
    case ScoreName::star_l2: return "star-l2";
    case ScoreName::bock: return "bock";
  }
  return "?";
}

WeightVector equal_weights(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0), WeightSource::equal); }

WeightVector bock_weights(const PairingScheme& scheme, std::size_t dim) {
  std::vector<double> w(scheme.pair_count() * dim, 1.0);
  w.resize(scheme.basis_feature_count(dim), 2.0);
  return WeightVector(std::move(w), WeightSource::user);
}

WeightVector expand_landmark_weights(const WeightVector& per_landmark, const PairingScheme& scheme,
                                     std::size_t dim) {
  require_length(per_landmark.size(), scheme.axis_feature_count(), "landmark weights");
  std::vector<double> w;
  w.reserve(scheme.basis_feature_count(dim));
  for (std::size_t p = 0; p < scheme.pair_count(); ++p) w.insert(w.end(), dim, per_landmark[p]);
  for (std::size_t s = 0; s < scheme.solo_count(); ++s) w.push_back(per_landmark[scheme.pair_count() + s]);
  return WeightVector(std::move(w), per_landmark.source());
}

WeightVector adaptive_weights(const RegisteredDataset& registered, const PairingScheme& scheme, WeightLayout layout,
                              double solo_weight) {
  if (registered.configs.empty()) throw Error(ErrorCode::empty_input, "no registered configurations");
  if (!(solo_weight >= 0.0)) throw Error(ErrorCode::negative_weight, "solo weight must be nonnegative");
  std::vector<Configuration> augmented;
  augmented.reserve(2 * registered.configs.size());
  for (const auto& c : registered.configs) {
    augmented.push_back(c);
    augmented.push_back(reflect_config(c, scheme));
  }
  const Configuration mean = mean_configuration(augmented);
  std::vector<double> w;
  w.reserve(scheme.axis_feature_count());
  for (const auto& p : scheme.pairs()) {
    const double dist = (mean.coords().row(static_cast<Eigen::Index>(p.left)) -
                         mean.coords().row(static_cast<Eigen::Index>(p.right)))
                            .norm();
    if (dist < 1e-12) {
      throw Error(ErrorCode::zero_pair_distance, "mean shape places pair (" + std::to_string(p.left + 1) + "," +
                                                     std::to_string(p.right + 1) + ") at one point");
    }
    w.push_back(1.0 / dist);
  }
  w.insert(w.end(), scheme.solo_count(), solo_weight);
  WeightVector per_landmark(std::move(w), WeightSource::adaptive);
  if (layout == WeightLayout::landmark) return per_landmark;
  return expand_landmark_weights(per_landmark, scheme, mean.dim());
}

double additive_score(const FeatureVector& a, Psi psi, const WeightVector& weights) {
  if (a.kind() != FeatureKind::absolute) {
    throw Error(ErrorCode::invalid_argument, "additive scores take absolute coordinatewise features");
  }
  require_length(weights.size(), a.size(), "weights");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += weights[j] * apply_psi(psi, a[j]);
  return sum;
}

double additive_score(const FeatureVector& a, const ScoreSpec& spec) {
  if (spec.family != ScoreFamily::additive) {
    throw Error(ErrorCode::invalid_argument, "score spec is not an additive coordinatewise score");
  }
  return additive_score(a, spec.psi, spec.weights);
}

double bock_score(const FeatureVector& a, const PairingScheme& scheme) {
  if (a.kind() != FeatureKind::absolute) {
    throw Error(ErrorCode::invalid_argument, "the Bock score takes absolute coordinatewise features");
  }
  const std::size_t pair_features = a.size() >= scheme.solo_count() ? a.size() - scheme.solo_count() : 1;
  if (scheme.pair_count() == 0 ? pair_features != 0 : pair_features % scheme.pair_count() != 0) {
    throw Error(ErrorCode::length_mismatch, "feature vector does not match the pairing scheme");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double w = a.label(j).source == FeatureLabel::Source::solo ? 2.0 : 1.0;
    sum += w * a[j] * a[j];
  }
  return sum;
}

double star_score(const FeatureVector& dstar, Psi psi, const WeightVector& weights) {
  if (dstar.kind() != FeatureKind::landmark) {
    throw Error(ErrorCode::invalid_argument, "landmark-level scores take landmark features");
  }
  require_length(weights.size(), dstar.size(), "weights");
  double sum = 0.0;
  for (std::size_t j = 0; j < dstar.size(); ++j) sum += weights[j] * apply_psi(psi, dstar[j]);
  return sum;
}

ScoreSpec make_score_spec(ScoreName name, const PairingScheme& scheme, std::size_t dim,
                          const std::vector<double>& weights, WeightSource source) {
  const bool star = name == ScoreName::star_l1 || name == ScoreName::star_l2;
  const Psi psi = (name == ScoreName::l1 || name == ScoreName::star_l1) ? Psi::linear : Psi::quadratic;
  std::string label(to_string(name));
  if (!weights.empty() && source != WeightSource::equal) label = "weighted-" + label;

  if (star) {
    WeightVector w = weights.empty() ? equal_weights(scheme.axis_feature_count()) : WeightVector(weights, source);
    require_length(w.size(), scheme.axis_feature_count(), "landmark-level weights");
    return {ScoreFamily::landmark_star, psi, std::move(w), std::move(label)};
  }
  if (weights.empty()) {
    WeightVector w = name == ScoreName::bock ? bock_weights(scheme, dim) : equal_weights(scheme.basis_feature_count(dim));
    return {ScoreFamily::additive, psi, std::move(w), std::move(label)};
  }
  WeightVector w(weights, source);
  if (w.size() == scheme.axis_feature_count() && w.size() != scheme.basis_feature_count(dim)) {
    w = expand_landmark_weights(w, scheme, dim);
  }
  require_length(w.size(), scheme.basis_feature_count(dim), "coordinatewise weights");
  if (name == ScoreName::bock) {
    // User weights on top of the Bock doubling of solos.
    std::vector<double> combined = w.values();
    const WeightVector bock = bock_weights(scheme, dim);
    for (std::size_t j = 0; j < combined.size(); ++j) combined[j] *= bock[j];
    w = WeightVector(std::move(combined), source);
  }
  return {ScoreFamily::additive, psi, std::move(w), std::move(label)};
}

GroupScores score_dataset(const TwoGroupDataset& dataset, const ScoreSpec& spec) {
  const FeatureKind want = spec.family == ScoreFamily::additive ? FeatureKind::absolute : FeatureKind::landmark;
  if (dataset.kind() != want) {
    throw Error(ErrorCode::invalid_argument, "score '" + spec.name + "' needs " + std::string(to_string(want)) +
                                                 " features, dataset holds " + std::string(to_string(dataset.kind())));
  }
  auto score = [&](const FeatureVector& f) {
    return spec.family == ScoreFamily::additive ? additive_score(f, spec) : star_score(f, spec.psi, spec.weights);
  };
  GroupScores out;
  out.group1.reserve(dataset.n1());
  out.group2.reserve(dataset.n2());
  for (const auto& f : dataset.group1()) out.group1.push_back(score(f));
  for (const auto& f : dataset.group2()) out.group2.push_back(score(f));
  return out;
}

TwoGroupDataset absolute_dataset(const Cohort& cohort) {
  if (cohort.registration != Registration::basis) {
    throw Error(ErrorCode::not_registered, "coordinatewise features need basis-registered data, got " +
                                               std::string(to_string(cohort.registration)));
  }
  return TwoGroupDataset(absolute_features(cohort.group1, cohort.scheme),
                         absolute_features(cohort.group2, cohort.scheme));
}

TwoGroupDataset landmark_dataset(const Cohort& cohort) {
  if (cohort.registration == Registration::raw) {
    throw Error(ErrorCode::not_registered, "landmark features need axis- or basis-registered data");
  }
  return TwoGroupDataset(landmark_features(cohort.group1, cohort.scheme),
                         landmark_features(cohort.group2, cohort.scheme));
}

GroupScores score_cohort(const Cohort& cohort, const ScoreSpec& spec) {
  cohort_dim(cohort);
  return score_dataset(spec.family == ScoreFamily::additive ? absolute_dataset(cohort) : landmark_dataset(cohort),
                       spec);
}

}  // namespace bilat
