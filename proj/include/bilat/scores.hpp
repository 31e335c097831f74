#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bilat/config_model.hpp"
#include "bilat/registration.hpp"

namespace bilat {

enum class WeightSource { equal, adaptive, user };

/// Nonnegative weights, at least one strictly positive.
class WeightVector {
 public:
  WeightVector(std::vector<double> weights, WeightSource source);

  const std::vector<double>& values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t j) const { return weights_[j]; }
  WeightSource source() const noexcept { return source_; }

 private:
  std::vector<double> weights_;
  WeightSource source_;
};

enum class ScoreFamily { additive, landmark_star };
enum class Psi { linear, quadratic };

struct ScoreSpec {
  ScoreFamily family;
  Psi psi;
  WeightVector weights;
  std::string name;  // used in reports
};

/// The named scores exposed on the command line.
enum class ScoreName { l1, l2, star_l1, star_l2, bock };
ScoreName parse_score_name(std::string_view text);
std::string_view to_string(ScoreName name);

/// Weight layout: one per coordinatewise feature (J_basis) or per landmark feature (J_axis).
enum class WeightLayout { coordinatewise, landmark };

WeightVector equal_weights(std::size_t n);
/// 1 for every pair coordinate, 2 for every solo.
WeightVector bock_weights(const PairingScheme& scheme, std::size_t dim);
/// Repeats each pair weight over its M coordinates; solos keep theirs.
WeightVector expand_landmark_weights(const WeightVector& per_landmark, const PairingScheme& scheme, std::size_t dim);

/// Reciprocal distance between the two landmarks of each pair in the mean of the
/// reflection-augmented registered data; `solo_weight` for solos.
WeightVector adaptive_weights(const RegisteredDataset& registered, const PairingScheme& scheme,
                              WeightLayout layout = WeightLayout::coordinatewise, double solo_weight = 1.0);

/// sum_j w_j psi(a_j) over absolute coordinatewise features.
double additive_score(const FeatureVector& a, const ScoreSpec& spec);
double additive_score(const FeatureVector& a, Psi psi, const WeightVector& weights);

/// sum over pair coordinates of d^2 plus twice the squared solo features.
double bock_score(const FeatureVector& a, const PairingScheme& scheme);

/// Landmark-level score: linear sums the pair norms and |solo|, quadratic sums their squares.
double star_score(const FeatureVector& dstar, Psi psi, const WeightVector& weights);

/// Presentation scaling of the linear landmark-level score (factor one half).
inline double scaled_star_l1(double raw) { return 0.5 * raw; }

/// Builds the ScoreSpec of a named score. `weights` may be empty for the default
/// weighting of that score (equal, or the Bock weights); otherwise its length must
/// match J_basis (additive) or J_axis (either family; expanded for additive scores).
ScoreSpec make_score_spec(ScoreName name, const PairingScheme& scheme, std::size_t dim,
                          const std::vector<double>& weights = {}, WeightSource source = WeightSource::equal);

struct GroupScores {
  std::vector<double> group1;
  std::vector<double> group2;
};

/// Scores of every subject, in input order, split by group.
GroupScores score_dataset(const TwoGroupDataset& dataset, const ScoreSpec& spec);

/// Registered configurations of two groups sharing one pairing scheme.
struct Cohort {
  PairingScheme scheme;
  std::vector<Configuration> group1;
  std::vector<Configuration> group2;
  Registration registration;
};

TwoGroupDataset absolute_dataset(const Cohort& cohort);
TwoGroupDataset landmark_dataset(const Cohort& cohort);

/// Computes the feature kind the score needs and scores it.
GroupScores score_cohort(const Cohort& cohort, const ScoreSpec& spec);

}  // namespace bilat
