#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bilat/error.hpp"

namespace bilat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// K x M landmark coordinates of one subject. Rows are landmarks.
class Configuration {
 public:
  /// Throws non_finite / dimension_mismatch when the matrix is empty or holds NaN/inf.
  explicit Configuration(Matrix coords);

  static Configuration from_rows(std::initializer_list<std::initializer_list<double>> rows);

  const Matrix& coords() const noexcept { return coords_; }
  std::size_t landmarks() const noexcept { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.cols()); }
  double operator()(std::size_t k, std::size_t m) const {
    return coords_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  }

 private:
  Matrix coords_;
};

/// Landmark indices are 0-based everywhere in the library; files and reports use 1-based.
struct LandmarkPair {
  std::size_t left;
  std::size_t right;
  friend bool operator==(const LandmarkPair&, const LandmarkPair&) = default;
};

/// Checks that pairs and solos partition {0..K-1}. Messages name the offending
/// landmark by its 1-based index.
void validate_scheme(std::span<const LandmarkPair> pairs, std::span<const std::size_t> solos,
                     std::size_t landmark_count);

class PairingScheme {
 public:
  /// Validates against K = 2*K_P + K_S.
  PairingScheme(std::vector<LandmarkPair> pairs, std::vector<std::size_t> solos);

  /// Builds from 1-based indices as they appear in files.
  static PairingScheme from_one_based(std::span<const std::pair<long long, long long>> pairs,
                                      std::span<const long long> solos);

  const std::vector<LandmarkPair>& pairs() const noexcept { return pairs_; }
  const std::vector<std::size_t>& solos() const noexcept { return solos_; }
  std::size_t pair_count() const noexcept { return pairs_.size(); }
  std::size_t solo_count() const noexcept { return solos_.size(); }
  std::size_t landmark_count() const noexcept { return 2 * pairs_.size() + solos_.size(); }

  /// J_basis = M*K_P + K_S.
  std::size_t basis_feature_count(std::size_t dim) const noexcept {
    return dim * pairs_.size() + solos_.size();
  }
  /// J_axis = K_P + K_S.
  std::size_t axis_feature_count() const noexcept { return pairs_.size() + solos_.size(); }

  friend bool operator==(const PairingScheme&, const PairingScheme&) = default;

 private:
  std::vector<LandmarkPair> pairs_;
  std::vector<std::size_t> solos_;
};

/// Validates the scheme against a configuration with `landmark_count` rows.
void validate_scheme(const PairingScheme& scheme, std::size_t landmark_count);

/// The 24-landmark lip periphery layout: 11 pairs and solos 7, 19.
PairingScheme smile_scheme();

/// Hyperplane {x : n.x = b} with unit normal n.
class Plane {
 public:
  Plane(Vector normal, double offset);
  static Plane first_axis(std::size_t dim);

  const Vector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(normal_.size()); }

 private:
  Vector normal_;
  double offset_;
};

/// x* = R^T x + c, i.e. X* = X R + 1 c^T for row-stacked landmarks.
class RigidMotion {
 public:
  RigidMotion(Matrix rotation, Vector translation);
  static RigidMotion identity(std::size_t dim);

  const Matrix& rotation() const noexcept { return rotation_; }
  const Vector& translation() const noexcept { return translation_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(translation_.size()); }

  RigidMotion inverse() const;
  /// Apply *this first, then `next`.
  RigidMotion then(const RigidMotion& next) const;

 private:
  Matrix rotation_;
  Vector translation_;
};

enum class FeatureKind { signed_coordinate, absolute, landmark };
enum class Registration { raw, axis, basis };

std::string_view to_string(FeatureKind kind);
std::string_view to_string(Registration reg);
Registration parse_registration(std::string_view text);

/// Where feature j comes from.
struct FeatureLabel {
  enum class Source { pair, solo };
  Source source;
  std::size_t left;   // solo landmark for Source::solo
  std::size_t right;  // unused for solos
  /// Coordinate (0-based) for coordinatewise pair features; empty for the landmark-level norm.
  std::optional<std::size_t> coordinate;

  /// Human-readable, 1-based: "pair (6,8), coordinate 2", "pair (6,8)", "solo 7".
  std::string describe() const;
  /// Compact column name: "p6-8.c2", "p6-8", "s7".
  std::string column_name() const;

  friend bool operator==(const FeatureLabel&, const FeatureLabel&) = default;
};

using FeatureIndexMap = std::shared_ptr<const std::vector<FeatureLabel>>;

/// Canonical label layouts: pairs first (each pair's coordinates in order), then solos.
FeatureIndexMap basis_index_map(const PairingScheme& scheme, std::size_t dim);
FeatureIndexMap axis_index_map(const PairingScheme& scheme);

class FeatureVector {
 public:
  FeatureVector(std::vector<double> values, FeatureKind kind, Registration registration,
                FeatureIndexMap index_map);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  FeatureKind kind() const noexcept { return kind_; }
  Registration registration() const noexcept { return registration_; }
  const FeatureIndexMap& index_map() const noexcept { return index_map_; }
  const FeatureLabel& label(std::size_t j) const { return (*index_map_)[j]; }

 private:
  std::vector<double> values_;
  FeatureKind kind_;
  Registration registration_;
  FeatureIndexMap index_map_;
};

/// Feature vectors of two groups; group 2 is the one hypothesised to be more asymmetric.
class TwoGroupDataset {
 public:
  TwoGroupDataset(std::vector<FeatureVector> group1, std::vector<FeatureVector> group2);

  const std::vector<FeatureVector>& group1() const noexcept { return group1_; }
  const std::vector<FeatureVector>& group2() const noexcept { return group2_; }
  std::size_t n1() const noexcept { return group1_.size(); }
  std::size_t n2() const noexcept { return group2_.size(); }
  std::size_t size() const noexcept { return group1_.size() + group2_.size(); }
  std::size_t feature_count() const noexcept { return j_; }
  FeatureKind kind() const noexcept { return kind_; }
  Registration registration() const noexcept { return registration_; }
  const FeatureIndexMap& index_map() const noexcept { return index_map_; }

  /// Rows: group 1 subjects then group 2 subjects. Columns: features.
  Matrix pooled_matrix() const;

 private:
  std::vector<FeatureVector> group1_;
  std::vector<FeatureVector> group2_;
  std::size_t j_ = 0;
  FeatureKind kind_ = FeatureKind::absolute;
  Registration registration_ = Registration::basis;
  FeatureIndexMap index_map_;
};

/// Mirror image about {x_1 = 0}: negate column 1, then swap the rows of every pair.
Configuration reflect_config(const Configuration& x, const PairingScheme& scheme);

/// ||reflect_config(X) - X||_F.
double asymmetry_norm(const Configuration& x, const PairingScheme& scheme);

/// Landmark-wise arithmetic mean.
Configuration mean_configuration(std::span<const Configuration> configs);

}  // namespace bilat
