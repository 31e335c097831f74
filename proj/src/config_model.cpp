#include "bilat/config_model.hpp"

#include <cmath>
#include <string>

namespace bilat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::duplicate_index: return "DuplicateIndex";
    case ErrorCode::missing_index: return "MissingIndex";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::scheme_mismatch: return "SchemeMismatch";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::non_unit_normal: return "NonUnitNormal";
    case ErrorCode::invalid_motion: return "InvalidMotion";
    case ErrorCode::degenerate_configuration: return "DegenerateConfiguration";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::negative_weight: return "NegativeWeight";
    case ErrorCode::zero_pair_distance: return "ZeroPairDistance";
    case ErrorCode::zero_variance: return "ZeroVariance";
    case ErrorCode::insufficient_replicates: return "InsufficientReplicates";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::not_registered: return "NotRegistered";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unknown_spec: return "UnknownSpec";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Configuration

Configuration::Configuration(Matrix coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1 || coords_.cols() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "configuration needs K >= 1 landmarks and M >= 1 dimensions");
  }
  if (!coords_.allFinite()) {
    for (Eigen::Index k = 0; k < coords_.rows(); ++k) {
      if (!coords_.row(k).allFinite()) {
        throw Error(ErrorCode::non_finite, "landmark " + std::to_string(k + 1) + " has a non-finite coordinate");
      }
    }
  }
}

Configuration Configuration::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  const auto m = k > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  Matrix x(k, m);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != m) {
      throw Error(ErrorCode::dimension_mismatch, "ragged configuration rows");
    }
    Eigen::Index c = 0;
    for (double v : row) x(r, c++) = v;
    ++r;
  }
  return Configuration(std::move(x));
}

// ---------------------------------------------------------------- PairingScheme

void validate_scheme(std::span<const LandmarkPair> pairs, std::span<const std::size_t> solos,
                     std::size_t landmark_count) {
  std::vector<bool> seen(landmark_count, false);
  auto mark = [&](std::size_t idx, std::string_view where) {
    if (idx >= landmark_count) {
      throw Error(ErrorCode::index_out_of_range,
                  "landmark " + std::to_string(idx + 1) + " in " + std::string(where) +
                      " is outside 1.." + std::to_string(landmark_count));
    }
    if (seen[idx]) {
      throw Error(ErrorCode::duplicate_index,
                  "landmark " + std::to_string(idx + 1) + " appears more than once (" + std::string(where) + ")");
    }
    seen[idx] = true;
  };
  for (const auto& p : pairs) {
    const std::string where =
        "pair (" + std::to_string(p.left + 1) + "," + std::to_string(p.right + 1) + ")";
    mark(p.left, where);
    mark(p.right, where);
  }
  for (std::size_t s : solos) mark(s, "solos");
  for (std::size_t k = 0; k < landmark_count; ++k) {
    if (!seen[k]) {
      throw Error(ErrorCode::missing_index,
                  "landmark " + std::to_string(k + 1) + " is neither paired nor a solo");
    }
  }
}

PairingScheme::PairingScheme(std::vector<LandmarkPair> pairs, std::vector<std::size_t> solos)
    : pairs_(std::move(pairs)), solos_(std::move(solos)) {
  validate_scheme(pairs_, solos_, landmark_count());
}

PairingScheme PairingScheme::from_one_based(std::span<const std::pair<long long, long long>> pairs,
                                            std::span<const long long> solos) {
  auto convert = [](long long idx) -> std::size_t {
    if (idx < 1) {
      throw Error(ErrorCode::index_out_of_range,
                  "landmark index " + std::to_string(idx) + " is not a positive 1-based index");
    }
    return static_cast<std::size_t>(idx - 1);
  };
  std::vector<LandmarkPair> p;
  p.reserve(pairs.size());
  for (const auto& [l, r] : pairs) p.push_back({convert(l), convert(r)});
  std::vector<std::size_t> s;
  s.reserve(solos.size());
  for (long long v : solos) s.push_back(convert(v));
  return PairingScheme(std::move(p), std::move(s));
}

void validate_scheme(const PairingScheme& scheme, std::size_t landmark_count) {
  validate_scheme(scheme.pairs(), scheme.solos(), landmark_count);
}

PairingScheme smile_scheme() {
  const std::pair<long long, long long> pairs[] = {{1, 13}, {2, 12}, {3, 11}, {4, 10}, {5, 9},  {6, 8},
                                                   {20, 18}, {21, 17}, {22, 16}, {23, 15}, {24, 14}};
  const long long solos[] = {7, 19};
  return PairingScheme::from_one_based(pairs, solos);
}

// ---------------------------------------------------------------- Plane / RigidMotion

Plane::Plane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (normal_.size() < 1 || !normal_.allFinite() || !std::isfinite(offset_)) {
    throw Error(ErrorCode::non_finite, "plane normal and offset must be finite");
  }
  if (std::abs(normal_.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::non_unit_normal, "plane normal must have unit length");
  }
}

Plane Plane::first_axis(std::size_t dim) {
  return Plane(Vector::Unit(static_cast<Eigen::Index>(dim), 0), 0.0);
}

RigidMotion::RigidMotion(Matrix rotation, Vector translation)
    : rotation_(std::move(rotation)), translation_(std::move(translation)) {
  const auto m = translation_.size();
  if (rotation_.rows() != m || rotation_.cols() != m || m < 1) {
    throw Error(ErrorCode::dimension_mismatch, "rotation must be M x M with M = translation length");
  }
  if (!rotation_.allFinite() || !translation_.allFinite()) {
    throw Error(ErrorCode::non_finite, "rigid motion must be finite");
  }
  const Matrix gram = rotation_.transpose() * rotation_;
  if ((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(rotation_.determinant() - 1.0) > 1e-10) {
    throw Error(ErrorCode::invalid_motion, "rotation must be orthogonal with determinant +1");
  }
}

RigidMotion RigidMotion::identity(std::size_t dim) {
  const auto m = static_cast<Eigen::Index>(dim);
  return RigidMotion(Matrix::Identity(m, m), Vector::Zero(m));
}

RigidMotion RigidMotion::inverse() const {
  // x = R (x* - c)  =>  rotation R^T, translation -R c.
  return RigidMotion(rotation_.transpose(), -(rotation_ * translation_));
}

RigidMotion RigidMotion::then(const RigidMotion& next) const {
  if (next.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "composing motions of different dimension");
  // X R1 + 1 c1^T, then (.) R2 + 1 c2^T.
  return RigidMotion(rotation_ * next.rotation_, next.rotation_.transpose() * translation_ + next.translation_);
}

// ---------------------------------------------------------------- features metadata

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::signed_coordinate: return "signed";
    case FeatureKind::absolute: return "absolute";
    case FeatureKind::landmark: return "landmark";
  }
  return "?";
}

std::string_view to_string(Registration reg) {
  switch (reg) {
    case Registration::raw: return "raw";
    case Registration::axis: return "axis";
    case Registration::basis: return "basis";
  }
  return "?";
}

Registration parse_registration(std::string_view text) {
  if (text == "raw") return Registration::raw;
  if (text == "axis") return Registration::axis;
  if (text == "basis") return Registration::basis;
  throw Error(ErrorCode::parse_error, "unknown registration status '" + std::string(text) + "'");
}

std::string FeatureLabel::describe() const {
  if (source == Source::solo) return "solo " + std::to_string(left + 1);
  std::string s = "pair (" + std::to_string(left + 1) + "," + std::to_string(right + 1) + ")";
  if (coordinate) s += ", coordinate " + std::to_string(*coordinate + 1);
  return s;
}

std::string FeatureLabel::column_name() const {
  if (source == Source::solo) return "s" + std::to_string(left + 1);
  std::string s = "p" + std::to_string(left + 1) + "-" + std::to_string(right + 1);
  if (coordinate) s += ".c" + std::to_string(*coordinate + 1);
  return s;
}

FeatureIndexMap basis_index_map(const PairingScheme& scheme, std::size_t dim) {
  auto labels = std::make_shared<std::vector<FeatureLabel>>();
  labels->reserve(scheme.basis_feature_count(dim));
  for (const auto& p : scheme.pairs()) {
    for (std::size_t m = 0; m < dim; ++m) {
      labels->push_back({FeatureLabel::Source::pair, p.left, p.right, m});
    }
  }
  for (std::size_t s : scheme.solos()) labels->push_back({FeatureLabel::Source::solo, s, s, std::size_t{0}});
  return labels;
}

FeatureIndexMap axis_index_map(const PairingScheme& scheme) {
  auto labels = std::make_shared<std::vector<FeatureLabel>>();
  labels->reserve(scheme.axis_feature_count());
  for (const auto& p : scheme.pairs()) labels->push_back({FeatureLabel::Source::pair, p.left, p.right, std::nullopt});
  for (std::size_t s : scheme.solos()) labels->push_back({FeatureLabel::Source::solo, s, s, std::size_t{0}});
  return labels;
}

FeatureVector::FeatureVector(std::vector<double> values, FeatureKind kind, Registration registration,
                             FeatureIndexMap index_map)
    : values_(std::move(values)), kind_(kind), registration_(registration), index_map_(std::move(index_map)) {
  if (!index_map_ || index_map_->size() != values_.size()) {
    throw Error(ErrorCode::length_mismatch, "feature values and index map differ in length");
  }
  if (registration_ == Registration::raw) {
    throw Error(ErrorCode::not_registered, "features are only defined for registered configurations");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "feature value is not finite");
    if (kind_ != FeatureKind::signed_coordinate && v < 0.0) {
      throw Error(ErrorCode::invalid_argument, "absolute and landmark-level features must be nonnegative");
    }
  }
}

// ---------------------------------------------------------------- TwoGroupDataset

TwoGroupDataset::TwoGroupDataset(std::vector<FeatureVector> group1, std::vector<FeatureVector> group2)
    : group1_(std::move(group1)), group2_(std::move(group2)) {
  if (group1_.empty() && group2_.empty()) throw Error(ErrorCode::empty_input, "dataset has no subjects");
  const FeatureVector& first = group1_.empty() ? group2_.front() : group1_.front();
  j_ = first.size();
  kind_ = first.kind();
  registration_ = first.registration();
  index_map_ = first.index_map();
  auto check = [&](const FeatureVector& f) {
    if (f.size() != j_ || f.kind() != kind_ || f.registration() != registration_) {
      throw Error(ErrorCode::length_mismatch, "feature vectors in a dataset must share length, kind and registration");
    }
    if (f.index_map() != index_map_ && *f.index_map() != *index_map_) {
      throw Error(ErrorCode::scheme_mismatch, "feature vectors in a dataset must share the index map");
    }
  };
  for (const auto& f : group1_) check(f);
  for (const auto& f : group2_) check(f);
}

Matrix TwoGroupDataset::pooled_matrix() const {
  Matrix out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(j_));
  Eigen::Index r = 0;
  for (const auto* g : {&group1_, &group2_}) {
    for (const auto& f : *g) {
      for (std::size_t j = 0; j < j_; ++j) out(r, static_cast<Eigen::Index>(j)) = f[j];
      ++r;
    }
  }
  return out;
}

// ---------------------------------------------------------------- reflection

Configuration reflect_config(const Configuration& x, const PairingScheme& scheme) {
  validate_scheme(scheme, x.landmarks());
  Matrix flipped = x.coords();
  flipped.col(0) = -flipped.col(0);
  for (const auto& p : scheme.pairs()) {
    flipped.row(static_cast<Eigen::Index>(p.left)).swap(flipped.row(static_cast<Eigen::Index>(p.right)));
  }
  return Configuration(std::move(flipped));
}

double asymmetry_norm(const Configuration& x, const PairingScheme& scheme) {
  return (reflect_config(x, scheme).coords() - x.coords()).norm();
}

Configuration mean_configuration(std::span<const Configuration> configs) {
  if (configs.empty()) throw Error(ErrorCode::empty_input, "mean of zero configurations");
  Matrix sum = Matrix::Zero(configs.front().coords().rows(), configs.front().coords().cols());
  for (const auto& c : configs) {
    if (c.coords().rows() != sum.rows() || c.coords().cols() != sum.cols()) {
      throw Error(ErrorCode::dimension_mismatch, "configurations differ in K or M");
    }
    sum += c.coords();
  }
  return Configuration(sum / static_cast<double>(configs.size()));
}

}  // namespace bilat
