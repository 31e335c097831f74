#include "bilat/features.hpp"

#include <cmath>

namespace bilat {

namespace {

void require_scheme(const Configuration& x, const PairingScheme& scheme) {
  if (x.landmarks() != scheme.landmark_count()) {
    throw Error(ErrorCode::scheme_mismatch, "configuration has " + std::to_string(x.landmarks()) +
                                                " landmarks but the pairing scheme covers " +
                                                std::to_string(scheme.landmark_count()));
  }
}

// d[(L,R), m] for 0-based coordinate m.
double pair_feature(const Configuration& x, const LandmarkPair& p, std::size_t m) {
  return m == 0 ? x(p.left, 0) + x(p.right, 0) : x(p.left, m) - x(p.right, m);
}

}  // namespace

FeatureVector signed_features(const Configuration& x, const PairingScheme& scheme) {
  require_scheme(x, scheme);
  const std::size_t dim = x.dim();
  std::vector<double> d;
  d.reserve(scheme.basis_feature_count(dim));
  for (const auto& p : scheme.pairs()) {
    for (std::size_t m = 0; m < dim; ++m) d.push_back(pair_feature(x, p, m));
  }
  for (std::size_t s : scheme.solos()) d.push_back(x(s, 0));
  return FeatureVector(std::move(d), FeatureKind::signed_coordinate, Registration::basis,
                       basis_index_map(scheme, dim));
}

FeatureVector absolute_features(const FeatureVector& d) {
  std::vector<double> a(d.values());
  for (double& v : a) v = std::abs(v);
  const FeatureKind kind = d.kind() == FeatureKind::landmark ? FeatureKind::landmark : FeatureKind::absolute;
  return FeatureVector(std::move(a), kind, d.registration(), d.index_map());
}

FeatureVector landmark_features(const Configuration& x, const PairingScheme& scheme) {
  require_scheme(x, scheme);
  std::vector<double> d;
  d.reserve(scheme.axis_feature_count());
  for (const auto& p : scheme.pairs()) {
    double ss = 0.0;
    for (std::size_t m = 0; m < x.dim(); ++m) {
      const double f = pair_feature(x, p, m);
      ss += f * f;
    }
    d.push_back(std::sqrt(ss));
  }
  for (std::size_t s : scheme.solos()) d.push_back(std::abs(x(s, 0)));
  return FeatureVector(std::move(d), FeatureKind::landmark, Registration::axis, axis_index_map(scheme));
}

std::vector<FeatureVector> absolute_features(std::span<const Configuration> configs, const PairingScheme& scheme) {
  std::vector<FeatureVector> out;
  out.reserve(configs.size());
  for (const auto& x : configs) out.push_back(absolute_features(signed_features(x, scheme)));
  return out;
}

std::vector<FeatureVector> landmark_features(std::span<const Configuration> configs, const PairingScheme& scheme) {
  std::vector<FeatureVector> out;
  out.reserve(configs.size());
  for (const auto& x : configs) out.push_back(landmark_features(x, scheme));
  return out;
}

}  // namespace bilat
