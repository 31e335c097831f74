#pragma once

#include <span>
#include <vector>

#include "bilat/config_model.hpp"

namespace bilat {

/// Coordinatewise signed features of a basis-registered configuration:
/// per pair X[L,1] + X[R,1] and X[L,m] - X[R,m] (m >= 2), per solo X[S,1].
FeatureVector signed_features(const Configuration& x, const PairingScheme& scheme);

/// |d_j| elementwise.
FeatureVector absolute_features(const FeatureVector& d);

/// One value per pair: the Euclidean norm of its M coordinatewise features
/// (distance between one landmark and the mirror image of its partner); |X[S,1]| per solo.
FeatureVector landmark_features(const Configuration& x, const PairingScheme& scheme);

/// Convenience: absolute coordinatewise features of every subject.
std::vector<FeatureVector> absolute_features(std::span<const Configuration> configs, const PairingScheme& scheme);
std::vector<FeatureVector> landmark_features(std::span<const Configuration> configs, const PairingScheme& scheme);

}  // namespace bilat
