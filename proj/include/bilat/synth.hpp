#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bilat/config_model.hpp"

namespace bilat {

/// Pairs (1,2), (3,4), ... followed by the solos.
PairingScheme sequential_scheme(std::size_t pair_count, std::size_t solo_count);

/// Random exactly symmetric configuration: left landmarks at x_1 < 0, right ones
/// their mirror images, solos on {x_1 = 0}.
Configuration make_symmetric_template(const PairingScheme& scheme, std::size_t dim, std::uint64_t seed);
Configuration make_symmetric_template(std::size_t pair_count, std::size_t solo_count, std::size_t dim,
                                      std::uint64_t seed);

struct SynthSpec {
  PairingScheme scheme;
  Configuration template_shape;
  double noise_sigma = 0.0;
  std::vector<double> offsets;  // J_basis shifts of the signed features, group 2 only; empty = none
  std::size_t n1 = 12;
  std::size_t n2 = 13;
  bool nuisance_motion = false;
  std::uint64_t seed = 0;
};

struct SynthTruth {
  std::vector<double> offsets;
  double noise_sigma;
  std::uint64_t seed;
  std::vector<RigidMotion> motions;  // applied nuisance motions (identity when off)
};

struct SynthDataset {
  std::vector<Configuration> configs;  // group 1 subjects first
  std::vector<int> groups;             // 1 or 2
  std::vector<std::string> ids;
  Registration registration;           // basis when no nuisance motion was applied, else raw
  SynthTruth truth;
};

SynthDataset generate_dataset(const SynthSpec& spec);

/// Standard deviation of signed feature j under the null at landmark noise sigma:
/// sigma * sqrt(2) for pair coordinates, sigma for solos.
double null_feature_sd(const PairingScheme& scheme, std::size_t dim, std::size_t feature, double sigma);

/// Offsets vector with a shift of k null standard deviations on one feature.
std::vector<double> planted_offsets(const PairingScheme& scheme, std::size_t dim, std::size_t feature, double k,
                                    double sigma);

}  // namespace bilat
