#include "bilat/synth.hpp"

#include <cmath>
#include <string>

#include "bilat/random.hpp"
#include "bilat/registration.hpp"

namespace bilat {

PairingScheme sequential_scheme(std::size_t pair_count, std::size_t solo_count) {
  std::vector<LandmarkPair> pairs;
  for (std::size_t p = 0; p < pair_count; ++p) pairs.push_back({2 * p, 2 * p + 1});
  std::vector<std::size_t> solos;
  for (std::size_t s = 0; s < solo_count; ++s) solos.push_back(2 * pair_count + s);
  return PairingScheme(std::move(pairs), std::move(solos));
}

Configuration make_symmetric_template(const PairingScheme& scheme, std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "dimension must be at least 1");
  if (scheme.landmark_count() == 0) throw Error(ErrorCode::empty_input, "scheme has no landmarks");
  Rng rng(seed);
  const auto m = static_cast<Eigen::Index>(dim);
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(scheme.landmark_count()), m);
  for (const auto& p : scheme.pairs()) {
    const auto l = static_cast<Eigen::Index>(p.left);
    const auto r = static_cast<Eigen::Index>(p.right);
    x(l, 0) = -(0.5 + rng.uniform());
    for (Eigen::Index c = 1; c < m; ++c) x(l, c) = 2.0 * rng.uniform() - 1.0;
    x.row(r) = x.row(l);
    x(r, 0) = -x(l, 0);
  }
  for (std::size_t s : scheme.solos()) {
    const auto k = static_cast<Eigen::Index>(s);
    for (Eigen::Index c = 1; c < m; ++c) x(k, c) = 2.0 * rng.uniform() - 1.0;
  }
  return Configuration(std::move(x));
}

Configuration make_symmetric_template(std::size_t pair_count, std::size_t solo_count, std::size_t dim,
                                      std::uint64_t seed) {
  return make_symmetric_template(sequential_scheme(pair_count, solo_count), dim, seed);
}

namespace {

void inject_offsets(Matrix& x, const PairingScheme& scheme, const std::vector<double>& offsets) {
  const auto m = x.cols();
  std::size_t j = 0;
  for (const auto& p : scheme.pairs()) {
    const auto l = static_cast<Eigen::Index>(p.left);
    const auto r = static_cast<Eigen::Index>(p.right);
    for (Eigen::Index c = 0; c < m; ++c, ++j) {
      const double half = 0.5 * offsets[j];
      x(l, c) += half;
      x(r, c) += c == 0 ? half : -half;
    }
  }
  for (std::size_t s : scheme.solos()) x(static_cast<Eigen::Index>(s), 0) += offsets[j++];
}

}  // namespace

SynthDataset generate_dataset(const SynthSpec& spec) {
  const std::size_t dim = spec.template_shape.dim();
  validate_scheme(spec.scheme, spec.template_shape.landmarks());
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw Error(ErrorCode::invalid_argument, "noise sigma must be finite and nonnegative");
  }
  if (!spec.offsets.empty() && spec.offsets.size() != spec.scheme.basis_feature_count(dim)) {
    throw Error(ErrorCode::length_mismatch, "offsets must have " +
                                                std::to_string(spec.scheme.basis_feature_count(dim)) + " entries");
  }
  if (asymmetry_norm(spec.template_shape, spec.scheme) != 0.0) {
    throw Error(ErrorCode::invalid_argument, "template is not exactly symmetric");
  }

  SynthDataset out;
  out.registration = spec.nuisance_motion ? Registration::raw : Registration::basis;
  out.truth = {spec.offsets, spec.noise_sigma, spec.seed, {}};
  const std::size_t total = spec.n1 + spec.n2;
  const Matrix& base = spec.template_shape.coords();
  for (std::size_t i = 0; i < total; ++i) {
    Rng rng(spec.seed, i);
    Matrix x = base;
    if (spec.noise_sigma > 0.0) {
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) += spec.noise_sigma * rng.normal();
      }
    }
    const bool second = i >= spec.n1;
    if (second && !spec.offsets.empty()) inject_offsets(x, spec.scheme, spec.offsets);
    RigidMotion motion = RigidMotion::identity(dim);
    if (spec.nuisance_motion) {
      Matrix rot = random_rotation(dim, rng);
      Vector shift(static_cast<Eigen::Index>(dim));
      for (Eigen::Index c = 0; c < shift.size(); ++c) shift(c) = 3.0 * rng.normal();
      motion = RigidMotion(std::move(rot), std::move(shift));
    }
    Configuration config(std::move(x));
    out.configs.push_back(spec.nuisance_motion ? apply_rigid(config, motion) : std::move(config));
    out.truth.motions.push_back(std::move(motion));
    out.groups.push_back(second ? 2 : 1);
    const std::size_t local = second ? i - spec.n1 + 1 : i + 1;
    out.ids.push_back((second ? "g2-" : "g1-") + std::to_string(local));
  }
  return out;
}

double null_feature_sd(const PairingScheme& scheme, std::size_t dim, std::size_t feature, double sigma) {
  if (feature >= scheme.basis_feature_count(dim)) {
    throw Error(ErrorCode::index_out_of_range, "feature index " + std::to_string(feature + 1) + " out of range");
  }
  return feature < scheme.pair_count() * dim ? sigma * std::sqrt(2.0) : sigma;
}

std::vector<double> planted_offsets(const PairingScheme& scheme, std::size_t dim, std::size_t feature, double k,
                                    double sigma) {
  std::vector<double> offsets(scheme.basis_feature_count(dim), 0.0);
  offsets[feature] = k * null_feature_sd(scheme, dim, feature, sigma);
  return offsets;
}

}  // namespace bilat
