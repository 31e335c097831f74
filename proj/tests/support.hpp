#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bilat/config_model.hpp"
#include "bilat/random.hpp"
#include "bilat/registration.hpp"

namespace bilat::testing {

inline Configuration square_x1() { return Configuration::from_rows({{-1, 0}, {0, 1}, {1, 0}, {0, -1}}); }

inline Configuration square_x2() {
  return Configuration::from_rows({{-0.95, 0.36}, {-0.28, 2.11}, {0.99, 0.54}, {-0.31, -1.37}});
}

/// One pair (1,3) and solos 2, 4.
inline PairingScheme square_scheme() { return PairingScheme({{0, 2}}, {1, 3}); }

inline Configuration random_config(std::size_t k, std::size_t m, Rng& rng, double scale = 1.0) {
  Matrix x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = scale * rng.normal();
  }
  return Configuration(std::move(x));
}

inline RigidMotion random_motion(std::size_t m, Rng& rng, double shift = 3.0) {
  Vector c(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = shift * rng.normal();
  return RigidMotion(random_rotation(m, rng), std::move(c));
}

/// Random scheme whose landmarks are shuffled across pairs and solos.
inline PairingScheme random_scheme(std::size_t pairs, std::size_t solos, Rng& rng) {
  std::vector<std::size_t> idx(2 * pairs + solos);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  std::vector<LandmarkPair> p;
  for (std::size_t i = 0; i < pairs; ++i) p.push_back({idx[2 * i], idx[2 * i + 1]});
  std::vector<std::size_t> s(idx.begin() + static_cast<std::ptrdiff_t>(2 * pairs), idx.end());
  return PairingScheme(std::move(p), std::move(s));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace bilat::testing
