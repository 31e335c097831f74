#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bilat/config_model.hpp"

namespace bilat {

enum class RegistrationMode { axis, basis };
/// How the midplane was obtained: a priori, from expert input, or estimated here.
enum class Provenance { known, expert, estimated };

std::string_view to_string(RegistrationMode mode);
std::string_view to_string(Provenance provenance);

struct RegisteredDataset {
  std::vector<Configuration> configs;
  Configuration mean_shape;  // bilaterally symmetric about {x_1 = 0}
  Plane plane;               // always (e_1, 0)
  RegistrationMode mode;
  Provenance provenance;
  /// Raw -> registered motion per subject. Empty for pre-registered data.
  std::vector<RigidMotion> motions;

  /// Midplane of subject n in its raw coordinates.
  Plane raw_plane(std::size_t n) const;
};

/// H = I - 2 n n^T.
Matrix householder(const Vector& normal);

/// X R + 1 c^T.
Configuration apply_rigid(const Configuration& x, const RigidMotion& motion);

/// (n, b) -> (R^T n, b + n^T R c).
Plane transform_plane(const Plane& plane, const RigidMotion& motion);

struct OpaResult {
  RigidMotion motion;
  double residual;  // minimised Frobenius norm
};

/// Rotation + translation (no scaling, no reflection) taking X closest to target.
OpaResult opa_rigid(const Configuration& x, const Configuration& target);

struct GpaOptions {
  double tolerance = 1e-10;  // relative change of the Procrustes sum of squares
  std::size_t max_iterations = 200;
};

struct GpaResult {
  Configuration mean;
  std::vector<Configuration> fitted;  // centred and rotated inputs
  std::vector<Vector> centroids;      // centroid of each raw input
  std::vector<Matrix> rotations;      // fitted_i = (X_i - 1 centroid_i^T) rotations_i
  std::vector<double> objective;      // sum of squares after each iteration
  std::size_t iterations = 0;
};

GpaResult gpa(std::span<const Configuration> configs, const GpaOptions& options = {});

struct MidplaneOptions {
  GpaOptions gpa;
  /// Landmarks (0-based) whose centroid points along +coordinate 2 when no hint is
  /// given. Empty selects the first solo, or the left landmark of the first pair.
  std::vector<std::size_t> up_landmarks;
};

/// Midplane estimation by Procrustes analysis of the reflection-augmented sample.
/// Registered configurations have their midplane at {x_1 = 0}; left landmarks of
/// pairs sit on the negative side of the mean shape unless a hint says otherwise.
RegisteredDataset estimate_midplane(std::span<const Configuration> configs, const PairingScheme& scheme,
                                    RegistrationMode mode,
                                    const std::optional<Configuration>& orientation_hint = std::nullopt,
                                    const MidplaneOptions& options = {});

/// Wraps data that is already registered (the midplane is {x_1 = 0}). The mean
/// shape is the arithmetic mean of the data and its reflections.
RegisteredDataset preregistered(std::vector<Configuration> configs, const PairingScheme& scheme,
                                RegistrationMode mode, Provenance provenance = Provenance::known);

}  // namespace bilat
