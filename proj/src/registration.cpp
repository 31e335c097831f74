#include "bilat/registration.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bilat {

namespace {

Vector centroid(const Matrix& x) { return x.colwise().mean().transpose(); }

Matrix centered(const Matrix& x) { return x.rowwise() - x.colwise().mean(); }

void require_same_shape(const Configuration& a, const Configuration& b) {
  if (a.landmarks() != b.landmarks() || a.dim() != b.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "configurations differ in shape: " + std::to_string(a.landmarks()) + "x" + std::to_string(a.dim()) +
                    " vs " + std::to_string(b.landmarks()) + "x" + std::to_string(b.dim()));
  }
}

void require_nondegenerate(const Matrix& centred_x) {
  if (!(centred_x.norm() > 0.0)) {
    throw Error(ErrorCode::degenerate_configuration, "all landmarks of the configuration coincide");
  }
}

// Proper rotation R with det(R) = `det_sign` minimising ||a R - b||_F for centred a, b.
Matrix optimal_rotation(const Matrix& a, const Matrix& b, double det_sign = 1.0) {
  const Matrix cross = a.transpose() * b;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Vector d = Vector::Ones(cross.rows());
  const double reflect = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  d(d.size() - 1) = reflect * det_sign;
  return u * d.asDiagonal() * v.transpose();
}

// Orthogonal matrix with first column n and determinant +1.
Matrix basis_with_first_column(const Vector& n) {
  const auto m = n.size();
  Matrix q = Matrix::Identity(m, m);
  if (m == 1) return q;
  Vector v = Vector::Unit(m, 0) - n;
  const double len = v.norm();
  if (len < 1e-15) return q;
  v /= len;
  q -= 2.0 * v * v.transpose();  // swaps e_1 and n, det -1
  q.col(1) = -q.col(1);
  return q;
}

double pair_handedness(const Matrix& mean, const PairingScheme& scheme) {
  double lr = 0.0;
  for (const auto& p : scheme.pairs()) {
    lr += mean(static_cast<Eigen::Index>(p.right), 0) - mean(static_cast<Eigen::Index>(p.left), 0);
  }
  return lr;
}

// In-plane rotation diag(s, Q) against an expert template.
Matrix hint_orientation(const Matrix& mean, const Configuration& hint) {
  const auto m = mean.cols();
  const Matrix target = centered(hint.coords());
  Matrix best = Matrix::Identity(m, m);
  double best_residual = std::numeric_limits<double>::infinity();
  for (double s : {1.0, -1.0}) {
    if (m == 1 && s < 0.0) break;
    Matrix g = Matrix::Zero(m, m);
    g(0, 0) = s;
    if (m > 1) {
      g.bottomRightCorner(m - 1, m - 1) =
          optimal_rotation(mean.rightCols(m - 1), target.rightCols(m - 1), s);
    }
    const double residual = (mean * g - target).squaredNorm();
    if (residual < best_residual) {
      best_residual = residual;
      best = g;
    }
  }
  return best;
}

// Principal axes of the mean within the midplane: largest variance -> coordinate 2.
Matrix principal_orientation(const Matrix& mean, const PairingScheme& scheme,
                             const std::vector<std::size_t>& up_landmarks) {
  const auto m = mean.cols();
  Matrix g = Matrix::Identity(m, m);
  if (m < 3) return g;
  const Matrix in_plane = mean.rightCols(m - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(in_plane.transpose() * in_plane);
  Matrix axes = eig.eigenvectors().rowwise().reverse();

  std::vector<std::size_t> up = up_landmarks;
  if (up.empty()) up.push_back(scheme.solo_count() > 0 ? scheme.solos().front() : scheme.pairs().front().left);
  Vector up_centroid = Vector::Zero(m - 1);
  for (std::size_t k : up) {
    if (k >= static_cast<std::size_t>(mean.rows())) {
      throw Error(ErrorCode::index_out_of_range, "up landmark " + std::to_string(k + 1) + " does not exist");
    }
    up_centroid += in_plane.row(static_cast<Eigen::Index>(k)).transpose();
  }
  if (up_centroid.dot(axes.col(0)) < 0.0) axes.col(0) = -axes.col(0);
  for (Eigen::Index c = 1; c + 1 < axes.cols(); ++c) {
    Eigen::Index arg = 0;
    axes.col(c).cwiseAbs().maxCoeff(&arg);
    if (axes(arg, c) < 0.0) axes.col(c) = -axes.col(c);
  }
  if (axes.determinant() < 0.0) axes.col(axes.cols() - 1) = -axes.col(axes.cols() - 1);
  g.bottomRightCorner(m - 1, m - 1) = axes;
  return g;
}

}  // namespace

std::string_view to_string(RegistrationMode mode) { return mode == RegistrationMode::axis ? "axis" : "basis"; }

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::known: return "known";
    case Provenance::expert: return "expert";
    case Provenance::estimated: return "estimated";
  }
  return "?";
}

Plane RegisteredDataset::raw_plane(std::size_t n) const {
  if (n >= motions.size()) return plane;
  return transform_plane(plane, motions[n].inverse());
}

Matrix householder(const Vector& normal) {
  if (normal.size() < 1 || std::abs(normal.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::non_unit_normal, "Householder reflection needs a unit normal");
  }
  const auto m = normal.size();
  return Matrix::Identity(m, m) - 2.0 * normal * normal.transpose();
}

Configuration apply_rigid(const Configuration& x, const RigidMotion& motion) {
  if (x.dim() != motion.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "motion dimension does not match configuration");
  }
  Matrix out = x.coords() * motion.rotation();
  out.rowwise() += motion.translation().transpose();
  return Configuration(std::move(out));
}

Plane transform_plane(const Plane& plane, const RigidMotion& motion) {
  if (plane.dim() != motion.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "motion dimension does not match plane");
  }
  Vector normal = motion.rotation().transpose() * plane.normal();
  normal.normalize();
  const double offset = plane.offset() + plane.normal().dot(motion.rotation() * motion.translation());
  return Plane(std::move(normal), offset);
}

OpaResult opa_rigid(const Configuration& x, const Configuration& target) {
  require_same_shape(x, target);
  const Matrix xc = centered(x.coords());
  require_nondegenerate(xc);
  const Matrix tc = centered(target.coords());
  const Matrix r = optimal_rotation(xc, tc);
  const Vector c = centroid(target.coords()) - r.transpose() * centroid(x.coords());
  RigidMotion motion(r, c);
  const double residual = (apply_rigid(x, motion).coords() - target.coords()).norm();
  return {std::move(motion), residual};
}

GpaResult gpa(std::span<const Configuration> configs, const GpaOptions& options) {
  if (configs.size() < 2) throw Error(ErrorCode::invalid_argument, "GPA needs at least two configurations");
  for (const auto& c : configs) require_same_shape(configs.front(), c);
  const auto m = static_cast<Eigen::Index>(configs.front().dim());

  std::vector<Matrix> fitted;
  std::vector<Vector> centroids;
  std::vector<Matrix> rotations(configs.size(), Matrix::Identity(m, m));
  double scale = 0.0;
  for (const auto& c : configs) {
    centroids.push_back(centroid(c.coords()));
    fitted.push_back(centered(c.coords()));
    require_nondegenerate(fitted.back());
    scale += fitted.back().squaredNorm();
  }

  Matrix mean = fitted.front();
  std::vector<double> objective;
  double previous = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t iter = 0;
  while (iter < options.max_iterations) {
    ++iter;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
      const Matrix r = optimal_rotation(fitted[i], mean);
      fitted[i] = fitted[i] * r;
      rotations[i] = rotations[i] * r;
    }
    mean.setZero();
    for (const auto& f : fitted) mean += f;
    mean /= static_cast<double>(fitted.size());
    double ss = 0.0;
    for (const auto& f : fitted) ss += (f - mean).squaredNorm();
    objective.push_back(ss);
    if (ss <= 1e-28 * scale || (iter > 1 && previous - ss <= options.tolerance * previous)) {
      converged = true;
      break;
    }
    previous = ss;
  }
  if (!converged) {
    throw Error(ErrorCode::non_convergence,
                "GPA did not converge within " + std::to_string(options.max_iterations) + " iterations");
  }

  GpaResult result{Configuration(mean), {}, std::move(centroids), std::move(rotations), std::move(objective), iter};
  result.fitted.reserve(fitted.size());
  for (auto& f : fitted) result.fitted.emplace_back(std::move(f));
  return result;
}

RegisteredDataset estimate_midplane(std::span<const Configuration> configs, const PairingScheme& scheme,
                                    RegistrationMode mode, const std::optional<Configuration>& orientation_hint,
                                    const MidplaneOptions& options) {
  if (configs.empty()) throw Error(ErrorCode::empty_input, "no configurations to register");
  for (const auto& c : configs) require_same_shape(configs.front(), c);
  validate_scheme(scheme, configs.front().landmarks());
  if (orientation_hint) require_same_shape(configs.front(), *orientation_hint);
  const auto m = static_cast<Eigen::Index>(configs.front().dim());
  const std::size_t n = configs.size();

  // (1) augment with mirror images through {x_1 = 0} of the raw frame.
  std::vector<Configuration> augmented(configs.begin(), configs.end());
  augmented.reserve(2 * n);
  for (const auto& c : configs) augmented.push_back(reflect_config(c, scheme));

  // (2) GPA on the augmented sample.
  const GpaResult fit = gpa(augmented, options.gpa);
  const Matrix& mean = fit.mean.coords();

  // (3) The mean is symmetric about some plane through its centroid. Recover the
  // plane normal as the -1 eigenvector of the improper map relating mean and mirror.
  const Matrix mirror = reflect_config(fit.mean, scheme).coords();
  const Matrix improper = householder(Vector::Unit(m, 0)) * optimal_rotation(mirror, mean);
  Vector normal = Vector::Ones(1);
  if (m > 1) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (improper + improper.transpose()));
    normal = eig.eigenvectors().col(0);
  }

  // (4) rotate the plane onto {x_1 = 0}, symmetrise, fix handedness and orientation.
  Matrix total = basis_with_first_column(normal);
  Matrix rotated = mean * total;
  const Configuration rotated_cfg(rotated);
  Matrix symmetric = 0.5 * (rotated + reflect_config(rotated_cfg, scheme).coords());
  if (m >= 2 && pair_handedness(symmetric, scheme) < 0.0) {
    Matrix flip = Matrix::Identity(m, m);
    flip(0, 0) = -1.0;
    flip(1, 1) = -1.0;
    symmetric = symmetric * flip;
    total = total * flip;
  }
  if (mode == RegistrationMode::basis) {
    const Matrix orient = orientation_hint ? hint_orientation(symmetric, *orientation_hint)
                                           : principal_orientation(symmetric, scheme, options.up_landmarks);
    symmetric = symmetric * orient;
    total = total * orient;
  }

  RegisteredDataset out{{}, Configuration(symmetric), Plane::first_axis(static_cast<std::size_t>(m)), mode,
                        Provenance::estimated, {}};
  out.configs.reserve(n);
  out.motions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mode == RegistrationMode::basis) {
      // (5) OPA of each subject onto the oriented symmetric mean.
      out.motions.push_back(opa_rigid(configs[i], out.mean_shape).motion);
    } else {
      const Matrix r = fit.rotations[i] * total;
      out.motions.emplace_back(r, -(r.transpose() * fit.centroids[i]));
    }
    out.configs.push_back(apply_rigid(configs[i], out.motions.back()));
  }
  return out;
}

RegisteredDataset preregistered(std::vector<Configuration> configs, const PairingScheme& scheme,
                                RegistrationMode mode, Provenance provenance) {
  if (configs.empty()) throw Error(ErrorCode::empty_input, "no configurations");
  Matrix sum = Matrix::Zero(configs.front().coords().rows(), configs.front().coords().cols());
  for (const auto& c : configs) {
    require_same_shape(configs.front(), c);
    sum += c.coords() + reflect_config(c, scheme).coords();
  }
  Configuration mean(sum / (2.0 * static_cast<double>(configs.size())));
  const std::size_t dim = configs.front().dim();
  return RegisteredDataset{std::move(configs), std::move(mean), Plane::first_axis(dim), mode, provenance, {}};
}

}  // namespace bilat
