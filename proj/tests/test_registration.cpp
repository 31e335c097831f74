#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bilat/features.hpp"
#include "bilat/registration.hpp"
#include "bilat/synth.hpp"
#include "support.hpp"

using namespace bilat;
using namespace bilat::testing;

namespace {

double pairwise_distance_change(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = i + 1; k < a.rows(); ++k) {
      worst = std::max(worst, std::abs((a.row(i) - a.row(k)).norm() - (b.row(i) - b.row(k)).norm()));
    }
  }
  return worst;
}

std::vector<Configuration> noisy_copies(const Configuration& tmpl, std::size_t n, double sigma, Rng& rng) {
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix x = tmpl.coords();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) += sigma * rng.normal();
    }
    out.push_back(apply_rigid(Configuration(x), random_motion(tmpl.dim(), rng)));
  }
  return out;
}

}  // namespace

TEST_SUITE("registration") {
  TEST_CASE("householder: axis, diagonal example, involution, spectrum") {
    const Matrix h3 = householder(Vector::Unit(3, 0));
    CHECK(max_abs_diff(h3, Vector(Eigen::Vector3d(-1, 1, 1)).asDiagonal().toDenseMatrix()) == 0.0);

    Vector n(2);
    n << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    Matrix expected(2, 2);
    expected << 0, -1, -1, 0;
    CHECK(max_abs_diff(householder(n), expected) < 1e-15);

    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      Vector u(4);
      for (Eigen::Index i = 0; i < 4; ++i) u(i) = rng.normal();
      u.normalize();
      const Matrix h = householder(u);
      CHECK(max_abs_diff(h * h, Matrix::Identity(4, 4)) < 1e-12);
      CHECK(h.determinant() == doctest::Approx(-1.0).epsilon(1e-12));
      CHECK((h * u + u).norm() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
      CHECK(eig.eigenvalues()(0) == doctest::Approx(-1.0));
      for (Eigen::Index i = 1; i < 4; ++i) CHECK(eig.eigenvalues()(i) == doctest::Approx(1.0));
    }
    Vector bad(2);
    bad << 1, 1;
    CHECK_THROWS_AS(householder(bad), Error);
  }

  TEST_CASE("apply_rigid: identity, translation, rigidity") {
    const Configuration x2 = square_x2();
    CHECK(apply_rigid(x2, RigidMotion::identity(2)).coords() == x2.coords());
    Vector c(2);
    c << 5, -3;
    const Matrix shifted = apply_rigid(x2, RigidMotion(Matrix::Identity(2, 2), c)).coords();
    for (Eigen::Index k = 0; k < 4; ++k) {
      CHECK(shifted(k, 0) == doctest::Approx(x2.coords()(k, 0) + 5));
      CHECK(shifted(k, 1) == doctest::Approx(x2.coords()(k, 1) - 3));
    }
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
      const Configuration x = random_config(7, 3, rng);
      CHECK(pairwise_distance_change(x.coords(), apply_rigid(x, random_motion(3, rng)).coords()) < 1e-10);
    }
    CHECK_THROWS_AS(apply_rigid(x2, RigidMotion::identity(3)), Error);
  }

  TEST_CASE("transform_plane: identity, worked offset, point preservation") {
    const Plane p(Vector::Unit(3, 0), 0.0);
    const Plane same = transform_plane(p, RigidMotion::identity(3));
    CHECK(same.offset() == 0.0);
    CHECK((same.normal() - p.normal()).norm() == 0.0);
    Vector c(3);
    c << 2, 0, 0;
    CHECK(transform_plane(p, RigidMotion(Matrix::Identity(3, 3), c)).offset() == doctest::Approx(2.0));

    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
      Vector n(3);
      for (Eigen::Index i = 0; i < 3; ++i) n(i) = rng.normal();
      n.normalize();
      const Plane plane(n, rng.normal());
      const RigidMotion m = random_motion(3, rng);
      // a point on the plane: b n plus something orthogonal to n
      Vector w(3);
      for (Eigen::Index i = 0; i < 3; ++i) w(i) = rng.normal();
      const Vector x = plane.offset() * n + (w - n.dot(w) * n);
      const Vector moved = m.rotation().transpose() * x + m.translation();
      const Plane q = transform_plane(plane, m);
      CHECK(std::abs(q.normal().dot(moved) - q.offset()) < 1e-10);
    }
  }

  TEST_CASE("opa_rigid: exact recovery, identity, degenerate input") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
      const Configuration x = random_config(6, 3, rng);
      const RigidMotion m = random_motion(3, rng);
      const OpaResult r = opa_rigid(x, apply_rigid(x, m));
      CHECK(r.residual < 1e-10);
      CHECK(max_abs_diff(r.motion.rotation(), m.rotation()) < 1e-10);
      CHECK((r.motion.translation() - m.translation()).norm() < 1e-10);
    }
    const Configuration x2 = square_x2();
    const OpaResult self = opa_rigid(x2, x2);
    CHECK(self.residual < 1e-12);
    CHECK(max_abs_diff(self.motion.rotation(), Matrix::Identity(2, 2)) < 1e-12);
    const Configuration flat = Configuration::from_rows({{1, 2}, {1, 2}, {1, 2}});
    CHECK_THROWS_AS(opa_rigid(flat, Configuration(x2.coords().topRows(3).eval())), Error);
  }

  TEST_CASE("opa_rigid beats a random-search oracle") {
    Rng rng(99);
    for (int t = 0; t < 20; ++t) {
      const Configuration x = random_config(6, 3, rng);
      const Configuration target = random_config(6, 3, rng);
      const double best = opa_rigid(x, target).residual;
      for (int s = 0; s < 1000; ++s) {
        const Matrix r = random_rotation(3, rng);
        // best translation for this rotation matches centroids
        const Vector c = target.coords().colwise().mean().transpose() -
                         r.transpose() * x.coords().colwise().mean().transpose();
        const double residual = (apply_rigid(x, RigidMotion(r, c)).coords() - target.coords()).norm();
        CHECK(best <= residual + 1e-12);
      }
    }
  }

  TEST_CASE("gpa: identical inputs, rigid orbit, monotone objective") {
    const Configuration x2 = square_x2();
    const std::vector<Configuration> same{x2, x2};
    const GpaResult g = gpa(same);
    CHECK(g.objective.back() < 1e-20);

    Rng rng(12);
    const Configuration x = random_config(8, 3, rng);
    const std::vector<Configuration> orbit{x, apply_rigid(x, random_motion(3, rng))};
    const GpaResult o = gpa(orbit);
    CHECK(max_abs_diff(o.fitted[0].coords(), o.fitted[1].coords()) < 1e-8);

    std::vector<Configuration> noisy;
    const Configuration base = random_config(10, 3, rng);
    for (int i = 0; i < 12; ++i) {
      Matrix y = base.coords() + 0.2 * random_config(10, 3, rng).coords();
      noisy.push_back(apply_rigid(Configuration(y), random_motion(3, rng)));
    }
    const GpaResult n = gpa(noisy);
    for (std::size_t i = 1; i < n.objective.size(); ++i) CHECK(n.objective[i] <= n.objective[i - 1] * (1 + 1e-12));
    CHECK_THROWS_AS(gpa(std::vector<Configuration>{x}), Error);
  }

  TEST_CASE("gpa reports non-convergence") {
    Rng rng(2);
    std::vector<Configuration> noisy;
    for (int i = 0; i < 6; ++i) noisy.push_back(random_config(6, 3, rng));
    GpaOptions opts;
    opts.max_iterations = 1;
    opts.tolerance = 0.0;
    try {
      gpa(noisy, opts);
      FAIL("expected non-convergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_convergence);
    }
  }

  TEST_CASE("estimate_midplane: single symmetric configuration under a random motion") {
    Rng rng(31);
    for (std::size_t dim : {2u, 3u}) {
      for (int t = 0; t < 20; ++t) {
        const PairingScheme scheme = sequential_scheme(4, 2);
        const Configuration tmpl = make_symmetric_template(scheme, dim, 100 + t);
        const std::vector<Configuration> one{apply_rigid(tmpl, random_motion(dim, rng))};
        for (RegistrationMode mode : {RegistrationMode::axis, RegistrationMode::basis}) {
          const RegisteredDataset reg = estimate_midplane(one, scheme, mode);
          CHECK(asymmetry_norm(reg.configs[0], scheme) < 1e-6);
          CHECK(asymmetry_norm(reg.mean_shape, scheme) < 1e-12);
          CHECK(reg.plane.offset() == 0.0);
          CHECK(reg.plane.normal()(0) == 1.0);
          // left landmarks on the negative side
          CHECK(reg.mean_shape.coords()(0, 0) < 0.0);
        }
      }
    }
  }

  TEST_CASE("estimate_midplane: already registered symmetric input keeps its plane") {
    const PairingScheme scheme = sequential_scheme(5, 2);
    const Configuration tmpl = make_symmetric_template(scheme, 3, 7);
    const std::vector<Configuration> one{tmpl};
    const RegisteredDataset reg = estimate_midplane(one, scheme, RegistrationMode::axis);
    const Plane raw = reg.raw_plane(0);
    CHECK(std::abs(std::abs(raw.normal()(0)) - 1.0) < 1e-10);
    CHECK(std::abs(raw.offset()) < 1e-10);
  }

  TEST_CASE("estimate_midplane: raw plane of a moved template is the moved midplane") {
    Rng rng(17);
    const PairingScheme scheme = sequential_scheme(5, 2);
    const Configuration tmpl = make_symmetric_template(scheme, 3, 8);
    const RigidMotion m = random_motion(3, rng);
    const std::vector<Configuration> one{apply_rigid(tmpl, m)};
    const RegisteredDataset reg = estimate_midplane(one, scheme, RegistrationMode::basis);
    const Plane truth = transform_plane(Plane::first_axis(3), m);
    const Plane est = reg.raw_plane(0);
    const double sign = est.normal().dot(truth.normal()) < 0 ? -1.0 : 1.0;
    CHECK((sign * est.normal() - truth.normal()).norm() < 1e-8);
    CHECK(std::abs(sign * est.offset() - truth.offset()) < 1e-8);
  }

  TEST_CASE("estimate_midplane: residual asymmetry shrinks linearly with noise") {
    Rng rng(41);
    const PairingScheme scheme = sequential_scheme(6, 2);
    std::vector<double> residual;
    for (double sigma : {0.1, 0.01, 0.001}) {
      double total = 0.0;
      for (int t = 0; t < 10; ++t) {
        const Configuration tmpl = make_symmetric_template(scheme, 3, 500 + t);
        const auto data = noisy_copies(tmpl, 8, sigma, rng);
        const RegisteredDataset reg = estimate_midplane(data, scheme, RegistrationMode::basis);
        total += asymmetry_norm(mean_configuration(reg.configs), scheme);
      }
      residual.push_back(total / 10);
    }
    const double slope1 = std::log10(residual[0] / residual[1]);
    const double slope2 = std::log10(residual[1] / residual[2]);
    CHECK(slope1 == doctest::Approx(1.0).epsilon(0.2));
    CHECK(slope2 == doctest::Approx(1.0).epsilon(0.2));
  }

  TEST_CASE("basis features are invariant to raw rigid motions given a fixed hint") {
    Rng rng(55);
    const PairingScheme scheme = sequential_scheme(5, 2);
    const Configuration tmpl = make_symmetric_template(scheme, 3, 9);
    const auto data = noisy_copies(tmpl, 6, 0.05, rng);
    std::vector<Configuration> moved;
    for (const auto& x : data) moved.push_back(apply_rigid(x, random_motion(3, rng)));
    const RegisteredDataset a = estimate_midplane(data, scheme, RegistrationMode::basis, tmpl);
    const RegisteredDataset b = estimate_midplane(moved, scheme, RegistrationMode::basis, tmpl);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto fa = signed_features(a.configs[i], scheme).values();
      const auto fb = signed_features(b.configs[i], scheme).values();
      for (std::size_t j = 0; j < fa.size(); ++j) CHECK(std::abs(fa[j] - fb[j]) < 1e-8);
    }
  }

  TEST_CASE("basis mode without a hint puts the up landmark on +coordinate 2") {
    Rng rng(66);
    const PairingScheme scheme = sequential_scheme(5, 2);
    const Configuration tmpl = make_symmetric_template(scheme, 3, 10);
    const auto data = noisy_copies(tmpl, 5, 0.01, rng);
    MidplaneOptions opts;
    opts.up_landmarks = {10};
    const RegisteredDataset reg = estimate_midplane(data, scheme, RegistrationMode::basis, std::nullopt, opts);
    CHECK(reg.mean_shape.coords()(10, 1) > 0.0);
    const Matrix in_plane = reg.mean_shape.coords().rightCols(2);
    const Matrix cov = in_plane.transpose() * in_plane;
    CHECK(cov(0, 0) >= cov(1, 1));
    CHECK(std::abs(cov(0, 1)) < 1e-8 * cov.norm());
  }

  TEST_CASE("preregistered wraps known data") {
    const std::vector<Configuration> data{square_x1(), square_x2()};
    const RegisteredDataset reg = preregistered(data, square_scheme(), RegistrationMode::basis);
    CHECK(reg.provenance == Provenance::known);
    CHECK(reg.motions.empty());
    CHECK(asymmetry_norm(reg.mean_shape, square_scheme()) < 1e-15);
  }
}
