#include <doctest.h>

#include <cmath>

#include "bilat/features.hpp"
#include "bilat/synth.hpp"
#include "support.hpp"

using namespace bilat;
using namespace bilat::testing;

TEST_SUITE("features") {
  TEST_CASE("symmetric square has zero features") {
    const FeatureVector d = signed_features(square_x1(), square_scheme());
    CHECK(d.values() == std::vector<double>{0, 0, 0, 0});
    CHECK(landmark_features(square_x1(), square_scheme()).values() == std::vector<double>{0, 0, 0});
  }

  TEST_CASE("asymmetric square: signed and absolute features") {
    const FeatureVector d = signed_features(square_x2(), square_scheme());
    const std::vector<double> expected{0.04, -0.18, -0.28, -0.31};
    REQUIRE(d.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(d[j] - expected[j]) < 1e-12);
    CHECK(d.kind() == FeatureKind::signed_coordinate);
    CHECK(d.registration() == Registration::basis);
    CHECK(d.label(0).describe() == "pair (1,3), coordinate 1");
    CHECK(d.label(2).describe() == "solo 2");

    const FeatureVector a = absolute_features(d);
    const std::vector<double> abs_expected{0.04, 0.18, 0.28, 0.31};
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(a[j] - abs_expected[j]) < 1e-12);
    CHECK(a.kind() == FeatureKind::absolute);
    CHECK(a.index_map() == d.index_map());
    CHECK(absolute_features(a).values() == a.values());
  }

  TEST_CASE("landmark-level features of the asymmetric square") {
    const FeatureVector s = landmark_features(square_x2(), square_scheme());
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(std::sqrt(0.04 * 0.04 + 0.18 * 0.18)).epsilon(1e-12));
    CHECK(s[0] == doctest::Approx(0.1844).epsilon(1e-3));
    CHECK(s[1] == doctest::Approx(0.28));
    CHECK(s[2] == doctest::Approx(0.31));
    CHECK(s.kind() == FeatureKind::landmark);
    CHECK(s.registration() == Registration::axis);
  }

  TEST_CASE("reflection negates the signed features") {
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
      const PairingScheme scheme = random_scheme(1 + rng.index(5), rng.index(4), rng);
      const Configuration x = random_config(scheme.landmark_count(), 3, rng);
      const auto d = signed_features(x, scheme).values();
      const auto r = signed_features(reflect_config(x, scheme), scheme).values();
      for (std::size_t j = 0; j < d.size(); ++j) CHECK(std::abs(d[j] + r[j]) < 1e-12);
    }
  }

  TEST_CASE("pair value is the norm of its coordinatewise features; lengths match the scheme") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
      const std::size_t kp = 1 + rng.index(6), ks = rng.index(4), m = 2 + rng.index(2);
      const PairingScheme scheme = random_scheme(kp, ks, rng);
      const Configuration x = random_config(scheme.landmark_count(), m, rng);
      const FeatureVector d = signed_features(x, scheme);
      const FeatureVector s = landmark_features(x, scheme);
      CHECK(d.size() == m * kp + ks);
      CHECK(s.size() == kp + ks);
      for (std::size_t p = 0; p < kp; ++p) {
        double ss = 0.0;
        for (std::size_t c = 0; c < m; ++c) ss += d[p * m + c] * d[p * m + c];
        CHECK(std::abs(s[p] - std::sqrt(ss)) < 1e-12);
      }
      for (std::size_t k = 0; k < ks; ++k) CHECK(s[kp + k] == std::abs(d[kp * m + k]));
    }
  }

  TEST_CASE("landmark features are invariant to rotations within the midplane") {
    Rng rng(3);
    const PairingScheme scheme = sequential_scheme(5, 2);
    for (int t = 0; t < 50; ++t) {
      const Configuration x = random_config(scheme.landmark_count(), 3, rng);
      Matrix q = Matrix::Identity(3, 3);
      q.bottomRightCorner(2, 2) = random_rotation(2, rng);
      const Configuration y(x.coords() * q);
      const auto a = landmark_features(x, scheme).values();
      const auto b = landmark_features(y, scheme).values();
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-10);
    }
  }

  TEST_CASE("features are zero exactly for symmetric templates") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PairingScheme scheme = smile_scheme();
      const Configuration tmpl = make_symmetric_template(scheme, 3, seed);
      const auto d = signed_features(tmpl, scheme).values();
      for (double v : d) CHECK(v == 0.0);
      CHECK(reflect_config(tmpl, scheme).coords() == tmpl.coords());
    }
  }

  TEST_CASE("scheme mismatch is rejected") {
    try {
      signed_features(square_x2(), PairingScheme({{0, 1}, {2, 3}, {4, 5}}, {}));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::scheme_mismatch);
    }
  }
}
