#include <doctest.h>

#include <cmath>

#include "bilat/features.hpp"
#include "bilat/scores.hpp"
#include "bilat/synth.hpp"
#include "support.hpp"

using namespace bilat;
using namespace bilat::testing;

namespace {

FeatureVector a_x2() { return absolute_features(signed_features(square_x2(), square_scheme())); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_SUITE("scores") {
  TEST_CASE("composite scores of the asymmetric square") {
    const FeatureVector a = a_x2();
    const WeightVector eq = equal_weights(4);
    CHECK(additive_score(a, Psi::linear, eq) == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(additive_score(a, Psi::quadratic, eq) == doctest::Approx(0.2085).epsilon(1e-12));
    CHECK(bock_score(a, square_scheme()) == doctest::Approx(0.383).epsilon(1e-12));
    const FeatureVector s = landmark_features(square_x2(), square_scheme());
    const double star1 = star_score(s, Psi::linear, equal_weights(3));
    CHECK(star1 == doctest::Approx(std::sqrt(0.034) + 0.59).epsilon(1e-12));
    CHECK(std::abs(star1 - 0.7744) < 5e-5);
    CHECK(std::abs(scaled_star_l1(star1) - 0.3872) < 5e-5);
    CHECK(star_score(s, Psi::quadratic, equal_weights(3)) == doctest::Approx(0.2085).epsilon(1e-12));
  }

  TEST_CASE("named specs agree with the direct formulas") {
    const FeatureVector a = a_x2();
    const FeatureVector s = landmark_features(square_x2(), square_scheme());
    const ScoreSpec l1 = make_score_spec(ScoreName::l1, square_scheme(), 2);
    const ScoreSpec bock = make_score_spec(ScoreName::bock, square_scheme(), 2);
    CHECK(l1.name == "l1");
    CHECK(additive_score(a, l1) == doctest::Approx(0.81));
    CHECK(additive_score(a, bock) == doctest::Approx(bock_score(a, square_scheme())).epsilon(1e-14));
    CHECK(bock.weights.values() == std::vector<double>{1, 1, 2, 2});
    const ScoreSpec st = make_score_spec(ScoreName::star_l2, square_scheme(), 2);
    CHECK(st.family == ScoreFamily::landmark_star);
    CHECK(star_score(s, st.psi, st.weights) == doctest::Approx(0.2085));
    const ScoreSpec w = make_score_spec(ScoreName::l1, square_scheme(), 2, {1, 2, 3, 4}, WeightSource::user);
    CHECK(w.name == "weighted-l1");
    CHECK(additive_score(a, w) == doctest::Approx(0.04 + 0.36 + 0.84 + 1.24));
    const ScoreSpec wl = make_score_spec(ScoreName::l1, square_scheme(), 2, {2, 1, 1}, WeightSource::user);
    CHECK(wl.weights.values() == std::vector<double>{2, 2, 1, 1});
  }

  TEST_CASE("zero features score zero; scores are monotone") {
    const FeatureVector zero = absolute_features(signed_features(square_x1(), square_scheme()));
    for (ScoreName n : {ScoreName::l1, ScoreName::l2, ScoreName::bock}) {
      CHECK(additive_score(zero, make_score_spec(n, square_scheme(), 2)) == 0.0);
    }
    const FeatureVector a = a_x2();
    const ScoreSpec l2 = make_score_spec(ScoreName::l2, square_scheme(), 2);
    for (std::size_t j = 0; j < 4; ++j) {
      std::vector<double> v = a.values();
      v[j] += 0.01;
      const FeatureVector b(v, FeatureKind::absolute, Registration::basis, a.index_map());
      CHECK(additive_score(b, l2) > additive_score(a, l2));
    }
  }

  TEST_CASE("landmark-level quadratic score equals the coordinatewise quadratic score") {
    Rng rng(77);
    for (int t = 0; t < 300; ++t) {
      const std::size_t kp = 1 + rng.index(15), ks = rng.index(6), m = 2 + rng.index(2);
      const PairingScheme scheme = random_scheme(kp, ks, rng);
      const Configuration x = random_config(scheme.landmark_count(), m, rng);
      const double l2 = additive_score(absolute_features(signed_features(x, scheme)), Psi::quadratic,
                                       equal_weights(scheme.basis_feature_count(m)));
      const double star = star_score(landmark_features(x, scheme), Psi::quadratic,
                                     equal_weights(scheme.axis_feature_count()));
      CHECK(std::abs(l2 - star) <= 1e-12 * std::max(1.0, l2));
    }
  }

  TEST_CASE("scores do not depend on the order of pairs in the scheme") {
    Rng rng(5);
    const Configuration x = random_config(8, 3, rng);
    const PairingScheme s1({{0, 1}, {2, 3}, {4, 5}}, {6, 7});
    const PairingScheme s2({{4, 5}, {0, 1}, {2, 3}}, {7, 6});
    for (ScoreName n : {ScoreName::l1, ScoreName::l2, ScoreName::bock}) {
      const double a = additive_score(absolute_features(signed_features(x, s1)), make_score_spec(n, s1, 3));
      const double b = additive_score(absolute_features(signed_features(x, s2)), make_score_spec(n, s2, 3));
      CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
  }

  TEST_CASE("equal L1 scores: the vector with the larger maximum has the larger L2 score") {
    const auto map = basis_index_map(square_scheme(), 2);
    const FeatureVector flat({0.25, 0.25, 0.25, 0.25}, FeatureKind::absolute, Registration::basis, map);
    const FeatureVector peaked({0.7, 0.1, 0.1, 0.1}, FeatureKind::absolute, Registration::basis, map);
    const WeightVector eq = equal_weights(4);
    CHECK(additive_score(flat, Psi::linear, eq) == doctest::Approx(additive_score(peaked, Psi::linear, eq)));
    CHECK(additive_score(peaked, Psi::quadratic, eq) > additive_score(flat, Psi::quadratic, eq));
  }

  TEST_CASE("weight validation") {
    CHECK(code_of([] { WeightVector w({1.0, -0.5}, WeightSource::user); }) == ErrorCode::negative_weight);
    CHECK(code_of([] { WeightVector w({0.0, 0.0}, WeightSource::user); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { additive_score(a_x2(), Psi::linear, equal_weights(3)); }) == ErrorCode::length_mismatch);
    CHECK(code_of([] { make_score_spec(ScoreName::l1, square_scheme(), 2, {1, 2}, WeightSource::user); }) ==
          ErrorCode::length_mismatch);
    CHECK(code_of([] { parse_score_name("l3"); }) == ErrorCode::unknown_spec);
    const FeatureVector d = signed_features(square_x2(), square_scheme());
    CHECK(code_of([&] { additive_score(d, Psi::linear, equal_weights(4)); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("adaptive weights: reciprocal pair distance, unit solos") {
    // pairs at half-widths 1 and 0.25 -> distances 2 and 0.5
    const Configuration m = Configuration::from_rows({{-1, 0}, {1, 0}, {-0.25, 1}, {0.25, 1}, {0, 2}});
    const PairingScheme scheme({{0, 1}, {2, 3}}, {4});
    const RegisteredDataset reg = preregistered({m}, scheme, RegistrationMode::basis);
    const WeightVector per_landmark = adaptive_weights(reg, scheme, WeightLayout::landmark);
    CHECK(per_landmark.values()[0] == doctest::Approx(0.5));
    CHECK(per_landmark.values()[1] == doctest::Approx(2.0));
    CHECK(per_landmark.values()[2] == 1.0);
    const WeightVector coordwise = adaptive_weights(reg, scheme);
    CHECK(coordwise.values() == std::vector<double>{0.5, 0.5, 2.0, 2.0, 1.0});
    CHECK(coordwise.source() == WeightSource::adaptive);

    const Configuration collapsed = Configuration::from_rows({{0, 0}, {0, 0}, {0, 1}});
    const PairingScheme s2({{0, 1}}, {2});
    CHECK(code_of([&] { adaptive_weights(preregistered({collapsed}, s2, RegistrationMode::basis), s2); }) ==
          ErrorCode::zero_pair_distance);
  }

  TEST_CASE("adaptive weights decrease with distance from the midplane") {
    // monotone template: pair p sits at half-width p + 1
    const std::size_t kp = 6;
    Matrix x = Matrix::Zero(2 * kp + 1, 3);
    for (std::size_t p = 0; p < kp; ++p) {
      const auto l = static_cast<Eigen::Index>(2 * p);
      x(l, 0) = -(static_cast<double>(p) + 1.0);
      x(l + 1, 0) = static_cast<double>(p) + 1.0;
      x(l, 1) = x(l + 1, 1) = 0.3 * static_cast<double>(p);
    }
    x(2 * kp, 1) = 2.0;
    const PairingScheme scheme = sequential_scheme(kp, 1);
    Rng rng(9);
    std::vector<Configuration> noisy;
    for (int i = 0; i < 10; ++i) noisy.push_back(Configuration(x + 0.01 * random_config(2 * kp + 1, 3, rng).coords()));
    const WeightVector w = adaptive_weights(preregistered(noisy, scheme, RegistrationMode::basis), scheme,
                                            WeightLayout::landmark);
    for (std::size_t p = 1; p < kp; ++p) CHECK(w[p] < w[p - 1]);
  }

  TEST_CASE("scoring a cohort splits by group and checks registration") {
    Cohort c{square_scheme(), {square_x1()}, {square_x2()}, Registration::basis};
    const GroupScores g = score_cohort(c, make_score_spec(ScoreName::l1, square_scheme(), 2));
    CHECK(g.group1 == std::vector<double>{0.0});
    CHECK(g.group2[0] == doctest::Approx(0.81));
    c.registration = Registration::axis;
    CHECK(code_of([&] { score_cohort(c, make_score_spec(ScoreName::l1, square_scheme(), 2)); }) ==
          ErrorCode::not_registered);
    CHECK_NOTHROW(score_cohort(c, make_score_spec(ScoreName::star_l1, square_scheme(), 2)));
    c.registration = Registration::raw;
    CHECK(code_of([&] { score_cohort(c, make_score_spec(ScoreName::star_l1, square_scheme(), 2)); }) ==
          ErrorCode::not_registered);
  }
}
