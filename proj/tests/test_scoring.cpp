#include "adaef/scoring.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace adaef;

TEST_CASE("worked scoring example") {
  // mu = 0.936, sigma = 0.0739 (already internal: cosine distance),
  // delta = 0.001, m = 5.
  const FdlParams params{0.936, 0.0739};
  const ScoringConfig cfg;
  const Eigen::VectorXd theta = bin_thresholds(params, cfg);
  REQUIRE(theta.size() == 5);
  CHECK(theta[0] == doctest::Approx(0.70763).epsilon(1e-4));
  CHECK(theta[1] == doctest::Approx(0.72330).epsilon(1e-4));

  // 100 sampled distances: 90 at/below theta_1, 5 in each of bins 2 and 3.
  std::vector<float> dists;
  dists.insert(dists.end(), 90, 0.70f);
  dists.insert(dists.end(), 5, 0.72f);
  dists.insert(dists.end(), 5, 0.73f);
  const Eigen::VectorXi counts = bin_counts(dists, theta);
  CHECK(counts[0] == 90);
  CHECK(counts[1] == 5);
  CHECK(counts[2] == 5);
  CHECK(counts[3] == 0);
  CHECK(counts[4] == 0);

  const double score =
      query_score(counts, decay_weights(cfg), dists.size());
  CHECK(score == doctest::Approx(92.516).epsilon(1e-4));
  CHECK(score_distances(dists, params, cfg) ==
        doctest::Approx(score).epsilon(1e-12));
}

TEST_CASE("zero sigma collapses every threshold to mu") {
  const Eigen::VectorXd theta = bin_thresholds({3.5, 0.0}, ScoringConfig{});
  for (int i = 0; i < theta.size(); ++i) CHECK(theta[i] == doctest::Approx(3.5));
}

TEST_CASE("thresholds are strictly increasing for positive sigma") {
  const Eigen::VectorXd theta = bin_thresholds({0.0, 1.0}, ScoringConfig{});
  for (int i = 1; i < theta.size(); ++i) CHECK(theta[i] > theta[i - 1]);
  // theta_1 = Phi^{-1}(0.001) on the standard normal
  CHECK(theta[0] == doctest::Approx(-3.090232306167813).epsilon(1e-12));
}

TEST_CASE("scoring config validation") {
  ScoringConfig bad;
  bad.delta = 0.25;  // delta * bins >= 1
  CHECK_THROWS_AS(bin_thresholds({0.0, 1.0}, bad), std::invalid_argument);
  bad = ScoringConfig{};
  bad.bins = 0;
  CHECK_THROWS_AS(bin_thresholds({0.0, 1.0}, bad), std::invalid_argument);
}

TEST_CASE("decay weights") {
  ScoringConfig cfg;
  const Eigen::VectorXd expo = decay_weights(cfg);
  REQUIRE(expo.size() == 5);
  CHECK(expo[0] == doctest::Approx(100.0));
  CHECK(expo[1] == doctest::Approx(100.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(expo[2] == doctest::Approx(100.0 * std::exp(-2.0)).epsilon(1e-12));

  cfg.decay = Decay::Linear;
  cfg.bins = 4;
  const Eigen::VectorXd lin = decay_weights(cfg);
  CHECK(lin[0] == doctest::Approx(100.0));
  CHECK(lin[1] == doctest::Approx(75.0));
  CHECK(lin[2] == doctest::Approx(50.0));
  CHECK(lin[3] == doctest::Approx(25.0));

  cfg.decay = Decay::None;
  cfg.bins = 5;
  const Eigen::VectorXd none = decay_weights(cfg);
  for (int i = 0; i < 5; ++i) CHECK(none[i] == doctest::Approx(20.0));
}

TEST_CASE("decay names round trip") {
  for (Decay d : {Decay::Exponential, Decay::Linear, Decay::None}) {
    CHECK(decay_from_name(decay_name(d)) == d);
  }
  CHECK_THROWS_AS(decay_from_name("cubic"), std::invalid_argument);
}

TEST_CASE("bin count boundaries are inclusive on the right") {
  Eigen::VectorXd theta(3);
  theta << 1.0, 2.0, 3.0;
  const Eigen::VectorXi counts =
      bin_counts({0.5f, 1.0f, 1.5f, 2.0f, 3.0f, 3.5f}, theta);
  CHECK(counts[0] == 2);  // 0.5 and the boundary value 1.0
  CHECK(counts[1] == 2);  // 1.5 and 2.0
  CHECK(counts[2] == 1);  // 3.0; 3.5 falls outside every bin
  CHECK(counts.sum() == 5);
}

TEST_CASE("scores are bounded and normalized") {
  std::mt19937_64 rng(13);
  std::normal_distribution<float> gauss(0.5f, 0.3f);
  const ScoringConfig cfg;
  const FdlParams params{0.5, 0.3};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<float> dists(64);
    for (float& d : dists) d = gauss(rng);
    const double s = score_distances(dists, params, cfg);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
  }
  // every distance below theta_1 -> maximal score of 100
  std::vector<float> close(10, -100.0f);
  CHECK(score_distances(close, params, cfg) == doctest::Approx(100.0));
  // every distance above theta_m -> 0
  std::vector<float> far(10, 100.0f);
  CHECK(score_distances(far, params, cfg) == doctest::Approx(0.0));
}

TEST_CASE("score is invariant to distance order and to affine reparam") {
  std::mt19937_64 rng(17);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  const ScoringConfig cfg;
  std::vector<float> dists(50);
  for (float& d : dists) d = gauss(rng);
  const double base = score_distances(dists, {0.0, 1.0}, cfg);

  std::vector<float> shuffled = dists;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(score_distances(shuffled, {0.0, 1.0}, cfg) == doctest::Approx(base));

  // shift and scale distances and parameters together
  std::vector<float> affine(50);
  for (int i = 0; i < 50; ++i) affine[i] = 2.0f * dists[i] + 3.0f;
  CHECK(score_distances(affine, {3.0, 2.0}, cfg) ==
        doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("adding a far distance cannot raise the score") {
  const ScoringConfig cfg;
  const FdlParams params{0.0, 1.0};
  std::vector<float> dists = {-4.0f, -3.5f, -3.3f};
  const double before = score_distances(dists, params, cfg);
  dists.push_back(10.0f);
  CHECK(score_distances(dists, params, cfg) <= before);
}
