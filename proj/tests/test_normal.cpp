#include "adaef/normal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using adaef::inverse_normal_cdf;

TEST_CASE("inverse normal cdf reference values") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.025) ==
        doctest::Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.001) ==
        doctest::Approx(-3.090232306167813).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1e-6) ==
        doctest::Approx(-4.753424308822899).epsilon(1e-12));
}

TEST_CASE("inverse normal cdf inverts erfc-based cdf") {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double p = unit(rng);
    CHECK(cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("inverse normal cdf domain") {
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::domain_error);
}
