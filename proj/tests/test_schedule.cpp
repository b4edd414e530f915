#include <stdexcept>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "osfrl/schedule.hpp"

using namespace osfrl;

TEST_CASE("alpha formula") {
  CHECK(alpha(1, 5) == doctest::Approx(1.0));
  CHECK(alpha(7, 3) == doctest::Approx(0.4));
  CHECK(alpha(2, 1) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(alpha(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(alpha(3, 0), std::invalid_argument);
  double prev = alpha(1, 4);
  for (long k = 2; k <= 50; ++k) {
    CHECK(alpha(k, 4) < prev);
    prev = alpha(k, 4);
  }
}

TEST_CASE("weight profile small cases") {
  const auto w0 = weight_profile(0, 4);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0] == doctest::Approx(1.0));

  const auto w1 = weight_profile(1, 3);
  REQUIRE(w1.size() == 2);
  CHECK(w1[0] == doctest::Approx(0.0));
  CHECK(w1[1] == doctest::Approx(1.0));

  // alpha_1 = 1, alpha_2 = 3/4, alpha_3 = 3/5
  const auto w3 = weight_profile(3, 2);
  REQUIRE(w3.size() == 4);
  CHECK(w3[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w3[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w3[2] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(w3[3] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("rate params validation") {
  RateParams p;
  p.H = 2;
  p.A = 5;
  p.K = 10;
  p.T = 20;
  CHECK_NOTHROW(p.validate());
  p.T = 21;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("confidence radius values") {
  RateParams theory;
  theory.H = 1;
  theory.A = 10;
  theory.K = 100;
  theory.T = 100;
  theory.mode = RadiusMode::theory;
  CHECK(std::isinf(confidence_radius(1, theory)));
  CHECK(confidence_radius(2, theory) ==
        doctest::Approx(8.0 * std::sqrt(9.0 * std::log(1000.0))).epsilon(1e-12));
  CHECK(confidence_radius(2, theory) == doctest::Approx(63.08).epsilon(1e-3));

  RateParams exp;
  exp.H = 1;
  exp.A = 201;
  exp.K = 100;
  exp.T = 100;
  exp.mode = RadiusMode::experiment;
  CHECK(confidence_radius(4, exp) ==
        doctest::Approx(std::sqrt(std::log(20100.0) / 4.0)).epsilon(1e-12));
  CHECK(confidence_radius(4, exp) == doctest::Approx(1.574).epsilon(1e-3));
}

TEST_CASE("incremental weight sums agree with the explicit profile") {
  for (int H : {1, 2, 5, 10}) {
    WeightSums ws;
    for (long t = 1; t <= 200; ++t) {
      ws.advance(H);
      if (t != 1 && t != 37 && t != 200) continue;
      const auto w = weight_profile(t, H);
      double sum = 0.0, sum_sq = 0.0, max_w = 0.0, inv = 0.0;
      for (long i = 1; i <= t; ++i) {
        sum += w[i];
        sum_sq += w[i] * w[i];
        max_w = std::max(max_w, w[i]);
        inv += w[i] / std::sqrt(static_cast<double>(i));
      }
      CHECK(ws.sum == doctest::Approx(sum).epsilon(1e-13));
      CHECK(ws.sum_sq == doctest::Approx(sum_sq).epsilon(1e-13));
      CHECK(ws.max_w == doctest::Approx(max_w).epsilon(1e-13));
      CHECK(ws.sum_inv_sqrt == doctest::Approx(inv).epsilon(1e-13));
      CHECK(ws.w0 == doctest::Approx(w[0]).epsilon(1e-13));
    }
  }
}
