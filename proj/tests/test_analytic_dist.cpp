#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "analytic_dist.hpp"
#include "error.hpp"
#include "oracles.hpp"

using namespace psimax;
using std::numbers::pi;

TEST_CASE("Stevens CDF examples") {
  for (std::size_t L = 2; L <= 40; ++L) CHECK(stevens_cdf(L, 2 * pi) == 1.0);
  CHECK(stevens_cdf(3, pi) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(stevens_cdf(4, pi) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(stevens_cdf(5, pi) == doctest::Approx(0.6875).epsilon(1e-14));
  CHECK(stevens_cdf(4, pi / 2) == 0.0);
  CHECK(stevens_cdf(1, 2 * pi) == 1.0);
  CHECK(stevens_cdf(1, 3.0) == 0.0);
  CHECK(stevens_cdf(2, pi) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("Stevens CDF errors") {
  CHECK_THROWS_AS(stevens_cdf(0, 1.0), Error);
  for (double bad : {0.0, -1.0, 7.0}) {
    try {
      stevens_cdf(4, bad);
      FAIL("expected domain error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::domain);
    }
  }
}

TEST_CASE("Stevens CDF at pi equals 1 - L/2^(L-1)") {
  for (std::size_t L = 3; L <= 20; ++L) {
    const double expect = oracle::center_in_hull(L);
    CHECK(std::fabs(stevens_cdf(L, pi) - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("property: Stevens CDF is a monotone probability on a grid") {
  std::vector<double> grid;
  for (int k = 1; k <= 256; ++k) grid.push_back(2 * pi * k / 256.0);
  std::vector<double> prev_L(grid.size(), 0.0);
  for (std::size_t L = 2; L <= 30; ++L) {
    double prev_phi = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double F = stevens_cdf(L, grid[k]);
      REQUIRE(F >= 0.0);
      REQUIRE(F <= 1.0);
      REQUIRE(F >= prev_phi - 1e-12);
      REQUIRE(F >= prev_L[k] - 1e-12);
      prev_phi = F;
      prev_L[k] = F;
    }
  }
}

TEST_CASE("Stevens CDF stays accurate for large L") {
  for (std::size_t L : {60, 61, 100, 200}) {
    for (double phi : {0.2, 0.5, 1.0, pi}) {
      const double F = stevens_cdf(L, phi);
      CHECK(F >= 0.0);
      CHECK(F <= 1.0);
    }
    CHECK(std::fabs(stevens_cdf(L, pi) - oracle::center_in_hull(L)) < 1e-12);
  }
}

TEST_CASE("Stevens CDF stays in [0, 1] at small phi and large L") {
  for (std::size_t L = 40; L <= 160; L += 3) {
    for (double phi : {pi / 64, pi / 32, pi / 16}) {
      const double F = stevens_cdf(L, phi);
      REQUIRE(F >= 0.0);
      REQUIRE(F <= 1.0);
    }
  }
}

TEST_CASE("property: Stevens CDF matches Monte Carlo") {
  std::mt19937_64 rng(21);
  const int n = 100000;
  for (std::size_t L : {3, 4, 6, 9}) {
    std::vector<double> psi(n);
    for (auto& v : psi) v = oracle::max_gap(oracle::random_bearings(rng, L));
    for (double phi : {0.6, 1.2, 2.0, pi, 4.0, 5.5}) {
      double hits = 0;
      for (double v : psi) hits += v <= phi;
      const double p = hits / n;
      const double F = stevens_cdf(L, phi);
      const double se = std::sqrt(std::max(F * (1 - F), 1e-12) / n);
      CHECK_MESSAGE(std::fabs(p - F) < 3 * se + 1e-9, "L=" << L << " phi=" << phi);
    }
  }
}

TEST_CASE("weighted CDF") {
  std::vector<double> point4{0, 0, 0, 0, 1.0};
  CHECK(weighted_cdf(pi, point4).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(weighted_cdf(2 * pi, point4).value == 1.0);
  for (double phi : {0.5, 1.5, 2.5, 4.0}) {
    CHECK(weighted_cdf(phi, point4).value == doctest::Approx(stevens_cdf(4, phi)).epsilon(1e-14));
  }
  std::vector<double> point7(8, 0.0);
  point7[7] = 1.0;
  CHECK(weighted_cdf(2.0, point7).value == doctest::Approx(stevens_cdf(7, 2.0)).epsilon(1e-14));

  std::vector<double> mix{0.3, 0.3, 0.2, 0.1, 0.06, 0.03, 0.01};
  const auto w = weighted_cdf(pi, mix);
  const double expect = (0.06 * stevens_cdf(4, pi) + 0.03 * stevens_cdf(5, pi) + 0.01 * stevens_cdf(6, pi)) / 0.1;
  CHECK(w.value == doctest::Approx(expect).epsilon(1e-13));
  CHECK(w.truncation_bound < 1e-5);
  CHECK(w.last_count == 6);

  std::vector<double> none{0.5, 0.5};
  try {
    weighted_cdf(pi, none);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::undefined_conditional);
  }
  std::vector<double> bad{0.9, 0.9};
  CHECK_THROWS_AS(weighted_cdf(pi, bad), Error);
}

TEST_CASE("weighted CDF reports the unlisted tail in its bound") {
  std::vector<double> partial{0.5, 0.2, 0.1, 0.05, 0.1};  // 0.05 missing
  const auto w = weighted_cdf(pi, partial);
  CHECK(w.truncation_bound > 0.3);
  CHECK(w.value <= 1.0);
}

TEST_CASE("expected BS count closed form") {
  CHECK(expected_bs_analytic(pi) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(expected_bs_analytic(pi / 2) == doctest::Approx(13.197530864197532).epsilon(1e-12));
  CHECK(expected_bs_analytic(1.5 * pi) == doctest::Approx(2.7777777777777777).epsilon(1e-12));
  const double near = expected_bs_analytic(2 * pi - 1e-3);
  CHECK(near > 2.0);
  CHECK(near < 2.01);
  CHECK_THROWS_AS(expected_bs_analytic(0.0), Error);
  CHECK_THROWS_AS(expected_bs_analytic(2 * pi), Error);

  double prev = 0;
  for (double phi = 6.2; phi > 0.05; phi *= 0.8) {
    const double e = expected_bs_analytic(phi);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("expected BS count growth for small phi") {
  for (double phi : {pi / 8, pi / 16, pi / 32}) {
    const double ratio = expected_bs_analytic(phi / 2) / expected_bs_analytic(phi);
    CHECK(ratio > 1.9);
    CHECK(ratio < 2.4);
  }
}

TEST_CASE("expected BS count agrees with the stopping-time oracle") {
  std::mt19937_64 rng(31);
  for (double phi : {pi / 2, pi, 1.5 * pi, 2 * pi - 0.05}) {
    const int runs = 40000;
    double sum = 0, sq = 0;
    for (int r = 0; r < runs; ++r) {
      const double c = static_cast<double>(oracle::stopping_count(rng, phi));
      sum += c;
      sq += c * c;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sq / runs - mean * mean) / runs);
    const double a = expected_bs_analytic(phi);
    CHECK_MESSAGE(std::fabs(a - mean) < 4 * se, "phi=" << phi << " analytic=" << a << " oracle=" << mean);
    CHECK(std::fabs(a - mean) < 0.01 * mean);
  }
}

TEST_CASE("built-in stopping-time estimate and gate") {
  const auto est = expected_bs_stopping_time(pi, 20000, 3);
  CHECK(std::fabs(est.mean - 5.0) < 5 * est.std_error);

  ExpectedBsOptions opt;
  opt.oracle_runs = 20000;
  const auto e = expected_bs_for_target(pi, opt);
  CHECK(e.method == ExpectedBsMethod::analytic);
  CHECK_FALSE(e.warning);
  CHECK(e.value == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(std::isfinite(e.oracle));

  const auto plain = expected_bs_for_target(pi);
  CHECK(std::isnan(plain.oracle));

  opt.gate_tolerance = 0.0;
  opt.gate_sigmas = 0.0;
  const auto strict = expected_bs_for_target(pi, opt);
  CHECK(strict.method == ExpectedBsMethod::oracle);
  CHECK(strict.warning);
  CHECK(strict.value == strict.oracle);

  CHECK_THROWS_AS(expected_bs_for_target(0.0), Error);
  CHECK_THROWS_AS(expected_bs_for_target(7.0), Error);
}
