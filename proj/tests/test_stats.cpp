#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "polarsim/stats.hpp"

using namespace polarsim;

// Reference p-values frozen from an independent statistics stack.

TEST_CASE("distribution tails match reference values") {
  CHECK(normal_sf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_sf(1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-10));
  CHECK(normal_sf(-1.5) == doctest::Approx(0.9331927987311419).epsilon(1e-10));
  CHECK(chi_square_sf(3.84, 1.0) == doctest::Approx(0.05004352124870519).epsilon(1e-10));
  CHECK(chi_square_sf(7.5, 3.0) == doctest::Approx(0.0575584519726364).epsilon(1e-10));
  CHECK(student_t_two_sided(2.1, 10.0) == doctest::Approx(0.06207724420221853).epsilon(1e-10));
  CHECK(student_t_two_sided(0.5, 32.0) == doctest::Approx(0.6204961749568938).epsilon(1e-10));
}

TEST_CASE("mann-whitney normal approximation matches the reference") {
  const std::vector<double> a{1.2, 3.4, 2.2, 5.0, 4.1, 2.2, 3.3, 1.1, 0.5, 2.8, 3.9, 4.4};
  const std::vector<double> b{2.1, 3.4, 4.5, 5.5, 6.1, 2.2, 3.3, 4.0, 5.2, 6.3};
  const auto res = mann_whitney_u(a, b);
  CHECK(res.method == PMethod::normal_approx);
  CHECK(res.statistic == doctest::Approx(31.0));
  CHECK(res.p_value == doctest::Approx(0.05977822492998497).epsilon(1e-9));
}

TEST_CASE("mann-whitney exact enumeration on small samples") {
  const auto res = mann_whitney_u({1.0, 2.0, 4.0}, {3.0, 5.0, 6.0});
  CHECK(res.method == PMethod::exact);
  CHECK(res.statistic == doctest::Approx(1.0));
  CHECK(res.p_value == doctest::Approx(0.2).epsilon(1e-12));
  // identical samples: every assignment is as extreme
  const auto same = mann_whitney_u({2.0, 2.0, 2.0}, {2.0, 2.0});
  CHECK(same.p_value == 1.0);
}

TEST_CASE("mann-whitney identities hold on random data") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a, b;
    const std::size_t n_a = 3 + uniform_index(rng, 15), n_b = 3 + uniform_index(rng, 15);
    for (std::size_t i = 0; i < n_a; ++i)
      a.push_back(static_cast<double>(uniform_index(rng, 12)));
    for (std::size_t i = 0; i < n_b; ++i)
      b.push_back(static_cast<double>(uniform_index(rng, 12)));
    const auto ab = mann_whitney_u(a, b);
    const auto ba = mann_whitney_u(b, a);
    CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));
    CHECK(ab.statistic + ba.statistic ==
          doctest::Approx(static_cast<double>(n_a * n_b)).epsilon(1e-9));
  }
}

TEST_CASE("kruskal-wallis matches the reference and reduces to MW for two groups") {
  const std::vector<std::vector<double>> groups{
      {1.0, 2.0, 3.0, 4.0, 5.5}, {2.5, 3.5, 4.5, 6.0, 7.0, 8.0}, {0.5, 1.5, 2.0, 2.5}};
  const auto kw = kruskal_wallis(groups, true);
  CHECK(kw.omnibus.statistic == doctest::Approx(7.263022700119472).epsilon(1e-10));
  CHECK(kw.omnibus.p_value == doctest::Approx(0.026476139440608924).epsilon(1e-9));
  REQUIRE(kw.pairwise_p.size() == 3);
  CHECK(kw.pairwise_p[0][1] == kw.pairwise_p[1][0]);
  CHECK(kw.pairwise_p[0][1] <= 1.0);

  // two-group identity H = z^2 (tie-free, no continuity correction)
  Rng rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 12; ++i) a.push_back(uniform01(rng));
    for (int i = 0; i < 15; ++i) b.push_back(uniform01(rng));
    const auto kw2 = kruskal_wallis({a, b});
    const auto mw = mann_whitney_u(a, b, false);
    const double mu = 0.5 * 12 * 15;
    const double var = 12.0 * 15.0 * 28.0 / 12.0;
    const double z = (mw.statistic - mu) / std::sqrt(var);
    CHECK(std::abs(kw2.omnibus.statistic - z * z) < 1e-9);
    CHECK(std::abs(kw2.omnibus.p_value - mw.p_value) < 1e-9);
  }
  CHECK_THROWS_AS(kruskal_wallis({{1.0}}), StatsError);
}

TEST_CASE("pearson matches the reference and flags degenerate inputs") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> y{2.1, 2.9, 4.2, 3.8, 5.1, 6.5, 6.2};
  const auto res = pearson(x, y);
  CHECK(res.r == doctest::Approx(0.9614088808864493).epsilon(1e-12));
  CHECK(res.p_value == doctest::Approx(0.0005503438621061715).epsilon(1e-9));
  CHECK(!res.degenerate);
  CHECK(pearson({1, 1, 1}, {1, 2, 3}).degenerate);
  CHECK(pearson({1, 2, 3}, {2, 4, 6}).p_value == 0.0);
  CHECK_THROWS_AS(pearson({1.0, 2.0}, {1.0}), StatsError);
}

TEST_CASE("power-law MLE recovers known exponents") {
  Rng rng(606);
  for (double alpha : {1.8, 2.5, 4.7}) {
    std::vector<double> sample;
    for (int i = 0; i < 30000; ++i)
      sample.push_back(sample_power_law_continuous(alpha, 1.0, uniform01(rng)));
    const auto fit = fit_power_law(sample, 1.0, FitMethod::mle);
    CHECK(fit.alpha == doctest::Approx(alpha).epsilon(0.05));
    CHECK(fit.fit_method == FitMethod::mle);
  }
}

TEST_CASE("least-squares route recovers the slope of an exact tail") {
  // analytic inverse CDF of a pure power law: P(X >= x) = x^-(alpha-1)
  std::vector<std::pair<double, double>> pts;
  const double alpha = 2.6;
  for (double x = 1.0; x <= 64.0; x *= 2.0) pts.emplace_back(x, std::pow(x, 1.0 - alpha));
  const auto fit = fit_power_law_tail_points(pts);
  CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-9));
  CHECK(fit.goodness == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("discrete MLE handles integer degree data") {
  // inverse-transform sample from a zeta-like tail by rounding a continuous law
  Rng rng(707);
  std::vector<double> sample;
  for (int i = 0; i < 40000; ++i)
    sample.push_back(std::floor(sample_power_law_continuous(2.4, 2.0, uniform01(rng))));
  const auto fit = fit_power_law(sample, 2.0, FitMethod::mle, true);
  CHECK(fit.discrete);
  CHECK(fit.alpha > 2.0);
  CHECK(fit.alpha < 3.0);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, 1.0, FitMethod::mle), StatsError);
}
