#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "genbound/bounds.hpp"

using namespace genbound;

TEST_CASE("expected-generalization bound") {
  CHECK(mi_gen_bound(0.5, 10, 0.0) == 0.0);
  CHECK(mi_gen_bound(0.5, 2, std::log(2.0)) ==
        doctest::Approx(std::sqrt(0.5 * std::log(2.0) / 2.0)).epsilon(1e-14));
  CHECK(mi_gen_bound(0.5, 2, std::log(2.0)) ==
        doctest::Approx(0.416277305579).epsilon(1e-9));

  // Countable-space variant with mi = H(W) = log k.
  const std::size_t k = 6, n = 50;
  CHECK(mi_gen_bound(1.0, n, std::log(static_cast<double>(k))) ==
        doctest::Approx(std::sqrt(2.0 * std::log(6.0) / 50.0)).epsilon(1e-14));

  CHECK_THROWS_AS(mi_gen_bound(-0.1, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mi_gen_bound(0.5, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mi_gen_bound(0.5, 2, -0.5), std::invalid_argument);
}

TEST_CASE("sample complexity") {
  // sigma = 1, alpha = 1, beta = 2/e makes the log term exactly 1.
  CHECK(sample_complexity(SampleComplexityKind::kIndependent, 1.0, 1.0,
                          2.0 / std::exp(1.0)) == 2);

  // epsilon = 0 degenerates to four times the independent size.
  const double sigma = 0.7, alpha = 0.3, beta = 0.2;
  const double independent_value =
      2.0 * sigma * sigma / (alpha * alpha) * std::log(2.0 / beta);
  CHECK(sample_complexity(SampleComplexityKind::kThm3, sigma, alpha, beta, 0.0) ==
        static_cast<std::uint64_t>(std::ceil(4.0 * independent_value - 1e-9)));

  CHECK(sample_complexity(SampleComplexityKind::kThm3, 0.5, 0.1, 0.1, 0.05) == 700);

  CHECK_THROWS_AS(
      sample_complexity(SampleComplexityKind::kThm3, 1.0, 1.0, 0.5, std::nullopt),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sample_complexity(SampleComplexityKind::kIndependent, 1.0, 0.0, 0.5),
      std::invalid_argument);
}

TEST_CASE("growth-function condition") {
  // g = 2 reproduces the doubled-constant sample size threshold.
  const double sigma = 1.0, alpha = 0.5, beta = 0.1;
  const double threshold = 16.0 * sigma * sigma / (alpha * alpha) * std::log(20.0);
  const auto at = cor1_check(2.0, static_cast<std::size_t>(std::ceil(threshold)),
                             beta * std::log(20.0), beta, sigma, alpha);
  CHECK(at.eps_ok);
  CHECK(at.n_ok);
  const auto below = cor1_check(2.0, static_cast<std::size_t>(threshold * 0.9),
                                beta * std::log(20.0), beta, sigma, alpha);
  CHECK_FALSE(below.n_ok);

  // g = 1 leaves no information budget.
  CHECK_FALSE(cor1_check(1.0, 100, 1e-6, beta, sigma, alpha).eps_ok);
  CHECK(cor1_check(1.0, 100, 0.0, beta, sigma, alpha).eps_ok);

  // g = sqrt(64) = 8 at beta = 0.1: budget is 7 * 0.1 * log 20.
  const double budget = 7.0 * 0.1 * std::log(20.0);
  CHECK(budget == doctest::Approx(2.09701259149).epsilon(1e-9));
  CHECK(cor1_check(8.0, 64, budget - 1e-12, 0.1, sigma, alpha).eps_ok);
  CHECK_FALSE(cor1_check(8.0, 64, budget + 1e-9, 0.1, sigma, alpha).eps_ok);
}

TEST_CASE("absolute-generalization bounds") {
  const auto at_zero = abs_gen_bounds(0.5, 100, 0.0);
  CHECK(at_zero.thm4 ==
        doctest::Approx(std::sqrt(2.0 * 0.25 * std::log(2.0) / 100.0))
            .epsilon(1e-14));

  const auto bounds = abs_gen_bounds(0.5, 100, 1.0);
  CHECK(bounds.thm4 == doctest::Approx(0.0920094337707).epsilon(1e-9));
  CHECK(bounds.russo_zou == doctest::Approx(2.59558441227).epsilon(1e-9));
  CHECK(bounds.thm4 < bounds.russo_zou);

  // The improvement holds whenever epsilon clears log2 / (36^2 - 1).
  for (double epsilon : {0.01, 0.05, 0.5, 2.0, 10.0}) {
    for (std::size_t n : {1uLL, 10uLL, 1000uLL}) {
      const auto b = abs_gen_bounds(0.5, n, epsilon);
      CHECK(b.thm4 < b.russo_zou);
    }
  }
}

TEST_CASE("covering bound") {
  CHECK(covering_bound(0.5, 100, 2, 1.0) ==
        doctest::Approx(0.182819743568).epsilon(1e-9));
  const double direct =
      std::sqrt(2.0 * 0.25 * 2.0 / 100.0 * std::log(2.0 * std::sqrt(200.0)));
  CHECK(covering_bound(0.5, 100, 2, 1.0) == doctest::Approx(direct).epsilon(1e-14));

  // Monotone in the dimension.
  CHECK(covering_bound(0.5, 100, 3, 1.0) > covering_bound(0.5, 100, 2, 1.0));

  CHECK_THROWS_AS(covering_bound(0.5, 1, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(covering_bound(0.5, 100, 2, 0.0), std::invalid_argument);
}

TEST_CASE("two-stage bound") {
  CHECK(two_stage_bound(1, 1, 5) ==
        doctest::Approx(std::sqrt(std::log(2.0) / 10.0)).epsilon(1e-14));
  CHECK(two_stage_bound(1, 4, 4) == doctest::Approx(0.448530644499).epsilon(1e-9));
  CHECK_THROWS_AS(two_stage_bound(0, 1, 1), std::invalid_argument);
}

TEST_CASE("Gibbs bounds") {
  ContinuousBoundParams params;
  params.beta = 2.0;
  params.n = 2;

  const auto gen = gibbs_bounds(params, std::nullopt, GibbsBoundVariant::kGenEq20);
  CHECK(gen.bound_value == doctest::Approx(0.5).epsilon(1e-15));

  const auto mi = gibbs_bounds(params, std::nullopt, GibbsBoundVariant::kMi2Beta);
  CHECK(mi.bound_value == doctest::Approx(4.0).epsilon(1e-15));

  // Eq. 21 excess with an explicit prior.
  params.preferred_rank = 2;
  const FiniteDistribution q({0.75, 0.25});
  const auto cor2 = gibbs_bounds(params, q, GibbsBoundVariant::kRiskCor2);
  CHECK(cor2.bound_value ==
        doctest::Approx(std::log(4.0) / 2.0 + 0.5).epsilon(1e-14));

  // Zipf prior example: i_o = 1, n = 100 -> 0.1.
  ContinuousBoundParams zipf;
  zipf.preferred_rank = 1;
  zipf.n = 100;
  CHECK(gibbs_bounds(zipf, std::nullopt, GibbsBoundVariant::kRiskCor2Zipf)
            .bound_value == doctest::Approx(0.1).epsilon(1e-14));

  // Uniform prior example: sqrt(log k / n).
  ContinuousBoundParams uniform;
  uniform.k = 4;
  uniform.n = 100;
  CHECK(gibbs_bounds(uniform, std::nullopt, GibbsBoundVariant::kRiskCor2Uniform)
            .bound_value == doctest::Approx(0.117741002252).epsilon(1e-9));

  CHECK_THROWS_AS(gibbs_bounds(uniform, std::nullopt, GibbsBoundVariant::kGenEq20),
                  std::invalid_argument);
}

TEST_CASE("Gaussian relative entropy") {
  const std::vector<double> w_o{0.5, -0.25};
  CHECK(gaussian_kl(2, 0.3, 0.3, w_o, w_o) == doctest::Approx(0.0).epsilon(1e-15));

  const std::vector<double> w_q{0.0, 0.0};
  const double d = gaussian_kl(2, 0.4, 0.2, w_o, w_q);
  const double ratio = 4.0;
  const double expected =
      0.5 * 2.0 * (ratio - 1.0 - std::log(ratio)) + (0.25 + 0.0625) / (2.0 * 0.04);
  CHECK(d == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Lipschitz Gibbs excess bound") {
  ContinuousBoundParams params;
  params.beta = 10.0;
  params.n = 100;
  params.d = 2;
  params.rho = 1.5;
  params.b_width = 0.3;
  params.w_o = {0.1, 0.2};
  params.w_q = {0.1, 0.2};
  params.a_grid = {0.3};  // pin a = b so the divergence vanishes

  const auto report = gibbs_bounds(params, std::nullopt, GibbsBoundVariant::kRiskCor3);
  CHECK(report.bound_value ==
        doctest::Approx(10.0 / 200.0 + 0.3 * 1.5 * std::sqrt(2.0)).epsilon(1e-12));

  // The default grid can only improve on any single grid point.
  params.a_grid.clear();
  const auto searched = gibbs_bounds(params, std::nullopt, GibbsBoundVariant::kRiskCor3);
  CHECK(searched.bound_value <= report.bound_value + 1e-12);
}

TEST_CASE("Gaussian-prior Gibbs excess bound") {
  ContinuousBoundParams params;
  params.n = 16;
  params.d = 4;
  params.rho = 2.25;
  params.w_o = {1.0, 0.0, 0.0, 0.0};
  params.w_q = {0.0, 0.0, 0.0, 0.0};
  const auto report =
      gibbs_bounds(params, std::nullopt, GibbsBoundVariant::kRiskCor3Gauss);
  // d^(1/4) rho^(1/2) (dist^2 + 3) / (2 n^(1/4)) with dist^2 = 1.
  const double expected = std::sqrt(2.0) * 1.5 * 4.0 / (2.0 * 2.0);
  CHECK(report.bound_value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noisy ERM bounds") {
  // Schedule form: i_o = 1, n = 1000 gives excess 0.4.
  CHECK(noisy_erm_bound({}, {}, 1000, 1, NoisyErmBoundVariant::kEq25) ==
        doctest::Approx(0.4).epsilon(1e-12));
  const std::vector<double> risks{0.3, 0.1, 0.7};
  CHECK(noisy_erm_bound(risks, {}, 1000, 1, NoisyErmBoundVariant::kEq25) ==
        doctest::Approx(0.1 + 0.4).epsilon(1e-12));

  // Zero-risk degenerate case of the full form.
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> b{0.5, 0.25};
  CHECK(noisy_erm_bound(zero, b, 10, 1, NoisyErmBoundVariant::kEq24) ==
        doctest::Approx(0.5 - 1.0 / 6.0).epsilon(1e-12));

  // General evaluation against a direct computation.
  const std::vector<double> b2{0.2, 0.4, 0.8};
  const double direct = 0.1 + 0.4 +
                        std::sqrt((0.3 / 0.2 + 0.1 / 0.4 + 0.7 / 0.8) / 2000.0) -
                        1.0 / (5.0 + 2.5 + 1.25);
  CHECK(noisy_erm_bound(risks, b2, 1000, 2, NoisyErmBoundVariant::kEq24) ==
        doctest::Approx(direct).epsilon(1e-12));

  const std::vector<double> bad_means{0.2, -0.4, 0.8};
  CHECK_THROWS_AS(
      noisy_erm_bound(risks, bad_means, 1000, 2, NoisyErmBoundVariant::kEq24),
      std::invalid_argument);
}

TEST_CASE("monitor bound") {
  CHECK(monitor_bound(0.5, 25, 4, 0.1) ==
        doctest::Approx(0.222685497583).epsilon(1e-9));
  // m = 1 reduces to the Theorem 4 form.
  CHECK(monitor_bound(0.5, 30, 1, 0.2) ==
        doctest::Approx(abs_gen_bounds(0.5, 30, 0.2).thm4).epsilon(1e-15));
  CHECK(monitor_bound(0.5, 30, 1, 0.0) ==
        doctest::Approx(std::sqrt(2.0 * 0.25 * std::log(2.0) / 30.0))
            .epsilon(1e-14));
}

TEST_CASE("bound report comparison semantics") {
  BoundReport report;
  report.bound_value = 0.5;
  report.with_measured(0.5 + 5e-10);
  CHECK(*report.satisfied);
  report.with_measured(0.5 + 2e-9);
  CHECK_FALSE(*report.satisfied);
  CHECK(*report.slack == doctest::Approx(-2e-9));
}
