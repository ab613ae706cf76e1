#include <doctest.h>

#include <cmath>
#include <random>

#include "tightlab/error.hpp"
#include "tightlab/model.hpp"

using namespace tightlab;
using namespace tightlab::model;

namespace {

struct Draw {
  TechnologyParams tech;
  HiringCostParams hc;
  AmortizationParams am;
  MarketState s;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Draw d;
  d.tech = {0.2 + 1.5 * u(rng), 1.5 + 4.0 * u(rng), 0.3 + 0.5 * u(rng)};
  d.hc.c = 0.05 + 0.5 * u(rng);
  d.hc.phi1 = 0.5 + 2.0 * u(rng);
  d.hc.phi2 = 0.1 + 0.9 * u(rng);
  d.hc.psi = 0.3 * u(rng);
  d.hc.gamma = 0.2 * u(rng);
  d.am = {0.05 + 0.5 * u(rng), 0.2 * u(rng)};
  d.s = {0.5 + 2.0 * u(rng), 0.1 + 1.5 * u(rng)};
  return d;
}

double log_ulc(const Draw& d, double wage, double theta) {
  return std::log(unit_labor_cost(d.hc, d.am, {wage, theta}));
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("oracle: separation rate annualization") {
  CHECK(annualize_separation_rate(0.0010999) == doctest::Approx(0.331).epsilon(0.0005 / 0.331));
  CHECK(annualize_separation_rate(0.0) == 0.0);
  CHECK_THROWS_AS(annualize_separation_rate(-0.1), InvalidArgument);
  CHECK_THROWS_AS(annualize_separation_rate(1.5), InvalidArgument);
}

TEST_CASE("oracle: pre-match cost share at the reported calibration") {
  const double share = prematch_cost_share({0.331, 0.150}, 1.852, 0.468, {-0.730, -0.051});
  CHECK(std::abs(share - 0.429) < 0.001);
}

TEST_CASE("pre-match cost share rejects a non-positive denominator") {
  // phi2 * eta_lw / eta_lt below phi1 flips the sign.
  try {
    (void)prematch_cost_share({0.331, 0.150}, 1.852, 0.01, {-0.730, -0.051});
    FAIL("expected CalibrationInfeasible");
  } catch (const CalibrationInfeasible& e) {
    CHECK(e.negative());
  }
  CHECK_THROWS_AS(prematch_cost_share({0.331, 0.150}, 1.852, 0.468, {-0.730, 0.0}),
                  CalibrationInfeasible);
}

TEST_CASE("oracle: aggregate elasticity and shrinkage") {
  CHECK(std::abs(aggregate_wage_elasticity(-0.713, -0.048, 9.285) - (-0.49)) < 0.005);
  CHECK(std::abs(aggregate_wage_elasticity(-0.067, -0.043, 10.36) - (-0.05)) < 0.005);
  CHECK(std::abs(feedback_shrinkage(-0.048, 9.285) - 0.308) < 0.003);
  CHECK(aggregate_wage_elasticity(-0.7, 0.0, 9.0) == -0.7);
}

TEST_CASE("oracle: matching elasticity inversion") {
  CHECK(std::abs(vacancy_matching_elasticity(9.285, -4.039) - 0.54) < 0.01);
  const double nu = feedback_nu(0.46, -4.039);
  CHECK(vacancy_matching_elasticity(nu, -4.039) == doctest::Approx(0.54).epsilon(1e-12));
}

TEST_CASE("feedback cycle diverges when omega reaches one") {
  CHECK_THROWS_AS(aggregate_wage_elasticity(-0.7, 0.2, 5.0), DivergentFeedback);
  CHECK_THROWS_AS(aggregate_wage_elasticity(-0.7, -0.2, 5.0), DivergentFeedback);
}

TEST_CASE("property: partial sums of the feedback cycle converge to 1 / (1 - omega)") {
  for (double omega : {-0.9, -0.4457, 0.0, 0.3, 0.8}) {
    const auto sums = feedback_partial_sums(omega, 2000);
    REQUIRE(sums.size() == 2001);
    CHECK(sums.front() == 1.0);
    CHECK(sums.back() == doctest::Approx(1.0 / (1.0 - omega)).epsilon(1e-10));
  }
}

TEST_CASE("property: elasticities match finite differences of unit labor cost") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = random_draw(rng);
    const double h = 1e-6;
    const double dw = (log_ulc(d, d.s.wage * std::exp(h), d.s.theta) -
                       log_ulc(d, d.s.wage * std::exp(-h), d.s.theta)) / (2 * h);
    const double dt = (log_ulc(d, d.s.wage, d.s.theta * std::exp(h)) -
                       log_ulc(d, d.s.wage, d.s.theta * std::exp(-h))) / (2 * h);
    const double base = scale_substitution_effect(d.tech);
    CHECK(wage_elasticity(d.tech, d.hc, d.am, d.s) == doctest::Approx(base * dw).epsilon(1e-6));
    CHECK(tightness_elasticity(d.tech, d.hc, d.am, d.s) == doctest::Approx(base * dt).epsilon(1e-6));
  }
}

TEST_CASE("property: elasticity ratio does not depend on technology") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    auto d = random_draw(rng);
    const double ratio = elasticity_ratio(d.hc, d.am, d.s);
    for (int k = 0; k < 3; ++k) {
      d.tech = random_draw(rng).tech;
      const auto eta = elasticities(d.tech, d.hc, d.am, d.s);
      CHECK(eta.eta_lt / eta.eta_lw == doctest::Approx(ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: calibration inverts the model") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = random_draw(rng);
    const auto eta = elasticities(d.tech, d.hc, d.am, d.s);
    const double truth = prematch_hiring_cost(d.hc, d.s) / d.s.wage;
    CHECK(prematch_cost_share(d.am, d.hc.phi1, d.hc.phi2, eta) == doctest::Approx(truth).epsilon(1e-10));
  }
}

TEST_CASE("wage-curve tightness elasticity adds gamma times the wage elasticity") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    const auto d = random_draw(rng);
    const auto eta = elasticities(d.tech, d.hc, d.am, d.s);
    CHECK(tightness_elasticity_wage_curve(d.tech, d.hc, d.am, d.s) ==
          doctest::Approx(eta.eta_lt + d.hc.gamma * eta.eta_lw).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(AmortizationParams({0.0, 0.1}).validate(), InvalidArgument);
  CHECK_THROWS_AS(MarketState({-1.0, 1.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(TechnologyParams({1.0, 1.0, 1.5}).validate(), InvalidArgument);
}

}
