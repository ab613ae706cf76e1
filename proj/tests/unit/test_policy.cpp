#include <doctest.h>

#include <cmath>
#include <random>

#include "tightlab/error.hpp"
#include "tightlab/policy.hpp"

using namespace tightlab;
using namespace tightlab::policy;

namespace {

const std::map<Year, double> kTightness{{2012, .24457256}, {2013, .22334746}, {2014, .24606094},
                                        {2015, .27413556}, {2016, .29112986}, {2017, .35252666},
                                        {2018, .42646006}, {2019, .47312701}};

WorkerGroup full_time() {
  return {"full_time",
          {{2012, 19360292}, {2013, 19505922}, {2014, 19717863}, {2015, 19899733},
           {2016, 20185860}, {2017, 20435862}, {2018, 20839214}, {2019, 20928900}},
          {-0.048, 0.002}};
}

WorkerGroup part_time() {
  return {"part_time",
          {{2012, 13580809}, {2013, 13937017}, {2014, 14291071}, {2015, 14517637},
           {2016, 14898007}, {2017, 15232993}, {2018, 15579667}, {2019, 15722178}},
          {-0.043, 0.002}};
}

CounterfactualInputs reported_inputs() {
  CounterfactualInputs in;
  in.groups = {full_time(), part_time()};
  in.tightness = kTightness;
  in.base_year = 2012;
  return in;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("oracle: calibration at the reported inputs") {
  CalibrationInputs in{0.331, 0.150, -0.730, -0.051, 1.852, 0.468, 0.429, std::nullopt};
  const auto res = calibrate(in);
  CHECK(std::abs(res.phi_over_w - 0.429) < 0.001);
  CHECK(std::abs(*res.reported_gap) < 0.001);
  CHECK(res.elasticity_ratio == doctest::Approx(0.051 / 0.730));
  CHECK_FALSE(res.aggregate_eta_lw.has_value());
  in.nu = 9.285;
  in.eta_lw = -0.713;
  in.eta_lt = -0.048;
  const auto agg = calibrate(in);
  CHECK(std::abs(*agg.aggregate_eta_lw - (-0.49)) < 0.005);
  CHECK(std::abs(*agg.shrinkage - 0.308) < 0.003);
}

TEST_CASE("counter-based normals are standard normal and reproducible") {
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = counter_normal(9, static_cast<std::uint64_t>(i), 0);
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.01);
  CHECK(counter_normal(9, 17, 1) == counter_normal(9, 17, 1));
  CHECK(counter_normal(9, 17, 1) != counter_normal(9, 17, 0));
}

TEST_CASE("oracle: minimum-wage employment effects") {
  MinWageInputs firm{{-0.71, 0.021}, {0.0069, 0.00004}, 19717863};
  MinWageInputs aggregate{{-0.49, 0.022}, {0.0069, 0.00004}, 19717863};
  CHECK(std::abs(minwage_effect(firm).employment_change / -96432.0 - 1.0) < 0.02);
  CHECK(std::abs(minwage_effect(aggregate).employment_change / -66757.0 - 1.0) < 0.02);
}

TEST_CASE("property: simulated SE is stable across seeds and thread counts") {
  MinWageInputs in{{-0.49, 0.022}, {0.0069, 0.00004}, 19717863};
  const double analytic = minwage_analytic_se(in);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    in.seed = seed;
    const auto res = minwage_effect(in);
    CHECK(std::abs(res.se / analytic - 1.0) < 0.02);
  }
  in.seed = 3;
  in.threads = 1;
  const auto one = minwage_effect(in);
  in.threads = 7;
  const auto seven = minwage_effect(in);
  CHECK(one.se == seven.se);
  CHECK(one.draw_mean == seven.draw_mean);
  in.draws = 0;
  CHECK_THROWS_AS(minwage_effect(in), InvalidArgument);
}

TEST_CASE("oracle: DiDiD interaction recovers the planted wage effect") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 4000;
  est::Dataset d(n);
  Eigen::VectorXd bite(n), cohort(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    bite(r) = u(rng) < 0.3 ? 1.0 : 0.0;
    cohort(r) = u(rng) < 0.5 ? 1.0 : 0.0;
    y(r) = 0.02 + 0.01 * bite(r) - 0.005 * cohort(r) + 0.396 * bite(r) * cohort(r) + 0.05 * n01(rng);
  }
  d.add_column("bite", bite);
  d.add_column("cohort", cohort);
  d.add_column("d2ln_w", y);
  const auto res = didid_wage_effect(d);
  CHECK(std::abs(res.beta.value - 0.396) < 4 * res.beta.se);
  CHECK(res.beta.se > 0.0);
}

TEST_CASE("oracle: frozen-tightness counterfactual") {
  const auto res = counterfactual_employment(reported_inputs());
  REQUIRE(res.groups.size() == 2);
  const auto& ft = res.groups[0].points.back();
  CHECK(ft.year == 2019);
  CHECK(std::abs(ft.counterfactual / 21618454.0 - 1.0) < 0.005);
  CHECK(std::abs(res.gap - 1.1e6) < 0.1e6);
  CHECK(res.total.front().counterfactual == res.total.front().factual);
  CHECK_FALSE(res.gap_se.has_value());
}

TEST_CASE("counterfactual modes differ only in the tightness transform") {
  auto in = reported_inputs();
  in.groups.resize(1);
  in.mode = CounterfactualMode::CumulativeLevel;
  const auto level = counterfactual_employment(in).groups[0].points.back().counterfactual;
  CHECK(level == doctest::Approx(20928900 * (1 + 0.048 * (.47312701 - .24457256) / .24457256)));
  in.mode = CounterfactualMode::ChainedLog;
  double factor = 1.0;
  for (auto it = std::next(kTightness.begin()); it != kTightness.end(); ++it)
    factor *= 1 + 0.048 * std::log(it->second / std::prev(it)->second);
  CHECK(counterfactual_employment(in).groups[0].points.back().counterfactual == doctest::Approx(20928900 * factor));
  CHECK(parse_counterfactual_mode("chained_log") == CounterfactualMode::ChainedLog);
  CHECK_THROWS_AS(parse_counterfactual_mode("nope"), InvalidArgument);
}

TEST_CASE("property: flat tightness or zero elasticity leave employment unchanged") {
  auto in = reported_inputs();
  for (auto& [y, t] : in.tightness) t = 0.3;
  for (auto mode : {CounterfactualMode::CumulativeLog, CounterfactualMode::CumulativeLevel, CounterfactualMode::ChainedLog}) {
    in.mode = mode;
    const auto res = counterfactual_employment(in);
    CHECK(res.gap == 0.0);
    for (const auto& p : res.total) CHECK(p.counterfactual == p.factual);
  }
  in = reported_inputs();
  for (auto& g : in.groups) g.eta_theta = {0.0, 0.0};
  CHECK(counterfactual_employment(in).gap == 0.0);
}

TEST_CASE("counterfactual draws bracket the point gap") {
  auto in = reported_inputs();
  in.draws = 2000;
  const auto res = counterfactual_employment(in);
  REQUIRE(res.gap_se.has_value());
  CHECK(*res.gap_se > 0.0);
  CHECK(res.gap_interval->first < res.gap);
  CHECK(res.gap_interval->second > res.gap);
  in.base_year = 2011;
  CHECK_THROWS_AS(counterfactual_employment(in), InvalidArgument);
}

TEST_CASE("concession regressions run on instrumented firm data") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> n01;
  const std::size_t n = 3000;
  est::Dataset d(n);
  Eigen::VectorXd zw(n), zv(n), zu(n), th(n), w(n), sk(n);
  std::vector<std::int64_t> firm(n), year(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    firm[i] = static_cast<std::int64_t>(i / 3);
    year[i] = 2012 + static_cast<std::int64_t>(i % 3);
    zw(r) = n01(rng), zv(r) = n01(rng), zu(r) = n01(rng);
    const double v = 0.1 * n01(rng);
    th(r) = zv(r) - zu(r) + v + 0.1 * n01(rng);
    w(r) = 0.5 * zw(r) + 0.04 * th(r) + v + 0.05 * n01(rng);
    sk(r) = 0.02 * th(r) - 0.1 * w(r) + v + 0.05 * n01(rng);
  }
  d.add_column("z_w", zw);
  d.add_column("z_v", zv);
  d.add_column("z_u", zu);
  d.add_column("dln_theta", th);
  d.add_column("dln_w", w);
  d.add_column("d_unskilled_share", sk);
  d.add_key("firm", firm);
  d.add_key("year", year);
  const auto res = concession_regressions(d);
  CHECK(std::abs(res.wage.coefficient("dln_theta") - 0.04) < 4 * res.wage.std_error("dln_theta"));
  CHECK(std::abs(res.skill.coefficient("dln_theta") - 0.02) < 4 * res.skill.std_error("dln_theta"));
  CHECK(std::abs(res.skill.coefficient("dln_w") + 0.1) < 4 * res.skill.std_error("dln_w"));
  ConcessionSpec missing;
  missing.z_u = "absent";
  CHECK_THROWS_AS(concession_regressions(d, missing), InvalidArgument);
}

}
