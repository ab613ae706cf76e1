// One PASS/FAIL line per acceptance criterion; exit status is nonzero when any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "tightlab/error.hpp"
#include "tightlab/estimator.hpp"
#include "tightlab/io/config.hpp"
#include "tightlab/io/pipeline.hpp"
#include "tightlab/io/schemas.hpp"
#include "tightlab/market_sim.hpp"
#include "tightlab/model.hpp"
#include "tightlab/policy.hpp"
#include "tightlab/tightness.hpp"
#include "tightlab/zones.hpp"

using namespace tightlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const std::string kData = TIGHTLAB_DATA;

// 1
void calibration(Outcome& o) {
  const auto in = io::read_calibration(kData + "/reference/calibration.json");
  const auto res = policy::calibrate(in);
  const double direct = model::prematch_cost_share({0.331, 0.150}, 1.852, 0.468, {-0.730, -0.051});
  o.detail << "Phi/W = " << res.phi_over_w;
  o.require(close(res.phi_over_w, 0.429, 0.001), "bundled inputs within 0.001 of 0.429");
  o.require(close(direct, 0.429, 0.001), "direct inputs within 0.001 of 0.429");
}

// 2
void aggregate_elasticity(Outcome& o) {
  const double agg = model::aggregate_wage_elasticity(-0.713, -0.048, 9.285);
  const double pt = model::aggregate_wage_elasticity(-0.067, -0.043, 10.36);
  const double shrink = model::feedback_shrinkage(-0.048, 9.285);
  o.detail << "aggregate " << agg << ", part-time " << pt << ", shrinkage " << 100 * shrink << "%";
  o.require(close(agg, -0.49, 0.005), "aggregate -0.49");
  o.require(close(pt, -0.05, 0.005), "part-time -0.05");
  o.require(close(shrink, 0.308, 0.003), "shrinkage 30.8%");
}

// 3
void inversion(Outcome& o) {
  const double mu = model::vacancy_matching_elasticity(9.285, -4.039);
  o.detail << "mu = " << mu;
  o.require(close(mu, 0.54, 0.01), "mu 0.54");
}

// 4
void separation(Outcome& o) {
  const double delta = model::annualize_separation_rate(0.0010999);
  o.detail << "delta = " << delta;
  o.require(close(delta, 0.331, 0.0005), "yearly 0.331");
}

struct Replication {
  double iv_w = 0.0, iv_t = 0.0, ols_w = 0.0, min_f = 0.0;
  bool ok = false;
  std::string error;
};

Replication replicate(const io::PipelineConfig& base, std::uint64_t seed) {
  Replication r;
  try {
    auto cfg = base;
    io::apply_seed(cfg, seed);
    auto panel = sim::simulate_economy(cfg.simulation);
    io::FirmInputs in;
    in.panel = std::move(panel.firms);
    in.cells = std::move(panel.markets);
    in.notification_shares = std::move(panel.notification_shares);
    const auto d = io::build_firm_design(in, cfg.tightness, cfg.estimation);
    const auto spec = io::main_spec(cfg.estimation);
    const auto iv = est::tsls(spec, d.data);
    const auto ols = est::ols(spec, d.data);
    r.iv_w = iv.coefficient("dln_w");
    r.iv_t = iv.coefficient("dln_theta");
    r.ols_w = ols.coefficient("dln_w");
    r.min_f = std::numeric_limits<double>::infinity();
    for (const auto& fs : iv.first_stages) r.min_f = std::min(r.min_f, fs.f_stat);
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 5
void monte_carlo(Outcome& o) {
  const auto t0 = Clock::now();
  const io::PipelineConfig cfg;
  const std::size_t reps = 200;
  std::vector<Replication> out(reps);
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < reps;) out[i] = replicate(cfg, 1000 + i);
    });
  for (auto& t : pool) t.join();
  const double elapsed = seconds_since(t0);

  std::vector<double> iv_w, iv_t;
  std::size_t ols_above = 0, strong = 0, failed = 0;
  for (const auto& r : out) {
    if (!r.ok) {
      ++failed;
      continue;
    }
    iv_w.push_back(r.iv_w);
    iv_t.push_back(r.iv_t);
    if (r.ols_w > cfg.simulation.true_eta_lw) ++ols_above;
    if (r.min_f > 10.0) ++strong;
  }
  const double tw = cfg.simulation.true_eta_lw;
  const double tt = cfg.simulation.true_eta_lt;
  const double mw = iv_w.empty() ? NAN : median(iv_w);
  const double mt = iv_t.empty() ? NAN : median(iv_t);
  o.detail << reps << " economies in " << elapsed << "s; median 2SLS eta_lw " << mw << " (truth " << tw
           << "), eta_lt " << mt << " (truth " << tt << "); OLS above truth " << ols_above << "/" << reps
           << "; all F > 10 in " << strong << "/" << reps;
  o.require(failed == 0, std::to_string(failed) + " replications raised errors");
  o.require(std::abs(mw / tw - 1.0) <= 0.05, "median eta_lw within 5%");
  o.require(std::abs(mt / tt - 1.0) <= 0.05, "median eta_lt within 5%");
  o.require(ols_above >= 0.95 * reps, "OLS above truth in 95%");
  o.require(strong >= 0.90 * reps, "F > 10 in 90%");
  o.require(elapsed < 300.0, "under 5 minutes");
}

// 6
void rotemberg_identities(Outcome& o) {
  io::PipelineConfig cfg;
  io::apply_seed(cfg, 6);
  auto panel = sim::simulate_economy(cfg.simulation);
  io::FirmInputs in;
  in.panel = std::move(panel.firms);
  in.cells = std::move(panel.markets);
  in.notification_shares = std::move(panel.notification_shares);
  const auto d = io::build_firm_design(in, cfg.tightness, cfg.estimation);
  const auto families = io::rotemberg_families(d, cfg.estimation);
  o.require(!families.empty(), "at least one family");
  for (const auto& f : families) {
    o.detail << f.family << ": |sum alpha - 1| " << f.report.alpha_sum_error() << ", identity "
             << f.report.identity_error() << "; ";
    o.require(f.report.alpha_sum_error() <= 1e-8, f.family + " sum alpha");
    o.require(f.report.identity_error() <= 1e-6, f.family + " sum alpha beta");
  }
}

// 7
void flow_collapse(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_raw = 0.0, worst_zone = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 12;
    tightness::TransitionMatrix tm;
    tm.probability = Eigen::MatrixXd::Identity(n, n);
    tm.employment = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
      tm.occupations.push_back(std::to_string(10001 + 10 * i));
      tm.employment(i) = 100.0 + 1000.0 * u(rng);
    }
    Eigen::VectorXd v(n), s(n);
    for (int i = 0; i < n; ++i) v(i) = 500.0 * u(rng), s(i) = 1.0 + 500.0 * u(rng);
    const auto adj = tightness::flow_adjusted_stocks(tightness::flow_weights(tm), v, s);
    worst_raw = std::max({worst_raw, (adj.vacancies - v).cwiseAbs().maxCoeff(),
                          (adj.job_seekers - s).cwiseAbs().maxCoeff()});

    tightness::FlowWeights uniform;
    uniform.occupations = tm.occupations;
    uniform.weight = Eigen::MatrixXd::Ones(n, n);
    const auto zone = tightness::flow_adjusted_stocks(uniform, v, s);
    double tv = 0.0, ts = 0.0;
    for (int i = 0; i < n; ++i) tv += v(i), ts += s(i);
    for (int i = 0; i < n; ++i)
      worst_zone = std::max({worst_zone, std::abs(zone.vacancies(i) - tv), std::abs(zone.job_seekers(i) - ts)});
  }
  o.detail << "max |adjusted - raw| " << worst_raw << ", max |uniform - zone total| " << worst_zone;
  o.require(worst_raw == 0.0, "zero cross flows give raw stocks");
  o.require(worst_zone == 0.0, "uniform weights give zone totals");
}

double brute_force_q(const zones::CommutingGraph& g, const std::vector<int>& zone_of) {
  const auto n = g.size();
  const double two_m = g.flows.sum();
  const Eigen::VectorXd k = g.flows.rowwise().sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (zone_of[i] == zone_of[j]) q += g.flows(i, j) / two_m - k(i) * k(j) / (two_m * two_m);
  return q;
}

// 8
void planted_graph(Outcome& o) {
  const auto planted = testing::planted_two_communities(10, 8);
  const auto g = zones::CommutingGraph::from_directed(planted.directed, planted.labor_force);
  const auto sweep = zones::sweep_thresholds(g, zones::threshold_grid(0.01, 0.50, 0.01));
  const double q_bf = brute_force_q(g, sweep.best.zone_of);
  const double q_one = zones::modularity(g, std::vector<int>(g.size(), 0));
  o.detail << g.size() << " regions, " << sweep.best.zone_count << " zones, Q " << sweep.best.modularity
           << " vs brute force " << q_bf << ", all-in-one Q " << q_one;
  o.require(g.size() == 20, "20 regions");
  o.require(sweep.best.zone_of == planted.truth, "partition recovered");
  o.require(std::abs(sweep.best.modularity - q_bf) <= 1e-12, "Q matches brute force");
  o.require(std::abs(q_one) <= 1e-12, "all-in-one Q = 0");
}

// 9
void minimum_wage(Outcome& o) {
  policy::MinWageInputs firm{{-0.71, 0.021}, {0.0069, 0.00004}, 19717863};
  policy::MinWageInputs agg{{-0.49, 0.022}, {0.0069, 0.00004}, 19717863};
  const double ef = policy::minwage_effect(firm).employment_change;
  const double ea = policy::minwage_effect(agg).employment_change;
  const double analytic = policy::minwage_analytic_se(agg);
  double lo = INFINITY, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    agg.seed = seed;
    const double se = policy::minwage_effect(agg).se;
    lo = std::min(lo, se);
    hi = std::max(hi, se);
  }
  o.detail << "firm-level " << ef << ", aggregate " << ea << ", SE range [" << lo << ", " << hi
           << "] vs analytic " << analytic;
  o.require(std::abs(ef / -96432.0 - 1.0) < 0.02, "-96,432 within 2%");
  o.require(std::abs(ea / -66757.0 - 1.0) < 0.02, "-66,757 within 2%");
  o.require(std::abs(lo / analytic - 1.0) < 0.02 && std::abs(hi / analytic - 1.0) < 0.02,
            "SE within 2% across seeds");
}

// 10
void counterfactual(Outcome& o) {
  const auto series = io::read_employment_series(kData + "/reference/employment_series.csv");
  policy::CounterfactualInputs in;
  in.tightness = io::read_tightness_series(kData + "/reference/tightness_series.csv");
  in.base_year = 2012;
  in.groups = {{"full_time", series.at("full_time"), {-0.048, 0.002}},
               {"part_time", series.at("part_time"), {-0.043, 0.002}}};
  const auto res = policy::counterfactual_employment(in);
  const auto& ft = res.groups.at(0).points.back();
  o.detail << "full-time " << ft.year << " counterfactual " << ft.counterfactual << ", total gap " << res.gap;
  o.require(ft.year == 2019, "last year 2019");
  o.require(std::abs(ft.counterfactual / 21618454.0 - 1.0) < 0.005, "FT 2019 within 0.5% of 21.618M");
  o.require(std::abs(res.gap - 1.1e6) <= 0.1e6, "gap 1.1M +- 0.1M");
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// 11
void numerical_core(Outcome& o) {
  const auto t0 = Clock::now();
  est::RegressionSpec s;
  s.dependent = "y";
  s.endogenous = {"x1", "x2"};
  s.exogenous = {"c"};
  s.instruments = {"z1", "z2"};
  s.fixed_effects = {"unit", "period"};
  s.cluster = "cluster";

  double self_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto panel = testing::make_iv_panel(200, 5, seed);
    auto si = s;
    si.instruments = si.endogenous;
    const auto a = est::ols(s, panel.data);
    const auto b = est::tsls(si, panel.data);
    self_gap = std::max({self_gap, max_abs_diff(a.coef, b.coef), max_abs_diff(a.vcov, b.vcov)});
  }

  auto panel = testing::make_iv_panel(40, 6, 11);
  std::vector<char> keep(panel.data.rows(), 1);
  for (std::size_t i = 0; i < keep.size(); i += 7) keep[i] = 0;
  auto d = panel.data.filter(keep);
  const auto absorbed = est::tsls(s, d);
  auto sd = s;
  sd.fixed_effects.clear();
  for (const std::string key : {"unit", "period"}) {
    const auto& k = d.key(key);
    std::set<std::int64_t> levels(k.begin(), k.end());
    for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
      Eigen::VectorXd col(static_cast<Eigen::Index>(d.rows()));
      for (std::size_t i = 0; i < d.rows(); ++i) col(static_cast<Eigen::Index>(i)) = k[i] == *it ? 1.0 : 0.0;
      sd.exogenous.push_back(key + "_" + std::to_string(*it));
      d.add_column(sd.exogenous.back(), col);
    }
  }
  const auto dummies = est::tsls(sd, d);
  double fe_gap = 0.0;
  for (const auto* name : {"x1", "x2", "c"})
    fe_gap = std::max({fe_gap, std::abs(absorbed.coefficient(name) - dummies.coefficient(name)),
                       std::abs(absorbed.std_error(name) - dummies.std_error(name))});

  double chain_gap = 0.0;
  for (std::uint64_t seed = 21; seed <= 25; ++seed) {
    const auto p = testing::make_iv_panel(150, 4, seed);
    est::RegressionSpec j;
    j.dependent = "y";
    j.endogenous = {"x1"};
    j.exogenous = {"c"};
    j.instruments = {"z1"};
    j.fixed_effects = {"period"};
    j.cluster = "cluster";
    const auto iv = est::tsls(j, p.data);
    const auto rf = est::reduced_form(j, p.data);
    chain_gap = std::max(chain_gap, std::abs(iv.coefficient("x1") -
                                             rf.coefficient("z1") / iv.first_stages.front().coef(0)));
  }
  const double elapsed = seconds_since(t0);
  o.detail << "self-instrumenting " << self_gap << ", FE vs dummies " << fe_gap << ", IV chain " << chain_gap
           << ", " << elapsed << "s";
  o.require(self_gap <= 1e-8, "2SLS = OLS when self-instrumenting");
  o.require(fe_gap <= 1e-9, "absorption = dummies");
  o.require(chain_gap <= 1e-8, "IV chain identity");
  o.require(elapsed < 30.0, "under 30s");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"calibrated pre-match cost share", calibration},
      {"aggregate elasticity and shrinkage", aggregate_elasticity},
      {"matching elasticity inversion", inversion},
      {"separation rate annualization", separation},
      {"Monte Carlo recovery", monte_carlo},
      {"Rotemberg identities", rotemberg_identities},
      {"flow-adjustment collapse", flow_collapse},
      {"planted commuting graph", planted_graph},
      {"minimum-wage effects", minimum_wage},
      {"frozen-tightness counterfactual", counterfactual},
      {"numerical core identities", numerical_core},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
