#include "tightlab/policy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "tightlab/error.hpp"
#include "tightlab/model.hpp"

namespace tightlab::policy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double to_unit(std::uint64_t bits) {
  // 53 random bits in (0, 1)
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double sample_sd(const std::vector<double>& v, double& mean) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  const double u1 = to_unit(splitmix64(key ^ (2 * counter)));
  const double u2 = to_unit(splitmix64(key ^ (2 * counter + 1)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CalibrationResult calibrate(const CalibrationInputs& in) {
  model::AmortizationParams am{in.delta, in.r};
  am.validate();
  CalibrationResult out;
  out.phi_over_w = model::prematch_cost_share(am, in.phi1, in.phi2, {in.eta_lw, in.eta_lt});
  out.elasticity_ratio = in.eta_lt / in.eta_lw;
  if (in.phi_over_w) out.reported_gap = out.phi_over_w - *in.phi_over_w;
  if (in.nu) {
    out.omega = *in.nu * in.eta_lt;
    out.aggregate_eta_lw = model::aggregate_wage_elasticity(in.eta_lw, in.eta_lt, *in.nu);
    out.shrinkage = model::feedback_shrinkage(in.eta_lt, *in.nu);
  }
  return out;
}

void MinWageInputs::validate() const {
  if (draws < 1) throw InvalidArgument("minimum-wage simulation needs at least one draw");
  if (!(workforce > 0.0)) throw InvalidArgument("workforce must be positive");
  if (!(elasticity.se >= 0.0) || !(wage_effect.se >= 0.0))
    throw InvalidArgument("standard errors must be non-negative");
}

MinWageResult minwage_effect(const MinWageInputs& in) {
  in.validate();
  MinWageResult out;
  out.employment_change = in.elasticity.value * in.wage_effect.value * in.workforce;
  out.draws = in.draws;

  std::vector<double> sims(in.draws);
  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t d = lo; d < hi; ++d) {
      const double e = in.elasticity.value + in.elasticity.se * counter_normal(in.seed, d, 0);
      const double w = in.wage_effect.value + in.wage_effect.se * counter_normal(in.seed, d, 1);
      sims[d] = e * w * in.workforce;
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(in.threads ? in.threads : std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(in.draws)));
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (in.draws + threads - 1) / threads;
  for (std::size_t lo = 0; lo < in.draws; lo += chunk)
    jobs.push_back(std::async(std::launch::async, fill, lo, std::min(in.draws, lo + chunk)));
  for (auto& j : jobs) j.get();

  out.se = sample_sd(sims, out.draw_mean);
  return out;
}

double minwage_analytic_se(const MinWageInputs& in) {
  const double me = in.elasticity.value, se = in.elasticity.se;
  const double mw = in.wage_effect.value, sw = in.wage_effect.se;
  return in.workforce * std::sqrt(me * me * sw * sw + mw * mw * se * se + se * se * sw * sw);
}

DididResult didid_wage_effect(const est::Dataset& workers, const std::string& outcome,
                              const std::string& cluster) {
  est::Dataset data = workers;
  data.add_column("bite_x_cohort", workers.column("bite").cwiseProduct(workers.column("cohort")));
  est::RegressionSpec spec;
  spec.dependent = outcome;
  spec.endogenous = {"bite", "cohort", "bite_x_cohort"};
  spec.cluster = cluster;
  DididResult out;
  out.report = est::ols(spec, data);
  out.beta = {out.report.coefficient("bite_x_cohort"), out.report.std_error("bite_x_cohort")};
  return out;
}

std::string to_string(CounterfactualMode mode) {
  switch (mode) {
    case CounterfactualMode::CumulativeLog: return "cumulative_log";
    case CounterfactualMode::CumulativeLevel: return "cumulative_level";
    case CounterfactualMode::ChainedLog: return "chained_log";
  }
  return "unknown";
}

CounterfactualMode parse_counterfactual_mode(const std::string& text) {
  for (auto m : {CounterfactualMode::CumulativeLog, CounterfactualMode::CumulativeLevel,
                 CounterfactualMode::ChainedLog})
    if (to_string(m) == text) return m;
  throw InvalidArgument("unknown counterfactual mode '" + text +
                        "' (cumulative_log, cumulative_level, chained_log)");
}

void CounterfactualInputs::validate() const {
  if (groups.empty()) throw InvalidArgument("counterfactual needs at least one worker group");
  if (!tightness.count(base_year))
    throw InvalidArgument("tightness series lacks the base year " + std::to_string(base_year));
  for (const auto& [year, theta] : tightness)
    if (!(theta > 0.0))
      throw DomainError("tightness must be positive; year " + std::to_string(year));
  for (const auto& g : groups) {
    if (g.employment.empty()) throw InvalidArgument("group '" + g.name + "' has no employment");
    for (const auto& [year, emp] : g.employment)
      if (!tightness.count(year))
        throw InvalidArgument("group '" + g.name + "' has employment in " + std::to_string(year) +
                              " but the tightness series does not cover it");
  }
  if (!(interval > 0.0 && interval < 1.0)) throw InvalidArgument("interval must lie in (0, 1)");
}

namespace {

// Multiplicative adjustment for year t relative to the base year.
double adjustment(const std::map<Year, double>& theta, Year base, Year t, double eta,
                  CounterfactualMode mode) {
  const double tb = theta.at(base);
  switch (mode) {
    case CounterfactualMode::CumulativeLog: return 1.0 - eta * std::log(theta.at(t) / tb);
    case CounterfactualMode::CumulativeLevel: return 1.0 - eta * (theta.at(t) - tb) / tb;
    case CounterfactualMode::ChainedLog: {
      double factor = 1.0;
      auto prev = theta.find(base);
      if (t >= base) {
        for (auto it = std::next(prev); it != theta.end() && it->first <= t; prev = it++)
          factor *= 1.0 - eta * std::log(it->second / prev->second);
      } else {
        // walking backwards mirrors the forward chain
        for (auto it = theta.find(t); it != theta.find(base); ++it)
          factor /= 1.0 - eta * std::log(std::next(it)->second / it->second);
      }
      return factor;
    }
  }
  return 1.0;
}

double total_gap(const CounterfactualInputs& in, const std::vector<double>& etas) {
  double gap = 0.0;
  for (std::size_t g = 0; g < in.groups.size(); ++g) {
    const auto& last = *in.groups[g].employment.rbegin();
    gap += last.second * (adjustment(in.tightness, in.base_year, last.first, etas[g], in.mode) - 1.0);
  }
  return gap;
}

}  // namespace

CounterfactualResult counterfactual_employment(const CounterfactualInputs& in) {
  in.validate();
  CounterfactualResult out;
  std::map<Year, CounterfactualPoint> total;
  for (const auto& g : in.groups) {
    GroupPath path;
    path.name = g.name;
    for (const auto& [year, emp] : g.employment) {
      const double cf = emp * adjustment(in.tightness, in.base_year, year, g.eta_theta.value, in.mode);
      path.points.push_back({year, emp, cf});
      auto& t = total[year];
      t.year = year;
      t.factual += emp;
      t.counterfactual += cf;
    }
    path.gap = path.points.back().counterfactual - path.points.back().factual;
    out.gap += path.gap;
    out.groups.push_back(std::move(path));
  }
  for (const auto& [year, p] : total) out.total.push_back(p);

  if (in.draws > 0) {
    std::vector<double> gaps(in.draws);
    std::vector<double> etas(in.groups.size());
    for (std::size_t d = 0; d < in.draws; ++d) {
      for (std::size_t g = 0; g < in.groups.size(); ++g)
        etas[g] = in.groups[g].eta_theta.value + in.groups[g].eta_theta.se * counter_normal(in.seed, d, g);
      gaps[d] = total_gap(in, etas);
    }
    double mean = 0.0;
    out.gap_se = sample_sd(gaps, mean);
    const double tail = (1.0 - in.interval) / 2.0;
    out.gap_interval = std::make_pair(quantile(gaps, tail), quantile(gaps, 1.0 - tail));
  }
  return out;
}

ConcessionResult concession_regressions(const est::Dataset& data, const ConcessionSpec& spec) {
  for (const auto* name : {&spec.z_w, &spec.z_v, &spec.z_u})
    if (!data.has_column(*name))
      throw InvalidArgument("concession regressions need instrument column '" + *name + "'");

  est::RegressionSpec wage;
  wage.dependent = spec.dln_w;
  wage.endogenous = {spec.dln_theta};
  wage.instruments = {spec.z_v, spec.z_u};
  wage.fixed_effects = spec.fixed_effects;
  wage.cluster = spec.cluster;

  est::RegressionSpec skill = wage;
  skill.dependent = spec.unskilled_share;
  skill.endogenous = {spec.dln_theta, spec.dln_w};
  skill.instruments = {spec.z_w, spec.z_v, spec.z_u};

  return {est::tsls(wage, data), est::tsls(skill, data)};
}

}  // namespace tightlab::policy
