#include "tightlab/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tightlab/error.hpp"

namespace tightlab::sim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

// Symmetric Dirichlet draw over k components via normalized gammas.
std::vector<double> dirichlet(std::mt19937_64& rng, int k, double concentration) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& x : w) {
    x = gamma(rng);
    total += x;
  }
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0 / k);
    return w;
  }
  for (auto& x : w) x /= total;
  return w;
}

// k distinct indices out of n, in ascending order.
std::vector<int> pick_subset(std::mt19937_64& rng, int n, int k) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

double floored(double log_level) { return std::max(1.0, std::exp(log_level)); }

}  // namespace

void MatchingParams::validate() const {
  require(kappa > 0.0, "matching efficiency kappa must be > 0");
  require(mu > 0.0 && mu < 1.0, "matching elasticity mu must lie in (0, 1)");
}

double matches(double job_seekers, double vacancies, const MatchingParams& m) {
  m.validate();
  require(job_seekers >= 0.0 && vacancies >= 0.0, "stocks must be >= 0");
  return m.kappa * std::pow(job_seekers, m.mu) * std::pow(vacancies, 1.0 - m.mu);
}

double steady_state_tightness(double delta, double employment, double kappa, double job_seekers,
                              double mu) {
  MatchingParams{kappa, mu}.validate();
  require(delta > 0.0 && employment > 0.0 && job_seekers > 0.0,
          "steady state needs positive delta, employment and job seekers");
  return std::pow(delta * employment / (kappa * job_seekers), 1.0 / (1.0 - mu));
}

double apply_feedback_cycle(double first_round_dlnL, double nu, double eta_lt,
                            std::size_t horizon) {
  const double omega = nu * eta_lt;
  double round = first_round_dlnL;
  double total = 0.0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    total += round;
    round *= omega;
  }
  return total;
}

void ProductionParams::validate() const {
  require(tfp > 0.0, "tfp must be > 0");
  require(labor_weight > 0.0 && labor_weight < 1.0, "labor weight must lie in (0, 1)");
  require(capital_rate > 0.0, "capital rate must be > 0");
  require(demand_scale > 0.0, "demand scale must be > 0");
}

FirmOptimum solve_firm(const ProductionParams& prod, double sigma, double demand_elasticity,
                       double w_star) {
  prod.validate();
  require(sigma >= 0.0, "sigma must be >= 0");
  require(demand_elasticity > 1.0, "a monopolistic firm needs demand elasticity > 1");
  require(w_star > 0.0, "unit labor cost must be > 0");

  const double a = prod.labor_weight;
  const double b = 1.0 - a;
  const double rk = prod.capital_rate;
  double unit_cost = 0.0;   // cost of one unit of A^-1 Y
  double dc_dw = 0.0;
  double dc_dr = 0.0;
  if (std::fabs(sigma - 1.0) < 1e-12) {
    unit_cost = std::pow(w_star / a, a) * std::pow(rk / b, b);
    dc_dw = a * unit_cost / w_star;
    dc_dr = b * unit_cost / rk;
  } else {
    const double e = 1.0 - sigma;
    const double inner = std::pow(a, sigma) * std::pow(w_star, e) + std::pow(b, sigma) * std::pow(rk, e);
    unit_cost = std::pow(inner, 1.0 / e);
    dc_dw = std::pow(a, sigma) * std::pow(unit_cost / w_star, sigma);
    dc_dr = std::pow(b, sigma) * std::pow(unit_cost / rk, sigma);
  }

  FirmOptimum opt;
  opt.marginal_cost = unit_cost / prod.tfp;
  opt.price = demand_elasticity / (demand_elasticity - 1.0) * opt.marginal_cost;
  opt.output = prod.demand_scale * std::pow(opt.price, -demand_elasticity);
  opt.labor = opt.output / prod.tfp * dc_dw;
  opt.capital = opt.output / prod.tfp * dc_dr;
  opt.labor_share = w_star * opt.labor / (w_star * opt.labor + rk * opt.capital);
  return opt;
}

void EconomyConfig::validate() const {
  require(n_occupations >= 1 && n_regions >= 1 && n_firms >= 1 && n_years >= 2,
          "economy needs >= 1 occupation, region and firm and >= 2 years");
  require(n_occupations < 9000, "at most 8999 occupations");
  require(base_year >= first_year && base_year < first_year + n_years - 1,
          "base year must precede the last simulated year");
  for (double sd : {national_shock_sd, national_wage_sd, regional_shock_sd, idiosyncratic_sd,
                    demand_confound_sd, employment_noise_sd, cluster_shock_sd, share_drift_sd,
                    sd_log_firm_size, national_employment_sd, region_demand_sd, region_supply_sd})
    require(std::isfinite(sd) && sd >= 0.0, "standard deviations must be >= 0");
  require(national_shock_sd > 0.0 && national_wage_sd > 0.0,
          "degenerate configuration: zero national shock variance leaves the shift-share "
          "instruments without variation");
  require(max_occupations_per_firm >= 1, "firms need at least one occupation");
  require(share_concentration > 0.0, "share concentration must be > 0");
  require(occupations_per_region >= 1, "regions need at least one occupation");
  require(n_feedback_regions >= 0, "feedback region count must be >= 0");
  for (double s : {notification_share_helper, notification_share_professional,
                   notification_share_specialist})
    require(s > 0.0 && s <= 1.0, "notification shares must lie in (0, 1]");
  require(separation_rate > 0.0 && separation_rate <= 1.0, "separation rate must lie in (0, 1]");
  matching.validate();
}

std::vector<Year> EconomyConfig::years() const {
  std::vector<Year> ys(static_cast<std::size_t>(n_years));
  std::iota(ys.begin(), ys.end(), first_year);
  return ys;
}

double EconomyConfig::true_nu() const {
  return (1.0 / (1.0 - matching.mu)) * (1.0 - dlnU_dlnL);
}

OccupationCode simulated_occupation_code(int index) {
  const int level = 1 + index % 4;
  return std::to_string(1000 + index) + std::to_string(level);
}

SyntheticPanel simulate_economy(const EconomyConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  auto normal = [&](double sd) { return sd == 0.0 ? 0.0 : sd * std_normal(rng); };

  const int n_occ = cfg.n_occupations;
  const int n_reg = cfg.n_regions;
  const int n_t = cfg.n_years;
  const auto years = cfg.years();

  SyntheticPanel out;
  out.config = cfg;
  for (int o = 0; o < n_occ; ++o) out.occupations.push_back(simulated_occupation_code(o));

  // national occupational wage index and market stocks
  std::vector<std::vector<double>> log_wage_index(n_t, std::vector<double>(n_occ));
  auto& g_w = out.shocks.wage_growth;
  auto& g_v = out.shocks.vacancy_growth;
  auto& g_u = out.shocks.seeker_growth;
  g_w.assign(n_t, std::vector<double>(n_occ, 0.0));
  g_v.assign(n_t, std::vector<double>(n_occ, 0.0));
  g_u.assign(n_t, std::vector<double>(n_occ, 0.0));

  // [t][o][r]
  std::vector<std::vector<std::vector<double>>> vac(
      n_t, std::vector<std::vector<double>>(n_occ, std::vector<double>(n_reg)));
  auto seek = vac;
  std::vector<std::vector<double>> log_v(n_occ, std::vector<double>(n_reg));
  std::vector<std::vector<double>> log_u(n_occ, std::vector<double>(n_reg));

  for (int o = 0; o < n_occ; ++o) {
    log_wage_index[0][o] = std::log(100.0) + normal(0.3);
    for (int r = 0; r < n_reg; ++r) {
      log_v[o][r] = std::log(50.0) + normal(0.5);
      log_u[o][r] = std::log(100.0) + normal(0.5);
      vac[0][o][r] = floored(log_v[o][r]);
      seek[0][o][r] = floored(log_u[o][r]);
    }
  }
  for (int t = 1; t < n_t; ++t) {
    for (int o = 0; o < n_occ; ++o) {
      g_w[t][o] = normal(cfg.national_wage_sd);
      g_v[t][o] = normal(cfg.national_shock_sd);
      g_u[t][o] = normal(cfg.national_shock_sd);
      log_wage_index[t][o] = log_wage_index[t - 1][o] + g_w[t][o];
      for (int r = 0; r < n_reg; ++r) {
        log_v[o][r] += g_v[t][o] + normal(cfg.regional_shock_sd);
        log_u[o][r] += g_u[t][o] + normal(cfg.regional_shock_sd);
        vac[t][o][r] = floored(log_v[o][r]);
        seek[t][o][r] = floored(log_u[o][r]);
      }
    }
  }

  // region x year employment shocks shared by firms in a region
  std::vector<std::vector<double>> cluster(n_reg, std::vector<double>(n_t, 0.0));
  for (int r = 0; r < n_reg; ++r)
    for (int t = 1; t < n_t; ++t) cluster[r][t] = cluster[r][t - 1] + normal(cfg.cluster_shock_sd);

  // firms
  out.shocks.firm_confound.assign(cfg.n_firms, std::vector<double>(n_t, 0.0));
  out.firms.reserve(static_cast<std::size_t>(cfg.n_firms) * n_t * 3);
  std::uniform_int_distribution<int> pick_region(0, n_reg - 1);
  std::uniform_int_distribution<int> pick_k(1, std::min(cfg.max_occupations_per_firm, n_occ));
  const double lambda = cfg.confound_wage_loading;

  for (int i = 0; i < cfg.n_firms; ++i) {
    const FirmId firm = i + 1;
    const int r = pick_region(rng);
    out.firm_region[firm] = r;
    const int k = pick_k(rng);
    const auto occs = pick_subset(rng, n_occ, k);
    std::vector<double> share = dirichlet(rng, k, cfg.share_concentration);
    const double log_l0 = cfg.mean_log_firm_size + normal(cfg.sd_log_firm_size);
    const double premium = normal(0.2);

    double wage_idio = 0.0;
    double noise = 0.0;
    auto& confound = out.shocks.firm_confound[i];
    double log_w0 = 0.0;
    double log_theta0 = 0.0;

    for (int t = 0; t < n_t; ++t) {
      if (t > 0) {
        confound[t] = confound[t - 1] + normal(cfg.demand_confound_sd);
        wage_idio += normal(cfg.idiosyncratic_sd);
        noise += normal(cfg.employment_noise_sd);
        if (cfg.share_drift_sd > 0.0) {
          double total = 0.0;
          for (auto& s : share) {
            s *= std::exp(normal(cfg.share_drift_sd));
            total += s;
          }
          for (auto& s : share) s /= total;
        }
      }
      const double firm_log_wage = premium + wage_idio + lambda * confound[t];
      std::vector<double> occ_wage(static_cast<std::size_t>(k));
      double mean_wage = 0.0;
      double theta = 0.0;
      for (int j = 0; j < k; ++j) {
        const int o = occs[j];
        occ_wage[j] = std::exp(log_wage_index[t][o] + firm_log_wage);
        mean_wage += share[j] * occ_wage[j];
        theta += share[j] * vac[t][o][r] / seek[t][o][r];
      }
      if (t == 0) {
        log_w0 = std::log(mean_wage);
        log_theta0 = std::log(theta);
      }
      const double log_l = log_l0 + cfg.true_eta_lw * (std::log(mean_wage) - log_w0) +
                           cfg.true_eta_lt * (std::log(theta) - log_theta0) + confound[t] + noise +
                           cluster[r][t];
      const double total_l = std::exp(log_l);
      for (int j = 0; j < k; ++j) {
        double emp = total_l * share[j];
        if (cfg.round_employment) emp = std::round(emp);
        if (emp <= 0.0) continue;
        out.firms.push_back({firm, years[t], out.occupations[occs[j]], r, emp, occ_wage[j]});
      }
    }
  }

  // market cells with registered vacancies below totals
  auto bucket_share = [&](tightness::NotificationLevel lvl) {
    switch (lvl) {
      case tightness::NotificationLevel::Helper: return cfg.notification_share_helper;
      case tightness::NotificationLevel::Professional: return cfg.notification_share_professional;
      default: return cfg.notification_share_specialist;
    }
  };
  for (int t = 0; t < n_t; ++t)
    for (auto lvl : {tightness::NotificationLevel::Helper, tightness::NotificationLevel::Professional,
                     tightness::NotificationLevel::SpecialistExpert})
      out.notification_shares.set(years[t], lvl, bucket_share(lvl));
  out.markets.reserve(static_cast<std::size_t>(n_t) * n_occ * n_reg);
  for (int t = 0; t < n_t; ++t)
    for (int o = 0; o < n_occ; ++o) {
      const double share = bucket_share(tightness::notification_bucket(out.occupations[o]));
      for (int r = 0; r < n_reg; ++r)
        out.markets.push_back({out.occupations[o], r, years[t], vac[t][o][r] * share, vac[t][o][r],
                               seek[t][o][r]});
    }

  // region block
  const int n_fr = cfg.n_feedback_regions;
  auto& g_l = out.shocks.employment_growth;
  g_l.assign(n_t, std::vector<double>(n_occ, 0.0));
  if (n_fr > 0) {
    const auto& m = cfg.matching;
    const int k = std::min(cfg.occupations_per_region, n_occ);
    std::vector<std::vector<int>> reg_occs(n_fr);
    std::vector<std::vector<double>> reg_emp(n_fr);
    std::vector<double> reg_seekers(n_fr);
    for (int r = 0; r < n_fr; ++r) {
      reg_occs[r] = pick_subset(rng, n_occ, k);
      const auto share = dirichlet(rng, k, cfg.share_concentration);
      const double size = std::exp(std::log(50000.0) + normal(0.5));
      reg_emp[r].resize(k);
      for (int j = 0; j < k; ++j) reg_emp[r][j] = size * share[j];
      const double theta0 = 0.5 * std::exp(normal(0.3));
      reg_seekers[r] = cfg.separation_rate * size / (m.kappa * std::pow(theta0, 1.0 - m.mu));
    }
    for (int t = 0; t < n_t; ++t) {
      if (t > 0)
        for (int o = 0; o < n_occ; ++o) g_l[t][o] = normal(cfg.national_employment_sd);
      for (int r = 0; r < n_fr; ++r) {
        const RegionId region = r + 1;
        double prev_total = 0.0;
        for (double e : reg_emp[r]) prev_total += e;
        if (t > 0) {
          const double demand = normal(cfg.region_demand_sd);
          const double supply = normal(cfg.region_supply_sd);
          for (int j = 0; j < k; ++j)
            reg_emp[r][j] *= std::exp(g_l[t][reg_occs[r][j]] + demand +
                                      cfg.supply_employment_loading * supply);
          double total = 0.0;
          for (double e : reg_emp[r]) total += e;
          reg_seekers[r] *= std::exp(cfg.dlnU_dlnL * std::log(total / prev_total) + supply);
        }
        double total = 0.0;
        for (int j = 0; j < k; ++j) {
          total += reg_emp[r][j];
          out.region_employment.push_back(
              {region, years[t], out.occupations[reg_occs[r][j]], reg_emp[r][j]});
        }
        const double theta =
            steady_state_tightness(cfg.separation_rate, total, m.kappa, reg_seekers[r], m.mu);
        out.region_markets.push_back({region, years[t], theta * reg_seekers[r], reg_seekers[r]});
      }
    }
  }
  return out;
}

}  // namespace tightlab::sim
