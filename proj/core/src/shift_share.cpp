#include "tightlab/shift_share.hpp"

#include <cmath>
#include <set>

#include "tightlab/error.hpp"

namespace tightlab::shiftshare {

std::string to_string(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::BornInEstimationWindow: return "born_in_estimation_window";
    case ExclusionReason::NoPositiveEmployment: return "no_positive_employment";
    case ExclusionReason::NoLaterYears: return "no_years_after_base";
  }
  return "unknown";
}

namespace {

struct UnitYearEmployment {
  std::map<Year, std::map<OccupationCode, double>> by_year;
};

BaseShares shares_from(const std::map<std::int64_t, UnitYearEmployment>& units,
                       const BaseShareRule& rule) {
  if (rule.estimation_start <= rule.base_year)
    throw InvalidArgument("estimation start must come after the base year");
  BaseShares out;
  for (const auto& [id, unit] : units) {
    auto first = unit.by_year.lower_bound(rule.base_year);
    if (first == unit.by_year.end()) continue;  // only observed before the base year
    if (first->first >= rule.estimation_start) {
      out.excluded[id] = ExclusionReason::BornInEstimationWindow;
      continue;
    }
    double total = 0.0;
    for (const auto& [occ, emp] : first->second) total += emp;
    if (!(total > 0.0)) {
      out.excluded[id] = ExclusionReason::NoPositiveEmployment;
      continue;
    }
    if (std::next(first) == unit.by_year.end()) {
      out.excluded[id] = ExclusionReason::NoLaterYears;
      continue;
    }
    UnitShares us;
    us.base_year = first->first;
    for (const auto& [occ, emp] : first->second)
      if (emp > 0.0) us.shares[occ] = emp / total;
    out.units.emplace(id, std::move(us));
  }
  return out;
}

}  // namespace

BaseShares base_year_shares(const FirmPanel& panel, const BaseShareRule& rule) {
  std::map<std::int64_t, UnitYearEmployment> units;
  for (const auto& r : panel) units[r.firm].by_year[r.year][r.occupation] += r.employment;
  return shares_from(units, rule);
}

BaseShares base_year_shares(const std::vector<RegionEmploymentRecord>& panel,
                            const BaseShareRule& rule) {
  std::map<std::int64_t, UnitYearEmployment> units;
  for (const auto& r : panel) units[r.region].by_year[r.year][r.occupation] += r.employment;
  return shares_from(units, rule);
}

NationalStocks national_stocks(const std::vector<MarketCell>& cells) {
  NationalStocks out;
  for (const auto& c : cells) {
    out.vacancies[c.occupation][c.year] += c.total_vacancies;
    out.job_seekers[c.occupation][c.year] += c.job_seekers;
  }
  return out;
}

OccupationSeries national_wages(const FirmPanel& panel, WageWeighting weighting) {
  std::map<OccupationCode, std::map<Year, std::pair<double, double>>> acc;
  for (const auto& r : panel) {
    if (!(r.employment > 0.0)) continue;
    auto& [num, den] = acc[r.occupation][r.year];
    const double w = weighting == WageWeighting::Employment ? r.employment : 1.0;
    num += w * r.wage_daily;
    den += w;
  }
  OccupationSeries out;
  for (const auto& [occ, years] : acc)
    for (const auto& [year, nd] : years) out[occ][year] = nd.first / nd.second;
  return out;
}

OccupationSeries national_employment(const std::vector<RegionEmploymentRecord>& panel) {
  OccupationSeries out;
  for (const auto& r : panel) out[r.occupation][r.year] += r.employment;
  return out;
}

GrowthSeries log_growth(const OccupationSeries& levels, int lag) {
  if (lag < 1) throw InvalidArgument("lag must be >= 1");
  GrowthSeries out;
  for (const auto& [occ, years] : levels) {
    for (const auto& [year, level] : years) {
      auto prev = years.find(year - lag);
      if (prev == years.end() || !(prev->second > 0.0) || !(level > 0.0)) continue;
      out[occ][year] = std::log(level) - std::log(prev->second);
    }
  }
  return out;
}

NationalGrowth national_growth(const FirmPanel& panel, const std::vector<MarketCell>& cells,
                               int lag, WageWeighting weighting) {
  const auto stocks = national_stocks(cells);
  NationalGrowth g;
  g.lag = lag;
  g.wage = log_growth(national_wages(panel, weighting), lag);
  g.vacancies = log_growth(stocks.vacancies, lag);
  g.job_seekers = log_growth(stocks.job_seekers, lag);
  return g;
}

std::map<std::int64_t, std::map<Year, std::optional<double>>> bartik(
    const BaseShares& shares, const GrowthSeries& growth, const BartikOptions& opts) {
  std::set<Year> years;
  for (const auto& [occ, series] : growth)
    for (const auto& [year, g] : series) years.insert(year);

  std::map<std::int64_t, std::map<Year, std::optional<double>>> out;
  for (const auto& [id, unit] : shares.units) {
    auto& row = out[id];
    for (auto it = years.upper_bound(unit.base_year); it != years.end(); ++it) {
      const Year year = *it;
      double value = 0.0;
      double defined = 0.0;
      double missing = 0.0;
      for (const auto& [occ, s] : unit.shares) {
        if (const auto g = growth.find(occ); g != growth.end()) {
          if (auto v = g->second.find(year); v != g->second.end()) {
            value += s * v->second;
            defined += s;
            continue;
          }
        }
        missing += s;
      }
      if (missing > opts.missing_share_cap || !(defined > 0.0)) {
        row[year] = std::nullopt;
      } else {
        row[year] = missing > 0.0 ? value / defined : value;
      }
    }
  }
  return out;
}

std::vector<InstrumentRow> build_instruments(const BaseShares& shares, const NationalGrowth& growth,
                                             const BartikOptions& opts) {
  const auto zw = bartik(shares, growth.wage, opts);
  const auto zv = bartik(shares, growth.vacancies, opts);
  const auto zu = bartik(shares, growth.job_seekers, opts);

  auto lookup = [](const auto& table, std::int64_t id, Year year) -> std::optional<double> {
    auto u = table.find(id);
    if (u == table.end()) return std::nullopt;
    auto y = u->second.find(year);
    return y == u->second.end() ? std::nullopt : y->second;
  };

  std::vector<InstrumentRow> rows;
  for (const auto& [id, unit] : shares.units) {
    std::set<Year> years;
    for (const auto* table : {&zw, &zv, &zu})
      if (auto u = table->find(id); u != table->end())
        for (const auto& [year, v] : u->second) years.insert(year);
    for (Year year : years)
      rows.push_back({id, year, unit.base_year, lookup(zw, id, year), lookup(zv, id, year),
                      lookup(zu, id, year)});
  }
  return rows;
}

}  // namespace tightlab::shiftshare
