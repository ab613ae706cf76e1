#include "tightlab/panel.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "tightlab/error.hpp"

namespace tightlab {

std::vector<FirmYear> aggregate_firm_years(const FirmPanel& panel) {
  struct Accum {
    RegionId region = 0;
    double employment = 0.0;
    double wage_bill = 0.0;
    std::map<OccupationCode, double> by_occupation;
  };
  std::map<std::pair<FirmId, Year>, Accum> cells;
  std::map<FirmId, RegionId> region_of;

  for (const auto& rec : panel) {
    auto [it, inserted] = region_of.emplace(rec.firm, rec.region);
    if (!inserted && it->second != rec.region)
      throw InvalidArgument("firm " + std::to_string(rec.firm) +
                            " appears in more than one region; multi-region firms are not supported");
    auto& acc = cells[{rec.firm, rec.year}];
    acc.region = rec.region;
    acc.employment += rec.employment;
    acc.wage_bill += rec.employment * rec.wage_daily;
    acc.by_occupation[rec.occupation] += rec.employment;
  }

  std::vector<FirmYear> out;
  out.reserve(cells.size());
  for (const auto& [key, acc] : cells) {
    if (!(acc.employment > 0.0)) continue;
    FirmYear fy;
    fy.firm = key.first;
    fy.year = key.second;
    fy.region = acc.region;
    fy.employment = acc.employment;
    fy.wage = acc.wage_bill / acc.employment;
    fy.shares.reserve(acc.by_occupation.size());
    for (const auto& [occ, emp] : acc.by_occupation)
      if (emp > 0.0) fy.shares.emplace_back(occ, emp / acc.employment);
    out.push_back(std::move(fy));
  }
  return out;
}

}  // namespace tightlab
