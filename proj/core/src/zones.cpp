#include "tightlab/zones.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <queue>
#include <thread>

#include "tightlab/error.hpp"

namespace tightlab::zones {

CommutingGraph CommutingGraph::from_directed(const Eigen::MatrixXd& directed,
                                             Eigen::VectorXd labor_force) {
  if (directed.rows() != directed.cols() || directed.rows() != labor_force.size())
    throw InvalidArgument("commuting matrix and labor force differ in size");
  CommutingGraph g;
  g.flows = directed + directed.transpose();
  g.flows.diagonal().setZero();
  g.labor_force = std::move(labor_force);
  return g;
}

void CommutingGraph::validate() const {
  const auto n = size();
  if (flows.rows() != n || flows.cols() != n)
    throw InvalidArgument("flow matrix does not match the labor force vector");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(labor_force(i) > 0.0))
      throw InvalidArgument("region " + std::to_string(i) + " has non-positive labor force");
    if (flows(i, i) != 0.0) throw InvalidArgument("flow matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (flows(i, j) < 0.0) throw InvalidArgument("flows must be >= 0");
      if (flows(i, j) != flows(j, i)) throw InvalidArgument("flow matrix must be symmetric");
    }
  }
  if (adjacency && (adjacency->rows() != n || adjacency->cols() != n))
    throw InvalidArgument("adjacency matrix does not match the region count");
}

void Partition::normalize() {
  std::map<int, int> relabel;
  for (auto& z : zone_of) {
    auto [it, inserted] = relabel.emplace(z, static_cast<int>(relabel.size()));
    z = it->second;
  }
  zone_count = static_cast<int>(relabel.size());
}

Partition make_partition(const CommutingGraph& graph, std::vector<int> zone_of) {
  if (static_cast<Eigen::Index>(zone_of.size()) != graph.size())
    throw InvalidArgument("partition does not cover every region");
  Partition p;
  p.zone_of = std::move(zone_of);
  p.normalize();
  p.modularity = modularity(graph, p.zone_of);
  p.commuter_share = commuter_share(graph, p.zone_of);
  return p;
}

namespace {

bool smaller(const CommutingGraph& g, Eigen::Index i, Eigen::Index j) {
  return g.labor_force(i) < g.labor_force(j) || (g.labor_force(i) == g.labor_force(j) && i > j);
}

// Dominant flow restricted to active nodes.
std::optional<DominantFlow> dominant_among(const CommutingGraph& g, Eigen::Index i,
                                           const std::vector<char>& active) {
  Eigen::Index best = -1;
  double best_flow = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    if (j == i || !active[j]) continue;
    if (g.flows(i, j) > best_flow) {
      best_flow = g.flows(i, j);
      best = j;
    }
  }
  if (best < 0 || !smaller(g, i, best)) return std::nullopt;
  return DominantFlow{best, best_flow / g.labor_force(i)};
}

std::vector<double> zone_sums(const CommutingGraph& g, const std::vector<int>& zone_of,
                              double& internal_total, double& total) {
  int zones = 0;
  for (int z : zone_of) zones = std::max(zones, z + 1);
  std::vector<double> degree(static_cast<std::size_t>(zones), 0.0);
  internal_total = 0.0;
  total = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double a = g.flows(i, j);
      total += a;
      degree[zone_of[i]] += a;
      if (zone_of[i] == zone_of[j]) internal_total += a;
    }
  return degree;
}

}  // namespace

std::optional<DominantFlow> dominant_flow(const CommutingGraph& graph, Eigen::Index region) {
  graph.validate();
  if (region < 0 || region >= graph.size()) throw InvalidArgument("region index out of range");
  std::vector<char> active(static_cast<std::size_t>(graph.size()), 1);
  return dominant_among(graph, region, active);
}

MergeResult merge_pass(const CommutingGraph& graph, double threshold) {
  graph.validate();
  const auto n = graph.size();
  CommutingGraph g = graph;
  std::vector<char> active(static_cast<std::size_t>(n), 1);
  std::vector<int> owner(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) owner[i] = static_cast<int>(i);
  MergeResult result;

  while (true) {
    Eigen::Index from = -1;
    DominantFlow best;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!active[i]) continue;
      auto d = dominant_among(g, i, active);
      if (d && d->share > threshold && (from < 0 || d->share > best.share)) {
        from = i;
        best = *d;
      }
    }
    if (from < 0) break;
    const Eigen::Index into = best.partner;
    result.log.push_back({static_cast<int>(from), static_cast<int>(into), best.share});

    g.labor_force(into) += g.labor_force(from);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == into || j == from) continue;
      g.flows(into, j) += g.flows(from, j);
      g.flows(j, into) = g.flows(into, j);
    }
    g.flows.row(from).setZero();
    g.flows.col(from).setZero();
    if (g.adjacency) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == into) continue;
        const int a = ((*g.adjacency)(into, j) != 0 || (*g.adjacency)(from, j) != 0) ? 1 : 0;
        (*g.adjacency)(into, j) = a;
        (*g.adjacency)(j, into) = a;
      }
      g.adjacency->row(from).setZero();
      g.adjacency->col(from).setZero();
    }
    active[from] = 0;
    for (auto& o : owner)
      if (o == from) o = static_cast<int>(into);
  }

  // compact the consolidated graph to active nodes
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (active[i]) keep.push_back(i);
  const auto k = static_cast<Eigen::Index>(keep.size());
  CommutingGraph c;
  c.flows.resize(k, k);
  c.labor_force.resize(k);
  if (g.adjacency) c.adjacency = Eigen::MatrixXi(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    c.labor_force(a) = g.labor_force(keep[a]);
    for (Eigen::Index b = 0; b < k; ++b) {
      c.flows(a, b) = g.flows(keep[a], keep[b]);
      if (c.adjacency) (*c.adjacency)(a, b) = (*g.adjacency)(keep[a], keep[b]);
    }
  }
  result.consolidated = std::move(c);
  result.partition = make_partition(graph, owner);
  return result;
}

double modularity(const CommutingGraph& graph, const std::vector<int>& zone_of) {
  if (static_cast<Eigen::Index>(zone_of.size()) != graph.size())
    throw InvalidArgument("partition does not cover every region");
  double internal = 0.0;
  double total = 0.0;
  const auto degree = zone_sums(graph, zone_of, internal, total);
  if (total == 0.0) return 0.0;
  double q = internal / total;
  for (double d : degree) q -= (d / total) * (d / total);
  return q;
}

double commuter_share(const CommutingGraph& graph, const std::vector<int>& zone_of) {
  if (static_cast<Eigen::Index>(zone_of.size()) != graph.size())
    throw InvalidArgument("partition does not cover every region");
  double internal = 0.0;
  double total = 0.0;
  zone_sums(graph, zone_of, internal, total);
  if (total == 0.0) return 0.0;
  return (total - internal) / total;
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw InvalidArgument("threshold grid needs step > 0 and hi >= lo");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

SweepResult sweep_thresholds(const CommutingGraph& graph, const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw InvalidArgument("threshold grid is empty");
  graph.validate();

  std::vector<Partition> partitions(thresholds.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < thresholds.size(); start += workers) {
    const std::size_t stop = std::min(thresholds.size(), start + workers);
    std::vector<std::future<Partition>> jobs;
    for (std::size_t i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async,
                                [&graph, t = thresholds[i]] { return merge_pass(graph, t).partition; }));
    for (std::size_t i = start; i < stop; ++i) partitions[i] = jobs[i - start].get();
  }

  SweepResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto& p = partitions[i];
    result.points.push_back({thresholds[i], p.modularity, p.zone_count, p.commuter_share});
    if (i == 0) continue;
    const auto& b = partitions[best];
    const bool better = p.modularity > b.modularity ||
                        (p.modularity == b.modularity &&
                         (p.zone_count < b.zone_count ||
                          (p.zone_count == b.zone_count && thresholds[i] < thresholds[best])));
    if (better) best = i;
  }
  result.best = partitions[best];
  result.best_threshold = thresholds[best];
  return result;
}

ContiguityResult enforce_contiguity(const CommutingGraph& graph, const Partition& partition,
                                    ContiguityMode mode) {
  ContiguityResult out{partition, {}};
  if (!graph.adjacency) {
    out.warnings.push_back("no adjacency supplied; contiguity not enforced");
    return out;
  }
  graph.validate();
  const auto n = graph.size();
  const auto& adj = *graph.adjacency;
  const auto& zone_of = partition.zone_of;

  // connected components inside each zone
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Eigen::Index>> members;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::queue<Eigen::Index> q;
    q.push(s);
    component[s] = id;
    while (!q.empty()) {
      const auto i = q.front();
      q.pop();
      members[id].push_back(i);
      for (Eigen::Index j = 0; j < n; ++j)
        if (component[j] < 0 && adj(i, j) != 0 && zone_of[j] == zone_of[i]) {
          component[j] = id;
          q.push(j);
        }
    }
  }

  std::vector<int> next(zone_of);
  if (mode == ContiguityMode::Split) {
    for (Eigen::Index i = 0; i < n; ++i) next[i] = component[i];
  } else {
    // main component per zone: largest labor force, first found on ties
    std::map<int, int> main_of_zone;
    std::vector<double> comp_lf(members.size(), 0.0);
    for (std::size_t c = 0; c < members.size(); ++c) {
      for (auto i : members[c]) comp_lf[c] += graph.labor_force(i);
      const int z = zone_of[members[c].front()];
      auto it = main_of_zone.find(z);
      if (it == main_of_zone.end() || comp_lf[c] > comp_lf[it->second])
        main_of_zone[z] = static_cast<int>(c);
    }
    int fresh = *std::max_element(zone_of.begin(), zone_of.end()) + 1;
    for (std::size_t c = 0; c < members.size(); ++c) {
      const int z = zone_of[members[c].front()];
      if (main_of_zone[z] == static_cast<int>(c)) continue;
      std::map<int, double> flow_to_zone;
      for (auto i : members[c])
        for (Eigen::Index j = 0; j < n; ++j)
          if (adj(i, j) != 0 && zone_of[j] != z) flow_to_zone[zone_of[j]] += 0.0;
      for (auto i : members[c])
        for (Eigen::Index j = 0; j < n; ++j)
          if (auto it = flow_to_zone.find(zone_of[j]); it != flow_to_zone.end())
            it->second += graph.flows(i, j);
      int target = -1;
      double target_flow = -1.0;
      for (const auto& [zone, f] : flow_to_zone)
        if (f > target_flow) {
          target = zone;
          target_flow = f;
        }
      if (target < 0) {
        out.warnings.push_back("enclave of zone " + std::to_string(z) +
                               " has no adjacent zone; kept as its own zone");
        target = fresh++;
      }
      for (auto i : members[c]) next[i] = target;
    }
  }
  out.partition = make_partition(graph, next);
  return out;
}

}  // namespace tightlab::zones
