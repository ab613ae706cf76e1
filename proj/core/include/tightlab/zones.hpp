#pragma once

// Functional commuting-zone delineation.
//
// Regions are merged along their dominant bidirectional commuting flow when the flow,
// as a share of the smaller region's resident labor force, exceeds a threshold. A sweep
// over thresholds picks the partition with the highest Newman-Girvan modularity of the
// original region graph. An optional adjacency matrix enforces spatial contiguity.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace tightlab::zones {

struct CommutingGraph {
  Eigen::MatrixXd flows;        // symmetric bidirectional flows (i,j) = workers i->j + j->i
  Eigen::VectorXd labor_force;  // resident labor force, > 0
  std::optional<Eigen::MatrixXi> adjacency;  // 1 where regions share a border

  // From directed counts; the diagonal is ignored.
  static CommutingGraph from_directed(const Eigen::MatrixXd& directed, Eigen::VectorXd labor_force);

  Eigen::Index size() const noexcept { return labor_force.size(); }
  void validate() const;
};

struct Partition {
  std::vector<int> zone_of;  // region -> zone, zones numbered 0..zone_count-1
  int zone_count = 0;
  double modularity = 0.0;
  double commuter_share = 0.0;

  // Relabels zones in order of first appearance.
  void normalize();
};

// Fills zone_count, modularity and commuter_share from zone_of.
Partition make_partition(const CommutingGraph& graph, std::vector<int> zone_of);

struct DominantFlow {
  Eigen::Index partner = -1;
  double share = 0.0;
};

// Partner with the largest flow share relative to the region's labor force. Returned only
// when the region is smaller than that partner (equal sizes: the higher index is smaller).
std::optional<DominantFlow> dominant_flow(const CommutingGraph& graph, Eigen::Index region);

struct MergeStep {
  int from_zone = 0;  // indices into the consolidated graph at the time of the merge
  int into_zone = 0;
  double share = 0.0;
};

struct MergeResult {
  Partition partition;            // over the original regions
  CommutingGraph consolidated;    // one node per zone
  std::vector<MergeStep> log;
};

// Repeatedly merges the region with the highest qualifying dominant-flow share (> threshold),
// re-deriving shares after every merger, until none qualifies.
MergeResult merge_pass(const CommutingGraph& graph, double threshold);

// Q = sum_c (e_cc - a_c^2) on the undirected flow graph.
double modularity(const CommutingGraph& graph, const std::vector<int>& zone_of);

// Between-zone flow mass over total flow mass.
double commuter_share(const CommutingGraph& graph, const std::vector<int>& zone_of);

struct SweepPoint {
  double threshold = 0.0;
  double modularity = 0.0;
  int zone_count = 0;
  double commuter_share = 0.0;
};

struct SweepResult {
  Partition best;
  double best_threshold = 0.0;
  std::vector<SweepPoint> points;
};

// Runs merge_pass per threshold and keeps the highest-Q partition; ties go to fewer zones,
// then to the lower threshold. Throws InvalidArgument on an empty grid.
SweepResult sweep_thresholds(const CommutingGraph& graph, const std::vector<double>& thresholds);

// Inclusive grid lo, lo+step, ..., <= hi.
std::vector<double> threshold_grid(double lo, double hi, double step);

enum class ContiguityMode { Split, Attach };

struct ContiguityResult {
  Partition partition;
  std::vector<std::string> warnings;
};

// Split: every non-contiguous zone becomes one zone per connected component.
// Attach: the component with the largest labor force keeps the zone; every other
// component joins the adjacent zone it exchanges the most commuters with.
ContiguityResult enforce_contiguity(const CommutingGraph& graph, const Partition& partition,
                                    ContiguityMode mode);

}  // namespace tightlab::zones
