#pragma once

// Shared fixtures: small synthetic datasets with known coefficients and scratch directories.

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tightlab/dataset.hpp"
#include "tightlab/market_sim.hpp"

namespace tightlab::testing {

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

// Panel of `units` x `periods` with keys unit, period, cluster (unit / cluster_size) and columns
//   z1, z2    independent instruments
//   c         exogenous control
//   x1 = z1 + 0.5 z2 + 0.3 c + e1 + v,  x2 = 0.4 z1 + z2 + e2 - v
//   y  = b1 x1 + b2 x2 + 0.7 c + unit effect + period effect + v + u
// so OLS is biased through v and 2SLS is consistent.
struct IvPanel {
  est::Dataset data;
  double b1 = 0.0;
  double b2 = 0.0;
};
IvPanel make_iv_panel(std::size_t units, std::size_t periods, std::uint64_t seed,
                      double b1 = -0.7, double b2 = -0.05, std::size_t cluster_size = 5);

// Default synthetic economy shrunk for fast unit tests.
sim::EconomyConfig small_economy(std::uint64_t seed = 7);

// Two planted communities of `half` regions each: dense flows inside, a trickle across.
struct PlantedGraph {
  Eigen::MatrixXd directed;
  Eigen::VectorXd labor_force;
  std::vector<int> truth;
};
PlantedGraph planted_two_communities(int half, std::uint64_t seed);

}  // namespace tightlab::testing
