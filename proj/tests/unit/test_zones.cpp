#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tightlab/error.hpp"
#include "tightlab/zones.hpp"

using namespace tightlab;
using namespace tightlab::zones;

namespace {

// Q = sum_ij [A_ij / 2m - k_i k_j / (2m)^2] delta(c_i, c_j)
double brute_force_q(const CommutingGraph& g, const std::vector<int>& zone_of) {
  const auto n = g.size();
  const double two_m = g.flows.sum();
  const Eigen::VectorXd k = g.flows.rowwise().sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (zone_of[i] == zone_of[j]) q += g.flows(i, j) / two_m - k(i) * k(j) / (two_m * two_m);
  return q;
}

CommutingGraph random_graph(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd d(n, n);
  Eigen::VectorXd lf(n);
  for (int i = 0; i < n; ++i) {
    lf(i) = 1000.0 + 9000.0 * u(rng);
    for (int j = 0; j < n; ++j) d(i, j) = u(rng) < 0.4 ? 500.0 * u(rng) : 0.0;
  }
  return CommutingGraph::from_directed(d, lf);
}

}  // namespace

TEST_SUITE("zones") {

TEST_CASE("directed counts become symmetric bidirectional flows") {
  Eigen::Matrix3d d{{5, 1, 2}, {3, 5, 0}, {0, 4, 5}};
  const auto g = CommutingGraph::from_directed(d, Eigen::Vector3d(10, 10, 10));
  CHECK(g.flows(0, 1) == 4.0);
  CHECK(g.flows(1, 0) == 4.0);
  CHECK(g.flows(1, 2) == 4.0);
  CHECK(g.flows.diagonal().isZero());
}

TEST_CASE("oracle: dominant flow goes from the smaller region only") {
  Eigen::Matrix3d d{{0, 30, 5}, {0, 0, 0}, {0, 0, 0}};
  const auto g = CommutingGraph::from_directed(d, Eigen::Vector3d(100, 1000, 50));
  const auto d0 = dominant_flow(g, 0);
  REQUIRE(d0.has_value());
  CHECK(d0->partner == 1);
  CHECK(d0->share == doctest::Approx(0.3));
  CHECK_FALSE(dominant_flow(g, 1).has_value());
  // equal labor force: the higher index counts as smaller
  const auto tie = CommutingGraph::from_directed(Eigen::Matrix2d{{0, 10}, {0, 0}}, Eigen::Vector2d(100, 100));
  CHECK_FALSE(dominant_flow(tie, 0).has_value());
  CHECK(dominant_flow(tie, 1)->partner == 0);
}

TEST_CASE("merge pass re-derives shares after each merger") {
  // 2 -> 1 qualifies first (0.4); merged node 1 then holds flow 0.15 of region 0's 100.
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(2, 1) = 40;
  d(0, 1) = 5;
  d(0, 2) = 10;
  d(3, 0) = 1;
  const auto g = CommutingGraph::from_directed(d, Eigen::Vector4d(100, 1000, 100, 500));
  const auto res = merge_pass(g, 0.12);
  REQUIRE(res.log.size() == 2);
  CHECK(res.log[0].from_zone == 2);
  CHECK(res.log[0].into_zone == 1);
  CHECK(res.log[1].from_zone == 0);
  CHECK(res.log[1].share == doctest::Approx(0.15));
  CHECK(res.partition.zone_count == 2);
  CHECK(res.partition.zone_of == std::vector<int>{0, 0, 0, 1});
  CHECK(res.consolidated.size() == 2);
  CHECK(res.consolidated.labor_force.sum() == doctest::Approx(1700));
}

TEST_CASE("oracle: all-in-one partition has zero modularity") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = random_graph(rng, 5 + rep);
    CHECK(std::abs(modularity(g, std::vector<int>(g.size(), 0))) < 1e-15);
    CHECK(commuter_share(g, std::vector<int>(g.size(), 0)) == 0.0);
  }
}

TEST_CASE("property: modularity matches the brute-force definition") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + rep % 15;
    const auto g = random_graph(rng, n);
    std::uniform_int_distribution<int> z(0, 3);
    std::vector<int> zone_of(n);
    for (auto& x : zone_of) x = z(rng);
    CHECK(std::abs(modularity(g, zone_of) - brute_force_q(g, zone_of)) < 1e-12);
  }
}

TEST_CASE("property: modularity is invariant to zone labels") {
  std::mt19937_64 rng(33);
  const auto g = random_graph(rng, 12);
  std::vector<int> a(12), b(12);
  for (int i = 0; i < 12; ++i) a[i] = i % 3, b[i] = 2 - i % 3;
  CHECK(modularity(g, a) == doctest::Approx(modularity(g, b)).epsilon(1e-14));
}

TEST_CASE("planted communities are recovered by the sweep") {
  const auto planted = testing::planted_two_communities(10, 5);
  const auto g = CommutingGraph::from_directed(planted.directed, planted.labor_force);
  const auto sweep = sweep_thresholds(g, threshold_grid(0.01, 0.50, 0.01));
  CHECK(sweep.best.zone_of == planted.truth);
  CHECK(std::abs(sweep.best.modularity - brute_force_q(g, planted.truth)) < 1e-12);
  CHECK(sweep.points.size() == 50);
}

TEST_CASE("sweep breaks ties towards fewer zones then lower thresholds") {
  // no flows at all: every threshold leaves singletons with Q = 0
  const CommutingGraph g{Eigen::MatrixXd::Zero(3, 3), Eigen::Vector3d(1, 2, 3), std::nullopt};
  const auto sweep = sweep_thresholds(g, {0.3, 0.1, 0.2});
  CHECK(sweep.best_threshold == 0.1);
  CHECK_THROWS_AS(sweep_thresholds(g, {}), InvalidArgument);
}

TEST_CASE("threshold grid is inclusive") {
  const auto grid = threshold_grid(0.01, 0.50, 0.01);
  CHECK(grid.size() == 50);
  CHECK(grid.back() == doctest::Approx(0.50));
  CHECK_THROWS_AS(threshold_grid(0.5, 0.1, 0.01), InvalidArgument);
}

TEST_CASE("contiguity: split and attach") {
  // path graph 0-1-2-3; zone {0, 2} is split by region 1
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 1) = 10;
  d(2, 1) = 20;
  d(2, 3) = 5;
  CommutingGraph g = CommutingGraph::from_directed(d, Eigen::Vector4d(100, 200, 50, 300));
  Eigen::Matrix4i adj = Eigen::Matrix4i::Zero();
  for (int i = 0; i < 3; ++i) adj(i, i + 1) = adj(i + 1, i) = 1;
  g.adjacency = adj;
  const auto p = make_partition(g, {0, 1, 0, 2});

  const auto split = enforce_contiguity(g, p, ContiguityMode::Split);
  CHECK(split.partition.zone_count == 4);

  const auto attach = enforce_contiguity(g, p, ContiguityMode::Attach);
  // region 0 keeps zone 0 (larger labor force); region 2 joins region 1's zone (flow 20 > 5)
  CHECK(attach.partition.zone_of[2] == attach.partition.zone_of[1]);
  CHECK(attach.partition.zone_of[0] != attach.partition.zone_of[1]);

  CommutingGraph no_adj = g;
  no_adj.adjacency.reset();
  CHECK(enforce_contiguity(no_adj, p, ContiguityMode::Split).warnings.size() == 1);
}

TEST_CASE("graph validation") {
  CommutingGraph g{Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d(1, 0), std::nullopt};
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g.labor_force(1) = 1;
  g.flows(0, 1) = -1;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
}

}
