#include <doctest.h>

#include <functional>
#include <map>

#include "rcw/oracle_stats.hpp"
#include "rcw/tree_sampler.hpp"
#include "test_util.hpp"

using namespace rcw;

namespace {

// Subtree weight beyond x when the edge (i, x) is cut, by plain DFS.
double brute_T(const SpanningTree& tree, const std::vector<double>& w, NodeId i, NodeId x) {
  double sum = 0.0;
  std::function<void(NodeId, NodeId)> dfs = [&](NodeId u, NodeId from) {
    sum += w[u];
    for (NodeId v : tree.adjacency[u]) {
      if (v != from) dfs(v, u);
    }
  };
  dfs(x, i);
  return sum;
}

}  // namespace

TEST_CASE("spanning tree examples") {
  const auto path = build_spanning_tree(testing::path_graph(3));
  CHECK(path.root == 1);
  CHECK(path.diameter == 2);

  // Every spanning tree of the 4-cycle is a path: root eccentricity 2, diameter 3.
  const std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const auto cyc = build_spanning_tree(Network(4, c4));
  CHECK(cyc.root == 0);
  CHECK(cyc.diameter == 3);
  const auto d = Network(4, c4).distances_from(0);
  CHECK(*std::max_element(d.begin(), d.end()) == 2);

  const auto star = build_spanning_tree(testing::star_graph(6));
  CHECK(star.root == 0);
  CHECK(star.diameter == 2);
}

TEST_CASE("aggregation examples") {
  const auto net = testing::path_graph(3, {1.0, 2.0, 3.0});
  const auto agg = aggregate(net);
  CHECK(agg.T(1, 0) == 1.0);
  CHECK(agg.T(1, 2) == 3.0);
  CHECK(agg.T(0, 1) == 5.0);
  CHECK(agg.T(2, 1) == 3.0);
  CHECK(agg.stats().messages == 4);

  const auto star = aggregate(testing::star_graph(4));
  for (NodeId leaf = 1; leaf <= 4; ++leaf) {
    CHECK(star.T(0, leaf) == 1.0);
    CHECK(star.T(leaf, 0) == 4.0);
  }
  CHECK_THROWS(agg.T(0, 2));
}

TEST_CASE("aggregates equal brute-force subtree sums") {
  SplitMix64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.below(60);
    const auto net = testing::random_connected(n, rng.below(n), rng);
    const auto tree = build_spanning_tree(net);
    const auto agg = aggregate_weights(net, tree, {static_cast<std::uint64_t>(t), 0, nullptr});
    CHECK(agg.stats().messages == 2 * (n - 1));
    CHECK(agg.stats().rounds <= tree.diameter);
    for (NodeId i = 0; i < n; ++i) {
      double total = net.weight(i);
      for (NodeId x : agg.neighbors(i)) {
        CHECK(agg.T(i, x) == doctest::Approx(brute_T(tree, net.weights(), i, x)).epsilon(1e-12));
        total += agg.T(i, x);
      }
      CHECK(total == doctest::Approx(agg.eta()).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree diameter by double BFS agrees with all-pairs") {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng.below(40);
    const auto net = testing::random_connected(n, 0, rng);
    std::uint32_t best = 0;
    for (NodeId x = 0; x < n; ++x) {
      const auto d = net.distances_from(x);
      best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    CHECK(tree_diameter(net.adjacency()) == best);
  }
}

TEST_CASE("sampling examples") {
  const std::vector<Edge> none;
  const auto single = aggregate(Network(1, none));
  SplitMix64 rng(1);
  const auto r = sample(single, 0, rng);
  CHECK(r.node == 0);
  CHECK(r.hops == 0);
  CHECK_THROWS(sample_excluding_source(single, 0, rng));

  const auto ab = aggregate(testing::path_graph(2));
  for (int i = 0; i < 50; ++i) CHECK(sample_excluding_source(ab, 0, rng).node == 1);

  const auto path = aggregate(testing::path_graph(3));
  const auto model = walk_model(path, 0, false);
  CHECK(model.stay[0] == doctest::Approx(1.0 / 3));
  CHECK(model.stay[1] == doctest::Approx(0.5));
  CHECK(model.stay[2] == doctest::Approx(1.0));
  REQUIRE(model.hops[0].size() == 1);
  CHECK(model.hops[0][0].probability == doctest::Approx(1.0));
  for (double p : walk_oracle(path, 0, false)) CHECK(p == doctest::Approx(1.0 / 3));

  const auto star = aggregate(testing::star_graph(4));
  const auto law = walk_oracle(star, 0, true);
  CHECK(law[0] == 0.0);
  for (NodeId leaf = 1; leaf <= 4; ++leaf) CHECK(law[leaf] == doctest::Approx(0.25));
}

TEST_CASE("walk oracle matches the weight law and the DAG oracle") {
  SplitMix64 rng(8);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 2 + rng.below(40);
    const auto net = testing::random_connected(n, rng.below(2 * n), rng);
    const auto agg = aggregate(net);
    const WeightDistribution wd = WeightDistribution::of(net);
    const NodeId s = static_cast<NodeId>(rng.below(n));
    for (bool excl : {false, true}) {
      const auto law = walk_oracle(agg, s, excl);
      const auto target = wd.law(excl ? std::optional<NodeId>(s) : std::nullopt);
      const auto dag = dag_oracle(walk_model(agg, s, excl));
      for (NodeId x = 0; x < n; ++x) {
        CHECK(std::abs(law[x] - target[x]) <= 1e-12);
        CHECK(std::abs(dag.probability[x] - target[x]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("empirical draws follow the law and respect the diameter") {
  SplitMix64 rng(31);
  const auto net = testing::random_connected(25, 10, rng);
  const auto agg = aggregate(net);
  const auto law = walk_oracle(agg, 3, false);
  std::vector<std::uint64_t> counts(net.size(), 0);
  for (int i = 0; i < 200000; ++i) {
    const auto r = sample(agg, 3, rng);
    ++counts[r.node];
    CHECK_MESSAGE(r.hops <= agg.diameter(), "hop bound");
  }
  CHECK(chi_square(counts, law).p_value > 0.001);
}
