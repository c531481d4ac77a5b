#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rcw/oracle_stats.hpp"
#include "rcw/random.hpp"
#include "rcw/simnet.hpp"
#include "rcw/topology.hpp"

namespace rcw {

struct SpanningTree {
  NodeId root = 0;
  std::vector<std::vector<NodeId>> adjacency;  // sorted per node
  std::uint32_t diameter = 0;
};

// BFS tree rooted at a minimum-eccentricity node (lowest id on ties);
// neighbors are visited in increasing id order.
SpanningTree build_spanning_tree(const Network& net);

// Longest shortest path of a tree given by its adjacency lists.
std::uint32_t tree_diameter(const std::vector<std::vector<NodeId>>& adjacency);

struct EngineOptions {
  std::uint64_t seed = 0;
  std::uint64_t max_rounds = 0;  // 0 means 4n
  std::ostream* trace = nullptr;
};

// Spanning tree with T_i(x) for every directed tree edge (i, x): the total
// weight of the subtree hanging from x when the edge is removed.
class AggregatedTree {
 public:
  AggregatedTree(SpanningTree tree, std::vector<double> weights,
                 std::vector<std::vector<double>> aggregates, RunStats stats);

  std::size_t size() const noexcept { return weights_.size(); }
  NodeId root() const noexcept { return tree_.root; }
  std::uint32_t diameter() const noexcept { return tree_.diameter; }
  std::span<const NodeId> neighbors(NodeId i) const { return tree_.adjacency.at(i); }
  // Aggregates aligned with neighbors(i).
  std::span<const double> aggregates(NodeId i) const { return aggregates_.at(i); }
  double T(NodeId i, NodeId x) const;
  double weight(NodeId i) const { return weights_.at(i); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double eta() const noexcept { return eta_; }
  const RunStats& stats() const noexcept { return stats_; }

 private:
  SpanningTree tree_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> aggregates_;
  RunStats stats_;
  double eta_ = 0.0;
};

// Distributed weight aggregation over the tree: a node reports to neighbor y
// once it has heard from every other neighbor, so leaves start and the
// reports sweep in and back out. Uses 2(n-1) messages.
AggregatedTree aggregate_weights(const Network& net, const SpanningTree& tree,
                                 const EngineOptions& options = {});

// Convenience: build_spanning_tree + aggregate_weights.
AggregatedTree aggregate(const Network& net, const EngineOptions& options = {});

WalkResult sample(const AggregatedTree& agg, NodeId source, SplitMix64& rng);
// Throws DegenerateNetwork if the network has a single node.
WalkResult sample_excluding_source(const AggregatedTree& agg, NodeId source, SplitMix64& rng);

// Exact law by propagating visit probabilities outward from the source.
std::vector<double> walk_oracle(const AggregatedTree& agg, NodeId source, bool exclude_source);

// Stay and hop probabilities of the walk from `source`, for dag_oracle.
WalkModel walk_model(const AggregatedTree& agg, NodeId source, bool exclude_source);

}  // namespace rcw
