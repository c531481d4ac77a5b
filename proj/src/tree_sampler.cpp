#include "rcw/tree_sampler.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <string>

namespace rcw {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> bfs(const std::vector<std::vector<NodeId>>& adj, NodeId from) {
  std::vector<std::uint32_t> dist(adj.size(), kUnreached);
  std::deque<NodeId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : adj[x]) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

// Parent of every node in the tree rooted at `source`; the source maps to itself.
std::vector<NodeId> parents_from(const AggregatedTree& agg, NodeId source,
                                 std::vector<NodeId>* order) {
  std::vector<NodeId> parent(agg.size(), std::numeric_limits<NodeId>::max());
  parent[source] = source;
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    if (order) order->push_back(x);
    for (NodeId y : agg.neighbors(x)) {
      if (parent[y] == std::numeric_limits<NodeId>::max()) {
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  return parent;
}

struct WeightMsg {
  double sum;
};

class AggregationTask final : public NodeTask<WeightMsg> {
 public:
  AggregationTask(std::span<const NodeId> neighbors, double weight)
      : neighbors_(neighbors.begin(), neighbors.end()),
        received_(neighbors.size(), -1.0),
        sent_(neighbors.size(), false),
        weight_(weight) {}

  void on_start(Outbox<WeightMsg>& out) override { flush(out); }

  void on_message(const Envelope<WeightMsg>& m, Outbox<WeightMsg>& out) override {
    const auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), m.src);
    const auto idx = static_cast<std::size_t>(it - neighbors_.begin());
    if (received_[idx] < 0.0) ++heard_;
    received_[idx] = m.payload.sum;
    flush(out);
  }

  const std::vector<double>& received() const noexcept { return received_; }

 private:
  // Report to y once every neighbor other than y has reported here.
  void flush(Outbox<WeightMsg>& out) {
    const std::size_t deg = neighbors_.size();
    for (std::size_t idx = 0; idx < deg; ++idx) {
      if (sent_[idx]) continue;
      const bool ready = heard_ == deg || (heard_ + 1 == deg && received_[idx] < 0.0);
      if (!ready) continue;
      double sum = weight_;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != idx) sum += received_[j];
      }
      sent_[idx] = true;
      out.send(neighbors_[idx], WeightMsg{sum});
    }
  }

  std::vector<NodeId> neighbors_;
  std::vector<double> received_;
  std::vector<bool> sent_;
  std::size_t heard_ = 0;
  double weight_;
};

WalkResult walk(const AggregatedTree& agg, NodeId source, SplitMix64& rng, bool exclude_source) {
  if (source >= agg.size()) fail(ErrorCode::InvalidArgument, "source out of range");
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  NodeId current = source, from = kNone;
  std::uint32_t hops = 0;
  for (;;) {
    const auto nbrs = agg.neighbors(current);
    const auto T = agg.aggregates(current);
    double outward = 0.0;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
      if (nbrs[idx] != from) outward += T[idx];
    }
    const double w = agg.weight(current);
    const double q = (exclude_source && current == source) ? 0.0 : w / (w + outward);
    if (outward <= 0.0 || rng.bernoulli(q)) return {current, hops};
    double u = rng.uniform() * outward;
    NodeId next = kNone;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
      if (nbrs[idx] == from) continue;
      next = nbrs[idx];
      if (u < T[idx]) break;
      u -= T[idx];
    }
    from = current;
    current = next;
    ++hops;
  }
}

}  // namespace

std::uint32_t tree_diameter(const std::vector<std::vector<NodeId>>& adjacency) {
  if (adjacency.empty()) return 0;
  auto d0 = bfs(adjacency, 0);
  const auto far = static_cast<NodeId>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  const auto d1 = bfs(adjacency, far);
  return *std::max_element(d1.begin(), d1.end());
}

SpanningTree build_spanning_tree(const Network& net) {
  const auto& adj = net.adjacency();
  const std::size_t n = adj.size();
  NodeId root = 0;
  std::uint32_t best = kUnreached;
  for (NodeId x = 0; x < n; ++x) {
    const auto d = bfs(adj, x);
    const auto ecc = *std::max_element(d.begin(), d.end());
    if (ecc < best) {
      best = ecc;
      root = x;
    }
  }

  SpanningTree tree;
  tree.root = root;
  tree.adjacency.assign(n, {});
  std::vector<char> seen(n, 0);
  std::deque<NodeId> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : adj[x]) {  // already sorted
      if (seen[y]) continue;
      seen[y] = 1;
      tree.adjacency[x].push_back(y);
      tree.adjacency[y].push_back(x);
      queue.push_back(y);
    }
  }
  for (auto& list : tree.adjacency) std::sort(list.begin(), list.end());
  tree.diameter = tree_diameter(tree.adjacency);
  return tree;
}

AggregatedTree::AggregatedTree(SpanningTree tree, std::vector<double> weights,
                               std::vector<std::vector<double>> aggregates, RunStats stats)
    : tree_(std::move(tree)),
      weights_(std::move(weights)),
      aggregates_(std::move(aggregates)),
      stats_(stats) {
  for (double w : weights_) eta_ += w;
}

double AggregatedTree::T(NodeId i, NodeId x) const {
  const auto& nbrs = tree_.adjacency.at(i);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), x);
  if (it == nbrs.end() || *it != x) {
    fail(ErrorCode::InvalidArgument,
         "nodes " + std::to_string(i) + " and " + std::to_string(x) + " are not tree neighbors");
  }
  return aggregates_[i][static_cast<std::size_t>(it - nbrs.begin())];
}

AggregatedTree aggregate_weights(const Network& net, const SpanningTree& tree,
                                 const EngineOptions& options) {
  const std::size_t n = net.size();
  if (tree.adjacency.size() != n) fail(ErrorCode::InvalidArgument, "tree does not span the network");
  std::size_t half_edges = 0;
  for (NodeId x = 0; x < n; ++x) {
    for (NodeId y : tree.adjacency[x]) {
      if (!net.adjacent(x, y)) fail(ErrorCode::InvalidArgument, "tree edge not in the network");
    }
    half_edges += tree.adjacency[x].size();
  }
  if (half_edges != 2 * (n - 1)) fail(ErrorCode::InvalidArgument, "tree does not span the network");

  SimEngine<WeightMsg> engine(tree.adjacency, options.seed);
  for (NodeId x = 0; x < n; ++x) {
    engine.set_task(x, std::make_unique<AggregationTask>(tree.adjacency[x], net.weight(x)));
  }
  if (options.trace) {
    engine.set_trace(options.trace, [](const WeightMsg&) { return std::string_view("WEIGHT"); });
  }
  const std::uint64_t limit = options.max_rounds ? options.max_rounds : 4 * n;
  const RunStats stats = engine.run_until_quiescent(limit);

  std::vector<std::vector<double>> aggregates(n);
  for (NodeId x = 0; x < n; ++x) {
    aggregates[x] = static_cast<const AggregationTask&>(engine.task(x)).received();
  }
  return AggregatedTree(tree, net.weights(), std::move(aggregates), stats);
}

AggregatedTree aggregate(const Network& net, const EngineOptions& options) {
  return aggregate_weights(net, build_spanning_tree(net), options);
}

WalkResult sample(const AggregatedTree& agg, NodeId source, SplitMix64& rng) {
  return walk(agg, source, rng, false);
}

WalkResult sample_excluding_source(const AggregatedTree& agg, NodeId source, SplitMix64& rng) {
  if (agg.size() < 2) fail(ErrorCode::DegenerateNetwork, "cannot exclude the only node");
  return walk(agg, source, rng, true);
}

std::vector<double> walk_oracle(const AggregatedTree& agg, NodeId source, bool exclude_source) {
  if (source >= agg.size()) fail(ErrorCode::InvalidArgument, "source out of range");
  if (exclude_source && agg.size() < 2) fail(ErrorCode::DegenerateNetwork, "cannot exclude the only node");
  std::vector<NodeId> order;
  const auto parent = parents_from(agg, source, &order);
  const std::size_t n = agg.size();
  std::vector<double> visit(n, 0.0), law(n, 0.0), stay(n, 0.0);
  visit[source] = 1.0;
  // order is BFS, so every parent is finished before its children.
  for (NodeId x : order) {
    // Weight beyond x, seen from where the walk arrived.
    const double beyond = x == source ? agg.eta() : agg.T(parent[x], x);
    const double outward = beyond - agg.weight(x);
    const double q = (exclude_source && x == source) ? 0.0 : agg.weight(x) / beyond;
    law[x] = visit[x] * q;
    if (outward <= 0.0) continue;
    for (NodeId y : agg.neighbors(x)) {
      if (y == parent[x] && x != source) continue;
      visit[y] = visit[x] * (1.0 - q) * agg.T(x, y) / outward;
    }
  }
  return law;
}

WalkModel walk_model(const AggregatedTree& agg, NodeId source, bool exclude_source) {
  if (source >= agg.size()) fail(ErrorCode::InvalidArgument, "source out of range");
  const auto parent = parents_from(agg, source, nullptr);
  const std::size_t n = agg.size();
  WalkModel model;
  model.source = source;
  model.stay.assign(n, 1.0);
  model.hops.assign(n, {});
  for (NodeId x = 0; x < n; ++x) {
    const auto nbrs = agg.neighbors(x);
    const auto T = agg.aggregates(x);
    double outward = 0.0;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
      if (x == source || nbrs[idx] != parent[x]) outward += T[idx];
    }
    const double w = agg.weight(x);
    model.stay[x] = (exclude_source && x == source) ? 0.0 : w / (w + outward);
    if (outward <= 0.0) {
      model.stay[x] = 1.0;
      continue;
    }
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
      if (x != source && nbrs[idx] == parent[x]) continue;
      model.hops[x].push_back({nbrs[idx], T[idx] / outward});
    }
  }
  return model;
}

}  // namespace rcw
