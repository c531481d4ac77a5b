#include "rcw/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <string>

#include "rcw/random.hpp"

namespace rcw {

namespace {

void sort_unique_or_throw(std::vector<NodeId>& list, NodeId owner) {
  std::sort(list.begin(), list.end());
  if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
    fail(ErrorCode::InvalidArgument, "duplicate edge at node " + std::to_string(owner));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Network

Network::Network(std::size_t node_count, std::span<const Edge> edges,
                 std::vector<double> weights)
    : adjacency_(node_count), weights_(std::move(weights)), edge_count_(edges.size()) {
  if (node_count == 0) fail(ErrorCode::InvalidArgument, "network has no nodes");
  if (weights_.empty()) weights_.assign(node_count, 1.0);
  if (weights_.size() != node_count) {
    fail(ErrorCode::InvalidArgument, "weight count does not match node count");
  }
  for (std::size_t x = 0; x < node_count; ++x) {
    if (!(weights_[x] > 0.0) || !std::isfinite(weights_[x])) {
      fail(ErrorCode::InvalidArgument, "weight of node " + std::to_string(x) + " is not positive");
    }
  }
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (u == v) fail(ErrorCode::InvalidArgument, "self-loop at node " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (std::size_t x = 0; x < node_count; ++x) {
    sort_unique_or_throw(adjacency_[x], static_cast<NodeId>(x));
  }
  const auto dist = distances_from(0);
  if (std::find(dist.begin(), dist.end(), UINT32_MAX) != dist.end()) {
    fail(ErrorCode::NotConnected, "network is not connected");
  }
}

bool Network::adjacent(NodeId x, NodeId y) const {
  const auto& adj = adjacency_.at(x);
  return std::binary_search(adj.begin(), adj.end(), y);
}

std::vector<std::uint32_t> Network::distances_from(NodeId source) const {
  std::vector<std::uint32_t> dist(size(), UINT32_MAX);
  std::queue<NodeId> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId x = frontier.front();
    frontier.pop();
    for (NodeId y : adjacency_[x]) {
      if (dist[y] == UINT32_MAX) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// RingNetwork

RingNetwork::RingNetwork(std::vector<std::size_t> ring_sizes, std::span<const Edge> edges,
                         std::span<const Edge> edges2, bool with_distance2)
    : sizes_(std::move(ring_sizes)) {
  if (sizes_.empty() || sizes_[0] != 1) {
    fail(ErrorCode::InvalidArgument, "ring 0 must contain exactly the source");
  }
  offsets_.assign(1, 0);
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    if (sizes_[k] == 0) fail(ErrorCode::InvalidArgument, "ring " + std::to_string(k) + " is empty");
    offsets_.push_back(offsets_.back() + sizes_[k]);
    for (std::size_t i = 0; i < sizes_[k]; ++i) ring_of_.push_back(static_cast<std::uint32_t>(k));
  }
  const std::size_t n = ring_of_.size();
  up_.resize(n);
  down_.resize(n);

  auto add = [&](const Edge& e, std::uint32_t gap, auto& ups, auto& downs) {
    const auto [lo, hi] = e;
    if (lo >= n || hi >= n || ring_of_[hi] != ring_of_[lo] + gap) {
      fail(ErrorCode::InvalidArgument, "link (" + std::to_string(lo) + "," + std::to_string(hi) +
                                           ") does not join rings " + std::to_string(gap) +
                                           " apart");
    }
    ups[lo].push_back(hi);
    downs[hi].push_back(lo);
  };
  for (const auto& e : edges) add(e, 1, up_, down_);
  if (with_distance2 || !edges2.empty()) {
    up2_.resize(n);
    down2_.resize(n);
    for (const auto& e : edges2) add(e, 2, up2_, down2_);
  }
  for (std::size_t x = 0; x < n; ++x) {
    const auto id = static_cast<NodeId>(x);
    sort_unique_or_throw(up_[x], id);
    sort_unique_or_throw(down_[x], id);
    if (!up2_.empty()) {
      sort_unique_or_throw(up2_[x], id);
      sort_unique_or_throw(down2_[x], id);
    }
    if (ring_of_[x] > 0 && down_[x].empty()) {
      fail(ErrorCode::DisconnectedRing,
           "node " + std::to_string(x) + " in ring " + std::to_string(ring_of_[x]) +
               " has no neighbor in the previous ring");
    }
  }
}

std::span<const NodeId> RingNetwork::up2(NodeId x) const {
  if (up2_.empty()) return {};
  return up2_.at(x);
}

std::span<const NodeId> RingNetwork::down2(NodeId x) const {
  if (down2_.empty()) return {};
  return down2_.at(x);
}

Network RingNetwork::to_network() const {
  std::vector<Edge> edges;
  for (NodeId x = 0; x < node_count(); ++x) {
    for (NodeId y : up_[x]) edges.emplace_back(x, y);
  }
  return Network(node_count(), edges);
}

std::vector<std::vector<NodeId>> RingNetwork::link_lists() const {
  std::vector<std::vector<NodeId>> links(node_count());
  for (NodeId x = 0; x < node_count(); ++x) {
    links[x].assign(down_[x].begin(), down_[x].end());
    links[x].insert(links[x].end(), up_[x].begin(), up_[x].end());
    std::sort(links[x].begin(), links[x].end());
  }
  return links;
}

// ---------------------------------------------------------------------------
// Grid

namespace {

// Position t of ring k, walking counter-clockwise from (k, 0).
GridCoord grid_position(int k, int t) {
  if (k == 0) return {0, 0};
  const int quadrant = t / k;
  const int o = t % k;
  switch (quadrant) {
    case 0: return {k - o, o};
    case 1: return {-o, k - o};
    case 2: return {-(k - o), -o};
    default: return {o, -(k - o)};
  }
}

}  // namespace

std::int64_t grid_node_id(GridCoord c, int radius) noexcept {
  const int k = std::abs(c.i) + std::abs(c.j);
  if (k > radius) return -1;
  if (k == 0) return 0;
  int t;
  if (c.i > 0 && c.j >= 0) {
    t = c.j;
  } else if (c.i <= 0 && c.j > 0) {
    t = k - c.i;
  } else if (c.i < 0 && c.j <= 0) {
    t = 2 * k + (-c.j);
  } else {
    t = 3 * k + c.i;
  }
  return 1 + 2 * static_cast<std::int64_t>(k) * (k - 1) + t;
}

RingNetwork build_grid(GridSpec spec) {
  const int radius = spec.radius;
  if (radius < 1) fail(ErrorCode::InvalidArgument, "grid radius must be >= 1");
  std::vector<std::size_t> sizes(static_cast<std::size_t>(radius) + 1);
  sizes[0] = 1;
  for (int k = 1; k <= radius; ++k) sizes[k] = 4 * static_cast<std::size_t>(k);

  std::vector<GridCoord> coords;
  for (int k = 0; k <= radius; ++k) {
    const int count = k == 0 ? 1 : 4 * k;
    for (int t = 0; t < count; ++t) coords.push_back(grid_position(k, t));
  }

  std::vector<Edge> edges;
  static constexpr int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (NodeId x = 0; x < coords.size(); ++x) {
    const GridCoord c = coords[x];
    const int k = std::abs(c.i) + std::abs(c.j);
    if (k == radius) continue;
    for (const auto& step : kSteps) {
      const GridCoord d{c.i + step[0], c.j + step[1]};
      if (std::abs(d.i) + std::abs(d.j) == k + 1) {
        edges.emplace_back(x, static_cast<NodeId>(grid_node_id(d, radius)));
      }
    }
  }
  RingNetwork net(std::move(sizes), edges);
  net.coords_ = std::move(coords);
  return net;
}

// ---------------------------------------------------------------------------
// Uniform rings

RingNetwork build_uniform_rings(std::span<const std::size_t> ring_sizes,
                                std::span<const std::size_t> delta,
                                std::span<const std::size_t> gamma, bool distance2) {
  if (ring_sizes.empty()) fail(ErrorCode::InvalidArgument, "no rings given");
  const std::size_t radius = ring_sizes.size() - 1;
  if (delta.size() != radius) {
    fail(ErrorCode::InvalidArgument, "delta needs one entry per ring 0..R-1");
  }
  if (gamma.size() != radius && gamma.size() != radius + 1) {
    fail(ErrorCode::InvalidArgument, "gamma needs entries for rings 1..R");
  }
  const std::size_t gamma_shift = gamma.size() == radius + 1 ? 0 : 1;
  auto gamma_of = [&](std::size_t k) { return gamma[k - gamma_shift]; };

  std::vector<std::size_t> offsets{0};
  for (std::size_t n : ring_sizes) offsets.push_back(offsets.back() + n);

  std::vector<Edge> edges;
  for (std::size_t k = 1; k <= radius; ++k) {
    const std::size_t lower = ring_sizes[k - 1], upper = ring_sizes[k];
    const std::size_t d = delta[k - 1], g = gamma_of(k);
    if (g < 1) fail(ErrorCode::InvalidArgument, "gamma_" + std::to_string(k) + " must be >= 1");
    if (lower * d != upper * g) {
      fail(ErrorCode::InconsistentDegrees,
           "n_" + std::to_string(k - 1) + "*delta_" + std::to_string(k - 1) + " = " +
               std::to_string(lower * d) + " but n_" + std::to_string(k) + "*gamma_" +
               std::to_string(k) + " = " + std::to_string(upper * g));
    }
    if (d > upper) {
      fail(ErrorCode::InvalidArgument, "delta_" + std::to_string(k - 1) + " exceeds ring size");
    }
    for (std::size_t j = 0; j < lower; ++j) {
      for (std::size_t t = 0; t < d; ++t) {
        edges.emplace_back(static_cast<NodeId>(offsets[k - 1] + j),
                           static_cast<NodeId>(offsets[k] + (j * d + t) % upper));
      }
    }
  }
  std::vector<std::size_t> sizes(ring_sizes.begin(), ring_sizes.end());
  if (!distance2) return RingNetwork(std::move(sizes), edges);

  // Compose two consecutive layers (no distance-2 links from the source).
  const RingNetwork base(sizes, edges);
  std::vector<Edge> edges2;
  for (std::size_t k = 1; k + 2 <= radius; ++k) {
    std::size_t expected = 0;
    for (NodeId x = base.ring_begin(k); x < base.ring_end(k); ++x) {
      std::vector<NodeId> targets;
      for (NodeId y : base.up(x)) {
        targets.insert(targets.end(), base.up(y).begin(), base.up(y).end());
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      if (x == base.ring_begin(k)) expected = targets.size();
      if (targets.size() != expected) {
        fail(ErrorCode::NotUniformlyConnected,
             "distance-2 out-degree varies in ring " + std::to_string(k));
      }
      for (NodeId z : targets) edges2.emplace_back(x, z);
    }
  }
  // With R < 3 the distance-2 layer exists but is empty.
  RingNetwork net(std::move(sizes), edges, edges2, true);
  if (!check_uniform_connectivity_d2(net)) {
    fail(ErrorCode::NotUniformlyConnected, "distance-2 in-degree varies within a ring");
  }
  return net;
}

// ---------------------------------------------------------------------------
// Geometric deployment

double angular_distance(double a, double b) noexcept {
  const double d = std::fabs(a - b);
  return std::min(d, 360.0 - d);
}

RingNetwork build_geometric(const GeometricDeployment& dep) {
  if (dep.rings < 1 || dep.per_ring < 1) {
    fail(ErrorCode::InvalidArgument, "geometric deployment needs rings >= 1 and per_ring >= 1");
  }
  if (!(dep.beta > 0.0 && dep.beta <= 360.0)) {
    fail(ErrorCode::InvalidArgument, "beta must be in (0, 360]");
  }
  const std::size_t R = dep.rings, n = dep.per_ring;
  std::vector<std::size_t> sizes(R + 1, n);
  sizes[0] = 1;

  std::vector<double> angles(1 + R * n, 0.0);
  for (std::size_t k = 1; k <= R; ++k) {
    SplitMix64 rng = stream(dep.seed, k);
    for (std::size_t i = 0; i < n; ++i) angles[1 + (k - 1) * n + i] = rng.uniform() * 360.0;
  }

  const double half = dep.beta / 2.0;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(0, static_cast<NodeId>(1 + i));
  std::vector<std::size_t> up_count(angles.size(), 0), down_count(angles.size(), 0);
  for (std::size_t k = 1; k < R; ++k) {
    const std::size_t lo = 1 + (k - 1) * n, hi = 1 + k * n;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (angular_distance(angles[lo + a], angles[hi + b]) <= half) {
          edges.emplace_back(static_cast<NodeId>(lo + a), static_cast<NodeId>(hi + b));
          ++up_count[lo + a];
          ++down_count[hi + b];
        }
      }
    }
  }
  for (std::size_t x = 1; x < angles.size(); ++x) {
    const std::size_t k = 1 + (x - 1) / n;
    if ((k < R && up_count[x] == 0) || (k > 1 && down_count[x] == 0)) {
      fail(ErrorCode::DisconnectedRing,
           "node " + std::to_string(x) + " in ring " + std::to_string(k) +
               " lacks a neighbor in an adjacent ring");
    }
  }
  RingNetwork net(std::move(sizes), edges);
  net.angles_ = std::move(angles);
  return net;
}

// ---------------------------------------------------------------------------

bool check_uniform_connectivity(const RingNetwork& net) {
  for (std::size_t k = 0; k < net.ring_count(); ++k) {
    const NodeId first = net.ring_begin(k);
    for (NodeId x = first + 1; x < net.ring_end(k); ++x) {
      if (net.delta(x) != net.delta(first) || net.gamma(x) != net.gamma(first)) return false;
    }
  }
  return true;
}

bool check_uniform_connectivity_d2(const RingNetwork& net) {
  if (!net.has_distance2()) return false;
  for (std::size_t k = 1; k < net.ring_count(); ++k) {
    const NodeId first = net.ring_begin(k);
    for (NodeId x = first + 1; x < net.ring_end(k); ++x) {
      if (net.up2(x).size() != net.up2(first).size() ||
          net.down2(x).size() != net.down2(first).size()) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace rcw
