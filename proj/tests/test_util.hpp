#pragma once

// Random instance generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "rcw/distributions.hpp"
#include "rcw/random.hpp"
#include "rcw/topology.hpp"

namespace rcw::testing {

// Random labelled tree (random attachment) plus `extra` random edges.
inline Network random_connected(std::size_t n, std::size_t extra, SplitMix64& rng, bool weighted = true) {
  std::vector<Edge> edges;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  auto add = [&](NodeId a, NodeId b) {
    if (a == b || has[a][b]) return;
    has[a][b] = has[b][a] = 1;
    edges.emplace_back(a, b);
  };
  // Shuffle labels so the tree shape is not tied to id order.
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(label[i - 1], label[rng.below(i)]);
  for (std::size_t i = 1; i < n; ++i) add(label[i], label[rng.below(i)]);
  for (std::size_t e = 0; e < extra && n > 1; ++e) {
    add(static_cast<NodeId>(rng.below(n)), static_cast<NodeId>(rng.below(n)));
  }
  std::vector<double> w(n, 1.0);
  if (weighted) {
    // Uniform on (0, 10].
    for (auto& x : w) x = 10.0 * (1.0 - rng.uniform());
  }
  return Network(n, edges, std::move(w));
}

inline Network path_graph(std::size_t n, std::vector<double> w = {}) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  return Network(n, edges, std::move(w));
}

inline Network star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
  return Network(leaves + 1, edges);
}

struct RingsSpec {
  std::vector<std::size_t> sizes, delta, gamma;
};

// Sizes n_1..n_R in [1, max_size]; per consecutive pair the edge count is a
// random multiple of lcm(n_{k-1}, n_k) not exceeding n_{k-1} n_k.
inline RingsSpec random_rings_spec(std::size_t R, std::size_t max_size, SplitMix64& rng) {
  RingsSpec s;
  s.sizes.push_back(1);
  for (std::size_t k = 1; k <= R; ++k) s.sizes.push_back(1 + rng.below(max_size));
  for (std::size_t k = 1; k <= R; ++k) {
    const std::size_t a = s.sizes[k - 1], b = s.sizes[k];
    const std::size_t g = std::gcd(a, b), l = a / g * b;
    const std::size_t m = 1 + rng.below(g);
    s.delta.push_back(m * l / a);
    s.gamma.push_back(m * l / b);
  }
  return s;
}

inline RingNetwork random_uniform_rings(std::size_t R, std::size_t max_size, SplitMix64& rng) {
  const RingsSpec s = random_rings_spec(R, max_size, rng);
  return build_uniform_rings(s.sizes, s.delta, s.gamma);
}

// Positive weights per ring, some interior rings set to zero; normalized.
inline DistanceDistribution random_distance_distribution(std::span<const std::size_t> sizes, SplitMix64& rng,
                                                         bool zero_source = false) {
  const std::size_t R = sizes.size() - 1;
  std::vector<double> u(sizes.size());
  for (std::size_t k = 0; k <= R; ++k) {
    u[k] = rng.uniform() + 0.05;
    if (k > 0 && k < R && rng.below(5) == 0) u[k] = 0.0;
  }
  if (zero_source) u[0] = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k <= R; ++k) total += static_cast<double>(sizes[k]) * u[k];
  for (auto& x : u) x /= total;
  return DistanceDistribution(std::move(u));
}

// Largest matching between the upward points of ring k and the downward
// points of ring k+1, each node expanded into its point count (Kuhn's
// augmenting paths). Used as an upper bound on what any assignment can do.
inline std::size_t max_point_matching(const RingNetwork& net, std::size_t k) {
  const std::size_t a = net.ring_size(k), b = net.ring_size(k + 1);
  const std::size_t r = a / std::gcd(a, b) * b;
  const std::size_t up = r / a, down = r / b;
  const NodeId lo = net.ring_begin(k), hi = net.ring_begin(k + 1);
  // Left vertex = (node, copy), right vertex = (node, copy).
  std::vector<std::vector<std::size_t>> adj(r);
  for (std::size_t i = 0; i < a; ++i) {
    for (NodeId y : net.up(static_cast<NodeId>(lo + i))) {
      for (std::size_t c = 0; c < down; ++c) {
        const std::size_t right = (y - hi) * down + c;
        for (std::size_t u = 0; u < up; ++u) adj[i * up + u].push_back(right);
      }
    }
  }
  std::vector<long> match(r, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]))) {
        match[v] = static_cast<long>(u);
        return true;
      }
    }
    return false;
  };
  std::size_t size = 0;
  for (std::size_t u = 0; u < r; ++u) {
    seen.assign(r, 0);
    if (augment(u)) ++size;
  }
  return size;
}

}  // namespace rcw::testing
