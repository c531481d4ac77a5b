#include "rcw/grid_sampler.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace rcw {

namespace {

std::vector<std::size_t> grid_sizes(int radius) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(radius) + 1);
  sizes[0] = 1;
  for (int k = 1; k <= radius; ++k) sizes[static_cast<std::size_t>(k)] = 4 * static_cast<std::size_t>(k);
  return sizes;
}

void check_spec(const GridSpec& spec, const DistanceDistribution& dist) {
  if (spec.radius < 1) fail(ErrorCode::InvalidArgument, "grid radius must be >= 1");
  require_walkable(dist, grid_sizes(spec.radius));
}

int sign(int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

double stay_probability(std::size_t n_k, double p_k, double cum_mass, bool last_ring) {
  if (last_ring) return 1.0;
  if (p_k <= 0.0) return 0.0;
  const double remaining = 1.0 - cum_mass;
  if (remaining <= 0.0) fail(ErrorCode::MassExhausted, "no probability mass left for a ring with p_k > 0");
  return std::min(1.0, static_cast<double>(n_k) * p_k / remaining);
}

double stay_probability(std::size_t k, const DistanceDistribution& dist, double cum_mass) {
  if (k >= dist.size()) fail(ErrorCode::InvalidArgument, "ring index beyond the distribution");
  const std::size_t n_k = k == 0 ? 1 : 4 * k;
  return stay_probability(n_k, dist[k], cum_mass, k + 1 == dist.size());
}

std::vector<std::pair<GridCoord, double>> outward_hops(GridCoord from) {
  const int a = std::abs(from.i), b = std::abs(from.j);
  const int k = a + b;
  if (k == 0) {
    return {{{1, 0}, 0.25}, {{0, 1}, 0.25}, {{-1, 0}, 0.25}, {{0, -1}, 0.25}};
  }
  const double k1 = k + 1.0;
  const int si = sign(from.i), sj = sign(from.j);
  // Reflect into the first quadrant, apply the three cases, reflect back.
  if (b == 0) {
    return {{{from.i + si, 0}, k / k1},
            {{from.i, 1}, 1.0 / (2.0 * k1)},
            {{from.i, -1}, 1.0 / (2.0 * k1)}};
  }
  if (a == 0) {
    return {{{0, from.j + sj}, k / k1},
            {{1, from.j}, 1.0 / (2.0 * k1)},
            {{-1, from.j}, 1.0 / (2.0 * k1)}};
  }
  return {{{from.i + si, from.j}, (2.0 * a + 1.0) / (2.0 * k1)},
          {{from.i, from.j + sj}, (2.0 * b + 1.0) / (2.0 * k1)}};
}

double hop_probability(GridCoord from, GridCoord to) {
  for (const auto& [c, h] : outward_hops(from)) {
    if (c == to) return h;
  }
  fail(ErrorCode::NotOutwardNeighbor,
       "(" + std::to_string(to.i) + "," + std::to_string(to.j) + ") is not an outward neighbor of (" +
           std::to_string(from.i) + "," + std::to_string(from.j) + ")");
}

GridSample sample_grid(const GridSpec& spec, const DistanceDistribution& dist, SplitMix64& rng) {
  check_spec(spec, dist);
  GridSample s;
  double cum = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double q = stay_probability(k, dist, cum);
    if (rng.bernoulli(q) || k == static_cast<std::size_t>(spec.radius)) return s;
    cum += (k == 0 ? 1.0 : 4.0 * static_cast<double>(k)) * dist[k];
    const auto hops = outward_hops(s.coord);
    double u = rng.uniform();
    GridCoord next = hops.back().first;
    for (const auto& [c, h] : hops) {
      if (u < h) {
        next = c;
        break;
      }
      u -= h;
    }
    s.coord = next;
    ++s.hops;
  }
}

WalkModel grid_walk_model(const GridSpec& spec, const DistanceDistribution& dist) {
  check_spec(spec, dist);
  const RingNetwork net = build_grid(spec);
  const std::size_t n = net.node_count();
  WalkModel model;
  model.source = 0;
  model.stay.assign(n, 1.0);
  model.hops.assign(n, {});
  model.ring.assign(n, 0);
  double cum = 0.0;
  for (std::size_t k = 0; k < net.ring_count(); ++k) {
    const double q = stay_probability(k, dist, cum);
    cum += static_cast<double>(net.ring_size(k)) * dist[k];
    for (NodeId x = net.ring_begin(k); x < net.ring_end(k); ++x) {
      model.ring[x] = static_cast<std::uint32_t>(k);
      model.stay[x] = q;
      if (k == static_cast<std::size_t>(spec.radius)) continue;
      for (const auto& [c, h] : outward_hops(net.coord(x))) {
        model.hops[x].push_back({static_cast<NodeId>(grid_node_id(c, spec.radius)), h});
      }
    }
  }
  return model;
}

ExactLaw grid_oracle(const GridSpec& spec, const DistanceDistribution& dist) {
  return dag_oracle(grid_walk_model(spec, dist));
}

}  // namespace rcw
