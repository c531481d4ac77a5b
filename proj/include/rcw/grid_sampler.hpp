#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rcw/distributions.hpp"
#include "rcw/oracle_stats.hpp"
#include "rcw/random.hpp"
#include "rcw/topology.hpp"

namespace rcw {

// q_k = n_k p_k / (1 - cum_mass), where cum_mass = sum_{j<k} n_j p_j.
// Returns 1 on the last ring and 0 when p_k = 0. Throws MassExhausted if no
// mass remains while p_k > 0.
double stay_probability(std::size_t n_k, double p_k, double cum_mass, bool last_ring);

// Same, with n_k = 4k (n_0 = 1) and the last ring read off the distribution.
double stay_probability(std::size_t k, const DistanceDistribution& dist, double cum_mass);

// Outward neighbors of a lattice point with their hop probabilities. The
// source spreads 1/4 over the four axis points.
std::vector<std::pair<GridCoord, double>> outward_hops(GridCoord from);

// Throws NotOutwardNeighbor if `to` is not an outward neighbor of `from`.
double hop_probability(GridCoord from, GridCoord to);

struct GridSample {
  GridCoord coord;
  std::uint32_t hops = 0;
};

// One walk from (0,0). The cumulative mass travels with the walk.
GridSample sample_grid(const GridSpec& spec, const DistanceDistribution& dist, SplitMix64& rng);

// Walk model over a build_grid network, node ids as in grid_node_id.
WalkModel grid_walk_model(const GridSpec& spec, const DistanceDistribution& dist);

// Exact per-node law; ring_spread reports the per-ring visit spread.
ExactLaw grid_oracle(const GridSpec& spec, const DistanceDistribution& dist);

}  // namespace rcw
