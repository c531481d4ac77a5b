#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rcw/error.hpp"

namespace rcw {

using Edge = std::pair<NodeId, NodeId>;

// Undirected, connected, node-weighted graph. Node ids are dense 0..n-1.
class Network {
 public:
  // Throws InvalidArgument on self-loops, duplicate edges, out-of-range ids or
  // non-positive weights, and NotConnected if the graph is disconnected.
  // Empty `weights` means unit weights.
  Network(std::size_t node_count, std::span<const Edge> edges,
          std::vector<double> weights = {});

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::span<const NodeId> neighbors(NodeId x) const { return adjacency_.at(x); }
  bool adjacent(NodeId x, NodeId y) const;
  double weight(NodeId x) const { return weights_.at(x); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<std::vector<NodeId>>& adjacency() const noexcept { return adjacency_; }

  // Hop distances from `source` (BFS).
  std::vector<std::uint32_t> distances_from(NodeId source) const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<double> weights_;
  std::size_t edge_count_ = 0;
};

struct GridCoord {
  int i = 0;
  int j = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

struct GridSpec {
  int radius = 1;
};

struct GeometricDeployment {
  std::uint32_t rings = 1;
  std::uint32_t per_ring = 1;
  double beta = 360.0;  // connectivity angle, degrees
  std::uint64_t seed = 0;
};

// Concentric rings around node 0 (the source). Node ids are assigned ring by
// ring, so ring k occupies the contiguous id range [offset(k), offset(k+1)).
// Distance-1 links join consecutive rings; optional distance-2 overlay links
// join rings k and k+2.
class RingNetwork {
 public:
  // `edges` are (lower, upper) pairs with upper in the next ring; `edges2`
  // likewise with upper two rings out. Throws InvalidArgument for malformed
  // input and DisconnectedRing if a node in ring k >= 1 has no neighbor in
  // ring k-1.
  // `with_distance2` keeps an (possibly empty) distance-2 layer.
  RingNetwork(std::vector<std::size_t> ring_sizes, std::span<const Edge> edges,
              std::span<const Edge> edges2 = {}, bool with_distance2 = false);

  std::size_t node_count() const noexcept { return ring_of_.size(); }
  std::size_t ring_count() const noexcept { return sizes_.size(); }
  std::size_t radius() const noexcept { return sizes_.size() - 1; }
  std::size_t ring_size(std::size_t k) const { return sizes_.at(k); }
  const std::vector<std::size_t>& ring_sizes() const noexcept { return sizes_; }
  NodeId ring_begin(std::size_t k) const { return static_cast<NodeId>(offsets_.at(k)); }
  NodeId ring_end(std::size_t k) const { return static_cast<NodeId>(offsets_.at(k + 1)); }
  std::uint32_t ring_of(NodeId x) const { return ring_of_.at(x); }

  std::span<const NodeId> up(NodeId x) const { return up_.at(x); }
  std::span<const NodeId> down(NodeId x) const { return down_.at(x); }
  std::span<const NodeId> up2(NodeId x) const;
  std::span<const NodeId> down2(NodeId x) const;
  bool has_distance2() const noexcept { return !up2_.empty(); }

  std::size_t delta(NodeId x) const { return up_.at(x).size(); }
  std::size_t gamma(NodeId x) const { return down_.at(x).size(); }

  // Grid coordinates, present only for networks made by build_grid.
  bool is_grid() const noexcept { return !coords_.empty(); }
  GridCoord coord(NodeId x) const { return coords_.at(x); }

  // Deployment angles in degrees, present only for build_geometric output.
  const std::vector<double>& angles() const noexcept { return angles_; }

  // Distance-1 links as an undirected unit-weight network.
  Network to_network() const;

  // Both directions of the distance-1 links, per node, sorted.
  std::vector<std::vector<NodeId>> link_lists() const;

 private:
  friend RingNetwork build_grid(GridSpec spec);
  friend RingNetwork build_geometric(const GeometricDeployment& dep);

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> ring_of_;
  std::vector<std::vector<NodeId>> up_, down_, up2_, down2_;
  std::vector<GridCoord> coords_;
  std::vector<double> angles_;
};

// Diamond lattice {(i,j) : |i|+|j| <= R}, ring k = |i|+|j|.
RingNetwork build_grid(GridSpec spec);

// Node id of lattice point (i,j) in a build_grid network; -1 if outside radius.
std::int64_t grid_node_id(GridCoord c, int radius) noexcept;

// Circulant wiring: node j of ring k links up to (j*delta_k + t) mod n_{k+1},
// t < delta_k. `gamma` may hold R entries (gamma_1..gamma_R) or R+1 entries
// with gamma[0] ignored. Throws InconsistentDegrees when
// n_{k-1}*delta_{k-1} != n_k*gamma_k.
// With `distance2`, ring-k nodes (k >= 1) also link to every node two up-hops
// away; throws NotUniformlyConnected if those counts are not uniform per ring.
RingNetwork build_uniform_rings(std::span<const std::size_t> ring_sizes,
                                std::span<const std::size_t> delta,
                                std::span<const std::size_t> gamma,
                                bool distance2 = false);

// Random angular deployment; the source links to all of ring 1 and x in ring
// k links to y in ring k+1 iff their circular angular distance is <= beta/2.
// Throws DisconnectedRing if a node below ring R has no up-neighbor or a node
// in ring k >= 1 has no down-neighbor.
RingNetwork build_geometric(const GeometricDeployment& dep);

double angular_distance(double a, double b) noexcept;

bool check_uniform_connectivity(const RingNetwork& net);

// Uniformity of the distance-2 link counts (rings 1..R). False if the network
// has no distance-2 links.
bool check_uniform_connectivity_d2(const RingNetwork& net);

}  // namespace rcw
