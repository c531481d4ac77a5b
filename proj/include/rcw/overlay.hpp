#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rcw/distributions.hpp"
#include "rcw/oracle_stats.hpp"
#include "rcw/random.hpp"
#include "rcw/simnet.hpp"
#include "rcw/topology.hpp"

namespace rcw {

// Entry k-1 holds n_{k+1} max gamma_{k+1} <= n_k min delta_k for the ring
// pair (k, k+1), k = 1..R-1. Exact integer comparison.
std::vector<bool> halls_condition(const RingNetwork& net);

// Least common multiple; throws InvalidArgument on 64-bit overflow.
std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b);

// Uniform overlay built from attachment points. Ring k nodes own r_k / n_k
// upward points, where r_k = lcm(n_k, n_{k+1}), each matched to a downward
// point of a physical neighbor in ring k+1.
class AttachmentOverlay {
 public:
  AttachmentOverlay(std::vector<std::size_t> ring_sizes, std::vector<std::uint32_t> ring_of,
                    std::vector<std::vector<NodeId>> up_points,
                    std::vector<std::vector<NodeId>> down_points);

  std::size_t node_count() const noexcept { return ring_of_.size(); }
  std::size_t ring_count() const noexcept { return sizes_.size(); }
  const std::vector<std::size_t>& ring_sizes() const noexcept { return sizes_; }
  std::uint32_t ring_of(NodeId x) const { return ring_of_.at(x); }
  // Owner of the peer point for each upward point of x (repeats allowed).
  std::span<const NodeId> up_points(NodeId x) const { return up_.at(x); }
  // Owner of the peer point for each downward point of x.
  std::span<const NodeId> down_points(NodeId x) const { return down_.at(x); }
  // r_k for the pair (k, k+1).
  std::uint64_t points(std::size_t k) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::uint32_t> ring_of_;
  std::vector<std::vector<NodeId>> up_, down_;
};

struct AapOptions {
  std::uint64_t seed = 0;
  std::uint64_t max_rounds = 0;  // 0 picks a bound from the point and degree counts
  std::ostream* trace = nullptr;
};

struct AapOutcome {
  std::optional<AttachmentOverlay> overlay;  // set on success
  std::vector<NodeId> failed;                // nodes left with unconnected points
  RunStats stats;
};

// Greedy protocol: every node below ring R asks a random remaining candidate
// in the next ring for a point; the candidate grants one while it has free
// downward points and refuses otherwise, and is then dropped. A node stops
// when all its points are connected or it runs out of candidates.
AapOutcome try_assign_attachment_points(const RingNetwork& net, const AapOptions& options = {});

// Throws AapFailure carrying the failed nodes.
AttachmentOverlay assign_attachment_points(const RingNetwork& net, const AapOptions& options = {});

// Distance-1 walk over the overlay: delta and gamma are point counts and the
// next node is the owner of a uniformly chosen upward point.
class OverlaySampler {
 public:
  OverlaySampler(const AttachmentOverlay& overlay, DistanceDistribution dist);
  WalkResult sample(SplitMix64& rng) const;

 private:
  const AttachmentOverlay& ov_;
  DistanceDistribution dist_;
};

WalkResult overlay_sample(const AttachmentOverlay& overlay, const DistanceDistribution& dist,
                          SplitMix64& rng);

WalkModel overlay_walk_model(const AttachmentOverlay& overlay, const DistanceDistribution& dist);
ExactLaw overlay_oracle(const AttachmentOverlay& overlay, const DistanceDistribution& dist);

struct SuccessRow {
  double beta = 0.0;
  double success_rate = 0.0;
  double halls_rate = 0.0;  // deployments satisfying the Hall inequality on every ring pair
  std::uint32_t trials = 0;
};

// Fresh geometric deployment per trial (shared across betas for a given
// trial index). A deployment that cannot be built counts as a failure.
std::vector<SuccessRow> success_rate_experiment(std::span<const double> betas, std::uint32_t trials,
                                                std::uint64_t seed, std::uint32_t rings = 100,
                                                std::uint32_t per_ring = 100);

}  // namespace rcw
