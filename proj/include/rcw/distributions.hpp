#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcw/topology.hpp"

namespace rcw {

// Selection proportional to node weight: p(x) = w(x) / eta.
class WeightDistribution {
 public:
  explicit WeightDistribution(std::vector<double> weights);
  static WeightDistribution of(const Network& net) { return WeightDistribution(net.weights()); }

  const std::vector<double>& weights() const noexcept { return weights_; }
  double eta() const noexcept { return eta_; }
  double probability(NodeId x) const { return weights_.at(x) / eta_; }

  // p_s(x) = w(x) / eta_s with eta_s excluding the source; 0 at the source.
  std::vector<double> law(std::optional<NodeId> excluded_source = std::nullopt) const;

 private:
  std::vector<double> weights_;
  double eta_ = 0.0;
};

inline constexpr double kNormalizationTolerance = 1e-9;

// Per-node selection probability p_k for every node of ring k.
class DistanceDistribution {
 public:
  DistanceDistribution() = default;
  explicit DistanceDistribution(std::vector<double> p) : p_(std::move(p)) {}

  std::span<const double> p() const noexcept { return p_; }
  double operator[](std::size_t k) const { return p_.at(k); }
  std::size_t size() const noexcept { return p_.size(); }

  // Per-node law over a ring network (p_k for each node of ring k).
  std::vector<double> node_law(const RingNetwork& net) const;

 private:
  std::vector<double> p_;
};

DistanceDistribution uniform(const RingNetwork& net);
DistanceDistribution uniform(std::span<const std::size_t> ring_sizes);

// p_0 = p0 and p_k = c/k for k >= 1 with sum_k n_k p_k = 1. Requires p0 in [0,1).
DistanceDistribution inverse_distance(const RingNetwork& net, double p0);
DistanceDistribution inverse_distance(std::span<const std::size_t> ring_sizes, double p0);

// Normalization within kNormalizationTolerance, p_k >= 0, p_R > 0, and one
// entry per ring.
bool validate(const DistanceDistribution& dist, const RingNetwork& net);
bool validate(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes);

// What a walk needs: p_k >= 0 and normalization. p_R = 0 is accepted here
// because a walk whose mass runs out before ring R never reaches it.
void require_walkable(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes);

// Throws InvalidDistribution when validate() fails.
void require_valid(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes);

}  // namespace rcw
