#include "rcw/distributions.hpp"

#include <cmath>
#include <string>

namespace rcw {

WeightDistribution::WeightDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) fail(ErrorCode::InvalidArgument, "no weights");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::InvalidArgument, "weights must be positive");
    eta_ += w;
  }
}

std::vector<double> WeightDistribution::law(std::optional<NodeId> excluded_source) const {
  std::vector<double> p(weights_.size());
  double total = eta_;
  if (excluded_source) total -= weights_.at(*excluded_source);
  for (std::size_t x = 0; x < p.size(); ++x) {
    p[x] = (excluded_source && x == *excluded_source) ? 0.0 : weights_[x] / total;
  }
  return p;
}

std::vector<double> DistanceDistribution::node_law(const RingNetwork& net) const {
  std::vector<double> law(net.node_count());
  for (NodeId x = 0; x < law.size(); ++x) law[x] = p_.at(net.ring_of(x));
  return law;
}

DistanceDistribution uniform(std::span<const std::size_t> ring_sizes) {
  double total = 0.0;
  for (std::size_t n : ring_sizes) total += static_cast<double>(n);
  return DistanceDistribution(std::vector<double>(ring_sizes.size(), 1.0 / total));
}

DistanceDistribution uniform(const RingNetwork& net) { return uniform(net.ring_sizes()); }

DistanceDistribution inverse_distance(std::span<const std::size_t> ring_sizes, double p0) {
  if (!(p0 >= 0.0 && p0 < 1.0)) {
    fail(ErrorCode::InvalidArgument, "PID source mass must lie in [0, 1)");
  }
  if (ring_sizes.size() < 2) fail(ErrorCode::InvalidArgument, "PID needs at least one ring");
  double harmonic = 0.0;
  for (std::size_t k = 1; k < ring_sizes.size(); ++k) {
    harmonic += static_cast<double>(ring_sizes[k]) / static_cast<double>(k);
  }
  const double c = (1.0 - p0) / harmonic;
  std::vector<double> p(ring_sizes.size());
  p[0] = p0;
  for (std::size_t k = 1; k < p.size(); ++k) p[k] = c / static_cast<double>(k);
  return DistanceDistribution(std::move(p));
}

DistanceDistribution inverse_distance(const RingNetwork& net, double p0) {
  return inverse_distance(net.ring_sizes(), p0);
}

bool validate(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes) {
  if (dist.size() != ring_sizes.size() || ring_sizes.empty()) return false;
  double mass = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (!(dist[k] >= 0.0) || !std::isfinite(dist[k])) return false;
    mass += static_cast<double>(ring_sizes[k]) * dist[k];
  }
  return dist[dist.size() - 1] > 0.0 && std::fabs(mass - 1.0) <= kNormalizationTolerance;
}

bool validate(const DistanceDistribution& dist, const RingNetwork& net) {
  return validate(dist, net.ring_sizes());
}

void require_walkable(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes) {
  if (dist.size() != ring_sizes.size() || ring_sizes.empty()) {
    fail(ErrorCode::InvalidDistribution, "distribution needs one entry per ring (" +
                                             std::to_string(ring_sizes.size()) + ")");
  }
  double mass = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (!(dist[k] >= 0.0) || !std::isfinite(dist[k])) {
      fail(ErrorCode::InvalidDistribution, "p_" + std::to_string(k) + " must be finite and >= 0");
    }
    mass += static_cast<double>(ring_sizes[k]) * dist[k];
  }
  if (std::fabs(mass - 1.0) > kNormalizationTolerance) {
    fail(ErrorCode::InvalidDistribution, "sum n_k p_k = " + std::to_string(mass) + ", expected 1");
  }
}

void require_valid(const DistanceDistribution& dist, std::span<const std::size_t> ring_sizes) {
  if (!validate(dist, ring_sizes)) {
    fail(ErrorCode::InvalidDistribution,
         "distribution over " + std::to_string(ring_sizes.size()) +
             " rings must have p_k >= 0, p_R > 0 and sum n_k p_k = 1");
  }
}

}  // namespace rcw
