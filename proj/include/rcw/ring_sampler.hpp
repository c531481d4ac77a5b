#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcw/distributions.hpp"
#include "rcw/oracle_stats.hpp"
#include "rcw/random.hpp"
#include "rcw/topology.hpp"

namespace rcw {

inline constexpr double kStayTolerance = 1e-12;

// State carried by a walk arriving in ring k (values of ring k-1).
struct WalkMessage1 {
  NodeId source = 0;
  double v_prev = 1.0;
  double p_prev = 0.0;
  double n_prev = 1.0;
  double delta_prev = 0.0;
};

// What a node knows about itself.
struct LocalRingView {
  std::size_t delta = 0;  // up-neighbors
  std::size_t gamma = 0;  // down-neighbors
  double p = 0.0;
};

struct StepResult {
  double n = 0.0;
  double v = 0.0;
  double q = 0.0;
};

// n_k = n_{k-1} delta_{k-1} / gamma_k, v_k = n_{k-1}(v_{k-1} - p_{k-1}) / n_k,
// q_k = p_k / v_k. A node without up-neighbors stays. Throws InfeasibleStay
// when q_k exceeds 1 by more than kStayTolerance.
StepResult step_rules_d1(const WalkMessage1& msg, const LocalRingView& local);

// q = p / v with v the visit probability; 1 on the last ring, 0 when p = 0.
// Throws InfeasibleStay when p exceeds v by more than kStayTolerance.
double stay_from_visit(double p, double v, bool last_ring);

// Per-ring tuple relayed by the distance-2 walk.
struct RingTuple {
  double v = 0.0;
  double p = 0.0;
  double n = 0.0;
  double s = 1.0;
};

struct WalkMessage2 {
  NodeId source = 0;
  RingTuple prev1;  // ring k-1
  RingTuple prev2;  // ring k-2
  double delta_prev1 = 0.0;  // up-degree of ring k-1, for n_k
};

// Initial message of the distance-2 walk: v_0 = 1, n_0 = 1, s_0 = 1 and an
// empty ring -1.
WalkMessage2 initial_message_d2(NodeId source, double p0, double delta0);

// v_k = [n_{k-1}(v_{k-1}-p_{k-1}) s_{k-1} + n_{k-2}(v_{k-2}-p_{k-2})(1-s_{k-2})] / n_k.
StepResult step_rules_d2(const WalkMessage2& msg, const LocalRingView& local);

// Distance-1 probabilities s_1..s_{R-1}. The effective value is 1 at the
// source, from ring R-1 outward, and on rings without distance-2 links.
struct HopPolicy {
  std::vector<double> s;

  double effective(const RingNetwork& net, std::size_t k) const;
};

// Throws InvalidArgument for values outside (0,1] or a wrong length.
void check_policy_shape(const HopPolicy& policy, const RingNetwork& net);

// Runs the v_k recurrence once; true iff every v_k >= p_k (within tolerance).
bool policy_feasible(const RingNetwork& net, const DistanceDistribution& dist,
                     const HopPolicy& policy, bool source_stay = false);

// Greedy from ring 1 outward: s_k = max(smallest feasible s_k, 0.5).
HopPolicy default_policy(const RingNetwork& net, const DistanceDistribution& dist,
                         bool source_stay = false);

HopPolicy uniform_policy(const RingNetwork& net, double s);

// Per-ring visit probabilities v_k and stay probabilities q_k from the
// recurrences, using the true ring sizes.
struct RingLaw {
  std::vector<double> v;
  std::vector<double> q;
};
RingLaw ring_law_d1(const RingNetwork& net, const DistanceDistribution& dist);
RingLaw ring_law_d2(const RingNetwork& net, const DistanceDistribution& dist,
                    const HopPolicy& policy, bool source_stay);

// Ring size as every node computes it locally from its first down-neighbor's
// up-degree; equals the true size on uniformly connected networks.
std::vector<double> local_ring_sizes(const RingNetwork& net);

class RingSamplerD1 {
 public:
  // Throws NotUniformlyConnected unless `force`; with `force`, the true ring
  // sizes are supplied globally instead of being computed along the walk.
  RingSamplerD1(const RingNetwork& net, DistanceDistribution dist, bool force = false);
  WalkResult sample(SplitMix64& rng) const;

 private:
  const RingNetwork& net_;
  DistanceDistribution dist_;
  bool force_;
};

class RingSamplerD2 {
 public:
  // Needs uniform connectivity at distances 1 and 2. Without `source_stay`
  // the source never selects itself, so p_0 must be 0.
  RingSamplerD2(const RingNetwork& net, DistanceDistribution dist, HopPolicy policy,
                bool source_stay = false);
  WalkResult sample(SplitMix64& rng) const;
  const HopPolicy& policy() const noexcept { return policy_; }

 private:
  LocalRingView view(NodeId x) const;

  const RingNetwork& net_;
  DistanceDistribution dist_;
  HopPolicy policy_;
  bool source_stay_;
};

WalkResult sample_rings_d1(const RingNetwork& net, const DistanceDistribution& dist,
                           SplitMix64& rng, bool force = false);
WalkResult sample_rings_d2(const RingNetwork& net, const DistanceDistribution& dist,
                           const HopPolicy& policy, SplitMix64& rng, bool source_stay = false);

enum class RingMode { D1, D2 };

// Walk model with per-ring stay probabilities from the recurrence and uniform
// hops (distance 1 with s_k, distance 2 with 1 - s_k).
WalkModel rings_walk_model(const RingNetwork& net, const DistanceDistribution& dist,
                           RingMode mode, const HopPolicy* policy = nullptr,
                           bool source_stay = false);

ExactLaw rings_oracle(const RingNetwork& net, const DistanceDistribution& dist,
                      RingMode mode = RingMode::D1, const HopPolicy* policy = nullptr,
                      bool source_stay = false);

}  // namespace rcw
