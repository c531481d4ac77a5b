#include "rcw/ring_sampler.hpp"

#include <algorithm>
#include <string>

namespace rcw {

double stay_from_visit(double p, double v, bool last) {
  if (last) return 1.0;
  if (p <= 0.0) return 0.0;
  if (v <= 0.0) fail(ErrorCode::InfeasibleStay, "positive p_k on a ring the walk never reaches");
  const double q = p / v;
  if (q > 1.0 + kStayTolerance) {
    fail(ErrorCode::InfeasibleStay,
         "stay probability " + std::to_string(q) + " exceeds 1 (p_k > v_k)");
  }
  return std::min(q, 1.0);
}

namespace {

NodeId pick(std::span<const NodeId> targets, SplitMix64& rng) {
  return targets[rng.below(targets.size())];
}

}  // namespace

StepResult step_rules_d1(const WalkMessage1& msg, const LocalRingView& local) {
  if (local.gamma == 0) fail(ErrorCode::InvalidArgument, "node has no down-neighbor");
  StepResult r;
  r.n = msg.n_prev * msg.delta_prev / static_cast<double>(local.gamma);
  r.v = msg.n_prev * (msg.v_prev - msg.p_prev) / r.n;
  r.q = stay_from_visit(local.p, r.v, local.delta == 0);
  return r;
}

WalkMessage2 initial_message_d2(NodeId source, double p0, double delta0) {
  WalkMessage2 m;
  m.source = source;
  m.prev1 = {1.0, p0, 1.0, 1.0};
  m.prev2 = {0.0, 0.0, 0.0, 1.0};
  m.delta_prev1 = delta0;
  return m;
}

StepResult step_rules_d2(const WalkMessage2& msg, const LocalRingView& local) {
  if (local.gamma == 0) fail(ErrorCode::InvalidArgument, "node has no down-neighbor");
  const RingTuple& a = msg.prev1;
  const RingTuple& b = msg.prev2;
  StepResult r;
  r.n = a.n * msg.delta_prev1 / static_cast<double>(local.gamma);
  r.v = (a.n * (a.v - a.p) * a.s + b.n * (b.v - b.p) * (1.0 - b.s)) / r.n;
  r.q = stay_from_visit(local.p, r.v, local.delta == 0);
  return r;
}

// ---------------------------------------------------------------------------

double HopPolicy::effective(const RingNetwork& net, std::size_t k) const {
  const std::size_t R = net.radius();
  if (k == 0 || k + 1 >= R) return 1.0;
  if (net.up2(net.ring_begin(k)).empty()) return 1.0;
  if (k - 1 >= s.size()) fail(ErrorCode::InvalidArgument, "hop policy too short");
  return s[k - 1];
}

void check_policy_shape(const HopPolicy& policy, const RingNetwork& net) {
  const std::size_t want = net.radius() >= 1 ? net.radius() - 1 : 0;
  if (policy.s.size() != want) {
    fail(ErrorCode::InvalidArgument, "hop policy needs " + std::to_string(want) + " values, got " +
                                         std::to_string(policy.s.size()));
  }
  for (double s : policy.s) {
    if (!(s > 0.0 && s <= 1.0)) fail(ErrorCode::InvalidArgument, "hop policy values must lie in (0,1]");
  }
}

HopPolicy uniform_policy(const RingNetwork& net, double s) {
  return HopPolicy{std::vector<double>(net.radius() >= 1 ? net.radius() - 1 : 0, s)};
}

RingLaw ring_law_d1(const RingNetwork& net, const DistanceDistribution& dist) {
  require_walkable(dist, net.ring_sizes());
  const std::size_t rings = net.ring_count();
  RingLaw law{std::vector<double>(rings, 0.0), std::vector<double>(rings, 0.0)};
  law.v[0] = 1.0;
  law.q[0] = rings == 1 ? 1.0 : dist[0];
  for (std::size_t k = 1; k < rings; ++k) {
    const double n_prev = static_cast<double>(net.ring_size(k - 1));
    law.v[k] = n_prev * (law.v[k - 1] - dist[k - 1]) / static_cast<double>(net.ring_size(k));
    law.q[k] = stay_from_visit(dist[k], law.v[k], k + 1 == rings);
  }
  return law;
}

RingLaw ring_law_d2(const RingNetwork& net, const DistanceDistribution& dist,
                    const HopPolicy& policy, bool source_stay) {
  require_walkable(dist, net.ring_sizes());
  check_policy_shape(policy, net);
  if (!source_stay && dist[0] != 0.0) {
    fail(ErrorCode::InvalidDistribution, "the distance-2 walk needs p_0 = 0 unless the source may stay");
  }
  const std::size_t rings = net.ring_count();
  RingLaw law{std::vector<double>(rings, 0.0), std::vector<double>(rings, 0.0)};
  law.v[0] = 1.0;
  law.q[0] = rings == 1 ? 1.0 : dist[0];
  auto leaving = [&](std::size_t j) {
    return static_cast<double>(net.ring_size(j)) * (law.v[j] - dist[j]);
  };
  for (std::size_t k = 1; k < rings; ++k) {
    double mass = leaving(k - 1) * policy.effective(net, k - 1);
    if (k >= 2) mass += leaving(k - 2) * (1.0 - policy.effective(net, k - 2));
    law.v[k] = mass / static_cast<double>(net.ring_size(k));
    law.q[k] = stay_from_visit(dist[k], law.v[k], k + 1 == rings);
  }
  return law;
}

bool policy_feasible(const RingNetwork& net, const DistanceDistribution& dist,
                     const HopPolicy& policy, bool source_stay) {
  try {
    (void)ring_law_d2(net, dist, policy, source_stay);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InfeasibleStay || e.code() == ErrorCode::InvalidArgument) return false;
    throw;
  }
}

HopPolicy default_policy(const RingNetwork& net, const DistanceDistribution& dist, bool source_stay) {
  require_walkable(dist, net.ring_sizes());
  HopPolicy policy = uniform_policy(net, 1.0);
  const std::size_t rings = net.ring_count();
  std::vector<double> v(rings, 0.0);
  v[0] = 1.0;
  auto n = [&](std::size_t j) { return static_cast<double>(net.ring_size(j)); };
  for (std::size_t k = 1; k < rings; ++k) {
    // Choose s_{k-1} so ring k still receives at least n_k p_k.
    const std::size_t j = k - 1;
    const double a = n(j) * (v[j] - dist[j]);
    const double b = k >= 2 ? n(k - 2) * (v[k - 2] - dist[k - 2]) * (1.0 - policy.effective(net, k - 2)) : 0.0;
    const bool free_choice = j >= 1 && j + 1 < net.radius() && !net.up2(net.ring_begin(j)).empty();
    if (free_choice) {
      double s = 1.0;
      if (a > 0.0) s = std::clamp(std::max((n(k) * dist[k] - b) / a, 0.5), 0.5, 1.0);
      policy.s[j - 1] = s;
    }
    v[k] = (a * policy.effective(net, j) + b) / n(k);
  }
  (void)source_stay;
  return policy;
}

std::vector<double> local_ring_sizes(const RingNetwork& net) {
  std::vector<double> n(net.node_count(), 0.0);
  n[0] = 1.0;
  for (std::size_t k = 1; k < net.ring_count(); ++k) {
    for (NodeId x = net.ring_begin(k); x < net.ring_end(k); ++x) {
      const NodeId y = net.down(x)[0];
      n[x] = n[y] * static_cast<double>(net.delta(y)) / static_cast<double>(net.gamma(x));
    }
  }
  return n;
}

// ---------------------------------------------------------------------------

RingSamplerD1::RingSamplerD1(const RingNetwork& net, DistanceDistribution dist, bool force)
    : net_(net), dist_(std::move(dist)), force_(force) {
  require_walkable(dist_, net_.ring_sizes());
  if (!force_ && !check_uniform_connectivity(net_)) {
    fail(ErrorCode::NotUniformlyConnected, "network is not uniformly connected (use force for the bias demo)");
  }
}

WalkResult RingSamplerD1::sample(SplitMix64& rng) const {
  const double p0 = dist_[0];
  if (net_.radius() == 0 || rng.bernoulli(p0)) return {0, 0};
  WalkMessage1 msg{0, 1.0, p0, 1.0, static_cast<double>(net_.delta(0))};
  NodeId x = pick(net_.up(0), rng);
  std::uint32_t hops = 1;
  for (;;) {
    const std::uint32_t k = net_.ring_of(x);
    const LocalRingView local{net_.delta(x), net_.gamma(x), dist_[k]};
    StepResult r;
    if (force_) {
      r.n = static_cast<double>(net_.ring_size(k));
      r.v = msg.n_prev * (msg.v_prev - msg.p_prev) / r.n;
      r.q = stay_from_visit(local.p, r.v, local.delta == 0);
    } else {
      r = step_rules_d1(msg, local);
    }
    if (local.delta == 0 || rng.bernoulli(r.q)) return {x, hops};
    msg = WalkMessage1{0, r.v, local.p, r.n, static_cast<double>(local.delta)};
    x = pick(net_.up(x), rng);
    ++hops;
  }
}

RingSamplerD2::RingSamplerD2(const RingNetwork& net, DistanceDistribution dist, HopPolicy policy,
                             bool source_stay)
    : net_(net), dist_(std::move(dist)), policy_(std::move(policy)), source_stay_(source_stay) {
  require_walkable(dist_, net_.ring_sizes());
  if (!source_stay_ && dist_[0] != 0.0) {
    fail(ErrorCode::InvalidDistribution, "the distance-2 walk needs p_0 = 0 unless the source may stay");
  }
  if (!check_uniform_connectivity(net_) || !check_uniform_connectivity_d2(net_)) {
    fail(ErrorCode::NotUniformlyConnected, "network is not uniformly connected at distances 1 and 2");
  }
  if (policy_.s.empty() && net_.radius() > 1) policy_ = default_policy(net_, dist_, source_stay_);
  check_policy_shape(policy_, net_);
  (void)ring_law_d2(net_, dist_, policy_, source_stay_);  // throws InfeasibleStay
}

LocalRingView RingSamplerD2::view(NodeId x) const {
  return {net_.delta(x), net_.gamma(x), dist_[net_.ring_of(x)]};
}

WalkResult RingSamplerD2::sample(SplitMix64& rng) const {
  const double p0 = dist_[0];
  if (net_.radius() == 0) return {0, 0};
  if (source_stay_ && rng.bernoulli(p0)) return {0, 0};
  WalkMessage2 msg = initial_message_d2(0, p0, static_cast<double>(net_.delta(0)));
  NodeId x = pick(net_.up(0), rng);
  std::uint32_t hops = 1;
  for (;;) {
    const std::uint32_t k = net_.ring_of(x);
    const LocalRingView local = view(x);
    const StepResult r = step_rules_d2(msg, local);
    if (local.delta == 0 || rng.bernoulli(r.q)) return {x, hops};
    const double s = policy_.effective(net_, k);
    const RingTuple own{r.v, local.p, r.n, s};
    WalkMessage2 next{0, own, msg.prev1, static_cast<double>(local.delta)};
    if (s >= 1.0 || rng.uniform() < s) {
      msg = next;
      x = pick(net_.up(x), rng);
    } else {
      // The intermediate ring is skipped, so fill in its tuple here from
      // the view of one of our up-neighbors.
      const NodeId z = net_.up(x)[0];
      const LocalRingView mid = view(z);
      const StepResult r1 = step_rules_d2(next, mid);
      const RingTuple skipped{r1.v, mid.p, r1.n, policy_.effective(net_, k + 1)};
      msg = WalkMessage2{0, skipped, own, static_cast<double>(mid.delta)};
      x = pick(net_.up2(x), rng);
    }
    ++hops;
  }
}

WalkResult sample_rings_d1(const RingNetwork& net, const DistanceDistribution& dist,
                           SplitMix64& rng, bool force) {
  return RingSamplerD1(net, dist, force).sample(rng);
}

WalkResult sample_rings_d2(const RingNetwork& net, const DistanceDistribution& dist,
                           const HopPolicy& policy, SplitMix64& rng, bool source_stay) {
  return RingSamplerD2(net, dist, policy, source_stay).sample(rng);
}

// ---------------------------------------------------------------------------

WalkModel rings_walk_model(const RingNetwork& net, const DistanceDistribution& dist, RingMode mode,
                           const HopPolicy* policy, bool source_stay) {
  HopPolicy chosen;
  if (mode == RingMode::D2) {
    chosen = policy && !policy->s.empty() ? *policy
             : net.radius() > 1           ? default_policy(net, dist, source_stay)
                                          : HopPolicy{};
  }
  const RingLaw law =
      mode == RingMode::D1 ? ring_law_d1(net, dist) : ring_law_d2(net, dist, chosen, source_stay);

  const std::size_t n = net.node_count();
  WalkModel model;
  model.source = 0;
  model.stay.assign(n, 1.0);
  model.hops.assign(n, {});
  model.ring.assign(n, 0);
  for (NodeId x = 0; x < n; ++x) {
    const std::uint32_t k = net.ring_of(x);
    model.ring[x] = k;
    const auto up = net.up(x);
    if (up.empty()) continue;
    model.stay[x] = law.q[k];
    const double s = mode == RingMode::D2 ? chosen.effective(net, k) : 1.0;
    for (NodeId y : up) model.hops[x].push_back({y, s / static_cast<double>(up.size())});
    if (s < 1.0) {
      const auto up2 = net.up2(x);
      for (NodeId y : up2) model.hops[x].push_back({y, (1.0 - s) / static_cast<double>(up2.size())});
    }
  }
  return model;
}

ExactLaw rings_oracle(const RingNetwork& net, const DistanceDistribution& dist, RingMode mode,
                      const HopPolicy* policy, bool source_stay) {
  return dag_oracle(rings_walk_model(net, dist, mode, policy, source_stay));
}

}  // namespace rcw
