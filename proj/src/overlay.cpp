#include "rcw/overlay.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>

#include "rcw/ring_sampler.hpp"

namespace rcw {

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) fail(ErrorCode::InvalidArgument, "lcm of zero");
  const std::uint64_t g = std::gcd(a, b);
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a / g, b, &out)) fail(ErrorCode::InvalidArgument, "lcm overflows 64 bits");
  return out;
}

std::vector<bool> halls_condition(const RingNetwork& net) {
  const std::size_t R = net.radius();
  std::vector<bool> out(R >= 1 ? R - 1 : 0, false);
  for (std::size_t k = 1; k < R; ++k) {
    std::size_t min_delta = SIZE_MAX, max_gamma = 0;
    for (NodeId x = net.ring_begin(k); x < net.ring_end(k); ++x) min_delta = std::min(min_delta, net.delta(x));
    for (NodeId y = net.ring_begin(k + 1); y < net.ring_end(k + 1); ++y) max_gamma = std::max(max_gamma, net.gamma(y));
    const unsigned __int128 lhs = static_cast<unsigned __int128>(net.ring_size(k + 1)) * max_gamma;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(net.ring_size(k)) * min_delta;
    out[k - 1] = lhs <= rhs;
  }
  return out;
}

AttachmentOverlay::AttachmentOverlay(std::vector<std::size_t> ring_sizes,
                                     std::vector<std::uint32_t> ring_of,
                                     std::vector<std::vector<NodeId>> up_points,
                                     std::vector<std::vector<NodeId>> down_points)
    : sizes_(std::move(ring_sizes)),
      ring_of_(std::move(ring_of)),
      up_(std::move(up_points)),
      down_(std::move(down_points)) {
  if (up_.size() != ring_of_.size() || down_.size() != ring_of_.size()) {
    fail(ErrorCode::InvalidArgument, "overlay point lists do not match the node count");
  }
}

std::uint64_t AttachmentOverlay::points(std::size_t k) const {
  if (k + 1 >= sizes_.size()) fail(ErrorCode::InvalidArgument, "no ring pair beyond the last ring");
  return checked_lcm(sizes_[k], sizes_[k + 1]);
}

// ---------------------------------------------------------------------------

namespace {

enum class AapKind : std::uint8_t { Attach, Ok, Refuse };

struct AapMsg {
  AapKind kind;
};

std::string_view kind_name(const AapMsg& m) {
  switch (m.kind) {
    case AapKind::Attach: return "ATTACH";
    case AapKind::Ok: return "OK";
    case AapKind::Refuse: return "REFUSE";
  }
  return "?";
}

class AapTask final : public NodeTask<AapMsg> {
 public:
  AapTask(std::uint64_t up_points, std::span<const NodeId> candidates, std::uint64_t down_points,
          SplitMix64 rng)
      : ap_(up_points), candidates_(candidates.begin(), candidates.end()), free_(down_points), rng_(rng) {}

  void on_start(Outbox<AapMsg>& out) override { request(out); }

  void on_message(const Envelope<AapMsg>& m, Outbox<AapMsg>& out) override {
    switch (m.payload.kind) {
      case AapKind::Attach:
        if (free_ > 0) {
          --free_;
          granted_.push_back(m.src);
          out.send(m.src, {AapKind::Ok});
        } else {
          out.send(m.src, {AapKind::Refuse});
        }
        break;
      case AapKind::Ok:
        --ap_;
        attached_.push_back(m.src);
        request(out);
        break;
      case AapKind::Refuse:
        candidates_.erase(std::find(candidates_.begin(), candidates_.end(), m.src));
        request(out);
        break;
    }
  }

  std::uint64_t unconnected() const noexcept { return ap_; }
  std::vector<NodeId>& attached() noexcept { return attached_; }
  std::vector<NodeId>& granted() noexcept { return granted_; }

 private:
  void request(Outbox<AapMsg>& out) {
    if (ap_ == 0 || candidates_.empty()) return;
    out.send(candidates_[rng_.below(candidates_.size())], {AapKind::Attach});
  }

  std::uint64_t ap_;
  std::vector<NodeId> candidates_;
  std::uint64_t free_;
  SplitMix64 rng_;
  std::vector<NodeId> attached_, granted_;
};

}  // namespace

AapOutcome try_assign_attachment_points(const RingNetwork& net, const AapOptions& options) {
  const std::size_t n = net.node_count(), R = net.radius();
  std::vector<std::uint64_t> r(R, 0);
  for (std::size_t k = 0; k < R; ++k) r[k] = checked_lcm(net.ring_size(k), net.ring_size(k + 1));

  SimEngine<AapMsg> engine(net.link_lists(), options.seed);
  std::uint64_t longest = 0;
  for (NodeId x = 0; x < n; ++x) {
    const std::size_t k = net.ring_of(x);
    const std::uint64_t up = k < R ? r[k] / net.ring_size(k) : 0;
    const std::uint64_t down = k >= 1 ? r[k - 1] / net.ring_size(k) : 0;
    longest = std::max<std::uint64_t>(longest, up + net.delta(x));
    engine.set_task(x, std::make_unique<AapTask>(up, net.up(x), down, stream(options.seed, 0x4141, x)));
  }
  if (options.trace) engine.set_trace(options.trace, kind_name);
  // Each request takes two rounds and a node makes at most ap + |C| of them.
  const std::uint64_t limit = options.max_rounds ? options.max_rounds : 2 * longest + 4;

  AapOutcome outcome;
  outcome.stats = engine.run_until_quiescent(limit);

  std::vector<std::vector<NodeId>> up(n), down(n);
  std::vector<std::uint32_t> ring_of(n);
  for (NodeId x = 0; x < n; ++x) {
    auto& task = static_cast<AapTask&>(engine.task(x));
    ring_of[x] = net.ring_of(x);
    if (task.unconnected() > 0) outcome.failed.push_back(x);
    up[x] = std::move(task.attached());
    down[x] = std::move(task.granted());
  }
  if (outcome.failed.empty()) {
    outcome.overlay.emplace(net.ring_sizes(), std::move(ring_of), std::move(up), std::move(down));
  }
  return outcome;
}

AttachmentOverlay assign_attachment_points(const RingNetwork& net, const AapOptions& options) {
  AapOutcome outcome = try_assign_attachment_points(net, options);
  if (!outcome.overlay) {
    throw AapFailure(outcome.failed, std::to_string(outcome.failed.size()) +
                                         " nodes could not connect all their attachment points");
  }
  return std::move(*outcome.overlay);
}

// ---------------------------------------------------------------------------

OverlaySampler::OverlaySampler(const AttachmentOverlay& overlay, DistanceDistribution dist)
    : ov_(overlay), dist_(std::move(dist)) {
  require_walkable(dist_, ov_.ring_sizes());
}

WalkResult OverlaySampler::sample(SplitMix64& rng) const {
  const double p0 = dist_[0];
  if (ov_.ring_count() == 1 || rng.bernoulli(p0)) return {0, 0};
  WalkMessage1 msg{0, 1.0, p0, 1.0, static_cast<double>(ov_.up_points(0).size())};
  auto hop = [&](NodeId x) {
    const auto pts = ov_.up_points(x);
    return pts[rng.below(pts.size())];
  };
  NodeId x = hop(0);
  std::uint32_t hops = 1;
  for (;;) {
    const LocalRingView local{ov_.up_points(x).size(), ov_.down_points(x).size(), dist_[ov_.ring_of(x)]};
    const StepResult r = step_rules_d1(msg, local);
    if (local.delta == 0 || rng.bernoulli(r.q)) return {x, hops};
    msg = WalkMessage1{0, r.v, local.p, r.n, static_cast<double>(local.delta)};
    x = hop(x);
    ++hops;
  }
}

WalkResult overlay_sample(const AttachmentOverlay& overlay, const DistanceDistribution& dist,
                          SplitMix64& rng) {
  return OverlaySampler(overlay, dist).sample(rng);
}

WalkModel overlay_walk_model(const AttachmentOverlay& ov, const DistanceDistribution& dist) {
  require_walkable(dist, ov.ring_sizes());
  const std::size_t rings = ov.ring_count();
  std::vector<double> q(rings, 1.0);
  double v = 1.0;
  q[0] = rings == 1 ? 1.0 : dist[0];
  for (std::size_t k = 1; k < rings; ++k) {
    v = static_cast<double>(ov.ring_sizes()[k - 1]) * (v - dist[k - 1]) /
        static_cast<double>(ov.ring_sizes()[k]);
    q[k] = stay_from_visit(dist[k], v, k + 1 == rings);
  }

  const std::size_t n = ov.node_count();
  WalkModel model;
  model.source = 0;
  model.stay.assign(n, 1.0);
  model.hops.assign(n, {});
  model.ring.assign(n, 0);
  for (NodeId x = 0; x < n; ++x) {
    model.ring[x] = ov.ring_of(x);
    const auto pts = ov.up_points(x);
    if (pts.empty()) continue;
    model.stay[x] = q[ov.ring_of(x)];
    std::map<NodeId, std::size_t> multiplicity;
    for (NodeId y : pts) ++multiplicity[y];
    for (const auto& [y, m] : multiplicity) {
      model.hops[x].push_back({y, static_cast<double>(m) / static_cast<double>(pts.size())});
    }
  }
  return model;
}

ExactLaw overlay_oracle(const AttachmentOverlay& overlay, const DistanceDistribution& dist) {
  return dag_oracle(overlay_walk_model(overlay, dist));
}

// ---------------------------------------------------------------------------

std::vector<SuccessRow> success_rate_experiment(std::span<const double> betas, std::uint32_t trials,
                                                std::uint64_t seed, std::uint32_t rings,
                                                std::uint32_t per_ring) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::vector<SuccessRow> table;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    SuccessRow row;
    row.beta = betas[b];
    row.trials = trials;
    std::uint32_t ok = 0, halls = 0;
    for (std::uint32_t t = 0; t < trials; ++t) {
      GeometricDeployment dep{rings, per_ring, betas[b], stream(seed, t)()};
      try {
        const RingNetwork net = build_geometric(dep);
        const auto h = halls_condition(net);
        if (std::all_of(h.begin(), h.end(), [](bool v) { return v; })) ++halls;
        if (try_assign_attachment_points(net, {stream(seed, t, b)(), 0, nullptr}).overlay) ++ok;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DisconnectedRing) throw;
      }
    }
    row.success_rate = static_cast<double>(ok) / trials;
    row.halls_rate = static_cast<double>(halls) / trials;
    table.push_back(row);
  }
  return table;
}

}  // namespace rcw
