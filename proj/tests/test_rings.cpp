#include <doctest.h>

#include "rcw/oracle_stats.hpp"
#include "rcw/ring_sampler.hpp"
#include "test_util.hpp"

using namespace rcw;

namespace {

RingNetwork rings_144() {
  const std::vector<std::size_t> s{1, 4, 4}, d{4, 1}, g{1, 1};
  return build_uniform_rings(s, d, g);
}

RingNetwork random_d2_rings(SplitMix64& rng, std::size_t max_r, std::size_t max_size) {
  for (;;) {
    const auto spec = testing::random_rings_spec(3 + rng.below(max_r - 2), max_size, rng);
    try {
      return build_uniform_rings(spec.sizes, spec.delta, spec.gamma, true);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotUniformlyConnected) throw;
    }
  }
}

}  // namespace

TEST_CASE("d1 step rules on rings [1,4,4]") {
  const auto net = rings_144();
  const auto u = uniform(net);
  WalkMessage1 m{0, 1.0, u[0], 1.0, 4.0};
  const auto r1 = step_rules_d1(m, {1, 1, u[1]});
  CHECK(r1.n == doctest::Approx(4.0));
  CHECK(r1.v == doctest::Approx(2.0 / 9));
  CHECK(r1.q == doctest::Approx(0.5));
  const auto r2 = step_rules_d1({0, r1.v, u[1], r1.n, 1.0}, {0, 1, u[2]});
  CHECK(r2.v == doctest::Approx(1.0 / 9));
  CHECK(r2.q == 1.0);

  const auto law = ring_law_d1(net, u);
  CHECK(law.v[1] == doctest::Approx(2.0 / 9));
  CHECK(law.q[1] == doctest::Approx(0.5));
  for (double p : rings_oracle(net, u).probability) CHECK(std::abs(p - 1.0 / 9) <= 1e-15);
}

TEST_CASE("first ring visit is (1 - p_0) / n_1") {
  SplitMix64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto net = testing::random_uniform_rings(1 + rng.below(8), 10, rng);
    const auto d = testing::random_distance_distribution(net.ring_sizes(), rng);
    CHECK(ring_law_d1(net, d).v[1] == doctest::Approx((1.0 - d[0]) / net.ring_size(1)));
  }
}

TEST_CASE("d2 step rules reproduce the hand recurrence") {
  // Rings [1,4,4,4], ring 1 visited with 1/4, p = 1/13, s_1 = 1/2.
  WalkMessage2 m = initial_message_d2(0, 0.0, 4.0);
  CHECK(m.prev1.v == 1.0);
  CHECK(m.prev2.n == 0.0);
  CHECK(m.prev1.s == 1.0);
  const auto r1 = step_rules_d2(m, {1, 1, 1.0 / 13});
  CHECK(r1.v == doctest::Approx(0.25));

  WalkMessage2 next;
  next.prev1 = {0.25, 1.0 / 13, 4.0, 0.5};
  next.prev2 = {1.0, 0.0, 1.0, 1.0};
  next.delta_prev1 = 1.0;
  const auto r2 = step_rules_d2(next, {1, 1, 1.0 / 13});
  CHECK(r2.v == doctest::Approx(9.0 / 104));
  CHECK(r2.q == doctest::Approx(8.0 / 9));
}

TEST_CASE("d2 with all-ones policy equals d1") {
  SplitMix64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto net = random_d2_rings(rng, 10, 8);
    const auto d = testing::random_distance_distribution(net.ring_sizes(), rng, true);
    const auto ones = uniform_policy(net, 1.0);
    const auto a = rings_oracle(net, d, RingMode::D1);
    const auto b = rings_oracle(net, d, RingMode::D2, &ones);
    for (std::size_t x = 0; x < a.probability.size(); ++x) {
      CHECK(std::abs(a.probability[x] - b.probability[x]) <= 1e-15);
    }
  }
}

TEST_CASE("d2 oracle under the default policy and under a feasible custom one") {
  SplitMix64 rng(13);
  int custom = 0;
  for (int t = 0; t < 30; ++t) {
    const auto net = random_d2_rings(rng, 12, 8);
    const auto d = testing::random_distance_distribution(net.ring_sizes(), rng, true);
    const auto pol = default_policy(net, d);
    REQUIRE(policy_feasible(net, d, pol));
    for (double s : pol.s) CHECK((s >= 0.5 && s <= 1.0));
    const auto law = rings_oracle(net, d, RingMode::D2, &pol);
    for (NodeId x = 0; x < net.node_count(); ++x) CHECK(std::abs(law.probability[x] - d[net.ring_of(x)]) <= 1e-12);

    HopPolicy r = uniform_policy(net, 1.0);
    for (auto& s : r.s) s = 0.5 + 0.5 * rng.uniform();
    if (!policy_feasible(net, d, r)) continue;
    ++custom;
    const auto law2 = rings_oracle(net, d, RingMode::D2, &r);
    for (NodeId x = 0; x < net.node_count(); ++x) CHECK(std::abs(law2.probability[x] - d[net.ring_of(x)]) <= 1e-12);
  }
  CHECK(custom > 0);
}

TEST_CASE("d2 errors") {
  const std::vector<std::size_t> s{1, 4, 4, 4, 4}, dl{4, 1, 1, 1}, g{1, 1, 1, 1};
  const auto net = build_uniform_rings(s, dl, g, true);
  const auto u = uniform(net);
  // p_0 > 0 needs source_stay.
  CHECK_THROWS(RingSamplerD2(net, u, {}));
  RingSamplerD2 stay(net, u, {}, true);
  CHECK(stay.policy().s.size() == 3);

  // Starve ring 2: everything jumps past it.
  const std::vector<double> p{0.0, 0.05, 0.1, 0.05, 0.05};
  const DistanceDistribution d(p);
  const HopPolicy starve{{0.05, 1.0, 1.0}};
  try {
    ring_law_d2(net, d, starve, false);
    FAIL("expected InfeasibleStay");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleStay);
  }
  CHECK_THROWS(ring_law_d2(net, d, HopPolicy{{1.0}}, false));
  CHECK_FALSE(policy_feasible(net, d, starve));

  // d2 needs the distance-2 layer.
  CHECK_THROWS(RingSamplerD2(build_uniform_rings(s, dl, g), d, {}));
}

TEST_CASE("last two rings never jump") {
  const std::vector<std::size_t> s{1, 4, 4, 4}, dl{4, 1, 1}, g{1, 1, 1};
  const auto net = build_uniform_rings(s, dl, g, true);
  const HopPolicy pol{{0.5, 0.3}};
  CHECK(pol.effective(net, 0) == 1.0);
  CHECK(pol.effective(net, 1) == 0.5);
  CHECK(pol.effective(net, 2) == 1.0);
}

TEST_CASE("d1 sampler: uniformity requirement, local sizes, force") {
  SplitMix64 rng(4);
  const auto net = testing::random_uniform_rings(6, 9, rng);
  const auto local = local_ring_sizes(net);
  for (NodeId x = 0; x < net.node_count(); ++x) CHECK(local[x] == doctest::Approx(net.ring_size(net.ring_of(x))));

  GeometricDeployment dep{8, 12, 120.0, 0};
  std::optional<RingNetwork> geo;
  for (; !geo; ++dep.seed) {
    try {
      geo.emplace(build_geometric(dep));
    } catch (const Error&) {
    }
  }
  REQUIRE_FALSE(check_uniform_connectivity(*geo));
  const auto u = uniform(*geo);
  try {
    RingSamplerD1(*geo, u);
    FAIL("expected NotUniformlyConnected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUniformlyConnected);
  }
  RingSamplerD1 forced(*geo, u, true);
  for (int i = 0; i < 1000; ++i) CHECK(forced.sample(rng).hops <= geo->radius());
  CHECK(rings_oracle(*geo, u).max_ring_spread() > 1e-6);
}

TEST_CASE("singleton chain is deterministic in shape") {
  const std::vector<std::size_t> s{1, 1, 1}, d{1, 1}, g{1, 1};
  const auto net = build_uniform_rings(s, d, g);
  const DistanceDistribution p({0.2, 0.3, 0.5});
  const auto law = rings_oracle(net, p);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(law.probability[k] - p[k]) <= 1e-15);
  SplitMix64 rng(0);
  for (int i = 0; i < 100; ++i) {
    const auto r = sample_rings_d1(net, p, rng);
    CHECK(r.hops == r.node);
  }
  const DistanceDistribution src({1.0, 0.0, 0.0});
  for (int i = 0; i < 10; ++i) CHECK(sample_rings_d1(net, src, rng).node == 0);
}

TEST_CASE("samplers match their oracles empirically") {
  SplitMix64 rng(6);
  const std::vector<std::size_t> s{1, 4, 4, 8, 8}, dl{4, 2, 2, 1}, g{1, 2, 1, 1};
  const auto net = build_uniform_rings(s, dl, g, true);
  const auto d = inverse_distance(net, 0.0);
  const auto pol = uniform_policy(net, 0.6);
  REQUIRE(policy_feasible(net, d, pol));
  const auto o1 = rings_oracle(net, d, RingMode::D1);
  const auto o2 = rings_oracle(net, d, RingMode::D2, &pol);
  RingSamplerD1 s1(net, d);
  RingSamplerD2 s2(net, d, pol);
  std::vector<std::uint64_t> c1(net.node_count()), c2(net.node_count());
  double h1 = 0, h2 = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const auto a = s1.sample(rng);
    const auto b = s2.sample(rng);
    ++c1[a.node];
    ++c2[b.node];
    h1 += a.hops;
    h2 += b.hops;
    CHECK_MESSAGE(a.hops <= net.radius(), "hops");
    CHECK_MESSAGE(b.hops <= net.radius(), "hops");
  }
  CHECK(chi_square(c1, o1.probability).p_value > 0.001);
  CHECK(chi_square(c2, o2.probability).p_value > 0.001);
  CHECK(h2 < h1);
}
