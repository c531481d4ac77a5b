#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rcw/oracle_stats.hpp"
#include "rcw/ring_sampler.hpp"
#include "test_util.hpp"

using namespace rcw;

TEST_CASE("DAG oracle: order invariance and cycle detection") {
  SplitMix64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto net = testing::random_uniform_rings(2 + rng.below(6), 7, rng);
    const auto model = rings_walk_model(net, testing::random_distance_distribution(net.ring_sizes(), rng), RingMode::D1);
    const auto a = dag_oracle(model, TopoOrder::Ascending);
    const auto b = dag_oracle(model, TopoOrder::Descending);
    for (std::size_t x = 0; x < a.probability.size(); ++x) CHECK(std::abs(a.probability[x] - b.probability[x]) <= 1e-15);
    CHECK(a.total() == doctest::Approx(1.0).epsilon(1e-12));
  }
  WalkModel cyc;
  cyc.source = 0;
  cyc.stay = {0.5, 0.5};
  cyc.hops = {{{1, 1.0}}, {{0, 1.0}}};
  cyc.ring = {0, 1};
  try {
    dag_oracle(cyc);
    FAIL("expected CyclicHopGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CyclicHopGraph);
  }
}

TEST_CASE("relative error examples") {
  const std::vector<double> law{0.25, 0.25, 0.25, 0.25};
  const std::vector<std::uint64_t> exact{100, 100, 100, 100};
  const auto r = relative_error(exact, law, 400);
  for (double e : r.rel_error) CHECK(e == 0.0);
  CHECK(r.mean_rel_error == 0.0);

  const std::vector<std::uint64_t> doubled{200, 100, 100, 0};
  const auto d = relative_error(doubled, law, 400);
  CHECK(d.rel_error[0] == doctest::Approx(1.0));
  CHECK(d.max_rel_error == doctest::Approx(1.0));

  const std::vector<double> tiny{0.001, 0.999};
  const std::vector<std::uint64_t> c{1, 999};
  const auto t = relative_error(c, tiny, 1000);
  CHECK(std::isnan(t.rel_error[0]));
  CHECK(defined_errors(t).size() == 1);
}

TEST_CASE("ideal sampler baseline") {
  const std::size_t n = 10000;
  const std::uint64_t s = 1000000;
  const std::vector<double> law(n, 1.0 / n);
  const auto counts = ideal_sampler(law, s, 5);
  const auto r = relative_error(counts, law, s);
  const double formula = std::sqrt(2.0 / std::numbers::pi) * std::sqrt((1.0 - 1.0 / n) / (s / double(n)));
  CHECK(formula == doctest::Approx(0.0798).epsilon(0.01));
  CHECK(ideal_mean_rel_error(1.0 / n, s) == doctest::Approx(formula));
  CHECK(r.mean_rel_error == doctest::Approx(formula).epsilon(0.03));
  CHECK(r.chi.p_value > 0.001);
}

TEST_CASE("alias table and point mass") {
  const std::vector<double> point{0.0, 0.0, 1.0, 0.0};
  const auto counts = ideal_sampler(point, 1000, 1);
  CHECK(counts[2] == 1000);
  const auto chi = chi_square(counts, point);
  CHECK(chi.p_value == doctest::Approx(1.0));

  const std::vector<double> w{1.0, 3.0};
  AliasTable table(w);
  SplitMix64 rng(2);
  std::vector<std::uint64_t> c(2);
  for (int i = 0; i < 100000; ++i) ++c[table.draw(rng)];
  const std::vector<double> law{0.25, 0.75};
  CHECK(chi_square(c, law).p_value > 0.001);
  CHECK_THROWS(AliasTable(std::vector<double>{}));
}

TEST_CASE("chi-square detects a wrong law and an impossible cell") {
  const std::vector<double> law{0.5, 0.5};
  const std::vector<std::uint64_t> skew{6000, 4000};
  CHECK(chi_square(skew, law).p_value < 1e-6);
  const std::vector<double> half{1.0, 0.0};
  const std::vector<std::uint64_t> hit{99, 1};
  CHECK(chi_square(hit, half).p_value == 0.0);
}

TEST_CASE("chi-square p-values are uniform over seeds") {
  const std::size_t n = 50;
  const std::vector<double> law(n, 1.0 / n);
  std::vector<double> p;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto counts = ideal_sampler(law, 20000, seed);
    p.push_back(chi_square(counts, law).p_value);
  }
  CHECK(ks_uniform(p).p_value > 0.01);
}

TEST_CASE("Kolmogorov distribution and KS tests") {
  CHECK(kolmogorov_q(0.5) == doctest::Approx(0.9639452436).epsilon(1e-8));
  CHECK(kolmogorov_q(1.0) == doctest::Approx(0.2699996716).epsilon(1e-8));
  CHECK(kolmogorov_q(2.0) == doctest::Approx(0.0006709).epsilon(1e-3));
  CHECK(kolmogorov_q(0.1) == 1.0);

  SplitMix64 rng(9);
  std::vector<double> a, b, shifted;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(rng.uniform());
    b.push_back(rng.uniform());
    shifted.push_back(rng.uniform() + 0.2);
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, shifted).p_value < 1e-6);
  CHECK(ks_uniform(a).p_value > 0.01);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
}
