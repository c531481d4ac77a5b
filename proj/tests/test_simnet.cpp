#include <doctest.h>

#include <sstream>

#include "rcw/simnet.hpp"
#include "rcw/tree_sampler.hpp"
#include "test_util.hpp"

using namespace rcw;

namespace {

struct Ping : NodeTask<int> {
  bool sender = false;
  int received = 0;
  void on_start(Outbox<int>& out) override {
    if (sender) out.send(1, 42);
  }
  void on_message(const Envelope<int>& m, Outbox<int>&) override { received += m.payload; }
};

// Sends `count` numbered messages to node 1 in one round.
struct Burst : NodeTask<int> {
  int count = 0;
  std::vector<int> seen;
  void on_start(Outbox<int>& out) override {
    for (int i = 0; i < count; ++i) out.send(1, i);
  }
  void on_message(const Envelope<int>& m, Outbox<int>&) override { seen.push_back(m.payload); }
};

struct Forever : NodeTask<int> {
  void on_start(Outbox<int>& out) override { out.send(out.self() == 0 ? 1 : 0, 0); }
  void on_message(const Envelope<int>& m, Outbox<int>& out) override { out.send(m.src, 0); }
};

}  // namespace

TEST_CASE("two-node ping") {
  SimEngine<int> engine({{1}, {0}}, 1);
  auto a = std::make_unique<Ping>();
  a->sender = true;
  engine.set_task(0, std::move(a));
  engine.set_task(1, std::make_unique<Ping>());
  const auto stats = engine.run_until_quiescent(10);
  CHECK(stats.rounds == 1);
  CHECK(stats.messages == 1);
  CHECK(static_cast<Ping&>(engine.task(1)).received == 42);
}

TEST_CASE("empty engine") {
  SimEngine<int> engine({}, 0);
  const auto stats = engine.run_until_quiescent(10);
  CHECK(stats.rounds == 0);
  CHECK(stats.messages == 0);
}

TEST_CASE("messages between one pair keep their order") {
  SimEngine<int> engine({{1}, {0}}, 99);
  auto a = std::make_unique<Burst>();
  a->count = 50;
  engine.set_task(0, std::move(a));
  engine.set_task(1, std::make_unique<Burst>());
  engine.run_until_quiescent(5);
  const auto& seen = static_cast<Burst&>(engine.task(1)).seen;
  REQUIRE(seen.size() == 50);
  for (int i = 0; i < 50; ++i) CHECK(seen[i] == i);
}

TEST_CASE("round limit and link checks") {
  SimEngine<int> engine({{1}, {0}}, 0);
  engine.set_task(0, std::make_unique<Forever>());
  engine.set_task(1, std::make_unique<Forever>());
  try {
    engine.run_until_quiescent(7);
    FAIL("expected RoundLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RoundLimitExceeded);
  }

  SimEngine<int> bad({{}, {}, {}}, 0);
  auto p = std::make_unique<Ping>();
  p->sender = true;
  bad.set_task(0, std::move(p));
  CHECK_THROWS(bad.run_until_quiescent(3));
}

TEST_CASE("aggregation on a 5-node path: 4 rounds, 8 messages") {
  const auto net = testing::path_graph(5);
  const auto agg = aggregate(net);
  CHECK(agg.stats().rounds == 4);
  CHECK(agg.stats().messages == 8);
}

TEST_CASE("trace is identical for identical seeds") {
  SplitMix64 rng(4);
  const auto net = testing::random_connected(30, 10, rng);
  std::ostringstream a, b;
  aggregate(net, {17, 0, &a});
  aggregate(net, {17, 0, &b});
  CHECK(a.str() == b.str());
  CHECK(a.str().find("WEIGHT") != std::string::npos);
}
