#include <catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "fibgrid/simulator.hpp"

using namespace fibgrid;

namespace {

// Per (tile, side), messages must be sent in the order they were queued.
bool queues_in_order(const std::vector<Event>& events) {
  std::map<std::pair<int, int>, std::vector<std::uint64_t>> in, out;
  for (const auto& e : events) {
    if (e.kind == "queue") in[{e.tile, e.side}].push_back(e.message);
    if (e.kind == "send") out[{e.tile, e.side}].push_back(e.message);
  }
  for (const auto& [key, sent] : out) {
    const auto& queued = in[key];
    if (sent.size() > queued.size() || !std::equal(sent.begin(), sent.end(), queued.begin())) return false;
  }
  return true;
}

int tile_at_distance(const GridBall& g, int d) {
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (g.dist(static_cast<int>(t)) == d) return static_cast<int>(t);
  }
  return -1;
}

}  // namespace

TEST_CASE("cost values", "[simulator]") {
  CHECK(parse_cost("0.1") == Cost(1, 10));
  CHECK(parse_cost("3/4") == Cost(3, 4));
  CHECK(parse_cost("10") == Cost(10));
  CHECK(parse_cost(".5") == Cost(1, 2));
  CHECK_THROWS_AS(parse_cost("-1"), InvalidArgument);
  CHECK_THROWS_AS(parse_cost("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_cost("abc"), InvalidArgument);
  CHECK(cost_to_string(Cost(69, 10)) == "69/10");
  CHECK(transmission_cost(0, 5, Cost(1)) == Cost(0));
  CHECK(transmission_cost(3, 10, Cost(1, 10)) == Cost(69, 10));
  CHECK_THROWS_AS(transmission_cost(-1, 0, Cost(1)), InvalidArgument);
}

TEST_CASE("unicast accounting", "[simulator]") {
  auto g = build_ball(5, 5);
  int d = tile_at_distance(g, 5);
  auto r = run_unicast(g, 0, d, 0, Cost(1));
  CHECK(r.latency == 5);
  CHECK(r.cost == Cost(30));
  auto r2 = run_unicast(g, 0, 0, 7, Cost(1));
  CHECK(r2.latency == 0);
  CHECK(r2.cost == Cost(0));
}

TEST_CASE("broadcast timing", "[simulator]") {
  auto g = build_ball(7, 5);
  auto r0 = run_broadcast(g, 0, 0);
  CHECK(r0.arrival[0] == 0);
  for (std::size_t t = 1; t < g.size(); ++t) CHECK(r0.arrival[t] == -1);

  auto r = run_broadcast(g, 0);
  std::map<int, std::uint64_t> per_tick;
  for (std::size_t t = 0; t < g.size(); ++t) {
    REQUIRE(r.receipts[t] == 1);
    REQUIRE(r.arrival[t] == g.dist(static_cast<int>(t)));
    ++per_tick[r.arrival[t]];
  }
  for (int k = 1; k <= 5; ++k) CHECK(per_tick[k] == 7 * static_cast<std::uint64_t>(level_count(k - 1, NodeStatus::ThreeNode)));
  CHECK(r.stats.conserved);
  CHECK(queues_in_order(r.events));

  // addresses carried by the messages are the routing addresses
  auto b = broadcast_addresses(g, g.at("2"));
  auto rs = run_broadcast(g, g.at("2"), 3);
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (b.level[t] < 0 || b.level[t] > 3) continue;
    REQUIRE(rs.arrival[t] == b.level[t]);
    REQUIRE(rs.address[t] == b.address(static_cast<int>(t)));
  }
}

TEST_CASE("reply storms", "[simulator]") {
  auto g = build_ball(5, 5);
  // one replier, no contention
  auto b = broadcast_addresses(g, 0);
  int d = tile_at_distance(g, 4);
  Simulator sim(g);
  sim.inject_reply(0, b.address(d));
  sim.run();
  REQUIRE(sim.deliveries().size() == 1);
  CHECK(sim.deliveries()[0].latency == 4);

  for (int k = 1; k <= 4; ++k) {
    auto r = run_reply_storm(g, 0, k);
    CHECK(r.received == r.repliers);
    // the level holds p f_{2k-1} tiles; p f_{2k+1} counts one level further out
    CHECK(r.repliers == 5 * static_cast<std::size_t>(fib(2 * k - 1, FibConvention::F01)));
    CHECK(r.repliers != 5 * static_cast<std::size_t>(fib(2 * k + 1, FibConvention::F01)));
    CHECK(r.max_intake_at_source <= 5);
    CHECK(r.stats.max_fan_in <= 5);
    CHECK(r.stats.conserved);
    CHECK(r.fifo);
    CHECK(queues_in_order(r.events));
  }
}

TEST_CASE("queue warnings and determinism", "[simulator]") {
  auto g = build_ball(5, 4);
  SimConfig cfg;
  cfg.high_water = 2;
  auto r = run_reply_storm(g, 0, 3, cfg);
  CHECK_FALSE(r.stats.warnings.empty());
  CHECK(r.received == r.repliers);

  auto a = run_reply_storm(g, g.at("3"), 2);
  auto c = run_reply_storm(g, g.at("3"), 2);
  std::ostringstream la, lc;
  write_events(la, g, a.events);
  write_events(lc, g, c.events);
  CHECK(la.str() == lc.str());
  CHECK(stats_json(a.stats).dump() == stats_json(c.stats).dump());
  auto first = nlohmann::json::parse(la.str().substr(0, la.str().find('\n')));
  CHECK(first.contains("tick"));
  CHECK(first.contains("event"));
  CHECK(first.contains("message"));
}

TEST_CASE("fifo check rejects overtaking", "[simulator]") {
  std::vector<Event> ok{{0, 1, "queue", 1, 2}, {0, 1, "queue", 2, 2}, {0, 1, "send", 1, 2}, {1, 1, "send", 2, 2}};
  std::vector<Event> bad{{0, 1, "queue", 1, 2}, {0, 1, "queue", 2, 2}, {0, 1, "send", 2, 2}};
  CHECK(fifo_respected(ok));
  CHECK_FALSE(fifo_respected(bad));
}

TEST_CASE("traffic law", "[simulator]") {
  double beta = growth_rate();
  CHECK(beta == Catch::Approx(2.6180339887).epsilon(1e-10));
  CHECK(beta * beta - 3 * beta + 1 == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(traffic_model(5, 0.9), InvalidArgument);
  auto m = traffic_model(5, 1.5);
  double total = 0;
  for (int k = 0; k <= 60; ++k) total += m.probability(k);
  CHECK(total == Catch::Approx(1.0).epsilon(1e-9));
  for (int k = 0; k <= 8; ++k) CHECK(m.tail_exact(k) <= m.tail_bound(k));
  auto steep = traffic_model(5, 20.0);
  CHECK(steep.tail_bound(0) < 1e-7);
  auto [pk, tail] = traffic_bound(2, m.C, 1.5, 5);
  CHECK(pk == Catch::Approx(m.probability(2)));
  CHECK(tail == Catch::Approx(m.tail_bound(2)));

  auto g = build_ball(5, 4);
  auto x = monte_carlo_traffic(g, m, 2000, 7, 4);
  auto y = monte_carlo_traffic(g, m, 2000, 7, 4);
  CHECK(x.tail == y.tail);
}
