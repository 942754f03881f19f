#pragma once

// Synchronous message transport over a ball. Every tick each cell sends at
// most one message per side; the rest wait in a FIFO queue for that side.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "fibgrid/error.hpp"
#include "fibgrid/routing.hpp"

namespace fibgrid {

using Cost = boost::rational<long long>;

// "0.1" -> 1/10, "3/4" -> 3/4.
inline Cost parse_cost(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return InvalidArgument("not a non-negative number: " + s); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits_only = [](const std::string& x) {
    return !x.empty() && std::all_of(x.begin(), x.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  if (slash != std::string::npos) {
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!digits_only(a) || !digits_only(b) || std::stoll(b) == 0) throw bad();
    return Cost(std::stoll(a), std::stoll(b));
  }
  auto dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!digits_only(whole) || (dot != std::string::npos && !digits_only(frac)) || frac.size() > 15) throw bad();
  long long den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Cost(std::stoll(whole) * den + (frac.empty() ? 0 : std::stoll(frac)), den);
}

inline std::string cost_to_string(const Cost& c) {
  if (c.denominator() == 1) return std::to_string(c.numerator());
  return std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
}

// Cost of carrying a payload of length m over d hops: every hop costs one
// software step plus hardware copies of the payload and of the d digits.
inline Cost transmission_cost(long long d, long long m, const Cost& rho) {
  if (d < 0 || m < 0) throw InvalidArgument("distance and payload length must be non-negative");
  if (rho <= Cost(0)) throw InvalidArgument("rho must be positive");
  return Cost(d) * (Cost(1) + rho * Cost(m) + rho * Cost(d));
}

// ------------------------------------------------------------------ messages

enum class MessageKind { Public, Private };
enum class Direction { ToTarget, ToSource };

struct Message {
  std::uint64_t id = 0;
  MessageKind kind = MessageKind::Public;
  int source = -1;
  long long payload = 0;
  std::vector<ArcDigit> stack1;
  std::vector<ArcDigit> stack2;
  Direction direction = Direction::ToTarget;
  NodeStatus relay_status = NodeStatus::ThreeNode;  // status in the relative tree, public only
  int injected = 0;
  int hops = 0;
  Cost cost = 0;
};

struct Event {
  int tick = 0;
  int tile = 0;
  std::string kind;  // recv, send, queue, deliver
  std::uint64_t message = 0;
  int side = 0;
};

struct Delivery {
  std::uint64_t message = 0;
  int tile = -1;
  int tick = 0;
  int latency = 0;
  int hops = 0;
  Cost cost = 0;
  std::vector<ArcDigit> address;
};

struct SimConfig {
  Cost rho{1, 10};
  std::size_t high_water = 1 << 16;
  bool record_events = true;
  int max_ticks = 100000;
};

struct SimStats {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t sends = 0;
  std::uint64_t delayed = 0;  // message-ticks spent waiting behind others
  std::size_t max_queue_depth = 0;
  int max_fan_in = 0;
  int ticks = 0;
  bool conserved = true;
  std::vector<std::string> warnings;
  std::map<int, std::map<int, std::uint64_t>> latency_by_distance;
};

class Simulator {
 public:
  Simulator(const GridBall& g, SimConfig cfg = {}) : g_(g), cfg_(std::move(cfg)) {
    queues_.assign(g.size(), std::vector<std::deque<Message>>(g.p + 1));
    first_arrival_.assign(g.size(), -1);
    receipts_.assign(g.size(), 0);
  }

  // Public broadcast from c; relays at relative level `until_level` stop.
  void inject_broadcast(int c, int until_level = -1, long long payload = 0) {
    until_level_ = until_level;
    Message m = fresh(MessageKind::Public, c, payload);
    ++stats_.injected;
    receipts_[c] = 1;
    first_arrival_[c] = tick_;
    deliver(c, m);
    if (until_level == 0) return;
    for (int k = 1; k <= g_.p; ++k) {
      if (g_.neighbor(c, k).first < 0) continue;
      Message copy = m;
      copy.id = next_id_++;
      copy.stack1 = {g_.arc(c, k)};
      copy.relay_status = NodeStatus::ThreeNode;
      enqueue(c, k, std::move(copy));
    }
  }

  // Private message from the target of `address` back to c.
  void inject_reply(int c, const std::vector<ArcDigit>& address, long long payload = 0) {
    int d = trace_address(g_, c, address).back();
    Message m = fresh(MessageKind::Private, d, payload);
    m.stack1 = address;
    m.direction = Direction::ToSource;
    ++stats_.injected;
    route_private(d, std::move(m));
  }

  // Private message from c to the target of `address`, stacks as after a reply.
  void inject_unicast(int c, const std::vector<ArcDigit>& address, long long payload = 0) {
    trace_address(g_, c, address);
    Message m = fresh(MessageKind::Private, c, payload);
    m.stack2.assign(address.rbegin(), address.rend());
    m.direction = Direction::ToTarget;
    ++stats_.injected;
    route_private(c, std::move(m));
  }

  // Runs until nothing is queued or in flight.
  void run() {
    while (in_flight_.size() + queued_ > 0) {
      if (tick_ >= cfg_.max_ticks) throw ResourceLimit("simulation exceeded " + std::to_string(cfg_.max_ticks) + " ticks");
      send_phase();
      ++tick_;
      arrive_phase();
    }
    stats_.ticks = tick_;
  }

  const std::vector<Event>& events() const { return events_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const SimStats& stats() const { return stats_; }
  int arrival_tick(int t) const { return first_arrival_.at(t); }
  int receipts(int t) const { return receipts_.at(t); }
  // Arrivals at tile t per tick.
  const std::map<int, int>& intake(int t) const {
    static const std::map<int, int> none;
    auto it = intake_.find(t);
    return it == intake_.end() ? none : it->second;
  }

 private:
  struct Arrival {
    int tile;
    int side;
    Message msg;
  };

  const GridBall& g_;
  SimConfig cfg_;
  int tick_ = 0;
  int until_level_ = -1;
  std::uint64_t next_id_ = 1;
  std::size_t queued_ = 0;
  std::vector<std::vector<std::deque<Message>>> queues_;
  std::vector<Arrival> in_flight_;
  std::vector<Event> events_;
  std::vector<Delivery> deliveries_;
  std::vector<int> first_arrival_;
  std::vector<int> receipts_;
  std::map<int, std::map<int, int>> intake_;
  SimStats stats_;

  Message fresh(MessageKind kind, int source, long long payload) {
    Message m;
    m.id = next_id_++;
    m.kind = kind;
    m.source = source;
    m.payload = payload;
    m.injected = tick_;
    return m;
  }

  void log(int tile, const char* kind, std::uint64_t id, int side) {
    if (cfg_.record_events) events_.push_back({tick_, tile, kind, id, side});
  }

  void enqueue(int t, int side, Message m) {
    auto& q = queues_[t][side];
    log(t, "queue", m.id, side);
    q.push_back(std::move(m));
    ++queued_;
    stats_.max_queue_depth = std::max(stats_.max_queue_depth, q.size());
    if (q.size() == cfg_.high_water) {
      stats_.warnings.push_back("queue at " + g_.ids[t].compact() + " side " + std::to_string(side) + " reached " +
                                std::to_string(q.size()) + " messages");
    }
  }

  void deliver(int t, const Message& m) {
    log(t, "deliver", m.id, 0);
    ++stats_.delivered;
    int latency = tick_ - m.injected;
    deliveries_.push_back({m.id, t, tick_, latency, m.hops, m.cost, m.stack1});
    // the stacks together always hold the whole address
    ++stats_.latency_by_distance[static_cast<int>(m.stack1.size() + m.stack2.size())][latency];
  }

  // Private messages: pop the top of one stack, push it on the other, leave
  // through the side the direction bit selects.
  void route_private(int t, Message m) {
    auto& from = m.direction == Direction::ToSource ? m.stack1 : m.stack2;
    auto& to = m.direction == Direction::ToSource ? m.stack2 : m.stack1;
    if (from.empty()) {
      deliver(t, m);
      return;
    }
    ArcDigit d = from.back();
    from.pop_back();
    to.push_back(d);
    int side = m.direction == Direction::ToSource ? d.output : d.input;
    if (g_.neighbor(t, side).first < 0) throw ProtocolViolation("private message leaves the ball");
    enqueue(t, side, std::move(m));
  }

  void relay_public(int t, int entry, Message m) {
    if (++receipts_[t] > 1) {
      ++stats_.duplicates;
      return;
    }
    first_arrival_[t] = tick_;
    deliver(t, m);
    int level = static_cast<int>(m.stack1.size());
    if (until_level_ >= 0 && level >= until_level_) return;
    NodeStatus st = m.relay_status;
    for (int s = 0; s < son_count(st); ++s) {
      Hop h = relay_hop(g_, t, entry, s, st);
      if (h.tile < 0) continue;
      Message copy = m;
      copy.id = next_id_++;
      copy.stack1.push_back(g_.arc(t, h.alpha));
      copy.relay_status = son_status(st, s);
      enqueue(t, h.alpha, std::move(copy));
    }
  }

  void send_phase() {
    for (std::size_t t = 0; t < queues_.size(); ++t) {
      for (int side = 1; side <= g_.p; ++side) {
        auto& q = queues_[t][side];
        if (q.empty()) continue;
        Message m = std::move(q.front());
        q.pop_front();
        --queued_;
        stats_.delayed += q.size();
        auto [u, us] = g_.neighbor(static_cast<int>(t), side);
        log(static_cast<int>(t), "send", m.id, side);
        ++stats_.sends;
        ++m.hops;
        m.cost += Cost(1) + cfg_.rho * Cost(m.payload) +
                  cfg_.rho * Cost(static_cast<long long>(m.stack1.size() + m.stack2.size()));
        in_flight_.push_back({u, us, std::move(m)});
      }
    }
  }

  void arrive_phase() {
    std::vector<Arrival> batch;
    batch.swap(in_flight_);
    std::stable_sort(batch.begin(), batch.end(),
                     [](const Arrival& a, const Arrival& b) { return std::tie(a.tile, a.side) < std::tie(b.tile, b.side); });
    std::map<int, int> fan_in;
    for (auto& a : batch) {
      int n = ++fan_in[a.tile];
      stats_.max_fan_in = std::max(stats_.max_fan_in, n);
      ++intake_[a.tile][tick_];
      log(a.tile, "recv", a.msg.id, a.side);
      if (a.msg.kind == MessageKind::Public) {
        relay_public(a.tile, a.side, std::move(a.msg));
      } else {
        route_private(a.tile, std::move(a.msg));
      }
    }
    // Every message ever created is delivered, dropped as a duplicate,
    // queued or on the wire. Relays create one public copy per son.
    std::uint64_t live = queued_ + in_flight_.size();
    if (stats_.delivered + stats_.duplicates + live != next_id_ - 1) stats_.conserved = false;
  }
};

// ------------------------------------------------------------- log handling

inline nlohmann::json event_json(const GridBall& g, const Event& e) {
  return {{"tick", e.tick}, {"tile", g.ids[e.tile].compact()}, {"event", e.kind}, {"message", e.message}, {"side", e.side}};
}

inline void write_events(std::ostream& os, const GridBall& g, const std::vector<Event>& events) {
  for (const auto& e : events) os << event_json(g, e).dump() << "\n";
}

// Messages must leave every (tile, side) queue in the order they entered it.
inline bool fifo_respected(const std::vector<Event>& events) {
  std::map<std::pair<int, int>, std::deque<std::uint64_t>> pending;
  for (const auto& e : events) {
    if (e.kind == "queue") {
      pending[{e.tile, e.side}].push_back(e.message);
    } else if (e.kind == "send") {
      auto& q = pending[{e.tile, e.side}];
      if (q.empty() || q.front() != e.message) return false;
      q.pop_front();
    }
  }
  return true;
}

inline nlohmann::json stats_json(const SimStats& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [d, row] : s.latency_by_distance) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [lat, n] : row) r[std::to_string(lat)] = n;
    hist[std::to_string(d)] = r;
  }
  return {{"injected", s.injected},     {"delivered", s.delivered},   {"duplicates", s.duplicates},
          {"sends", s.sends},           {"delayed", s.delayed},       {"max_queue_depth", s.max_queue_depth},
          {"max_fan_in", s.max_fan_in}, {"ticks", s.ticks},           {"conserved", s.conserved},
          {"warnings", s.warnings},     {"latency_by_distance", hist}};
}

// ------------------------------------------------------------------ scenarios

struct BroadcastRun {
  std::vector<int> arrival;  // -1 when not reached
  std::vector<int> receipts;
  std::vector<std::vector<ArcDigit>> address;
  SimStats stats;
  std::vector<Event> events;
};

inline BroadcastRun run_broadcast(const GridBall& g, int c, int until_level = -1, SimConfig cfg = {}) {
  Simulator sim(g, cfg);
  sim.inject_broadcast(c, until_level);
  sim.run();
  BroadcastRun r;
  r.address.assign(g.size(), {});
  for (std::size_t t = 0; t < g.size(); ++t) {
    r.arrival.push_back(sim.arrival_tick(static_cast<int>(t)));
    r.receipts.push_back(sim.receipts(static_cast<int>(t)));
  }
  for (const auto& d : sim.deliveries()) r.address[d.tile] = d.address;
  r.stats = sim.stats();
  r.events = sim.events();
  return r;
}

struct ReplyStorm {
  std::size_t repliers = 0;
  std::size_t received = 0;
  int max_intake_at_source = 0;
  int last_tick = 0;
  bool fifo = true;
  SimStats stats;
  std::vector<Event> events;
};

// Every tile on relative level k of c's broadcast replies at once.
inline ReplyStorm run_reply_storm(const GridBall& g, int c, int k, SimConfig cfg = {}) {
  auto b = broadcast_addresses(g, c, kCalibratedEncoding, k);
  Simulator sim(g, cfg);
  ReplyStorm r;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (b.level[t] == k) {
      sim.inject_reply(c, b.address(static_cast<int>(t)));
      ++r.repliers;
    }
  }
  sim.run();
  for (const auto& d : sim.deliveries()) {
    if (d.tile == c) ++r.received;
  }
  for (const auto& [tick, n] : sim.intake(c)) r.max_intake_at_source = std::max(r.max_intake_at_source, n);
  r.last_tick = sim.stats().ticks;
  r.fifo = fifo_respected(sim.events());
  r.stats = sim.stats();
  r.events = sim.events();
  return r;
}

struct UnicastRun {
  int latency = 0;
  int hops = 0;
  Cost cost = 0;
  std::vector<Event> events;
};

inline UnicastRun run_unicast(const GridBall& g, int c, int d, long long payload, const Cost& rho) {
  auto route = route_in_ball(g, c, d);
  SimConfig cfg;
  cfg.rho = rho;
  Simulator sim(g, cfg);
  sim.inject_unicast(c, route.forward, payload);
  sim.run();
  if (sim.deliveries().size() != 1 || sim.deliveries()[0].tile != d) throw ProtocolViolation("unicast lost");
  const auto& del = sim.deliveries()[0];
  return {del.latency, del.hops, del.cost, sim.events()};
}

// -------------------------------------------------------------- traffic law

inline double growth_rate() { return (3.0 + std::sqrt(5.0)) / 2.0; }

// f_{2k+1} <= C1 beta^k with C1 = beta / sqrt 5.
inline double level_constant() { return growth_rate() / std::sqrt(5.0); }

struct TrafficModel {
  int p = 5;
  double lambda = 1.0;
  double gamma = 0.0;
  double C = 0.0;
  double D = 0.0;

  // Probability that a communication spans distance k.
  double probability(int k) const {
    return C * p * static_cast<double>(fib(2 * k + 1, FibConvention::F01)) * std::exp(-lambda * k);
  }

  double tail_bound(int k) const { return D * std::pow(gamma, k + 1) / (1.0 - gamma); }

  double tail_exact(int k) const {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += probability(j);
    return std::max(0.0, 1.0 - s);
  }
};

// C normalises sum_k C p f_{2k+1} e^{-lambda k} = C p / (1 - 3x + x^2), x = e^{-lambda}.
inline TrafficModel traffic_model(int p, double lambda) {
  check_tiling(p);
  TrafficModel m;
  m.p = p;
  m.lambda = lambda;
  m.gamma = growth_rate() / std::exp(lambda);
  if (!(m.gamma < 1.0)) throw InvalidArgument("gamma = beta / e^lambda must be below 1; increase lambda");
  double x = std::exp(-lambda);
  m.C = (1.0 - 3.0 * x + x * x) / p;
  m.D = m.C * level_constant() * p;
  return m;
}

inline std::pair<double, double> traffic_bound(int k, double C, double lambda, int p) {
  auto m = traffic_model(p, lambda);
  m.C = C;
  m.D = C * level_constant() * p;
  return {m.probability(k), m.tail_bound(k)};
}

struct MonteCarloResult {
  std::uint64_t draws = 0;
  std::vector<double> tail;       // empirical P(distance > k)
  std::vector<double> bound;
  std::vector<double> allowance;  // 3 sigma
  std::uint64_t outside_ball = 0;
  bool ok = true;
};

// Samples distances from the law, then a uniform target at that distance in
// the ball, and measures the distance actually realised.
inline MonteCarloResult monte_carlo_traffic(const GridBall& g, const TrafficModel& m, std::uint64_t draws,
                                            std::uint64_t seed, int k_max) {
  std::vector<std::vector<int>> ring(g.radius + 1);
  for (std::size_t t = 0; t < g.size(); ++t) ring[g.dist(static_cast<int>(t))].push_back(static_cast<int>(t));
  std::vector<double> weights;
  const int cutoff = 60;
  for (int k = 0; k <= cutoff; ++k) weights.push_back(m.probability(k));
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> law(weights.begin(), weights.end());
  MonteCarloResult r;
  r.draws = draws;
  std::vector<std::uint64_t> beyond(k_max + 1, 0);
  for (std::uint64_t i = 0; i < draws; ++i) {
    int k = law(rng);
    int realised = k;
    if (k <= g.radius) {
      const auto& candidates = ring[k];
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      realised = g.dist(candidates[pick(rng)]);
    } else {
      ++r.outside_ball;
    }
    for (int j = 0; j <= k_max; ++j) {
      if (realised > j) ++beyond[j];
    }
  }
  for (int j = 0; j <= k_max; ++j) {
    double f = static_cast<double>(beyond[j]) / static_cast<double>(draws);
    double b = m.tail_bound(j);
    double q = std::min(1.0, b);
    double a = 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(draws));
    r.tail.push_back(f);
    r.bound.push_back(b);
    r.allowance.push_back(a);
    if (f > b + a) r.ok = false;
  }
  return r;
}

}  // namespace fibgrid
