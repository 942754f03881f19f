#pragma once

// Address accumulation along relative trees, the two-stack reply and the
// pentagrid edge-number system.

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "fibgrid/error.hpp"
#include "fibgrid/grid.hpp"

namespace fibgrid {

// Integer value given to a relay status inside the next-arc formulas.
struct StatusEncoding {
  int two_node = 0;
  int three_node = 1;

  int operator()(NodeStatus s) const { return s == NodeStatus::TwoNode ? two_node : three_node; }
  bool operator==(const StatusEncoding&) const = default;
  std::string to_string() const { return "(" + std::to_string(two_node) + "," + std::to_string(three_node) + ")"; }
};

inline constexpr StatusEncoding kCalibratedEncoding{0, 1};

namespace detail {

inline int pmod(int a, int m) { return ((a % m) + m) % m; }

inline void check_son(int s, NodeStatus st) {
  if (s < 0 || s >= son_count(st)) {
    throw InvalidArgument("son " + std::to_string(s) + " invalid for a " + status_name(st));
  }
}

}  // namespace detail

// The two next-arc formulas as bare arithmetic, st being the integer given
// to the relay status.
inline int arc_formula(int p, int beta0, int s, int st) {
  return 1 + detail::pmod((beta0 - 1) + 2 + (p - 5) / 2 + s - st, p);
}

inline int edge_formula(int delta0, int s, int st, int orient) {
  return 1 + detail::pmod((delta0 - 1) + orient * (2 + s - st), 5);
}

// Output side of a relay entered through side beta0, for its son s.
inline int next_arc_side(int p, int beta0, int s, NodeStatus st_r, StatusEncoding enc = kCalibratedEncoding) {
  check_tiling(p);
  detail::check_son(s, st_r);
  if (beta0 < 1 || beta0 > p) throw InvalidArgument("entry side " + std::to_string(beta0) + " out of range");
  int alpha = arc_formula(p, beta0, s, enc(st_r));
  if (alpha == beta0) throw ProtocolViolation("next arc leaves through the entry side");
  return alpha;
}

// Edge number of the arc toward son s, given the number delta0 of the entry edge.
inline int next_digit_special(int delta0, int s, NodeStatus st_r, int orient,
                              StatusEncoding enc = kCalibratedEncoding) {
  detail::check_son(s, st_r);
  if (delta0 < 1 || delta0 > 5) throw InvalidArgument("edge number " + std::to_string(delta0) + " out of range");
  if (orient != 1 && orient != -1) throw InvalidArgument("orientation must be +1 or -1");
  int delta1 = edge_formula(delta0, s, enc(st_r), orient);
  if (delta1 == delta0) throw ProtocolViolation("next edge number equals the entry edge number");
  return delta1;
}

struct Hop {
  int tile = -1;  // -1 when the arc leaves the ball
  int alpha = 0;
  int beta = 0;
};

// Sides are counted counter-clockwise from side 1 in the formula, which
// differs from the numbering only at a clockwise centre.
inline Hop relay_hop(const GridBall& g, int t, int beta0, int s, NodeStatus st_r,
                     StatusEncoding enc = kCalibratedEncoding) {
  const int p = g.p;
  int b_ccw = detail::pmod(g.side_local(t, beta0) - g.side1[t], p) + 1;
  int a_ccw = next_arc_side(p, b_ccw, s, st_r, enc);
  int alpha = g.side_number(t, (g.side1[t] + a_ccw - 1) % p);
  auto [u, beta] = g.neighbor(t, alpha);
  return {u, alpha, beta};
}

// Encodings under which the formula reproduces every father->son arc of the
// ball. Relays are entered from their father through side 1.
inline std::vector<StatusEncoding> calibrate_status_encoding(const GridBall& g, int max_value = 3) {
  std::vector<StatusEncoding> out;
  for (int e2 = 0; e2 <= max_value; ++e2) {
    for (int e3 = 0; e3 <= max_value; ++e3) {
      StatusEncoding enc{e2, e3};
      bool ok = true;
      for (std::size_t t = 1; t < g.size() && ok; ++t) {
        NodeStatus st = g.status(static_cast<int>(t));
        for (int s = 0; s < son_count(st) && ok; ++s) {
          try {
            ok = next_arc_side(g.p, 1, s, st, enc) == son_side(g.p, st, s);
          } catch (const ProtocolViolation&) {
            ok = false;
          }
        }
      }
      if (ok) out.push_back(enc);
    }
  }
  return out;
}

// ------------------------------------------------------------------ broadcast

struct Broadcast {
  int source = 0;
  std::vector<int> level;  // -1 when not reached
  std::vector<int> parent;
  std::vector<ArcDigit> arc_in;
  std::vector<int> entry_side;
  std::vector<int> relative_sector;
  std::vector<TreePath> relative_path;
  std::vector<int> receipts;

  bool reached(int t) const { return level.at(t) >= 0; }

  std::vector<int> tiles(int t) const {
    require(t);
    std::vector<int> out;
    for (int x = t; x != source; x = parent[x]) out.push_back(x);
    out.push_back(source);
    return {out.rbegin(), out.rend()};
  }

  std::vector<ArcDigit> address(int t) const {
    require(t);
    std::vector<ArcDigit> out;
    for (int x = t; x != source; x = parent[x]) out.push_back(arc_in[x]);
    return {out.rbegin(), out.rend()};
  }

  // "13232332": relative sector followed by the plain digits of the path.
  std::string relative_coordinate(int t) const {
    require(t);
    return TileId{relative_sector[t], relative_path[t]}.compact();
  }

 private:
  void require(int t) const {
    if (!reached(t)) throw InvalidArgument("tile " + std::to_string(t) + " was not reached by the broadcast");
  }
};

// Floods the relative tree of `c`. Each relay appends the digit of the arc it
// sends on, computed from its entry side and its status in the relative tree.
inline Broadcast broadcast_addresses(const GridBall& g, int c, StatusEncoding enc = kCalibratedEncoding,
                                     int max_level = -1) {
  const std::size_t n = g.size();
  Broadcast b;
  b.source = c;
  b.level.assign(n, -1);
  b.parent.assign(n, -1);
  b.arc_in.assign(n, ArcDigit{});
  b.entry_side.assign(n, 0);
  b.relative_sector.assign(n, 0);
  b.relative_path.assign(n, TreePath{});
  b.receipts.assign(n, 0);
  b.level.at(c) = 0;
  b.receipts[c] = 1;

  std::deque<int> frontier;
  auto deliver = [&](int from, int side, int to, int to_side, int sector, TreePath path) {
    if (++b.receipts[to] > 1) return;
    b.level[to] = b.level[from] + 1;
    b.parent[to] = from;
    b.arc_in[to] = g.arc(from, side);
    b.entry_side[to] = to_side;
    b.relative_sector[to] = sector;
    b.relative_path[to] = std::move(path);
    frontier.push_back(to);
  };
  if (max_level != 0) {
    for (int k = 1; k <= g.p; ++k) {
      auto [u, us] = g.neighbor(c, k);
      if (u >= 0) deliver(c, k, u, us, k, TreePath{});
    }
  }
  while (!frontier.empty()) {
    int t = frontier.front();
    frontier.pop_front();
    if (max_level >= 0 && b.level[t] >= max_level) continue;
    NodeStatus st = status_of(b.relative_path[t]);
    for (int s = 0; s < son_count(st); ++s) {
      Hop h = relay_hop(g, t, b.entry_side[t], s, st, enc);
      if (h.tile < 0) continue;
      TreePath child = b.relative_path[t];
      child.sons.push_back(static_cast<std::uint8_t>(s));
      deliver(t, h.alpha, h.tile, h.beta, b.relative_sector[t], std::move(child));
    }
  }
  return b;
}

// Tiles visited when the digits are followed from `start`.
inline std::vector<int> trace_address(const GridBall& g, int start, const std::vector<ArcDigit>& digits) {
  std::vector<int> out{start};
  int t = start;
  for (const auto& d : digits) {
    if (d.input < 1 || d.input > g.p) throw ProtocolViolation("digit " + d.to_string() + " has no such side");
    auto [u, us] = g.neighbor(t, d.input);
    if (u < 0) throw ProtocolViolation("digit " + d.to_string() + " leaves the ball");
    auto actual = classify(g.p, d.input, us, t == 0, u == 0);
    if (!actual || !(*actual == d)) {
      throw ProtocolViolation("digit " + d.to_string() + " does not chain at tile " + g.ids[t].compact());
    }
    t = u;
    out.push_back(t);
  }
  return out;
}

// Digit string of the reverse path: mirrored digits in reverse order.
inline std::vector<ArcDigit> reverse_digits(const std::vector<ArcDigit>& address) {
  std::vector<ArcDigit> out;
  for (auto it = address.rbegin(); it != address.rend(); ++it) out.push_back(mirror(*it));
  return out;
}

// ---------------------------------------------------------------- the reply

// Stacks hold their bottom first.
struct ReplyState {
  int tile = -1;
  std::vector<ArcDigit> stack1;
  std::vector<ArcDigit> stack2;
};

struct ReplyTrace {
  std::vector<int> tiles;
  std::vector<ReplyState> states;
  std::vector<ArcDigit> digits;
};

// The target pops the top of the first stack, leaves through the output side
// of that digit and pushes it on the second stack; relays do the same until
// the first stack is empty.
inline ReplyTrace reply_route(const GridBall& g, int c, const std::vector<ArcDigit>& address) {
  auto forward = trace_address(g, c, address);
  ReplyTrace r;
  ReplyState st{forward.back(), address, {}};
  r.tiles.push_back(st.tile);
  r.states.push_back(st);
  while (!st.stack1.empty()) {
    ArcDigit d = st.stack1.back();
    st.stack1.pop_back();
    auto [u, us] = g.neighbor(st.tile, d.output);
    if (u < 0 || us != d.input) throw ProtocolViolation("reply cannot leave " + g.ids[st.tile].compact());
    r.digits.push_back(g.arc(st.tile, d.output));
    st.stack2.push_back(d);
    st.tile = u;
    auto joined = st.stack1;
    joined.insert(joined.end(), st.stack2.rbegin(), st.stack2.rend());
    if (joined != address) throw ProtocolViolation("stacks no longer partition the address");
    r.tiles.push_back(u);
    r.states.push_back(st);
  }
  if (st.tile != c) throw ProtocolViolation("reply did not return to the source");
  return r;
}

struct Route {
  int source = -1;
  int target = -1;
  std::vector<ArcDigit> forward;
  std::vector<ArcDigit> reverse;
  std::vector<int> tiles;
  std::string relative;
};

inline Route route_in_ball(const GridBall& g, int c, int d, StatusEncoding enc = kCalibratedEncoding) {
  auto b = broadcast_addresses(g, c, enc);
  if (!b.reached(d)) throw InvalidArgument("target not reached inside the ball");
  Route r{c, d, b.address(d), {}, b.tiles(d), b.relative_coordinate(d)};
  r.reverse = reply_route(g, c, r.forward).digits;
  return r;
}

// Routes between two tiles named in absolute coordinates, growing the ball
// until the target is reached.
inline Route route_between(int p, const TileId& from, const TileId& to,
                           SectorDirection dir = SectorDirection::CounterClockwise,
                           StatusEncoding enc = kCalibratedEncoding) {
  int start = static_cast<int>(std::max(from.path.level(), to.path.level())) + 1;
  for (int r = start; r <= max_ball_radius(p); ++r) {
    auto g = build_ball(p, r, dir);
    int c = g.at(from);
    int d = g.at(to);
    auto b = broadcast_addresses(g, c, enc);
    if (b.reached(d)) return route_in_ball(g, c, d, enc);
  }
  throw ResourceLimit("no ball within the size limit holds a route from " + from.compact() + " to " + to.compact());
}

// ------------------------------------------------------- edge-number system

inline int wang_edge(const GridBall& g, const WangNumbering& w, int t, int side) { return w.number(g, t, side); }

// Edge numbers along the tree path from the centre.
inline std::vector<int> wang_coordinate(const GridBall& g, const WangNumbering& w, int t) {
  std::vector<int> out;
  for (int x = t; x != 0; x = g.father[x]) out.push_back(w.number(g, g.father[x], g.side_toward(g.father[x], x)));
  return {out.rbegin(), out.rend()};
}

inline std::vector<int> parse_edge_numbers(std::string_view text) {
  std::vector<int> out;
  for (char ch : text) {
    if (ch == ' ') continue;
    if (ch < '1' || ch > '5') throw InvalidArgument("edge numbers are 1..5: " + std::string(text));
    out.push_back(ch - '0');
  }
  return out;
}

inline std::string edge_numbers_to_string(const std::vector<int>& ds) {
  std::string s;
  for (int d : ds) s += static_cast<char>('0' + d);
  return s;
}

inline std::vector<int> wang_trace(const GridBall& g, const WangNumbering& w, int start, const std::vector<int>& digits) {
  std::vector<int> out{start};
  int t = start;
  for (int d : digits) {
    auto [u, us] = g.neighbor(t, w.side_with(g, t, d));
    if (u < 0) throw ProtocolViolation("edge " + std::to_string(d) + " leaves the ball");
    t = u;
    out.push_back(t);
  }
  return out;
}

// Tile whose tree path from the centre carries the given edge numbers.
inline int wang_locate(const GridBall& g, const WangNumbering& w, const std::vector<int>& digits) {
  auto tiles = wang_trace(g, w, 0, digits);
  for (std::size_t i = 1; i < tiles.size(); ++i) {
    if (g.father[tiles[i]] != tiles[i - 1]) throw InvalidArgument("edge numbers do not follow the tree");
  }
  return tiles.back();
}

struct WangBroadcast {
  int source = 0;
  std::vector<int> level;
  std::vector<int> parent;
  std::vector<int> digit_in;
  std::vector<int> receipts;
  std::size_t disagreements = 0;  // hops where the two systems pick different tiles

  bool reached(int t) const { return level.at(t) >= 0; }

  std::vector<int> digits(int t) const {
    if (!reached(t)) throw InvalidArgument("tile " + std::to_string(t) + " was not reached");
    std::vector<int> out;
    for (int x = t; x != source; x = parent[x]) out.push_back(digit_in[x]);
    return {out.rbegin(), out.rend()};
  }
};

// Same flood as broadcast_addresses with edge numbers in place of sides. The
// side-based hop is computed alongside so the two systems can be compared.
inline WangBroadcast wang_broadcast(const GridBall& g, const WangNumbering& w, int c,
                                    StatusEncoding enc = kCalibratedEncoding, int max_level = -1) {
  if (g.p != 5) throw InvalidArgument("edge numbers exist for the pentagrid only");
  const std::size_t n = g.size();
  WangBroadcast b;
  b.source = c;
  b.level.assign(n, -1);
  b.parent.assign(n, -1);
  b.digit_in.assign(n, 0);
  b.receipts.assign(n, 0);
  std::vector<int> entry(n, 0);
  std::vector<TreePath> path(n);
  b.level.at(c) = 0;
  b.receipts[c] = 1;
  std::deque<int> frontier;
  auto deliver = [&](int from, int digit, int to, int to_side, TreePath p) {
    if (++b.receipts[to] > 1) return;
    b.level[to] = b.level[from] + 1;
    b.parent[to] = from;
    b.digit_in[to] = digit;
    entry[to] = to_side;
    path[to] = std::move(p);
    frontier.push_back(to);
  };
  if (max_level != 0) {
    for (int k = 1; k <= 5; ++k) {
      auto [u, us] = g.neighbor(c, k);
      if (u >= 0) deliver(c, w.number(g, c, k), u, us, TreePath{});
    }
  }
  while (!frontier.empty()) {
    int t = frontier.front();
    frontier.pop_front();
    if (max_level >= 0 && b.level[t] >= max_level) continue;
    NodeStatus st = status_of(path[t]);
    for (int s = 0; s < son_count(st); ++s) {
      int d1 = next_digit_special(b.digit_in[t], s, st, w.orientation[t], enc);
      int side = w.side_with(g, t, d1);
      auto [u, us] = g.neighbor(t, side);
      if (relay_hop(g, t, entry[t], s, st, enc).tile != u) ++b.disagreements;
      if (u < 0) continue;
      TreePath child = path[t];
      child.sons.push_back(static_cast<std::uint8_t>(s));
      deliver(t, d1, u, us, std::move(child));
    }
  }
  return b;
}

struct WangRoute {
  std::vector<int> forward;
  std::vector<int> tiles;
  TileId source;
  TileId target;
};

inline WangRoute wang_route_between(const std::vector<int>& from, const std::vector<int>& to,
                                    StatusEncoding enc = kCalibratedEncoding) {
  int start = static_cast<int>(std::max(from.size(), to.size()));
  for (int r = std::max(start, 1); r <= max_ball_radius(5); ++r) {
    auto g = build_ball(5, r);
    auto w = wang_numbering(g);
    int c, d;
    try {
      c = wang_locate(g, w, from);
      d = wang_locate(g, w, to);
    } catch (const ProtocolViolation&) {
      continue;
    }
    auto b = wang_broadcast(g, w, c, enc);
    if (b.reached(d)) return {b.digits(d), wang_trace(g, w, c, b.digits(d)), g.ids[c], g.ids[d]};
  }
  throw ResourceLimit("no ball within the size limit holds the route");
}

// Encodings under which the edge-number formula reproduces every father->son
// edge of the ball.
inline std::vector<StatusEncoding> calibrate_special_encoding(const GridBall& g, const WangNumbering& w,
                                                              int max_value = 3) {
  std::vector<StatusEncoding> out;
  for (int e2 = 0; e2 <= max_value; ++e2) {
    for (int e3 = 0; e3 <= max_value; ++e3) {
      StatusEncoding enc{e2, e3};
      bool ok = true;
      for (std::size_t i = 1; i < g.size() && ok; ++i) {
        int t = static_cast<int>(i);
        NodeStatus st = g.status(t);
        int d0 = w.number(g, t, 1);
        for (int s = 0; s < son_count(st) && ok; ++s) {
          try {
            ok = next_digit_special(d0, s, st, w.orientation[t], enc) == w.number(g, t, son_side(g.p, st, s));
          } catch (const ProtocolViolation&) {
            ok = false;
          }
        }
      }
      if (ok) out.push_back(enc);
    }
  }
  return out;
}

}  // namespace fibgrid
