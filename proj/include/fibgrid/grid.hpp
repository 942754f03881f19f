#pragma once

// Combinatorial side numbering on top of the disc geometry: arc digits,
// tile identifiers, Fibonacci-tree expansion, finite balls and the
// edge numbering of the pentagrid.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fibgrid/error.hpp"
#include "fibgrid/fibtree.hpp"
#include "fibgrid/oracle.hpp"

namespace fibgrid {

// ---------------------------------------------------------------- arc digits

enum class Polarity { Plain, Barred, Bold, BoldBarred };

struct ArcDigit {
  Polarity polarity = Polarity::Plain;
  int value = 1;
  int input = 1;   // side left on the departing tile
  int output = 1;  // side entered on the arriving tile

  bool operator==(const ArcDigit&) const = default;

  std::string to_string() const {
    switch (polarity) {
      case Polarity::Plain: return std::to_string(value);
      case Polarity::Barred: return "~" + std::to_string(value);
      case Polarity::Bold: return "*" + std::to_string(value);
      case Polarity::BoldBarred: return "~*" + std::to_string(value);
    }
    return {};
  }
};

// Largest plain or barred digit.
inline int max_table_digit(int p) {
  check_tiling(p);
  return p == 5 ? 4 : 6;
}

// Barred digit k as a pair (input, output).
inline std::pair<int, int> barred_pair(int p, int k) {
  static const std::pair<int, int> hepta[] = {{1, 3}, {1, 4}, {1, 5}, {2, 6}, {2, 7}, {3, 7}};
  static const std::pair<int, int> penta[] = {{1, 2}, {1, 3}, {1, 4}, {2, 5}};
  if (k < 1 || k > max_table_digit(p)) throw InvalidArgument("digit " + std::to_string(k) + " out of range");
  return p == 5 ? penta[k - 1] : hepta[k - 1];
}

inline ArcDigit make_digit(int p, Polarity pol, int value) {
  check_tiling(p);
  switch (pol) {
    case Polarity::Barred: {
      auto [a, b] = barred_pair(p, value);
      return {pol, value, a, b};
    }
    case Polarity::Plain: {
      auto [a, b] = barred_pair(p, value);
      return {pol, value, b, a};
    }
    case Polarity::Bold:
    case Polarity::BoldBarred:
      if (value < 1 || value > p) throw InvalidArgument("bold digit " + std::to_string(value) + " out of range");
      return pol == Polarity::Bold ? ArcDigit{pol, value, value, 1} : ArcDigit{pol, value, 1, value};
  }
  throw InvalidArgument("unknown polarity");
}

inline std::vector<ArcDigit> arc_table(int p) {
  std::vector<ArcDigit> out;
  for (int k = 1; k <= max_table_digit(p); ++k) out.push_back(make_digit(p, Polarity::Barred, k));
  for (int k = 1; k <= max_table_digit(p); ++k) out.push_back(make_digit(p, Polarity::Plain, k));
  for (int k = 1; k <= p; ++k) out.push_back(make_digit(p, Polarity::Bold, k));
  return out;
}

inline ArcDigit mirror(const ArcDigit& d) {
  static const Polarity flip[] = {Polarity::Barred, Polarity::Plain, Polarity::BoldBarred, Polarity::Bold};
  return {flip[static_cast<int>(d.polarity)], d.value, d.output, d.input};
}

// Digit of the crossing from side `input` of one tile to side `output` of the
// next. Crossings touching the central cell are bold.
inline std::optional<ArcDigit> classify(int p, int input, int output, bool from_center = false,
                                        bool to_center = false) {
  if (from_center && to_center) return std::nullopt;
  if (from_center) return output == 1 ? std::optional(make_digit(p, Polarity::Bold, input)) : std::nullopt;
  if (to_center) return input == 1 ? std::optional(make_digit(p, Polarity::BoldBarred, output)) : std::nullopt;
  for (int k = 1; k <= max_table_digit(p); ++k) {
    auto [a, b] = barred_pair(p, k);
    if (a == input && b == output) return make_digit(p, Polarity::Barred, k);
    if (b == input && a == output) return make_digit(p, Polarity::Plain, k);
  }
  return std::nullopt;
}

inline ArcDigit parse_digit(int p, std::string_view text) {
  Polarity pol = Polarity::Plain;
  if (text.rfind("~*", 0) == 0) {
    pol = Polarity::BoldBarred;
    text.remove_prefix(2);
  } else if (text.rfind("~", 0) == 0) {
    pol = Polarity::Barred;
    text.remove_prefix(1);
  } else if (text.rfind("*", 0) == 0) {
    pol = Polarity::Bold;
    text.remove_prefix(1);
  }
  if (text.size() != 1 || text[0] < '1' || text[0] > '9') {
    throw InvalidArgument("malformed digit '" + std::string(text) + "'");
  }
  return make_digit(p, pol, text[0] - '0');
}

inline std::vector<ArcDigit> parse_digits(int p, std::string_view text) {
  std::vector<ArcDigit> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == ',') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (text[j] == '~' || text[j] == '*')) ++j;
    if (j >= text.size()) throw InvalidArgument("dangling polarity mark");
    out.push_back(parse_digit(p, text.substr(i, j - i + 1)));
    i = j + 1;
  }
  return out;
}

inline std::string digits_to_string(const std::vector<ArcDigit>& ds, const char* sep = "") {
  std::string s;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) s += sep;
    s += ds[i].to_string();
  }
  return s;
}

// ------------------------------------------------------------------ tile ids

// Side of a node, counted from its father side, that carries plain digit 1.
inline int son_side_offset(int p) {
  check_tiling(p);
  return p == 5 ? 1 : 2;
}

inline int son_side(int p, NodeStatus st, int son) { return son_digit(st, son) + son_side_offset(p); }

inline int middle_son_side(int p) { return son_side(p, NodeStatus::ThreeNode, 1); }

struct TileId {
  int sector = 0;
  TreePath path;

  bool is_center() const { return sector == 0; }
  bool operator==(const TileId&) const = default;

  // "312332": sector followed by the plain digits of the path.
  std::string compact() const {
    if (sector == 0) return "0";
    std::string s = std::to_string(sector);
    for (int d : path_digits(path)) s += static_cast<char>('0' + d);
    return s;
  }

  // "*3 1 2 3 3 2": the same with the sector written as a bold digit.
  std::string address() const {
    if (sector == 0) return "0";
    std::string s = "*" + std::to_string(sector);
    for (int d : path_digits(path)) s += " " + std::to_string(d);
    return s;
  }
};

inline TileId parse_tile_id(int p, std::string_view text) {
  check_tiling(p);
  std::string digits;
  for (char ch : text) {
    if (ch == ' ' || ch == '*' || ch == ',') continue;
    if (ch < '0' || ch > '9') throw InvalidArgument("unexpected character in tile coordinate: " + std::string(text));
    digits += ch;
  }
  if (digits.empty()) throw InvalidArgument("empty tile coordinate");
  if (digits == "0") return TileId{};
  int sector = digits[0] - '0';
  if (sector < 1 || sector > p) throw InvalidArgument("sector " + std::to_string(sector) + " out of range");
  std::vector<int> ds;
  for (std::size_t i = 1; i < digits.size(); ++i) ds.push_back(digits[i] - '0');
  return TileId{sector, path_from_digits(ds)};
}

// ------------------------------------------------------------ tree expansion

// A tile together with the local index of the side numbered 1.
struct Frame {
  int tile = -1;
  int side1 = 0;
};

struct ExpandedNode {
  Frame frame;
  TreePath path;
  int parent = -1;  // index into the expansion, -1 for the root
};

// Expands the Fibonacci tree rooted at `root` by the production rules: son s
// lies across side son_side(s) and sees its father through its own side 1.
// Stops where the ball ends or at `max_level`.
inline std::vector<ExpandedNode> expand_tree(const DiscBall& ball, Frame root,
                                             NodeStatus root_status = NodeStatus::ThreeNode, int max_level = -1) {
  const int p = ball.p;
  std::vector<ExpandedNode> out{{root, TreePath{root_status, {}}, -1}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (max_level >= 0 && static_cast<int>(out[i].path.level()) >= max_level) continue;
    NodeStatus st = status_of(out[i].path);
    for (int s = 0; s < son_count(st); ++s) {
      int local = (out[i].frame.side1 + son_side(p, st, s) - 1) % p;
      const Link& l = ball.tiles[out[i].frame.tile].links[local];
      if (!l.valid()) continue;
      TreePath child = out[i].path;
      child.sons.push_back(static_cast<std::uint8_t>(s));
      out.push_back({Frame{l.tile, l.side}, std::move(child), static_cast<int>(i)});
    }
  }
  return out;
}

// ------------------------------------------------------------------ the ball

class GridBall {
 public:
  int p = 5;
  int radius = 0;
  SectorDirection direction = SectorDirection::CounterClockwise;
  std::shared_ptr<const DiscBall> disc;
  std::vector<TileId> ids;
  std::vector<int> side1;     // local index of side 1
  std::vector<int> winding;   // +1 when sides are numbered counter-clockwise
  std::vector<int> father;    // -1 at the centre

  std::size_t size() const { return ids.size(); }
  int dist(int t) const { return disc->tiles.at(t).dist; }
  bool boundary(int t) const { return dist(t) >= radius; }
  bool is_center(int t) const { return t == 0; }

  NodeStatus status(int t) const {
    if (t == 0) throw InvalidArgument("the central cell has no status");
    return status_of(ids.at(t).path);
  }

  int side_local(int t, int side) const {
    check_side(side);
    return ((side1[t] + winding[t] * (side - 1)) % p + p) % p;
  }
  int side_number(int t, int local) const { return ((winding[t] * (local - side1[t])) % p + p) % p + 1; }

  // Neighbour across `side` of `t` as (tile, side number on that tile);
  // tile is -1 outside the ball.
  std::pair<int, int> neighbor(int t, int side) const {
    const Link& l = disc->tiles.at(t).links[side_local(t, side)];
    if (!l.valid()) return {-1, 0};
    return {l.tile, side_number(l.tile, l.side)};
  }

  // Side of `t` shared with `u`, 0 when they are not adjacent.
  int side_toward(int t, int u) const {
    const auto& links = disc->tiles.at(t).links;
    for (int j = 0; j < p; ++j) {
      if (links[j].tile == u) return side_number(t, j);
    }
    return 0;
  }

  ArcDigit arc(int t, int side) const {
    auto [u, us] = neighbor(t, side);
    if (u < 0) throw InvalidArgument("side " + std::to_string(side) + " leaves the ball");
    auto d = classify(p, side, us, t == 0, u == 0);
    if (!d) {
      throw Error("arc (" + std::to_string(side) + "," + std::to_string(us) + ") from tile " + ids[t].compact() +
                  " matches no digit");
    }
    return *d;
  }

  int find(const TileId& id) const {
    auto it = by_key_.find(id.compact());
    return it == by_key_.end() ? -1 : it->second;
  }

  int at(const TileId& id) const {
    int t = find(id);
    if (t < 0) throw InvalidArgument("tile " + id.compact() + " is not in the radius " + std::to_string(radius) + " ball");
    return t;
  }

  int at(std::string_view text) const { return at(parse_tile_id(p, text)); }

  Frame frame(int t) const { return {t, side1[t]}; }

  void index() {
    by_key_.clear();
    for (std::size_t t = 0; t < ids.size(); ++t) by_key_.emplace(ids[t].compact(), static_cast<int>(t));
  }

 private:
  std::map<std::string, int> by_key_;

  void check_side(int side) const {
    if (side < 1 || side > p) throw InvalidArgument("side " + std::to_string(side) + " out of range");
  }
};

inline int max_ball_radius(int p) { return max_oracle_depth(p); }

inline GridBall build_ball(int p, int radius, SectorDirection dir = SectorDirection::CounterClockwise,
                           double reference_angle = 0.0) {
  check_tiling(p);
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  GridBall g;
  g.p = p;
  g.radius = radius;
  g.direction = dir;
  g.disc = std::make_shared<DiscBall>(generate_disc_ball(p, radius, reference_angle));
  const std::size_t n = g.disc->size();
  g.ids.assign(n, TileId{});
  g.side1.assign(n, 0);
  g.winding.assign(n, 1);
  g.father.assign(n, -1);
  if (dir == SectorDirection::Clockwise) g.winding[0] = -1;

  std::vector<int> seen(n, 0);
  seen[0] = 1;
  for (int k = 1; k <= p; ++k) {
    const Link& l = g.disc->tiles[0].links[g.side_local(0, k)];
    if (!l.valid()) continue;
    auto nodes = expand_tree(*g.disc, Frame{l.tile, l.side});
    for (const auto& node : nodes) {
      int t = node.frame.tile;
      if (seen[t]++) throw Error("tree expansion reaches tile " + std::to_string(t) + " twice");
      if (static_cast<int>(node.path.level()) + 1 != g.dist(t)) {
        throw Error("tree level and distance disagree at tile " + std::to_string(t));
      }
      g.ids[t] = TileId{k, node.path};
      g.side1[t] = node.frame.side1;
      g.father[t] = node.parent < 0 ? 0 : nodes[node.parent].frame.tile;
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!seen[t]) throw Error("tree expansion misses tile " + std::to_string(t));
  }
  g.index();
  return g;
}

// Side number -> side number of the same edge in the neighbour, index 0 unused.
inline std::vector<int> output_table(const GridBall& g, int t) {
  if (g.boundary(t)) throw InvalidArgument("tile " + g.ids[t].compact() + " is on the boundary");
  std::vector<int> out(g.p + 1, 0);
  for (int a = 1; a <= g.p; ++a) out[a] = g.neighbor(t, a).second;
  return out;
}

// ------------------------------------------------------------ edge numbering

struct WangNumbering {
  int seed = 0;
  int seed_side = 1;
  std::vector<std::array<int, 5>> by_local;  // 0 where unnumbered
  std::vector<int> orientation;
  std::size_t conflicts = 0;

  int number(const GridBall& g, int t, int side) const { return by_local.at(t)[g.side_local(t, side)]; }

  // Side of `t` whose edge carries `value`.
  int side_with(const GridBall& g, int t, int value) const {
    for (int j = 0; j < 5; ++j) {
      if (by_local.at(t)[j] == value) return g.side_number(t, j);
    }
    throw InvalidArgument("no edge numbered " + std::to_string(value));
  }
};

// Numbers increase counter-clockwise around the seed and the direction flips
// every time an edge is crossed. Every edge is checked from both sides.
inline WangNumbering wang_numbering(const GridBall& g, int seed = 0, int seed_side = 1) {
  if (g.p != 5) throw InvalidArgument("edge numbering exists for the pentagrid only");
  const auto& disc = *g.disc;
  WangNumbering w;
  w.seed = seed;
  w.seed_side = seed_side;
  w.by_local.assign(g.size(), {0, 0, 0, 0, 0});
  w.orientation.assign(g.size(), 0);
  int l0 = g.side_local(seed, seed_side);
  for (int k = 0; k < 5; ++k) w.by_local[seed][(l0 + k) % 5] = k + 1;
  w.orientation[seed] = 1;
  std::deque<int> q{seed};
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    for (int j = 0; j < 5; ++j) {
      const Link& l = disc.tiles[t].links[j];
      if (!l.valid()) continue;
      int num = w.by_local[t][j];
      int o = -w.orientation[t];
      std::array<int, 5> m{};
      for (int k = 0; k < 5; ++k) m[(l.side + k) % 5] = ((num - 1 + o * k) % 5 + 5) % 5 + 1;
      if (w.orientation[l.tile] != 0) {
        if (w.by_local[l.tile] != m || w.orientation[l.tile] != o) ++w.conflicts;
      } else {
        w.by_local[l.tile] = m;
        w.orientation[l.tile] = o;
        q.push_back(l.tile);
      }
    }
  }
  return w;
}

inline int orientation(const WangNumbering& w, int t) { return w.orientation.at(t); }

// Edges joining two tiles of equal distance parity; each closes an odd cycle.
inline std::size_t odd_cycle_edges(const GridBall& g) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    for (const auto& l : g.disc->tiles[t].links) {
      if (l.valid() && (g.dist(static_cast<int>(t)) - g.dist(l.tile)) % 2 == 0) ++bad;
    }
  }
  return bad / 2;
}

// -------------------------------------------------------------- serialization

inline nlohmann::json to_json(const GridBall& g) {
  using nlohmann::json;
  json tiles = json::array();
  json adjacency = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    int t = static_cast<int>(i);
    const TileId& id = g.ids[t];
    json path = json::array();
    for (auto s : id.path.sons) path.push_back(s);
    tiles.push_back({{"sector", id.sector},
                     {"path", path},
                     {"coord", id.compact()},
                     {"status", t == 0 ? "center" : status_name(g.status(t))},
                     {"boundary", g.boundary(t)}});
    for (int a = 1; a <= g.p; ++a) {
      auto [u, b] = g.neighbor(t, a);
      if (u < 0) continue;
      adjacency.push_back({{"tile", id.compact()}, {"side", a}, {"neighbor_tile", g.ids[u].compact()},
                           {"neighbor_side", b}});
    }
  }
  return json{{"tiling", tiling_name(g.p)},
              {"radius", g.radius},
              {"sectors", g.direction == SectorDirection::CounterClockwise ? "ccw" : "cw"},
              {"tiles", tiles},
              {"adjacency", adjacency}};
}

// ------------------------------------------------------------ oracle agreement

struct AgreementReport {
  std::size_t tiles = 0;
  std::size_t arcs = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Compares the rule-built labels with labels read off the geometry alone.
inline AgreementReport verify_against_oracle(const GridBall& g) {
  AgreementReport r;
  auto fail = [&](std::string msg) {
    if (r.failures.size() < 20) r.failures.push_back(std::move(msg));
  };
  const auto& disc = *g.disc;
  auto induced = induce_center_labels(disc, g.direction);
  auto rings = ring_sizes(disc);
  std::vector<std::uint64_t> census(g.radius + 1, 0);
  r.tiles = g.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    int t = static_cast<int>(i);
    const TileId& id = g.ids[t];
    ++census[t == 0 ? 0 : id.path.level() + 1];
    if (id.sector != induced.sector[t] || !(id.path == induced.path[t])) {
      fail("tile " + std::to_string(t) + " labelled " + id.compact() + " but geometry gives sector " +
           std::to_string(induced.sector[t]) + " path " + induced.path[t].to_string());
    }
    if (t != 0 && g.side1[t] != induced.father_local[t]) fail("side 1 of " + id.compact() + " does not face its father");
    if (t != 0 && induced.son_count[t] >= 0 && induced.son_count[t] != son_count(g.status(t))) {
      fail("status of " + id.compact() + " disagrees with its son count");
    }
    int degree = 0;
    for (int a = 1; a <= g.p; ++a) {
      auto [u, b] = g.neighbor(t, a);
      if (u < 0) continue;
      ++degree;
      ++r.arcs;
      if (g.neighbor(u, b) != std::pair{t, a}) fail("adjacency is not an involution at " + id.compact());
      auto d = classify(g.p, a, b, t == 0, u == 0);
      if (!d) {
        fail("arc (" + std::to_string(a) + "," + std::to_string(b) + ") at " + id.compact() + " is unclassifiable");
      } else if (u != 0 && t == g.father[u] && (d->polarity != Polarity::Plain || d->value > 3) && t != 0) {
        fail("downward arc from " + id.compact() + " carries " + d->to_string());
      }
    }
    if (!g.boundary(t) && degree != g.p) fail("interior tile " + id.compact() + " has " + std::to_string(degree) + " neighbours");
  }
  if (census != rings) fail("tree-level census differs from the ring sizes");
  return r;
}

}  // namespace fibgrid
