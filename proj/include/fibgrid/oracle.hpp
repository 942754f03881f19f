#pragma once

// Geometric ground truth. Tiles are built in the Poincare disc by reflecting
// the base polygon in its sides, deduplicated by centre, and linked side to
// side. Everything here is independent of the Fibonacci-tree rules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "fibgrid/error.hpp"
#include "fibgrid/fibtree.hpp"

namespace fibgrid {

using Point = std::complex<double>;

enum class SectorDirection { CounterClockwise, Clockwise };

inline void check_tiling(int p) {
  if (p != 5 && p != 7) throw InvalidArgument("tiling must have p = 5 or p = 7, got " + std::to_string(p));
}

inline int vertex_degree(int p) {
  check_tiling(p);
  return p == 5 ? 4 : 3;
}

inline const char* tiling_name(int p) { return p == 5 ? "penta" : "hepta"; }

// Largest ball the oracle agrees to build.
inline int max_oracle_depth(int p) {
  check_tiling(p);
  return p == 5 ? 12 : 11;
}

namespace geom {

inline double hyperbolic_distance(Point z, Point w) {
  double dz = 1.0 - std::norm(z);
  double dw = 1.0 - std::norm(w);
  return 2.0 * std::asinh(std::abs(z - w) / std::sqrt(dz * dw));
}

// Reflection in the geodesic through a and b. a is moved to the origin first,
// where the geodesic is a diameter.
inline Point reflect(Point z, Point a, Point b) {
  auto to0 = [a](Point x) { return (x - a) / (1.0 - std::conj(a) * x); };
  auto back = [a](Point y) { return (y + a) / (1.0 + std::conj(a) * y); };
  Point w = to0(b);
  Point u = w / std::abs(w);
  return back(u * u * std::conj(to0(z)));
}

// Euclidean circumradius of the base polygon of {p,q}.
inline double circumradius(int p) {
  int q = vertex_degree(p);
  double cosh_r = 1.0 / (std::tan(std::numbers::pi / p) * std::tan(std::numbers::pi / q));
  return std::tanh(std::acosh(cosh_r) / 2.0);
}

inline std::vector<Point> base_polygon(int p, double reference_angle = 0.0) {
  double r = circumradius(p);
  std::vector<Point> v;
  for (int k = 0; k < p; ++k) v.push_back(std::polar(r, reference_angle + 2.0 * std::numbers::pi * k / p));
  return v;
}

}  // namespace geom

struct Link {
  int tile = -1;
  int side = -1;
  bool valid() const { return tile >= 0; }
};

// Vertices run counter-clockwise; local side j joins vertex j to vertex j+1.
struct DiscTile {
  std::vector<Point> vertices;
  Point center;
  int dist = 0;
  std::vector<Link> links;
};

struct DiscBall {
  int p = 5;
  int radius = 0;
  double reference_angle = 0.0;
  std::vector<DiscTile> tiles;

  static constexpr double kMergeTolerance = 1e-6;
  static constexpr double kCell = 1e-9;

  std::size_t size() const { return tiles.size(); }

  int find(Point z) const {
    auto [kx, ky] = cell_of(z);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = index_.find(key(kx + dx, ky + dy));
        if (it != index_.end() && geom::hyperbolic_distance(tiles[it->second].center, z) < kMergeTolerance) {
          return it->second;
        }
      }
    }
    return -1;
  }

  int add(DiscTile t) {
    auto [kx, ky] = cell_of(t.center);
    int id = static_cast<int>(tiles.size());
    index_.emplace(key(kx, ky), id);
    tiles.push_back(std::move(t));
    return id;
  }

  bool boundary(int t) const { return tiles.at(t).dist >= radius; }

 private:
  std::unordered_map<std::uint64_t, int> index_;

  static std::pair<long long, long long> cell_of(Point z) {
    return {std::llround(z.real() / kCell), std::llround(z.imag() / kCell)};
  }
  static std::uint64_t key(long long x, long long y) {
    return (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint64_t>(y & 0xffffffffLL);
  }
};

namespace detail {

inline int match_side(const DiscTile& u, Point a, Point b, int p) {
  int best = -1;
  double best_err = 0.0;
  for (int jj = 0; jj < p; ++jj) {
    double err = geom::hyperbolic_distance(u.vertices[jj], b) +
                 geom::hyperbolic_distance(u.vertices[(jj + 1) % p], a);
    if (best < 0 || err < best_err) {
      best = jj;
      best_err = err;
    }
  }
  if (best_err > DiscBall::kMergeTolerance) throw DedupFailure("shared side not found between merged tiles");
  return best;
}

// Distinct centres must be far apart compared with the merge tolerance.
inline void check_dedup_soundness(const DiscBall& ball) {
  std::vector<int> order(ball.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return ball.tiles[x].center.real() < ball.tiles[y].center.real(); });
  const double limit = 10.0 * DiscBall::kMergeTolerance;
  // Euclidean gap is at most half the hyperbolic one inside the disc.
  const double window = limit / 2.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Point zi = ball.tiles[order[i]].center;
    for (std::size_t k = i + 1; k < order.size(); ++k) {
      const Point zk = ball.tiles[order[k]].center;
      if (zk.real() - zi.real() > window) break;
      if (geom::hyperbolic_distance(zi, zk) < limit) {
        throw DedupFailure("tiles " + std::to_string(order[i]) + " and " + std::to_string(order[k]) +
                           " are closer than ten times the merge tolerance");
      }
    }
  }
}

}  // namespace detail

// All tiles within tile distance `depth` of the base polygon.
inline DiscBall generate_disc_ball(int p, int depth, double reference_angle = 0.0) {
  check_tiling(p);
  if (depth < 0) throw InvalidArgument("depth must be non-negative");
  if (depth > max_oracle_depth(p)) {
    throw ResourceLimit("depth " + std::to_string(depth) + " exceeds the limit " +
                        std::to_string(max_oracle_depth(p)) + " for the " + tiling_name(p) + "grid");
  }
  DiscBall ball;
  ball.p = p;
  ball.radius = depth;
  ball.reference_angle = reference_angle;
  ball.add(DiscTile{geom::base_polygon(p, reference_angle), Point{0.0, 0.0}, 0, std::vector<Link>(p)});

  std::deque<int> queue{0};
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int j = 0; j < p; ++j) {
      if (ball.tiles[t].links[j].valid()) continue;
      const auto& vs = ball.tiles[t].vertices;
      Point a = vs[j];
      Point b = vs[(j + 1) % p];
      Point c = geom::reflect(ball.tiles[t].center, a, b);
      int u = ball.find(c);
      int side = 0;
      if (u < 0) {
        if (ball.tiles[t].dist >= depth) continue;
        DiscTile nt;
        nt.center = c;
        nt.dist = ball.tiles[t].dist + 1;
        nt.links.resize(p);
        for (int k = 0; k < p; ++k) nt.vertices.push_back(geom::reflect(vs[((j + 1 - k) % p + p) % p], a, b));
        for (auto& v : nt.vertices) {
          if (std::abs(v) >= 1.0) throw ResourceLimit("vertex left the unit disc; precision exhausted");
        }
        u = ball.add(std::move(nt));
        queue.push_back(u);
      } else {
        side = detail::match_side(ball.tiles[u], a, b, p);
      }
      Link& back = ball.tiles[u].links[side];
      if (back.valid() && (back.tile != t || back.side != j)) throw DedupFailure("inconsistent side links");
      ball.tiles[t].links[j] = Link{u, side};
      back = Link{t, j};
    }
  }
  detail::check_dedup_soundness(ball);
  return ball;
}

inline std::vector<int> bfs_distances(const DiscBall& ball, int source) {
  std::vector<int> d(ball.size(), -1);
  std::deque<int> q{source};
  d.at(source) = 0;
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    for (const auto& l : ball.tiles[t].links) {
      if (l.valid() && d[l.tile] < 0) {
        d[l.tile] = d[t] + 1;
        q.push_back(l.tile);
      }
    }
  }
  return d;
}

namespace detail {

inline void check_tile(const DiscBall& ball, int t) {
  if (t < 0 || t >= static_cast<int>(ball.size())) throw InvalidArgument("tile " + std::to_string(t) + " not in ball");
}

}  // namespace detail

// A path leaving the ball visits a tile at distance radius+1 from the centre,
// so it is at least as long as the detour bound below.
inline bool distance_certified(const DiscBall& ball, int a, int b, int d) {
  return d <= 2 * ball.radius + 2 - ball.tiles[a].dist - ball.tiles[b].dist;
}

inline int bfs_distance(const DiscBall& ball, int a, int b) {
  detail::check_tile(ball, a);
  detail::check_tile(ball, b);
  int d = bfs_distances(ball, a)[b];
  if (d < 0 || !distance_certified(ball, a, b, d)) {
    throw Uncertified("distance between tiles " + std::to_string(a) + " and " + std::to_string(b) +
                      " is not certified by a radius " + std::to_string(ball.radius) + " ball");
  }
  return d;
}

inline std::vector<std::uint64_t> ring_sizes(const DiscBall& ball, int center = 0) {
  auto d = bfs_distances(ball, center);
  std::vector<std::uint64_t> rings;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (d[t] < 0) continue;
    if (static_cast<std::size_t>(d[t]) >= rings.size()) rings.resize(d[t] + 1, 0);
    ++rings[d[t]];
  }
  if (center == 0) rings.resize(std::min<std::size_t>(rings.size(), ball.radius + 1));
  return rings;
}

// Number of shortest paths. Every geodesic stays within distance
// (da + db + d) / 2 of the centre, so the count is exact below the radius.
inline Natural geodesic_count(const DiscBall& ball, int root, int target) {
  detail::check_tile(ball, root);
  detail::check_tile(ball, target);
  auto d = bfs_distances(ball, root);
  int dt = d[target];
  if (dt < 0 || ball.tiles[root].dist + ball.tiles[target].dist + dt > 2 * ball.radius) {
    throw Uncertified("geodesic count from tile " + std::to_string(root) + " to " + std::to_string(target) +
                      " is not certified");
  }
  std::vector<int> order;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (d[t] >= 0 && d[t] <= dt) order.push_back(static_cast<int>(t));
  }
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
  std::vector<Natural> count(ball.size(), 0);
  count[root] = 1;
  for (int t : order) {
    for (const auto& l : ball.tiles[t].links) {
      if (l.valid() && d[l.tile] == d[t] + 1) count[l.tile] = checked_add(count[l.tile], count[t]);
    }
  }
  return count[target];
}

// Labels read off the geometry alone: the father of a tile is its unique
// neighbour closer to the centre; when two are closer (always on consecutive
// sides) the clockwise one wins. Sons are ordered by side number.
struct InducedLabels {
  std::vector<int> father_local;  // -1 at the centre
  std::vector<int> sector;        // 0 at the centre
  std::vector<TreePath> path;
  std::vector<int> son_count;     // -1 when the tile sits on the boundary
};

inline InducedLabels induce_center_labels(const DiscBall& ball,
                                          SectorDirection dir = SectorDirection::CounterClockwise) {
  const int p = ball.p;
  const std::size_t n = ball.size();
  InducedLabels out;
  out.father_local.assign(n, -1);
  out.sector.assign(n, 0);
  out.path.assign(n, TreePath{});
  out.son_count.assign(n, -1);

  std::vector<std::vector<std::pair<int, int>>> children(n);  // (side number, tile)
  for (std::size_t t = 1; t < n; ++t) {
    const auto& tile = ball.tiles[t];
    std::vector<int> closer;
    for (int j = 0; j < p; ++j) {
      const Link& l = tile.links[j];
      if (l.valid() && ball.tiles[l.tile].dist == tile.dist - 1) closer.push_back(j);
    }
    int f;
    if (closer.size() == 1) {
      f = closer[0];
    } else if (closer.size() == 2) {
      int a = closer[0], b = closer[1];
      f = (a + 1) % p == b ? a : b;
      if ((f + 1) % p != (f == a ? b : a)) throw Error("closer neighbours are not on consecutive sides");
    } else {
      throw Error("tile " + std::to_string(t) + " has " + std::to_string(closer.size()) + " closer neighbours");
    }
    out.father_local[t] = f;
  }
  for (std::size_t t = 1; t < n; ++t) {
    const Link& fl = ball.tiles[t].links[out.father_local[t]];
    int father = fl.tile;
    int side_number = father == 0 ? fl.side : (fl.side - out.father_local[father] + p) % p;
    children[father].emplace_back(side_number, static_cast<int>(t));
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  // Breadth-first order of discovery is the order of increasing distance.
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ball.tiles[x].dist < ball.tiles[y].dist; });
  for (int t : order) {
    if (!ball.boundary(t)) out.son_count[t] = static_cast<int>(children[t].size());
    for (std::size_t i = 0; i < children[t].size(); ++i) {
      auto [side_number, u] = children[t][i];
      if (t == 0) {
        out.sector[u] = dir == SectorDirection::CounterClockwise ? side_number + 1 : (p - side_number) % p + 1;
      } else {
        out.sector[u] = out.sector[t];
        out.path[u] = out.path[t];
        out.path[u].sons.push_back(static_cast<std::uint8_t>(i));
      }
    }
  }
  return out;
}

}  // namespace fibgrid
