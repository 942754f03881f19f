#pragma once

// Brute-force reference computations used by the tests. None of them call
// into the library beyond reading the disc ball's raw adjacency.

#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "fibgrid/oracle.hpp"

namespace ref {

// 1, 2, 3, 5, 8, ... indexed from 1.
inline std::uint64_t fib12(int n) {
  std::uint64_t a = 1, b = 2;
  for (int i = 1; i < n; ++i) {
    std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

// Per-level (2-nodes, 3-nodes) from expanding the rules node by node.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> expand_levels(int root_sons, int depth) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::vector<int> level{root_sons};
  for (int n = 0; n <= depth; ++n) {
    std::uint64_t two = 0, three = 0;
    for (int s : level) (s == 2 ? two : three)++;
    out.emplace_back(two, three);
    if (n == depth) break;
    std::vector<int> next;
    next.reserve(level.size() * 3);
    for (int s : level) {
      next.push_back(2);
      next.push_back(3);
      if (s == 3) next.push_back(3);
    }
    level.swap(next);
  }
  return out;
}

// Value of a binary word over 1, 2, 3, 5, ...
inline std::uint64_t word_value(const std::string& bits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[bits.size() - 1 - i] == '1') v += fib12(static_cast<int>(i) + 1);
  }
  return v;
}

struct Layering {
  std::vector<int> dist;
  std::vector<double> paths;  // number of shortest paths from the source
};

inline Layering bfs(const fibgrid::DiscBall& ball, int source) {
  Layering r;
  r.dist.assign(ball.size(), -1);
  r.paths.assign(ball.size(), 0.0);
  r.dist[source] = 0;
  r.paths[source] = 1.0;
  std::deque<int> q{source};
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    for (const auto& l : ball.tiles[t].links) {
      if (l.tile < 0) continue;
      if (r.dist[l.tile] < 0) {
        r.dist[l.tile] = r.dist[t] + 1;
        q.push_back(l.tile);
      }
      if (r.dist[l.tile] == r.dist[t] + 1) r.paths[l.tile] += r.paths[t];
    }
  }
  return r;
}

// Centre of an SVG elliptical arc with equal radii, from the endpoint
// parameterisation of the SVG specification (appendix on arc implementation).
inline std::complex<double> svg_arc_center(double x1, double y1, double x2, double y2, double r, int large,
                                           int sweep) {
  double mx = (x1 - x2) / 2.0, my = (y1 - y2) / 2.0;
  double d2 = mx * mx + my * my;
  double k = std::sqrt(std::max(0.0, (r * r - d2) / d2));
  if (large == sweep) k = -k;
  double cx = k * my + (x1 + x2) / 2.0;
  double cy = -k * mx + (y1 + y2) / 2.0;
  return {cx, cy};
}

}  // namespace ref
