#pragma once

// Check suites run by `fibgrid verify` and by the acceptance tests.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fibgrid/carpet.hpp"
#include "fibgrid/grid.hpp"
#include "fibgrid/routing.hpp"
#include "fibgrid/simulator.hpp"

namespace fibgrid {

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

namespace detail {

inline CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    auto r = fn();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

// Tile of `big` with the same centre as tile t of `small`.
inline std::vector<int> embed(const DiscBall& small, const DiscBall& big) {
  std::vector<int> out(small.size(), -1);
  for (std::size_t t = 0; t < small.size(); ++t) {
    out[t] = big.find(small.tiles[t].center);
    if (out[t] < 0) throw Error("tile missing from the reference ball");
  }
  return out;
}

}  // namespace detail

inline CheckResult check_oracle_agreement(const GridBall& g) {
  auto r = verify_against_oracle(g);
  std::string detail = std::to_string(r.tiles) + " tiles, " + std::to_string(r.arcs) + " arcs";
  if (!r.ok()) detail += "; " + r.failures.front();
  return {"", r.ok(), detail};
}

// The branch from a sector root to each descendant is a shortest path. The
// number of descendants reached by more than one shortest path is reported.
inline CheckResult check_branch_geodesics(const GridBall& g, int max_level) {
  std::size_t checked = 0, bad = 0, several = 0;
  std::map<int, std::vector<int>> dist_from;
  for (std::size_t i = 1; i < g.size(); ++i) {
    int t = static_cast<int>(i);
    int level = static_cast<int>(g.ids[t].path.level());
    if (level > max_level) continue;
    int root = t;
    while (g.father[root] != 0) root = g.father[root];
    auto it = dist_from.find(root);
    if (it == dist_from.end()) it = dist_from.emplace(root, bfs_distances(*g.disc, root)).first;
    ++checked;
    if (it->second[t] != level || !distance_certified(*g.disc, root, t, level)) ++bad;
    if (2 * level + 2 <= 2 * g.radius && geodesic_count(*g.disc, root, t) != 1) ++several;
  }
  return {"", bad == 0,
          std::to_string(checked) + " descendants, " + std::to_string(bad) + " off a shortest path, " +
              std::to_string(several) + " with several shortest paths"};
}

// Route length equals the distance and each step moves one tile farther from
// the source, for every interior source and every tile its tree reaches.
inline CheckResult check_geodesy(const GridBall& g, const DiscBall& reference) {
  auto map = detail::embed(*g.disc, reference);
  std::size_t pairs = 0, bad = 0, uncertified = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int c = static_cast<int>(i);
    if (g.boundary(c)) continue;
    auto b = broadcast_addresses(g, c);
    auto dist = bfs_distances(reference, map[c]);
    for (std::size_t j = 0; j < g.size(); ++j) {
      int d = static_cast<int>(j);
      if (d == c || !b.reached(d) || g.boundary(d)) continue;
      int bd = dist[map[d]];
      if (!distance_certified(reference, map[c], map[d], bd)) {
        ++uncertified;
        continue;
      }
      ++pairs;
      auto tiles = b.tiles(d);
      bool ok = static_cast<int>(tiles.size()) - 1 == bd;
      for (std::size_t k = 0; k < tiles.size() && ok; ++k) ok = dist[map[tiles[k]]] == static_cast<int>(k);
      if (!ok) ++bad;
    }
  }
  return {"", bad == 0 && uncertified == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(bad) + " non-geodesic, " + std::to_string(uncertified) +
              " uncertified"};
}

// Each tile is reached at most once, and every tile whose geodesics from c
// stay inside the ball is reached.
inline CheckResult check_exactly_once(const GridBall& g) {
  std::size_t sources = 0, bad = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int c = static_cast<int>(i);
    if (g.boundary(c)) continue;
    ++sources;
    auto b = broadcast_addresses(g, c);
    auto dist = bfs_distances(*g.disc, c);
    for (std::size_t t = 0; t < g.size(); ++t) {
      bool must = dist[t] >= 0 && dist[t] + g.dist(c) <= g.radius;
      if (b.receipts[t] > 1 || (must && !b.reached(static_cast<int>(t)))) {
        ++bad;
        break;
      }
    }
  }
  return {"", bad == 0, std::to_string(sources) + " sources, " + std::to_string(bad) + " failing"};
}

inline CheckResult check_replies(const GridBall& g) {
  std::size_t routes = 0, bad = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int c = static_cast<int>(i);
    if (g.boundary(c)) continue;
    auto b = broadcast_addresses(g, c);
    for (std::size_t j = 0; j < g.size(); ++j) {
      int d = static_cast<int>(j);
      if (!b.reached(d)) continue;
      ++routes;
      auto fwd = b.tiles(d);
      auto address = b.address(d);
      auto r = reply_route(g, c, address);
      std::reverse(fwd.begin(), fwd.end());
      if (r.tiles != fwd || r.digits != reverse_digits(address)) ++bad;
    }
  }
  return {"", bad == 0, std::to_string(routes) + " replies, " + std::to_string(bad) + " not reversing"};
}

inline CheckResult check_calibration(const GridBall& g) {
  auto encs = calibrate_status_encoding(g);
  std::string found;
  for (const auto& e : encs) found += e.to_string();
  bool ok = encs.size() == 1 && encs[0] == kCalibratedEncoding;
  if (g.p == 5) {
    auto w = wang_numbering(g);
    auto special = calibrate_special_encoding(g, w);
    ok = ok && special.size() == 1 && special[0] == kCalibratedEncoding;
    found += " edge numbers";
    for (const auto& e : special) found += e.to_string();
  }
  return {"", ok, "consistent encodings " + found};
}

inline CheckResult check_wang(const GridBall& g) {
  if (g.p != 5) return {"", true, "not applicable"};
  auto w = wang_numbering(g);
  std::size_t bad_orientation = 0, disagreements = 0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (w.orientation[t] != (g.dist(static_cast<int>(t)) % 2 ? -1 : 1)) ++bad_orientation;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    int c = static_cast<int>(i);
    if (g.boundary(c)) continue;
    auto wb = wang_broadcast(g, w, c);
    auto b = broadcast_addresses(g, c);
    disagreements += wb.disagreements;
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (wb.reached(static_cast<int>(t)) != b.reached(static_cast<int>(t))) ++disagreements;
    }
  }
  std::size_t odd = odd_cycle_edges(g);
  return {"", w.conflicts == 0 && odd == 0 && bad_orientation == 0 && disagreements == 0,
          std::to_string(w.conflicts) + " conflicts, " + std::to_string(odd) + " odd-cycle edges, " +
              std::to_string(bad_orientation) + " orientation errors, " + std::to_string(disagreements) +
              " system disagreements"};
}

inline CheckResult check_carpet(const GridBall& g, const GridBall& other) {
  CarpetChain chain(g), other_chain(other);
  std::map<CarpetCoord, int> seen;
  std::size_t dup = 0, bad = 0;
  for (int t : chain.tiles()) {
    auto c = chain.coord(t);
    if (!seen.emplace(c, t).second) ++dup;
    if (chain.tile(c) != t) ++bad;
    auto back = g.p == 5 ? hepta_to_penta(other_chain.coord(other_chain.tile(penta_to_hepta(c))))
                         : penta_to_hepta(other_chain.coord(other_chain.tile(hepta_to_penta(c))));
    if (!(back == c)) ++bad;
  }
  return {"", dup == 0 && bad == 0,
          std::to_string(seen.size()) + " coordinates, " + std::to_string(dup) + " collisions, " +
              std::to_string(bad) + " roundtrip failures"};
}

inline CheckResult check_protocol(const GridBall& g) {
  auto br = run_broadcast(g, 0);
  std::size_t bad = 0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (br.receipts[t] != 1 || br.arrival[t] != g.dist(static_cast<int>(t))) ++bad;
  }
  bool ok = bad == 0 && br.stats.conserved && fifo_respected(br.events);
  std::string detail = "broadcast " + std::to_string(bad) + " failures";
  for (int k = 1; k < g.radius; ++k) {
    auto rs = run_reply_storm(g, 0, k);
    ok = ok && rs.received == rs.repliers && rs.max_intake_at_source <= g.p && rs.stats.max_fan_in <= g.p &&
         rs.fifo && rs.stats.conserved;
    detail += "; storm " + std::to_string(k) + ": " + std::to_string(rs.received) + "/" + std::to_string(rs.repliers);
  }
  return {"", ok, detail};
}

inline std::vector<CheckResult> run_verify_suite(int p, int radius) {
  std::vector<CheckResult> out;
  auto g = build_ball(p, radius);
  out.push_back(detail::guarded("oracle agreement", [&] { return check_oracle_agreement(g); }));
  out.push_back(detail::guarded("branch geodesics", [&] { return check_branch_geodesics(g, radius); }));
  out.push_back(detail::guarded("geodesy", [&] {
    auto reference = generate_disc_ball(p, std::min(2 * radius, max_oracle_depth(p)));
    return check_geodesy(g, reference);
  }));
  out.push_back(detail::guarded("exactly once", [&] { return check_exactly_once(g); }));
  out.push_back(detail::guarded("reply reversal", [&] { return check_replies(g); }));
  out.push_back(detail::guarded("status encoding", [&] { return check_calibration(g); }));
  out.push_back(detail::guarded("edge numbering", [&] { return check_wang(g); }));
  out.push_back(detail::guarded("carpet", [&] {
    int q = p == 5 ? 7 : 5;
    // heptagrid coordinates reach two levels farther out in the pentagrid
    auto other = build_ball(q, std::min(p == 5 ? radius : radius + 2, max_ball_radius(q)));
    return check_carpet(g, other);
  }));
  out.push_back(detail::guarded("protocol", [&] { return check_protocol(g); }));
  return out;
}

}  // namespace fibgrid
