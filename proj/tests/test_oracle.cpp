#include <catch_amalgamated.hpp>

#include <map>
#include <numbers>

#include "fibgrid/oracle.hpp"
#include "reference.hpp"

using namespace fibgrid;

TEST_CASE("small disc balls", "[oracle]") {
  CHECK(generate_disc_ball(5, 0).size() == 1);
  CHECK(generate_disc_ball(5, 1).size() == 6);
  CHECK(generate_disc_ball(7, 1).size() == 8);
  CHECK_THROWS_AS(generate_disc_ball(6, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_disc_ball(5, -1), InvalidArgument);
  CHECK_THROWS_AS(generate_disc_ball(5, 13), ResourceLimit);
}

TEST_CASE("ring census", "[oracle]") {
  for (int p : {5, 7}) {
    auto ball = generate_disc_ball(p, 6);
    auto rings = ring_sizes(ball);
    auto bfs = ref::bfs(ball, 0);
    std::vector<std::uint64_t> mine(7, 0);
    for (int d : bfs.dist) ++mine.at(d);
    CHECK(rings == mine);
    // p f_{2k-1} tiles at distance k >= 1
    CHECK(rings[0] == 1);
    for (int k = 1; k <= 6; ++k) CHECK(rings[k] == static_cast<std::uint64_t>(p) * ref::fib12(2 * k - 1));
  }
}

TEST_CASE("tiles are congruent right-angled or 2pi/3 polygons", "[oracle]") {
  for (int p : {5, 7}) {
    auto ball = generate_disc_ball(p, 4);
    const int q = vertex_degree(p);
    double edge = geom::hyperbolic_distance(ball.tiles[0].vertices[0], ball.tiles[0].vertices[1]);
    std::map<std::pair<long long, long long>, int> vertex_use;
    for (const auto& t : ball.tiles) {
      REQUIRE(t.vertices.size() == static_cast<std::size_t>(p));
      for (int k = 0; k < p; ++k) {
        REQUIRE(std::abs(t.vertices[k]) < 1.0);
        CHECK(geom::hyperbolic_distance(t.vertices[k], t.vertices[(k + 1) % p]) == Catch::Approx(edge).epsilon(1e-7));
        auto key = std::pair{std::llround(t.vertices[k].real() * 1e7), std::llround(t.vertices[k].imag() * 1e7)};
        ++vertex_use[key];
      }
    }
    // vertices of the base polygon are surrounded by q tiles
    for (const auto& v : ball.tiles[0].vertices) {
      CHECK(vertex_use[{std::llround(v.real() * 1e7), std::llround(v.imag() * 1e7)}] == q);
    }
    // interior angle 2pi/q, measured between the tangents of the two edges
    double expected_angle = 2.0 * std::numbers::pi / q;
    Point a = ball.tiles[0].vertices[0];
    Point b = ball.tiles[0].vertices[1];
    Point c = ball.tiles[0].vertices[p - 1];
    auto tangent = [&](Point from, Point to) {
      // circle through from, to orthogonal to the unit circle
      double det = from.real() * to.imag() - from.imag() * to.real();
      double kf = (std::norm(from) + 1) / 2, kt = (std::norm(to) + 1) / 2;
      Point o{(kf * to.imag() - from.imag() * kt) / det, (from.real() * kt - kf * to.real()) / det};
      Point radial = from - o;
      Point t{-radial.imag(), radial.real()};
      if (std::real(std::conj(t) * (to - from)) < 0) t = -t;
      return t;
    };
    double angle = std::abs(std::arg(tangent(a, b) / tangent(a, c)));
    CHECK(angle == Catch::Approx(expected_angle).epsilon(1e-9));
  }
}

TEST_CASE("reflections", "[oracle]") {
  Point a{0.1, 0.2}, b{-0.3, 0.4}, z{0.05, -0.6}, w{-0.2, -0.1};
  Point rz = geom::reflect(z, a, b);
  CHECK(std::abs(geom::reflect(rz, a, b) - z) < 1e-12);
  CHECK(std::abs(geom::reflect(a, a, b) - a) < 1e-12);
  CHECK(std::abs(geom::reflect(b, a, b) - b) < 1e-12);
  CHECK(geom::hyperbolic_distance(rz, geom::reflect(w, a, b)) == Catch::Approx(geom::hyperbolic_distance(z, w)));
}

TEST_CASE("side links are an involution and interior degree is p", "[oracle]") {
  for (int p : {5, 7}) {
    auto ball = generate_disc_ball(p, 5);
    for (std::size_t t = 0; t < ball.size(); ++t) {
      int deg = 0;
      for (int j = 0; j < p; ++j) {
        const Link& l = ball.tiles[t].links[j];
        if (!l.valid()) continue;
        ++deg;
        REQUIRE(ball.tiles[l.tile].links[l.side].tile == static_cast<int>(t));
        REQUIRE(ball.tiles[l.tile].links[l.side].side == j);
      }
      if (!ball.boundary(static_cast<int>(t))) REQUIRE(deg == p);
    }
  }
}

TEST_CASE("distances form a metric on the radius 4 ball", "[oracle]") {
  auto ball = generate_disc_ball(5, 8);
  std::vector<int> inner;
  for (std::size_t t = 0; t < ball.size(); ++t) {
    if (ball.tiles[t].dist <= 4) inner.push_back(static_cast<int>(t));
  }
  std::vector<std::vector<int>> d(ball.size());
  for (int a : inner) d[a] = ref::bfs(ball, a).dist;
  CHECK(bfs_distance(ball, 0, 0) == 0);
  for (int k = 0; k < 5; ++k) CHECK(bfs_distance(ball, 0, ball.tiles[0].links[k].tile) == 1);
  for (int a : inner) {
    for (int b : inner) {
      REQUIRE(bfs_distance(ball, a, b) == d[a][b]);
      REQUIRE(d[a][b] == d[b][a]);
      REQUIRE((d[a][b] == 0) == (a == b));
    }
  }
  for (std::size_t i = 0; i < inner.size(); i += 3) {
    for (int b : inner) {
      for (int c : inner) REQUIRE(d[inner[i]][c] <= d[inner[i]][b] + d[b][c]);
    }
  }
}

TEST_CASE("uncertified distances are refused", "[oracle]") {
  auto ball = generate_disc_ball(7, 3);
  int far1 = -1, far2 = -1;
  auto bfs0 = ref::bfs(ball, 0);
  for (std::size_t t = 0; t < ball.size(); ++t) {
    if (ball.tiles[t].dist != 3) continue;
    if (far1 < 0) {
      far1 = static_cast<int>(t);
    } else if (ref::bfs(ball, far1).dist[t] == 6) {
      far2 = static_cast<int>(t);
      break;
    }
  }
  REQUIRE(far2 >= 0);
  CHECK_THROWS_AS(bfs_distance(ball, far1, far2), Uncertified);
  CHECK_THROWS_AS(geodesic_count(ball, far1, far2), Uncertified);
  CHECK_THROWS_AS(bfs_distance(ball, 0, 100000), InvalidArgument);
}

TEST_CASE("geodesic counts", "[oracle]") {
  for (int p : {5, 7}) {
    auto ball = generate_disc_ball(p, 7);
    int root = ball.tiles[0].links[0].tile;
    CHECK(geodesic_count(ball, root, root) == 1);
    for (const auto& l : ball.tiles[root].links) CHECK(geodesic_count(ball, root, l.tile) == 1);
    auto layer = ref::bfs(ball, 0);
    for (std::size_t t = 0; t < ball.size(); ++t) {
      if (ball.tiles[t].dist > 3) continue;
      REQUIRE(static_cast<double>(geodesic_count(ball, 0, static_cast<int>(t))) == layer.paths[t]);
    }
  }
}

TEST_CASE("induced labels cover the ball once per sector tree", "[oracle]") {
  for (int p : {5, 7}) {
    auto ball = generate_disc_ball(p, 5);
    auto labels = induce_center_labels(ball);
    std::map<std::pair<int, std::vector<std::uint8_t>>, int> seen;
    for (std::size_t t = 1; t < ball.size(); ++t) {
      REQUIRE(labels.sector[t] >= 1);
      REQUIRE(labels.sector[t] <= p);
      REQUIRE(static_cast<int>(labels.path[t].level()) + 1 == ball.tiles[t].dist);
      REQUIRE(seen.emplace(std::pair{labels.sector[t], labels.path[t].sons}, static_cast<int>(t)).second);
    }
  }
}
