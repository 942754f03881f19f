#include <catch_amalgamated.hpp>

#include <set>

#include "fibgrid/carpet.hpp"

using namespace fibgrid;

namespace {
std::uint64_t u64(Natural v) { return static_cast<std::uint64_t>(v); }
}  // namespace

TEST_CASE("chain embedding", "[carpet]") {
  CHECK(u64(chain_embed(1, 1)) == 3);
  CHECK(u64(chain_embed(1, 2)) == 8);
  for (Natural nu = 1; nu < 200; ++nu) CHECK(chain_embed(nu, 0) == nu);
  // expanding two levels: node 3's middle son is the second son of the second node of level 1
  CHECK(number_to_path(8) == TreePath{NodeStatus::ThreeNode, {1, 1}});
}

TEST_CASE("carpet text", "[carpet]") {
  auto c = parse_carpet("(2,7)");
  CHECK(c.n == 2);
  CHECK(u64(c.nu) == 7);
  CHECK(c.to_string() == "(2,7)");
  CHECK(parse_carpet(" ( -3 , 12 ) ") == CarpetCoord{-3, 12});
  CHECK_THROWS_AS(parse_carpet("2,0"), InvalidArgument);
  CHECK_THROWS_AS(parse_carpet("(x,1)"), InvalidArgument);
  CHECK_THROWS_AS(parse_carpet("(1;1)"), InvalidArgument);
  CHECK(penta_to_hepta({0, 1}) == CarpetCoord{0, 1});
  CHECK(hepta_to_penta({2, 7}) == CarpetCoord{2, 7});
}

TEST_CASE("chain anchors", "[carpet]") {
  for (int p : {5, 7}) {
    auto g = build_ball(p, 4);
    CarpetChain chain(g);
    const auto& roots = chain.roots();
    REQUIRE(roots.size() >= 3);
    CHECK(roots[0].tile == g.at("1"));
    CHECK(roots[1].tile == 0);
    CHECK(chain.coord(g.at("1")) == CarpetCoord{0, 1});
    CHECK(chain.coord(0) == CarpetCoord{1, 1});
    // F_n's root is the middle son of F_{n+1}'s root
    for (std::size_t n = 0; n + 1 < roots.size(); ++n) {
      const auto& up = roots[n + 1];
      int local = (up.side1 + middle_son_side(p) - 1) % p;
      CHECK(g.disc->tiles[up.tile].links[local].tile == roots[n].tile);
    }
    // left son of F_1's root lies in F_1 only
    int left = g.disc->tiles[0].links[(roots[1].side1 + son_side(p, NodeStatus::ThreeNode, 0) - 1) % p].tile;
    CHECK(chain.coord(left) == CarpetCoord{1, 2});
    CHECK(chain.tile({1, 3}) == chain.tile({0, 1}));
    CHECK_THROWS_AS(chain.tile({chain.top() + 1, 1}), InvalidArgument);
  }
}

TEST_CASE("nesting and injectivity", "[carpet]") {
  for (int p : {5, 7}) {
    auto g = build_ball(p, 5);
    CarpetChain chain(g);
    std::set<CarpetCoord> seen;
    for (int t : chain.tiles()) {
      auto c = chain.coord(t);
      REQUIRE(seen.insert(c).second);
      REQUIRE(chain.tile(c) == t);
      // n is minimal: the tile is not in F_{n-1}
      auto path = number_to_path(c.nu);
      if (!path.sons.empty()) REQUIRE(path.sons.front() != 1);
      // and it is in every larger tree of the chain
      for (long long m = c.n; m <= chain.top(); ++m) {
        REQUIRE(chain.tile({m, chain_embed(c.nu, static_cast<unsigned>(m - c.n))}) == t);
      }
    }
  }
}
