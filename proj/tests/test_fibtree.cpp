#include <catch_amalgamated.hpp>

#include <map>

#include "fibgrid/fibtree.hpp"

using namespace fibgrid;

namespace {

std::uint64_t u64(Natural v) { return static_cast<std::uint64_t>(v); }

TreePath path(std::vector<std::uint8_t> sons, NodeStatus root = NodeStatus::ThreeNode) {
  return TreePath{root, std::move(sons)};
}

// Breadth-first, left-to-right numbering of the tree down to `depth`.
std::vector<TreePath> enumerate(NodeStatus root, int depth) {
  std::vector<TreePath> order{TreePath{root, {}}};
  std::vector<std::pair<TreePath, int>> level{{TreePath{root, {}}, static_cast<int>(root)}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<TreePath, int>> next;
    for (const auto& [p, sons] : level) {
      for (int s = 0; s < sons; ++s) {
        TreePath c = p;
        c.sons.push_back(static_cast<std::uint8_t>(s));
        next.emplace_back(c, s == 0 ? 2 : 3);
        order.push_back(c);
      }
    }
    level.swap(next);
  }
  return order;
}

}  // namespace

TEST_CASE("statuses", "[fibtree]") {
  CHECK(status_of(path({})) == NodeStatus::ThreeNode);
  CHECK(status_of(path({0})) == NodeStatus::TwoNode);
  CHECK(status_of(path({0, 1})) == NodeStatus::ThreeNode);
  CHECK(status_of(path({0, 0})) == NodeStatus::TwoNode);
  CHECK(status_of(path({}, NodeStatus::TwoNode)) == NodeStatus::TwoNode);
  CHECK_THROWS_AS(status_of(path({0, 2})), InvalidArgument);
}

TEST_CASE("sons and fathers", "[fibtree]") {
  CHECK(sons(path({})) == std::vector<TreePath>{path({0}), path({1}), path({2})});
  CHECK(sons(path({0})) == std::vector<TreePath>{path({0, 0}), path({0, 1})});
  CHECK(father(path({2, 1})) == path({2}));
  CHECK_THROWS_AS(father(path({})), InvalidArgument);
}

TEST_CASE("node numbers", "[fibtree]") {
  CHECK(u64(path_to_number(path({}))) == 1);
  CHECK(u64(path_to_number(path({1}))) == 3);
  CHECK(number_to_path(13) == path({0, 0, 0}));
  CHECK(u64(path_to_number(path({2, 2}))) == 12);
  CHECK_THROWS_AS(number_to_path(0), InvalidArgument);

  for (NodeStatus root : {NodeStatus::ThreeNode, NodeStatus::TwoNode}) {
    auto order = enumerate(root, 8);
    for (std::size_t i = 0; i < order.size(); ++i) {
      REQUIRE(u64(path_to_number(order[i])) == i + 1);
      REQUIRE(number_to_path(i + 1, root) == order[i]);
    }
  }
  for (Natural n = 1; n <= 100000; ++n) REQUIRE(path_to_number(number_to_path(n)) == n);
}

TEST_CASE("first node of a level is an odd classical Fibonacci number", "[fibtree]") {
  for (unsigned n = 1; n <= 20; ++n) {
    CHECK(first_number_of_level(n, NodeStatus::ThreeNode) ==
          fib(static_cast<int>(2 * n + 1), FibConvention::Classical));
  }
}

TEST_CASE("coordinates", "[fibtree]") {
  CHECK(coordinate_of(1).bits() == "1");
  CHECK(coordinate_of(4).bits() == "101");
  CHECK(coordinate_of(12).bits() == "10101");
}

TEST_CASE("plain digits along a path", "[fibtree]") {
  CHECK(path_digits(path({0, 0, 1, 2, 1})) == std::vector<int>{1, 2, 3, 3, 2});
  CHECK(path_from_digits({1, 2, 3, 3, 2}) == path({0, 0, 1, 2, 1}));
  CHECK_THROWS_AS(path_from_digits({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(path_from_digits({4}), InvalidArgument);
  for (auto& p : enumerate(NodeStatus::ThreeNode, 6)) REQUIRE(path_from_digits(path_digits(p)) == p);
}
