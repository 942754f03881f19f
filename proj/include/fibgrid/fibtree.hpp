#pragma once

// The standard Fibonacci tree. A 3-node has sons [2-node, 3-node, 3-node]
// and a 2-node has sons [2-node, 3-node], left to right. Nodes are numbered
// breadth first, left to right, starting with 1 at the root.
//
// Nothing is materialised: every query replays the production rules along a
// path, so deep queries stay cheap.

#include <cstdint>
#include <string>
#include <vector>

#include "fibgrid/error.hpp"
#include "fibgrid/numeration.hpp"

namespace fibgrid {

inline int son_count(NodeStatus s) { return static_cast<int>(s); }

inline NodeStatus son_status(NodeStatus parent, int son) {
  if (son < 0 || son >= son_count(parent)) {
    throw InvalidArgument("son index " + std::to_string(son) + " invalid under a " +
                          std::to_string(son_count(parent)) + "-node");
  }
  return son == 0 ? NodeStatus::TwoNode : NodeStatus::ThreeNode;
}

inline const char* status_name(NodeStatus s) { return s == NodeStatus::TwoNode ? "2-node" : "3-node"; }

// Plain arc digit (1..3) of the arc from a node of status `parent` to its
// son `son`. Sons of a 3-node use 1,2,3; sons of a 2-node use 2,3.
inline int son_digit(NodeStatus parent, int son) {
  son_status(parent, son);
  return son + 1 + (parent == NodeStatus::TwoNode ? 1 : 0);
}

inline int son_from_digit(NodeStatus parent, int digit) {
  int son = digit - 1 - (parent == NodeStatus::TwoNode ? 1 : 0);
  if (son < 0 || son >= son_count(parent)) {
    throw InvalidArgument("digit " + std::to_string(digit) + " does not lead to a son of a " +
                          std::string(status_name(parent)));
  }
  return son;
}

struct TreePath {
  NodeStatus root_status = NodeStatus::ThreeNode;
  std::vector<std::uint8_t> sons;

  bool is_root() const { return sons.empty(); }
  std::size_t level() const { return sons.size(); }
  bool operator==(const TreePath&) const = default;

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < sons.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(sons[i]);
    }
    return s + "]";
  }
};

inline NodeStatus status_of(const TreePath& path) {
  NodeStatus st = path.root_status;
  for (auto s : path.sons) st = son_status(st, s);
  return st;
}

inline TreePath father(const TreePath& path) {
  if (path.is_root()) throw InvalidArgument("the root has no father");
  TreePath f = path;
  f.sons.pop_back();
  return f;
}

inline std::vector<TreePath> sons(const TreePath& path) {
  NodeStatus st = status_of(path);
  std::vector<TreePath> out;
  for (int s = 0; s < son_count(st); ++s) {
    TreePath child = path;
    child.sons.push_back(static_cast<std::uint8_t>(s));
    out.push_back(std::move(child));
  }
  return out;
}

// Number of the first node on `level`: 1 + sum of the sizes of the levels above.
inline Natural first_number_of_level(unsigned level, NodeStatus root) {
  Natural n = 1;
  for (unsigned j = 0; j < level; ++j) n = checked_add(n, level_count(j, root));
  return n;
}

namespace detail {

// Counts of 2-nodes and 3-nodes lying to the left of a node on its level.
struct LeftCounts {
  Natural two = 0;
  Natural three = 0;
};

// Left counts on the next level when descending to son `s` of a node whose
// left counts are `lc`.
inline LeftCounts descend(LeftCounts lc, int s) {
  // Each 2-node on the left contributes sons (2,3); each 3-node (2,3,3).
  LeftCounts next;
  next.two = checked_add(lc.two, lc.three);
  next.three = checked_add(lc.two, checked_mul(Natural{2}, lc.three));
  // siblings to the left: son 0 is a 2-node, the others 3-nodes
  if (s >= 1) next.two = checked_add(next.two, Natural{1});
  if (s >= 2) next.three = checked_add(next.three, Natural(s - 1));
  return next;
}

}  // namespace detail

inline Natural path_to_number(const TreePath& path) {
  detail::LeftCounts lc;
  NodeStatus st = path.root_status;
  for (auto s : path.sons) {
    lc = detail::descend(lc, s);
    st = son_status(st, s);
  }
  Natural rank = checked_add(lc.two, lc.three);
  return checked_add(first_number_of_level(static_cast<unsigned>(path.level()), path.root_status), rank);
}

inline TreePath number_to_path(Natural n, NodeStatus root = NodeStatus::ThreeNode) {
  if (n == 0) throw InvalidArgument("node numbers start at 1");
  unsigned level = 0;
  Natural first = 1;
  while (true) {
    Natural size = level_count(level, root);
    if (n < checked_add(first, size)) break;
    first = checked_add(first, size);
    ++level;
  }
  Natural rank = n - first;

  TreePath path{root, {}};
  detail::LeftCounts lc;
  NodeStatus st = root;
  for (unsigned depth = 0; depth < level; ++depth) {
    unsigned below = level - depth - 1;
    Natural d2 = level_count(below, NodeStatus::TwoNode);
    Natural d3 = level_count(below, NodeStatus::ThreeNode);
    int chosen = 0;
    detail::LeftCounts chosen_lc;
    for (int s = 0; s < son_count(st); ++s) {
      auto cand = detail::descend(lc, s);
      Natural start = checked_add(checked_mul(cand.two, d2), checked_mul(cand.three, d3));
      if (start <= rank) {
        chosen = s;
        chosen_lc = cand;
      }
    }
    path.sons.push_back(static_cast<std::uint8_t>(chosen));
    lc = chosen_lc;
    st = son_status(st, chosen);
  }
  return path;
}

inline ZeckendorfWord coordinate_of(Natural n) { return zeck_encode(n); }

// Son indices <-> plain arc digits along a path.
inline std::vector<int> path_digits(const TreePath& path) {
  std::vector<int> out;
  NodeStatus st = path.root_status;
  for (auto s : path.sons) {
    out.push_back(son_digit(st, s));
    st = son_status(st, s);
  }
  return out;
}

inline TreePath path_from_digits(const std::vector<int>& digits, NodeStatus root = NodeStatus::ThreeNode) {
  TreePath path{root, {}};
  NodeStatus st = root;
  for (int d : digits) {
    int s = son_from_digit(st, d);
    path.sons.push_back(static_cast<std::uint8_t>(s));
    st = son_status(st, s);
  }
  return path;
}

}  // namespace fibgrid
