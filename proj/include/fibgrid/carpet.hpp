#pragma once

// Carpet coordinates. F_0 is the tree of sector 1; the root of F_n is the
// middle son of the root of F_{n+1}. A tile gets (n, nu) where n is minimal
// with the tile in F_n and nu is its number in F_n.

#include <map>
#include <string>
#include <vector>

#include "fibgrid/error.hpp"
#include "fibgrid/grid.hpp"

namespace fibgrid {

struct CarpetCoord {
  long long n = 0;
  Natural nu = 1;

  bool operator==(const CarpetCoord&) const = default;
  auto operator<=>(const CarpetCoord&) const = default;

  std::string to_string() const { return "(" + std::to_string(n) + "," + fibgrid::to_string(nu) + ")"; }
};

inline CarpetCoord parse_carpet(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '(' && ch != ')') s += ch;
  }
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("carpet coordinate must read (n,nu)");
  CarpetCoord c;
  try {
    std::size_t used = 0;
    c.n = std::stoll(s.substr(0, comma), &used);
    if (used != comma) throw InvalidArgument("bad n");
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad carpet index in " + std::string(text));
  }
  c.nu = parse_natural(s.substr(comma + 1));
  if (c.nu == 0) throw InvalidArgument("node numbers start at 1");
  return c;
}

// Number in F_{n+k} of the node numbered nu in F_n.
inline Natural chain_embed(Natural nu, unsigned k) {
  TreePath path = number_to_path(nu);
  path.sons.insert(path.sons.begin(), k, 1);
  return path_to_number(path);
}

class CarpetChain {
 public:
  explicit CarpetChain(const GridBall& g) : g_(&g) {
    const int p = g.p;
    const int m = middle_son_side(p) - 1;
    int k = g.side_local(0, 1);
    const Link& l = g.disc->tiles[0].links[k];
    if (!l.valid()) return;
    roots_.push_back(Frame{l.tile, l.side});
    roots_.push_back(Frame{0, ((k - m) % p + p) % p});
    while (true) {
      const Frame& r = roots_.back();
      const Link& up = g.disc->tiles[r.tile].links[r.side1];
      if (!up.valid()) break;
      roots_.push_back(Frame{up.tile, ((up.side - m) % p + p) % p});
    }
    for (const auto& node : expand_tree(*g.disc, roots_.back())) path_.emplace(node.frame.tile, node.path);
  }

  // Index of the largest tree of the chain whose root lies in the ball.
  long long top() const { return static_cast<long long>(roots_.size()) - 1; }
  const std::vector<Frame>& roots() const { return roots_; }

  bool representable(int t) const { return path_.count(t) > 0; }

  CarpetCoord coord(int t) const {
    auto it = path_.find(t);
    if (it == path_.end()) throw InvalidArgument("tile " + g_->ids.at(t).compact() + " lies in no tree of the chain");
    const auto& sons = it->second.sons;
    std::size_t lead = 0;
    while (lead < sons.size() && sons[lead] == 1) ++lead;
    TreePath rest{NodeStatus::ThreeNode, {sons.begin() + static_cast<long>(lead), sons.end()}};
    return {top() - static_cast<long long>(lead), path_to_number(rest)};
  }

  int tile(const CarpetCoord& c) const {
    if (roots_.empty()) throw InvalidArgument("the ball holds no tree of the chain");
    if (c.n > top()) throw InvalidArgument("index " + std::to_string(c.n) + " lies beyond the ball");
    TreePath rest = number_to_path(c.nu);
    NodeStatus st = NodeStatus::ThreeNode;
    Frame f = roots_.back();
    std::vector<int> sons(static_cast<std::size_t>(top() - c.n), 1);
    sons.insert(sons.end(), rest.sons.begin(), rest.sons.end());
    for (int s : sons) {
      int local = (f.side1 + son_side(g_->p, st, s) - 1) % g_->p;
      const Link& l = g_->disc->tiles[f.tile].links[local];
      if (!l.valid()) throw InvalidArgument("coordinate " + c.to_string() + " lies beyond the ball");
      f = Frame{l.tile, l.side};
      st = son_status(st, s);
    }
    return f.tile;
  }

  std::vector<int> tiles() const {
    std::vector<int> out;
    for (const auto& [t, _] : path_) out.push_back(t);
    return out;
  }

 private:
  const GridBall* g_;
  std::vector<Frame> roots_;
  std::map<int, TreePath> path_;
};

// The two grids are matched by equal coordinates.
inline CarpetCoord penta_to_hepta(const CarpetCoord& c) { return c; }
inline CarpetCoord hepta_to_penta(const CarpetCoord& c) { return c; }

}  // namespace fibgrid
