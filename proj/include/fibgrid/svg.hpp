#pragma once

// SVG picture of a ball in the Poincare disc. Edges are arcs of circles
// orthogonal to the unit circle.

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fibgrid/grid.hpp"

namespace fibgrid {

struct SvgOptions {
  double size = 800.0;
  bool labels = false;
  std::vector<int> highlight;  // tiles of a path, in order
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const GridBall& g, const SvgOptions& opt = {}) {
  const double half = opt.size / 2.0;
  const double scale = half * 0.98;
  auto px = [&](Point z) { return std::pair{half + scale * z.real(), half - scale * z.imag()}; };

  // Path segment from a to b along the geodesic through them.
  auto edge = [&](Point a, Point b) {
    auto [ax, ay] = px(a);
    auto [bx, by] = px(b);
    std::string move = "M" + detail::fmt(ax) + " " + detail::fmt(ay) + " ";
    double det = a.real() * b.imag() - a.imag() * b.real();
    if (std::abs(det) > 1e-12) {
      double ka = (std::norm(a) + 1.0) / 2.0, kb = (std::norm(b) + 1.0) / 2.0;
      Point c{(ka * b.imag() - a.imag() * kb) / det, (a.real() * kb - ka * b.real()) / det};
      double r = std::sqrt(std::norm(c) - 1.0) * scale;
      double chord = std::abs(a - b) * scale;
      double sagitta = r - std::sqrt(std::max(0.0, r * r - chord * chord / 4.0));
      if (sagitta >= 0.5) {
        // minor arc about c; sweep 1 is clockwise on screen, counter-clockwise in the disc after the y flip
        Point ua = a - c, ub = b - c;
        int sweep = ua.real() * ub.imag() - ua.imag() * ub.real() > 0 ? 0 : 1;
        return move + "A" + detail::fmt(r) + " " + detail::fmt(r) + " 0 0 " + std::to_string(sweep) + " " +
               detail::fmt(bx) + " " + detail::fmt(by);
      }
    }
    return move + "L" + detail::fmt(bx) + " " + detail::fmt(by);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(opt.size) << "\" height=\""
     << detail::fmt(opt.size) << "\" viewBox=\"0 0 " << detail::fmt(opt.size) << " " << detail::fmt(opt.size)
     << "\">\n";
  os << "<circle cx=\"" << detail::fmt(half) << "\" cy=\"" << detail::fmt(half) << "\" r=\"" << detail::fmt(scale)
     << "\" fill=\"#fafafa\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  std::set<int> marked(opt.highlight.begin(), opt.highlight.end());
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (!marked.count(static_cast<int>(t))) continue;
    const auto& vs = g.disc->tiles[t].vertices;
    std::string d;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      std::string seg = edge(vs[k], vs[(k + 1) % vs.size()]);
      d += k == 0 ? seg : seg.substr(seg.find_first_of("AL"));
    }
    os << "<path d=\"" << d << " Z\" fill=\"#ffd27f\" stroke=\"none\"/>\n";
  }

  os << "<g fill=\"none\" stroke=\"#555\" stroke-width=\"0.6\">\n";
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto& tile = g.disc->tiles[t];
    for (int j = 0; j < g.p; ++j) {
      const Link& l = tile.links[j];
      // draw each shared edge once
      if (l.valid() && l.tile < static_cast<int>(t)) continue;
      os << "<path d=\"" << edge(tile.vertices[j], tile.vertices[(j + 1) % g.p]) << "\"/>\n";
    }
  }
  os << "</g>\n";

  if (opt.highlight.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    for (int t : opt.highlight) {
      auto [x, y] = px(g.disc->tiles.at(t).center);
      os << detail::fmt(x) << "," << detail::fmt(y) << " ";
    }
    os << "\"/>\n";
  }
  if (opt.labels) {
    os << "<g font-family=\"monospace\" text-anchor=\"middle\" fill=\"#222\">\n";
    for (std::size_t t = 0; t < g.size(); ++t) {
      Point z = g.disc->tiles[t].center;
      double font = scale * (1.0 - std::norm(z)) * 0.08;
      if (font < 4.0) continue;
      auto [x, y] = px(z);
      os << "<text x=\"" << detail::fmt(x) << "\" y=\"" << detail::fmt(y + font / 3.0) << "\" font-size=\""
         << detail::fmt(font) << "\">" << g.ids[t].compact() << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fibgrid
