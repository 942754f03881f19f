// fibgrid: command line front end over the header library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fibgrid/fibgrid.hpp"

using namespace fibgrid;

namespace {

struct Options {
  std::string tiling = "penta";
  std::string sectors = "ccw";
  int radius = 3;
};

int tiling_sides(const std::string& name) { return name == "hepta" ? 7 : 5; }

SectorDirection direction(const Options& o) {
  return o.sectors == "cw" ? SectorDirection::Clockwise : SectorDirection::CounterClockwise;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

int level_of(const TileId& id) { return id.is_center() ? 0 : static_cast<int>(id.path.level()) + 1; }

GridBall ball_holding(int p, const std::vector<TileId>& ids, int at_least, SectorDirection dir) {
  int r = at_least;
  for (const auto& id : ids) r = std::max(r, level_of(id));
  if (r > max_ball_radius(p)) throw ResourceLimit("radius " + std::to_string(r) + " is beyond the cap");
  return build_ball(p, r, dir);
}

// ------------------------------------------------------------------ build

int cmd_build(const Options& o, const std::string& out) {
  int p = tiling_sides(o.tiling);
  auto g = build_ball(p, o.radius, direction(o));
  emit(out, to_json(g).dump(1) + "\n");
  if (!out.empty() && out != "-") std::cout << g.size() << " tiles written to " << out << "\n";
  return 0;
}

// ------------------------------------------------------------------ coord

void describe(const GridBall& g, int t) {
  const TileId& id = g.ids[t];
  std::cout << "tile      " << id.compact() << "\n";
  std::cout << "address   " << id.address() << "\n";
  if (id.is_center()) return;
  Natural nu = path_to_number(id.path);
  std::cout << "sector    " << id.sector << "\n";
  std::cout << "path      " << id.path.to_string() << "\n";
  std::cout << "status    " << status_name(g.status(t)) << "\n";
  std::cout << "node      " << to_string(nu) << "\n";
  std::cout << "zeck      " << coordinate_of(nu).bits() << "\n";
  if (g.p == 5) {
    auto w = wang_numbering(g);
    std::cout << "edges     " << edge_numbers_to_string(wang_coordinate(g, w, t)) << "\n";
  }
}

int cmd_coord(const Options& o, const std::string& tile, const std::string& node, const std::string& zeck,
              const std::string& edges) {
  int p = tiling_sides(o.tiling);
  int given = !tile.empty() + !node.empty() + !zeck.empty() + !edges.empty();
  if (given != 1) throw InvalidArgument("give exactly one of --tile, --node, --zeck, --edges");
  TileId id;
  if (!tile.empty()) {
    id = parse_tile_id(p, tile);
  } else if (!node.empty() || !zeck.empty()) {
    // "sector:value"
    const std::string& text = node.empty() ? zeck : node;
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("expected sector:value, got " + text);
    int sector = std::stoi(text.substr(0, colon));
    if (sector < 1 || sector > p) throw InvalidArgument("sector out of range");
    std::string value = text.substr(colon + 1);
    Natural nu = node.empty() ? zeck_decode(value) : parse_natural(value);
    id = TileId{sector, number_to_path(nu)};
  } else {
    if (p != 5) throw InvalidArgument("edge numbers exist for the pentagrid only");
    auto ds = parse_edge_numbers(edges);
    auto g = build_ball(5, std::max<int>(1, static_cast<int>(ds.size())), direction(o));
    id = g.ids[wang_locate(g, wang_numbering(g), ds)];
  }
  auto g = ball_holding(p, {id}, 1, direction(o));
  describe(g, g.at(id));
  return 0;
}

// ------------------------------------------------------------------ route

int cmd_route(const Options& o, const std::string& from, const std::string& to, const std::string& system) {
  int p = tiling_sides(o.tiling);
  if (system == "wang") {
    if (p != 5) throw InvalidArgument("edge numbers exist for the pentagrid only");
    auto r = wang_route_between(parse_edge_numbers(from), parse_edge_numbers(to));
    std::cout << "source    " << r.source.compact() << "\n";
    std::cout << "target    " << r.target.compact() << "\n";
    std::cout << "forward   " << edge_numbers_to_string(r.forward) << "\n";
    std::cout << "length    " << r.forward.size() << "\n";
    return 0;
  }
  auto r = route_between(p, parse_tile_id(p, from), parse_tile_id(p, to), direction(o));
  std::cout << "forward   " << digits_to_string(r.forward) << "\n";
  std::cout << "reverse   " << digits_to_string(r.reverse) << "\n";
  std::cout << "relative  " << r.relative << "\n";
  std::cout << "length    " << r.forward.size() << "\n";
  return 0;
}

// ------------------------------------------------------------------ carpet

int cmd_carpet(const Options& o, const std::string& tile, const std::string& coord) {
  int p = tiling_sides(o.tiling);
  int q = p == 5 ? 7 : 5;
  if (tile.empty() == coord.empty()) throw InvalidArgument("give exactly one of --tile, --coord");
  auto g = build_ball(p, o.radius, direction(o));
  // heptagrid coordinates reach farther out in the pentagrid
  auto h = build_ball(q, std::min(q == 5 ? o.radius + 2 : o.radius, max_ball_radius(q)), direction(o));
  CarpetChain cg(g), ch(h);
  CarpetCoord c;
  if (!tile.empty()) {
    int t = g.at(tile);
    if (!cg.representable(t)) throw InvalidArgument("tile " + tile + " has no carpet coordinate in this ball");
    c = cg.coord(t);
  } else {
    c = parse_carpet(coord);
  }
  CarpetCoord other = p == 5 ? penta_to_hepta(c) : hepta_to_penta(c);
  std::cout << "carpet    " << c.to_string() << "\n";
  std::cout << tiling_name(p) << "     " << g.ids[cg.tile(c)].compact() << "\n";
  std::cout << tiling_name(q) << "     " << h.ids[ch.tile(other)].compact() << "\n";
  return 0;
}

// ------------------------------------------------------------------ simulate

struct SimArgs {
  std::string scenario = "broadcast";
  std::string source = "0";
  std::string target;
  int level = -1;
  long long payload = 0;
  std::string rho = "1/10";
  double lambda = 1.5;
  std::uint64_t draws = 100000;
  std::uint64_t seed = 42;
  std::string events;
  std::string stats;
};

int cmd_simulate(const Options& o, const SimArgs& a) {
  int p = tiling_sides(o.tiling);
  auto g = build_ball(p, o.radius, direction(o));
  int c = g.at(a.source);
  SimConfig cfg;
  cfg.rho = parse_cost(a.rho);
  std::vector<Event> events;
  nlohmann::json stats;
  if (a.scenario == "broadcast") {
    auto r = run_broadcast(g, c, a.level, cfg);
    std::size_t reached = 0, dup = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
      reached += r.receipts[t] > 0;
      dup += r.receipts[t] > 1;
    }
    std::cout << "reached   " << reached << " of " << g.size() << "\n";
    std::cout << "repeats   " << dup << "\n";
    stats = stats_json(r.stats);
    events = std::move(r.events);
  } else if (a.scenario == "storm") {
    if (a.level < 1) throw InvalidArgument("storm needs --level >= 1");
    auto r = run_reply_storm(g, c, a.level, cfg);
    std::cout << "repliers  " << r.repliers << "\n";
    std::cout << "received  " << r.received << "\n";
    std::cout << "fan-in    " << r.max_intake_at_source << "\n";
    std::cout << "ticks     " << r.last_tick << "\n";
    std::cout << "fifo      " << (r.fifo ? "yes" : "no") << "\n";
    stats = stats_json(r.stats);
    events = std::move(r.events);
  } else if (a.scenario == "unicast") {
    if (a.target.empty()) throw InvalidArgument("unicast needs --target");
    int d = g.at(a.target);
    auto r = run_unicast(g, c, d, a.payload, cfg.rho);
    std::cout << "latency   " << r.latency << "\n";
    std::cout << "hops      " << r.hops << "\n";
    std::cout << "cost      " << cost_to_string(r.cost) << "\n";
    std::cout << "formula   " << cost_to_string(transmission_cost(r.hops, a.payload, cfg.rho)) << "\n";
    events = std::move(r.events);
  } else if (a.scenario == "traffic") {
    auto m = traffic_model(p, a.lambda);
    auto r = monte_carlo_traffic(g, m, a.draws, a.seed, g.radius);
    char line[160];
    std::snprintf(line, sizeof line, "gamma %.6f  C %.6f  D %.6f\n", m.gamma, m.C, m.D);
    std::cout << line;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < r.tail.size(); ++k) {
      std::snprintf(line, sizeof line, "k=%zu tail %.6f bound %.6f allowance %.6f\n", k, r.tail[k], r.bound[k],
                    r.allowance[k]);
      std::cout << line;
      rows.push_back({{"k", k}, {"tail", r.tail[k]}, {"bound", r.bound[k]}, {"allowance", r.allowance[k]}});
    }
    std::cout << "outside   " << r.outside_ball << "\n";
    std::cout << (r.ok ? "within bound" : "BOUND EXCEEDED") << "\n";
    stats = {{"lambda", a.lambda}, {"seed", a.seed}, {"draws", a.draws}, {"gamma", m.gamma},
             {"C", m.C},           {"D", m.D},       {"rows", rows},     {"ok", r.ok}};
    if (!a.stats.empty()) emit(a.stats, stats.dump(1) + "\n");
    return r.ok ? 0 : 1;
  } else {
    throw InvalidArgument("unknown scenario " + a.scenario);
  }
  if (!a.events.empty()) {
    std::ostringstream os;
    write_events(os, g, events);
    emit(a.events, os.str());
  }
  if (!a.stats.empty() && !stats.is_null()) emit(a.stats, stats.dump(1) + "\n");
  return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Options& o) {
  int p = tiling_sides(o.tiling);
  bool ok = true;
  for (const auto& r : run_verify_suite(p, o.radius)) {
    std::cout << (r.ok ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.ok;
  }
  return ok ? 0 : 1;
}

// ------------------------------------------------------------------ render

int cmd_render(const Options& o, const std::string& out, const std::string& from, const std::string& to,
               bool labels, double size) {
  int p = tiling_sides(o.tiling);
  auto g = build_ball(p, o.radius, direction(o));
  SvgOptions opt;
  opt.size = size;
  opt.labels = labels;
  if (!from.empty() || !to.empty()) {
    if (from.empty() || to.empty()) throw InvalidArgument("highlighting needs both --from and --to");
    opt.highlight = route_in_ball(g, g.at(from), g.at(to)).tiles;
  }
  emit(out, render_svg(g, opt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibonacci-tree coordinates and arc-digit routing on the pentagrid and heptagrid"};
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--tiling", o.tiling, "penta or hepta")->check(CLI::IsMember({"penta", "hepta"}));
  app.add_option("--sectors", o.sectors, "sector order around the centre")->check(CLI::IsMember({"ccw", "cw"}));
  app.add_option("-r,--radius", o.radius, "ball radius")->check(CLI::Range(0, 12));

  std::string out;
  auto* build = app.add_subcommand("build", "write a ball as JSON");
  build->add_option("-o,--output", out, "output file, stdout by default");

  std::string tile, node, zeck, edges;
  auto* coord = app.add_subcommand("coord", "convert a tile between coordinate forms");
  coord->add_option("--tile", tile, "tile as 312332 or \"*3 1 2 3 3 2\"");
  coord->add_option("--node", node, "sector:node number");
  coord->add_option("--zeck", zeck, "sector:Zeckendorf bits");
  coord->add_option("--edges", edges, "pentagrid edge numbers from the centre");

  std::string from, to, system = "arcs";
  auto* route = app.add_subcommand("route", "forward and reverse addresses between two tiles");
  route->add_option("--from", from, "source tile")->required();
  route->add_option("--to", to, "target tile")->required();
  route->add_option("--system", system, "arcs or wang")->check(CLI::IsMember({"arcs", "wang"}));

  std::string carpet_coord;
  auto* carpet = app.add_subcommand("carpet", "carpet coordinates and the matching tile of the other grid");
  carpet->add_option("--tile", tile, "tile of --tiling");
  carpet->add_option("--coord", carpet_coord, "(n,nu)");

  SimArgs sa;
  auto* simulate = app.add_subcommand("simulate", "run the synchronous message simulator");
  simulate->add_option("--scenario", sa.scenario, "broadcast, storm, unicast or traffic")
      ->check(CLI::IsMember({"broadcast", "storm", "unicast", "traffic"}));
  simulate->add_option("--source", sa.source, "source tile");
  simulate->add_option("--target", sa.target, "unicast target");
  simulate->add_option("--level", sa.level, "broadcast depth, or storm level");
  simulate->add_option("--payload", sa.payload, "payload size M");
  simulate->add_option("--rho", sa.rho, "cost ratio, decimal or fraction");
  simulate->add_option("--lambda", sa.lambda, "traffic decay rate");
  simulate->add_option("--draws", sa.draws, "Monte Carlo draws");
  simulate->add_option("--seed", sa.seed, "random seed");
  simulate->add_option("--events", sa.events, "event log (JSON lines)");
  simulate->add_option("--stats", sa.stats, "statistics (JSON)");

  auto* verify = app.add_subcommand("verify", "run the check suite, exit 1 on any failure");

  bool labels = false;
  double size = 800.0;
  auto* render = app.add_subcommand("render", "SVG picture of the ball");
  render->add_option("-o,--output", out, "output file, stdout by default");
  render->add_option("--from", from, "highlight the route from this tile");
  render->add_option("--to", to, "highlight the route to this tile");
  render->add_flag("--labels", labels, "print coordinates inside tiles");
  render->add_option("--size", size, "picture size in pixels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(o, out);
    if (*coord) return cmd_coord(o, tile, node, zeck, edges);
    if (*route) return cmd_route(o, from, to, system);
    if (*carpet) return cmd_carpet(o, tile, carpet_coord);
    if (*simulate) return cmd_simulate(o, sa);
    if (*verify) return cmd_verify(o);
    if (*render) return cmd_render(o, out, from, to, labels, size);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
