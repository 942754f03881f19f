#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sys/wait.h>

#include "fibgrid/svg.hpp"
#include "reference.hpp"

using namespace fibgrid;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(FIBGRID_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string line_of(const std::string& out, const std::string& key) {
  std::istringstream is(out);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key, 0) == 0) {
      auto v = line.substr(key.size());
      return v.substr(v.find_first_not_of(' '));
    }
  }
  return "";
}

}  // namespace

TEST_CASE("coord", "[cli]") {
  auto r = cli("--tiling hepta coord --tile \"*3 1 2 3 3 2\"");
  CHECK(r.status == 0);
  CHECK(line_of(r.out, "tile") == "312332");
  CHECK(line_of(r.out, "node") == "100");
  CHECK(line_of(r.out, "zeck") == "1000010100");
  auto n = cli("coord --node 3:100");
  CHECK(line_of(n.out, "tile") == "312332");
  CHECK(line_of(n.out, "edges") == "324142");
  auto z = cli("coord --zeck 3:1000010100");
  CHECK(line_of(z.out, "tile") == "312332");
  auto e = cli("coord --edges 2421413");
  CHECK(line_of(e.out, "tile") == "2331332");
  CHECK(cli("coord --tile 1 --node 1:1").status != 0);
}

TEST_CASE("route", "[cli]") {
  auto r = cli("--tiling hepta route --from 312332 --to 2331332");
  CHECK(r.status == 0);
  CHECK(line_of(r.out, "forward") == "~2~3~5~41332");
  CHECK(line_of(r.out, "reverse") == "~2~3~3~14532");
  CHECK(line_of(r.out, "relative") == "13313332");
  CHECK(line_of(r.out, "length") == "8");
  auto w = cli("route --system wang --from 324142 --to 2421413");
  CHECK(line_of(w.out, "forward") == "242131413");
  CHECK(cli("--tiling hepta route --system wang --from 1 --to 2").status != 0);
}

TEST_CASE("build", "[cli]") {
  auto a = cli("build -r 3");
  auto b = cli("build -r 3");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  auto census = ref::bfs(generate_disc_ball(5, 3), 0);
  CHECK(j["tiles"].size() == census.dist.size());
  CHECK(nlohmann::json::parse(cli("build -r 0").out)["tiles"].size() == 1);
  CHECK(cli("build -r 13").status != 0);
}

TEST_CASE("config file and flags", "[cli]") {
  {
    std::ofstream f("fibgrid_test.toml");
    f << "tiling = \"hepta\"\nradius = 2\n";
  }
  auto from_file = nlohmann::json::parse(cli("--config fibgrid_test.toml build").out);
  CHECK(from_file["tiling"] == "hepta");
  CHECK(from_file["radius"] == 2);
  auto flag = nlohmann::json::parse(cli("--config fibgrid_test.toml -r 1 build").out);
  CHECK(flag["radius"] == 1);
  CHECK(flag["tiles"].size() == 8);
  std::remove("fibgrid_test.toml");
}

TEST_CASE("carpet", "[cli]") {
  auto r = cli("carpet -r 4 --tile 1");
  CHECK(line_of(r.out, "carpet") == "(0,1)");
  auto c = cli("carpet -r 4 --coord \"(1,1)\"");
  CHECK(line_of(c.out, "penta") == "0");
  CHECK(line_of(c.out, "hepta") == "0");
}

TEST_CASE("simulate", "[cli]") {
  auto u = cli("simulate -r 5 --scenario unicast --source 0 --target 23333 --payload 10 --rho 0.1");
  CHECK(line_of(u.out, "latency") == "5");
  CHECK(line_of(u.out, "cost") == "25/2");
  auto s1 = cli("simulate -r 4 --scenario storm --level 2 --events fibgrid_ev1.jsonl");
  auto s2 = cli("simulate -r 4 --scenario storm --level 2 --events fibgrid_ev2.jsonl");
  CHECK(line_of(s1.out, "received") == "15");
  std::ifstream e1("fibgrid_ev1.jsonl"), e2("fibgrid_ev2.jsonl");
  std::string a((std::istreambuf_iterator<char>(e1)), {}), b((std::istreambuf_iterator<char>(e2)), {});
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove("fibgrid_ev1.jsonl");
  std::remove("fibgrid_ev2.jsonl");
  auto t = cli("simulate -r 5 --scenario traffic --draws 5000 --seed 1");
  CHECK(t.status == 0);
  CHECK(t.out.find("within bound") != std::string::npos);
}

TEST_CASE("verify", "[cli]") {
  auto r = cli("verify -r 5");
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("svg edges are geodesics", "[cli]") {
  auto g = build_ball(5, 3);
  SvgOptions opt;
  opt.size = 1000;
  auto svg = render_svg(g, opt);
  const double half = 500, scale = half * 0.98;
  std::regex seg(R"(M([-\d.]+) ([-\d.]+) A([-\d.]+) [-\d.]+ 0 (\d) (\d) ([-\d.]+) ([-\d.]+))");
  std::size_t arcs = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), seg); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    double x1 = std::stod(m[1]), y1 = std::stod(m[2]), r = std::stod(m[3]);
    int large = std::stoi(m[4]), sweep = std::stoi(m[5]);
    double x2 = std::stod(m[6]), y2 = std::stod(m[7]);
    auto c = ref::svg_arc_center(x1, y1, x2, y2, r, large, sweep);
    std::complex<double> cd{(c.real() - half) / scale, (half - c.imag()) / scale};
    double rd = r / scale;
    // circle orthogonal to the unit circle: |c|^2 = 1 + r^2
    REQUIRE(std::norm(cd) == Catch::Approx(1.0 + rd * rd).epsilon(1e-4));
    ++arcs;
  }
  CHECK(arcs > 50);
  CHECK(render_svg(g, opt) == svg);

  auto r = cli("render -r 3 --from 0 --to 233 --labels --size 3000");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("<svg", 0) == 0);
  CHECK(r.out.find("<polyline") != std::string::npos);
  CHECK(r.out.find(">233<") != std::string::npos);
}
