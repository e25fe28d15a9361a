#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qpd/analysis.hpp"
#include "qpd/cli.hpp"

using namespace qpd;
using namespace qpd::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell.push_back(c);
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("qpd_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("payoff overrides") {
  PayoffTable t;
  apply_payoff_override(t, "CC=4,4");
  CHECK(t.r_a[0][0] == 4.0);
  apply_payoff_override(t, " dc = 6 , 0.5 ");
  CHECK(t.r_a[1][0] == 6.0);
  CHECK(t.r_b[1][0] == 0.5);
  for (const char* bad : {"CC", "CC=1", "XY=1,1", "CC=a,1", "CC=-1,1", "CCC=1,1"})
    CHECK_THROWS_AS(apply_payoff_override(t, bad), std::invalid_argument);
}

TEST_CASE("json config with flag precedence") {
  RunConfig cfg;
  apply_json(cfg, nlohmann::json::parse(R"({"backend": "optical", "grid": 7, "payoff": {"DD": [2, 2]},
                                            "opponent": "best", "strategies": ["I", "iX"]})"));
  CHECK(cfg.backend == Backend::Optical);
  CHECK(cfg.grid == 7);
  CHECK(cfg.table.r_a[1][1] == 2.0);
  CHECK(cfg.opponent == "best");
  CHECK(cfg.strategies.size() == 2);
  apply_json(cfg, nlohmann::json::parse(R"({"payoff": ["CD=1,4"]})"));
  CHECK(cfg.table.r_b[0][1] == 4.0);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"nope": 1})")), std::invalid_argument);

  const auto dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"grid": 5, "backend": "optical"})";
  RunConfig loaded = load_config_file(dir / "cfg.json");
  CHECK(loaded.grid == 5);
  // Flags are applied after the file by the entry point.
  loaded.grid = 9;
  CHECK(loaded.grid == 9);
  CHECK_THROWS(load_config_file(dir / "absent.json"));
}

TEST_CASE("csv numbers keep 12 significant digits") {
  CHECK(csv_number(3.14159265358979) == "3.14159265359");
  CHECK(csv_number(-0.0) == "0");
  CHECK(csv_number(5.0) == "5");
}

TEST_CASE("table command") {
  RunConfig cfg;
  cfg.csv = true;
  std::ostringstream out, err;
  REQUIRE(cmd_table(cfg, out, err) == 0);
  CHECK(err.str().empty());
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 26);
  REQUIRE(rows[0].size() == 16);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 10; c < 14; ++c) sum += std::stod(rows[r][c]);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    if (rows[r][0] == "iZ" && rows[r][1] == "iZ") {
      CHECK(std::stod(rows[r][14]) == doctest::Approx(3.0));
      CHECK(std::stod(rows[r][15]) == doctest::Approx(3.0));
    }
    if (rows[r][0] == "iX" && rows[r][1] == "iX") {
      CHECK(std::stod(rows[r][14]) == doctest::Approx(1.0));
      CHECK(std::stod(rows[r][15]) == doctest::Approx(1.0));
    }
  }

  SUBCASE("human table and csv file") {
    const auto dir = scratch("table");
    RunConfig c2;
    c2.out = dir / "table.csv";
    std::ostringstream o2, e2;
    REQUIRE(cmd_table(c2, o2, e2) == 0);
    CHECK(o2.str().find("c_CC") != std::string::npos);
    CHECK(parse_csv(slurp(dir / "table.csv")).size() == 26);
  }
  SUBCASE("bad strategy is an error") {
    RunConfig c3;
    c3.strategies = {"I", "bogus"};
    std::ostringstream o3, e3;
    CHECK(cmd_table(c3, o3, e3) != 0);
    CHECK(e3.str().find("bogus") != std::string::npos);
  }
}

TEST_CASE("sweep command") {
  RunConfig cfg;
  cfg.grid = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(cfg, out, err) == 0);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"t_a", "t_b", "theta_a_deg", "phi_a_rad", "theta_b_deg", "phi_b_rad",
                                            "payoff_a", "payoff_b"});
  bool corner = false;
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r][0] == "1" && rows[r][1] == "-1") {
      corner = true;
      CHECK(std::stod(rows[r][6]) == doctest::Approx(5.0));
    }
  CHECK(corner);

  std::ostringstream again, err2;
  cmd_sweep(cfg, again, err2);
  CHECK(again.str() == out.str());
}

TEST_CASE("sweep CSV round-trips through re-evaluation") {
  RunConfig cfg;
  cfg.grid = 6;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(cfg, out, err) == 0);
  const auto rows = parse_csv(out.str());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const Strategy a = Strategy::converter(std::stod(rows[r][2]), std::stod(rows[r][3]));
    const Strategy b = Strategy::converter(std::stod(rows[r][4]), std::stod(rows[r][5]));
    const auto o = run_protocol(a, b);
    CHECK(std::abs(o.payoff_a - std::stod(rows[r][6])) <= 1e-9);
    CHECK(std::abs(o.payoff_b - std::stod(rows[r][7])) <= 1e-9);
  }
}

TEST_CASE("nash command") {
  RunConfig cfg;
  std::ostringstream out, err;
  REQUIRE(cmd_nash(cfg, out, err) == 0);
  const std::string text = out.str();
  const auto classical = text.find("== classical subset ==");
  REQUIRE(classical != std::string::npos);
  CHECK(text.find("nash equilibria: (iZ, iZ)") < classical);
  CHECK(text.find("nash equilibria: (iX, iX)", classical) != std::string::npos);
  CHECK(text.find("iZ        iZ        3         3         nash pareto") != std::string::npos);
  CHECK(text.find("I         I         3         3         pareto") != std::string::npos);
}

TEST_CASE("play command") {
  SUBCASE("nash opponent") {
    RunConfig cfg;
    std::istringstream in("iZ\nq\n");
    std::ostringstream out, err;
    REQUIRE(cmd_play(cfg, in, out, err) == 0);
    CHECK(out.str().find("payoffs: you 3, opponent 3") != std::string::npos);
    CHECK(out.str().find("1 round(s) played") != std::string::npos);
  }
  SUBCASE("best-response opponent answers I with iX") {
    RunConfig cfg;
    cfg.opponent = "best";
    std::istringstream in("I\n");
    std::ostringstream out, err;
    REQUIRE(cmd_play(cfg, in, out, err) == 0);
    CHECK(out.str().find("opponent plays iX") != std::string::npos);
    CHECK(out.str().find("payoffs: you 0, opponent 5") != std::string::npos);
  }
  SUBCASE("invalid input re-prompts without a round") {
    RunConfig cfg;
    std::istringstream in("banana\nC(0, 3.141592653589793)\nq\n");
    std::ostringstream out, err;
    REQUIRE(cmd_play(cfg, in, out, err) == 0);
    CHECK(err.str().empty());
    CHECK(out.str().find("cannot parse strategy 'banana'") != std::string::npos);
    CHECK(out.str().find("1 round(s) played; totals: you 3, opponent 3") != std::string::npos);
  }
  SUBCASE("unknown opponent policy") {
    RunConfig cfg;
    cfg.opponent = "chaos";
    std::istringstream in("");
    std::ostringstream out, err;
    CHECK(cmd_play(cfg, in, out, err) == 1);
  }
}

TEST_CASE("render command") {
  const auto dir = scratch("render");
  RunConfig cfg;
  cfg.render = {32, 3.0};
  cfg.a = "iZ";
  cfg.b = "iX";
  cfg.out = dir / "one";
  std::ostringstream out, err;
  REQUIRE(cmd_render(cfg, out, err) == 0);
  cfg.out = dir / "two";
  REQUIRE(cmd_render(cfg, out, err) == 0);
  for (const char* name : {"port_CC.pgm", "port_CD.pgm", "port_DC.pgm", "port_DD.pgm"}) {
    const std::string a = slurp(dir / "one" / name);
    CHECK(a == slurp(dir / "two" / name));
    const bool blank = a.substr(std::string("P5\n32 32\n255\n").size()).find_first_not_of('\0') == std::string::npos;
    CHECK(blank == (std::string(name) != "port_DC.pgm"));
  }
}

TEST_CASE("calibrate command") {
  RunConfig cfg;
  std::ostringstream out, err;
  REQUIRE(cmd_calibrate(cfg, out, err) == 0);
  CHECK(out.str().find("diagonal phase D: 1 1 i i") != std::string::npos);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.grid = 1;
  std::ostringstream out, err;
  CHECK(cmd_sweep(cfg, out, err) == 1);
  CHECK(err.str().find("--grid") != std::string::npos);
}
