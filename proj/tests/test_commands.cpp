#include "rbbr/commands.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "rbbr/error.hpp"
#include "support.hpp"

using namespace rbbr;

namespace {

Scenario shipped(const std::string& name) {
  return load_scenario_file(std::string(RBBR_SCENARIO_DIR) + "/" + name + ".json");
}

// Data rows of an output CSV, split on commas (no quoted fields in numeric rows).
std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // banner
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

std::string header_of(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  return line;
}

const OutputFile& file_named(const CommandResult& r, const std::string& name) {
  for (const OutputFile& f : r.files)
    if (f.name == name) return f;
  throw std::runtime_error("missing output " + name);
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  Rng rng(70);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-30, 30));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(ErrorKind::Config) == 2);
  CHECK(exit_code_for(ErrorKind::Domain) == 2);
  CHECK(exit_code_for(ErrorKind::Shape) == 2);
  CHECK(exit_code_for(ErrorKind::Solver) == 3);
  CHECK(exit_code_for(ErrorKind::Drift) == 3);
  CHECK(exit_code_for(ErrorKind::Step) == 3);
}

TEST_CASE("simulate") {
  const Scenario sc = shipped("zero");
  const CommandResult r = cmd_simulate(sc);
  CHECK(r.exit_code == 0);
  const OutputFile& f = file_named(r, sc.outputs.simulate);
  CHECK(f.content.rfind("# rbbr simulate scenario=zero digest=" + sc.digest() + "\n", 0) == 0);
  CHECK(header_of(f.content) == "t,residual,phi_tilde,psi,distance");
  const auto rows = rows_of(f.content);
  REQUIRE(rows.size() == sc.integrator.steps() / sc.integrator.record_every + 1);
  double prev = std::stod(rows.front()[1]);
  for (const auto& row : rows) {
    const double res = std::stod(row[1]);
    CHECK(res <= prev);
    prev = res;
  }
  CHECK(prev <= 1e-6);

  CHECK(header_of(cmd_simulate(shipped("rps")).files[0].content) == "t,residual,psi,distance");
  const auto from_uniform = rows_of(cmd_simulate(sc, UniformStart{}).files[0].content);
  CHECK(std::stod(from_uniform.front()[1]) < 1e-15);
}

TEST_CASE("equilibrium counts") {
  SUBCASE("rock-paper-scissors has one equilibrium") {
    const CommandResult r = cmd_equilibrium(shipped("rps"));
    CHECK(r.files.size() == 2);
    CHECK(rows_of(r.files[0].content).size() == 10);
    const auto d = rows_of(r.files[1].content);
    REQUIRE(d.size() == 1);
    CHECK(d[0][2] == "10");
    for (int j = 4; j < 7; ++j) CHECK(std::stod(d[0][static_cast<std::size_t>(j)]) == doctest::Approx(1.0 / 3));
  }
  SUBCASE("coordination has several") {
    const CommandResult r = cmd_equilibrium(shipped("coordination"));
    CHECK(rows_of(r.files[1].content).size() >= 2);
    for (const auto& row : rows_of(r.files[0].content)) CHECK(row[1] == "1");
  }
  SUBCASE("zero game") {
    const CommandResult r = cmd_equilibrium(shipped("zero"), 4);
    CHECK(rows_of(r.files[0].content).size() == 4);
    CHECK(rows_of(r.files[1].content).size() == 1);
    CHECK(header_of(r.files[0].content) ==
          "start,converged,residual,iterations,method,E_1,E_2,E_3,sigma_1_1,sigma_1_2,sigma_1_3");
  }
  CHECK_THROWS_AS(cmd_equilibrium(shipped("zero"), 0), Error);
}

TEST_CASE("check reports") {
  SUBCASE("coordination skips the negative semidefinite properties") {
    const CommandResult r = cmd_check(shipped("coordination"), "nsd");
    CHECK(r.exit_code == 0);
    int skips = 0;
    for (const auto& row : rows_of(r.files[0].content)) skips += row[2] == "SKIP";
    CHECK(skips == 2);
  }
  SUBCASE("rock-paper-scissors passes everything") {
    const CommandResult r = cmd_check(shipped("rps"), "all");
    CHECK(r.exit_code == 0);
    CHECK(header_of(r.files[0].content) == "suite,property,status,worst,limit,detail");
    for (const auto& row : rows_of(r.files[0].content)) CHECK(row[2] != "FAIL");
    // potential suite does not apply
    CHECK(r.files[0].content.find("potential,") != std::string::npos);
  }
  SUBCASE("output is deterministic") {
    const Scenario sc = shipped("potential");
    CHECK(cmd_check(sc, "all").files[0].content == cmd_check(sc, "all").files[0].content);
    Scenario other = sc;
    other.set_seed(sc.seed + 1);
    CHECK(cmd_check(other, "regularizers").files[0].content != cmd_check(sc, "regularizers").files[0].content);
  }
  CHECK_THROWS_AS(cmd_check(shipped("rps"), "bogus"), Error);
}

TEST_CASE("sweep") {
  const Scenario sc = shipped("rps");
  const CommandResult r = cmd_sweep(sc);
  const auto rows = rows_of(r.files[0].content);
  REQUIRE(rows.size() == sc.sweep.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][0]) == sc.sweep[i]);
    CHECK(rows[i][1] == "1");
    CHECK(std::stod(rows[i][4]) == doctest::Approx(1.0 / 3));
  }
  CHECK(rows_of(cmd_sweep(sc, std::vector<double>{1.0, 0.5}).files[0].content).size() == 2);
  CHECK_THROWS_AS(cmd_sweep(sc, std::vector<double>{1.0, -0.5}), Error);
}
