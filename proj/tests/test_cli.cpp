#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sicta/cli.hpp"
#include "sicta/verify.hpp"

using namespace sicta;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sicta_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("simulate with no contenders") {
  const auto r = run({"simulate", "--n", "0", "--d", "3", "--policy", "fair", "--runs", "10"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] ==
        "d,policy,n,runs,seed,mean_cri,std,ci95,throughput_rom,throughput_mor,yg_closed_form,"
        "variant");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split(lines[i])[5] == "1");
  CHECK(r.out.find("# replay: sicta simulate --n 0 --d 3 --policy fair --runs 10") !=
        std::string::npos);
}

TEST_CASE("usage errors exit 1 and name the rule") {
  const auto r = run({"simulate", "--n", "5", "--d", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("d >= 2") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({"simulate", "--d", "2"}).code == 1);  // --n missing
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"simulate", "--n", "4", "--policy", "custom", "--probs", "1,0"}).code == 1);
  CHECK(run({"simulate", "--n", "4", "--policy", "custom", "--probs", "0.5,0.5", "--d", "3"}).code == 1);
  CHECK(run({"simulate", "--n", "4", "--variants", "corrected,magic"}).code == 1);
  CHECK(run({"exact", "--nmax", "100", "--d", "2", "--rational"}).code == 1);
}

TEST_CASE("runtime failures exit 2") {
  const auto r = run({"simulate", "--n", "30", "--policy", "custom", "--probs", "0.999999,0.000001",
                      "--max-depth", "2", "--runs", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("max_depth") != std::string::npos);
  CHECK(run({"exact", "--nmax", "400", "--d", "8"}).code == 2);
}

TEST_CASE("exact prints fractions in rational mode") {
  const auto corrected =
      run({"exact", "--nmax", "2", "--d", "3", "--policy", "fair", "--variant", "corrected", "--rational"});
  REQUIRE(corrected.code == 0);
  auto lines = data_lines(corrected.out);
  CHECK(lines[0] == "n,L_standard,L_yg,L_corrected,T_corrected");
  CHECK(lines[3] == "2,,,19/6,12/19");

  const auto yg = run({"exact", "--nmax", "2", "--d", "3", "--policy", "fair", "--variant", "yg", "--rational"});
  CHECK(split(data_lines(yg.out)[3])[2] == "4");

  const auto all = run({"exact", "--nmax", "1", "--d", "2"});
  lines = data_lines(all.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == "0,1,1,1,0");
  CHECK(lines[2] == "1,1,1,1,1");
}

TEST_CASE("exact with a custom policy") {
  const auto r = run({"exact", "--nmax", "3", "--policy", "custom", "--probs", "0.5,0.25,0.25", "--rational"});
  REQUIRE(r.code == 0);
  const auto b = run({"exact", "--nmax", "3", "--policy", "biased", "--d", "3", "--rational"});
  CHECK(data_lines(r.out) == data_lines(b.out));
}

TEST_CASE("simulate output is identical across thread counts") {
  std::string first;
  for (const char* threads : {"1", "4", "16"}) {
    const auto r = run({"simulate", "--n", "40", "--d", "3", "--policy", "biased", "--runs", "500",
                        "--seed", "9", "--threads", threads});
    REQUIRE(r.code == 0);
    if (first.empty()) first = r.out;
    CHECK(r.out == first);
  }
}

TEST_CASE("files are written with JSON mirror and per-tree rows") {
  const auto csv = scratch("sim.csv");
  const auto js = scratch("sim.json");
  const auto trees = scratch("trees.csv");
  const auto r = run({"simulate", "--n", "8", "--d", "3", "--runs", "20", "--variants",
                      "corrected,slot_level", "--out", csv.string(), "--json", js.string(),
                      "--per-tree", trees.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(!std::filesystem::exists(csv.string() + ".tmp"));
  const auto lines = data_lines(slurp(csv));
  REQUIRE(lines.size() == 3);
  CHECK(split(lines[1]).back() == "corrected");

  const auto j = nlohmann::json::parse(slurp(js));
  CHECK(j["metadata"]["generator"] == "std::mt19937_64");
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["variant"] == "corrected");
  CHECK(j["rows"][1]["mean_cri"] == j["rows"][0]["mean_cri"]);

  const auto per_tree = data_lines(slurp(trees));
  REQUIRE(per_tree.size() == 21);
  CHECK(per_tree[0] ==
        "n,d,policy,corrected,yg,standard,slots_idle,slots_collision,slots_singleton,"
        "sic_recoveries,derived_signals");
  for (std::size_t i = 1; i < per_tree.size(); ++i) {
    const auto cells = split(per_tree[i]);
    const int total = std::stoi(cells[6]) + std::stoi(cells[7]) + std::stoi(cells[8]);
    CHECK(std::stoi(cells[3]) == total);
  }
}

TEST_CASE("replay line reproduces the output") {
  const auto r = run({"simulate", "--n", "17", "--d", "4", "--policy", "biased", "--runs", "50",
                      "--seed", "3", "--variants", "yg"});
  REQUIRE(r.code == 0);
  const auto start = r.out.find("# replay: sicta ") + std::string("# replay: sicta ").size();
  const auto line = r.out.substr(start, r.out.find('\n', start) - start);
  std::vector<std::string> args;
  std::istringstream in(line);
  for (std::string a; in >> a;) args.push_back(a);
  CHECK(run(args).out == r.out);
}

TEST_CASE("dump-tree prints pre-order trees") {
  const auto r = run({"simulate", "--n", "2", "--d", "3", "--runs", "3", "--dump-tree"});
  REQUIRE(r.code == 0);
  CHECK(r.err.rfind("run 0: 2(", 0) == 0);
}

TEST_CASE("config file supplies defaults, flags win") {
  const auto cfg = scratch("sim.cfg");
  {
    std::ofstream f(cfg);
    f << "# experiment\nn = 0\nd = 4\nruns = 7\npolicy = biased\n";
  }
  const auto r = run({"simulate", "--config", cfg.string(), "--runs", "3"});
  REQUIRE(r.code == 0);
  const auto cells = split(data_lines(r.out)[1]);
  CHECK(cells[0] == "4");
  CHECK(cells[1] == "biased");
  CHECK(cells[3] == "3");
  CHECK(run({"simulate", "--config", scratch("missing.cfg").string()}).code == 1);
}

TEST_CASE("sweep rows") {
  const auto r = run({"sweep", "--d-values", "2,3", "--policies", "fair,biased", "--n", "20", "--runs", "50"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(split(lines[1])[1] == "fair");
  CHECK(split(lines[4])[0] == "3");
  CHECK(split(lines[4])[1] == "biased");
  CHECK(run({"sweep", "--d-values", "1,2"}).code == 1);
}

TEST_CASE("verify passes and is deterministic") {
  const auto a = run({"verify", "--trees", "3000", "--seed", "7"});
  const auto b = run({"verify", "--trees", "3000", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify catches a broken yg evaluator") {
  VerifyOptions options;
  options.trees = 2000;
  options.strict_trees = 1000;
  // Mutant: yg that stops early like the corrected recursion but forgets the
  // derived last slot.
  options.evaluators.yg = [](const SplitTree& t) { return corrected_length(t) - 1; };
  const auto report = run_verify(options);
  CHECK_FALSE(report.passed());
  bool dominance_or_binary = false;
  for (const auto& s : report.suites) {
    if (!s.passed() && (s.name == "dominance" || s.name == "binary_equivalence")) {
      dominance_or_binary = true;
      CHECK(s.first_failure.find("tree #") != std::string::npos);
    }
  }
  CHECK(dominance_or_binary);
  CHECK_FALSE(report.to_json()["passed"].get<bool>());
}
