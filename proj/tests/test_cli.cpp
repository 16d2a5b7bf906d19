#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "altproj/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = altproj::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "altproj_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& contents) {
  const fs::path p = temp_dir() / name;
  std::ofstream(p) << contents;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kSixty = R"({"family": "block", "params": {"sigmas": [0.25]}})";

}  // namespace

TEST_CASE("angle command") {
  const Result r = run({"angle", "--config", write("sixty.json", kSixty)});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("friedrichs_cosine").get<double>() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(j.at("intersection_rank") == 0);

  const Result same = run({"angle", "--config",
                           write("same.json", R"({"family": "random", "params": {"d": 5, "r1": 2, "r2": 2, "overlap": 2}})")});
  CHECK(same.code == 0);
  CHECK(json::parse(same.out).at("friedrichs_cosine") == 0.0);
  CHECK(json::parse(same.out).at("intersection_rank") == 2);

  CHECK(run({"angle", "--config", write("broken.json", "{\"family\": ")}).code == 2);
  CHECK(run({"angle", "--config", write("nofam.json", "{}")}).code == 2);
  CHECK(run({"angle", "--config", (temp_dir() / "missing.json").string()}).code == 2);
  CHECK(run({"angle"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("angle command on explicit and counterexample families") {
  const json cfg = {{"family", "explicit"},
                    {"params",
                     {{"S1", {{"ambient_dim", 2}, {"basis", {{1.0, 0.0}}}}},
                      {"S2", {{"ambient_dim", 2}, {"basis", {{0.6, 0.8}}}}}}}};
  const Result r = run({"angle", "--config", write("explicit.json", cfg.dump())});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("friedrichs_cosine").get<double>() == doctest::Approx(0.6));

  const Result c = run({"angle", "--tol", "1e-6", "--config",
                        write("cex.json", R"({"family": "counterexample", "params": {"N": 20}})")});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("intersection_rank") == 0);
}

TEST_CASE("iterate command") {
  const std::string out = (temp_dir() / "trace.csv").string();
  const Result r = run({"iterate", "--config", write("sixty.json", kSixty), "--steps", "5",
                        "--start", "1,0", "--out", out});
  CHECK(r.code == 0);
  const auto rows = csv_rows(slurp(out));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"k", "error", "kw_bound"});
  for (int k = 1; k <= 5; ++k) {
    CHECK(std::stod(rows[k][1]) == doctest::Approx(std::pow(0.5, 2 * k - 1)).epsilon(1e-14));
    CHECK(std::stod(rows[k][2]) == doctest::Approx(std::pow(0.5, 2 * k - 1)).epsilon(1e-14));
  }
  CHECK(r.out.find("cosine 0.5") != std::string::npos);

  // A point of the intersection stays put.
  const Result fixed = run({"iterate", "--config",
                            write("same1.json", R"({"family": "explicit", "params": {"S1": {"ambient_dim": 2, "basis": [[1, 0]]}, "S2": {"ambient_dim": 2, "basis": [[1, 0]]}}})"),
                            "--steps", "3", "--start", "2,0"});
  CHECK(fixed.code == 0);
  const auto frows = csv_rows(fixed.out);
  REQUIRE(frows.size() == 4);
  for (int k = 1; k <= 3; ++k) CHECK(std::stod(frows[k][1]) == 0.0);

  CHECK(run({"iterate", "--config", write("sixty.json", kSixty), "--steps", "0"}).code == 2);
  CHECK(run({"iterate", "--config", write("sixty.json", kSixty), "--steps", "3", "--start", "1,0,0"}).code == 2);
}

TEST_CASE("iterate output is deterministic") {
  const std::string cfg = write("rand.json", R"({"family": "random", "params": {"d": 8, "r1": 3, "r2": 3, "overlap": 1}})");
  const Result a = run({"iterate", "--config", cfg, "--steps", "30", "--seed", "17"});
  const Result b = run({"iterate", "--config", cfg, "--steps", "30", "--seed", "17"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);
}

TEST_CASE("slowpoint command") {
  const std::string plan = (temp_dir() / "plan.json").string();
  const std::string csv = (temp_dir() / "verify.csv").string();
  const Result r = run({"slowpoint", "--lambda-values", "0.9,0.5,0.3,0.1", "--plan-out", plan,
                        "--out", csv});
  CHECK(r.code == 0);
  const json p = json::parse(slurp(plan));
  CHECK(p.at("valid_k_max") == 4);
  CHECK(p.at("s") == json({1, 1, 3, 9}));
  CHECK(p.at("t") == json({1, 3, 9}));
  const auto rows = csv_rows(slurp(csv));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"k", "n", "lambda_k", "t_bound", "pba_norm", "margin"});
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::stod(rows[k][5]) >= 0.0);

  const Result sqrt50 = run({"slowpoint", "--lambda", "reciprocal-sqrt", "--K", "50"});
  CHECK(sqrt50.code == 0);
  const auto srows = csv_rows(sqrt50.out);
  REQUIRE(srows.size() == 51);
  for (std::size_t k = 1; k < srows.size(); ++k) CHECK(std::stod(srows[k][5]) >= 0.0);

  const Result capped = run({"slowpoint", "--lambda", "reciprocal-sqrt", "--K", "50", "--cap", "32"});
  CHECK(capped.code == 3);
  CHECK(capped.err.find("required spectral level") != std::string::npos);

  CHECK(run({"slowpoint", "--lambda-values", "1.0,0.5"}).code == 2);
  CHECK(run({"slowpoint", "--lambda", "cubic"}).code == 2);
}

TEST_CASE("slowpoint command reads a config file") {
  const std::string cfg = write("sp.json", R"({"lambda": {"generator": "geometric", "param": 0.9, "K": 20},
                                              "sigma": {"schedule": "geometric-gap", "q": 0.5},
                                              "start_blocks": 8})");
  const Result a = run({"slowpoint", "--config", cfg});
  const Result b = run({"slowpoint", "--config", cfg});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(csv_rows(a.out).size() == 21);
}

TEST_CASE("counterexample command") {
  const Result r = run({"counterexample", "--N", "12"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j.at("inner_e1_f1").get<double>() - 0.8) <= 1e-12);
  CHECK(std::abs(j.at("x_dot_f1").get<double>() - 0.149071198499986) <= 1e-9);
  CHECK(j.at("norm_PEx").get<double>() <= 1e-10);
  CHECK(j.at("all_pass") == true);

  CHECK(run({"counterexample", "--N", "7"}).code == 2);
  const Result cfg = run({"counterexample", "--config", write("cex60.json", R"({"N": 60})")});
  CHECK(cfg.code == 0);
  CHECK(json::parse(cfg.out).at("N") == 60);
}

TEST_CASE("dichotomy command") {
  const json cfg = {
      {"capped", {{"family", "block"}, {"params", {{"schedule", "capped"}, {"N", 8}, {"bound", 0.81}}}}},
      {"uncapped", {{"family", "block"}, {"params", {{"schedule", "geometric-gap"}, {"N", 8}, {"q", 0.5}}}}},
      {"lambda", {{"generator", "geometric"}, {"param", 0.9}, {"K", 30}}},
      {"steps", 200}};
  const Result r = run({"dichotomy", "--config", write("dich.json", cfg.dump())});
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "capped");
  CHECK(rows[1][2] == "true");
  CHECK(rows[1].back() == "ok");
  const double rate = std::stod(rows[1][5].substr(rows[1][5].find('=') + 1));
  CHECK(rate <= 0.81 + 0.01);
  CHECK(rate == doctest::Approx(0.81).epsilon(0.05));
  CHECK(rows[2][0] == "uncapped");
  CHECK(rows[2][2] == "false");
  CHECK(rows[2].back() == "ok");

  json both_capped = cfg;
  both_capped["uncapped"] = cfg["capped"];
  const Result infeasible = run({"dichotomy", "--config", write("dich2.json", both_capped.dump())});
  CHECK(infeasible.code == 3);
  CHECK(csv_rows(infeasible.out)[2].back() == "infeasible");
}

TEST_CASE("help exits cleanly") {
  const Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("slowpoint") != std::string::npos);
}
