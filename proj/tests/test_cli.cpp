#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "metachain/report.hpp"
#include "support/fixtures.hpp"

using namespace metachain;
using testing_support::fixture_path;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string err;
};

fs::path scratch() {
  auto p = fs::temp_directory_path() / "metachain_cli_tests";
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args) {
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string(METACHAIN_CLI) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(err.string())};
}

std::string write_model(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  write_text_file(p.string(), text);
  return p.string();
}

}  // namespace

TEST_SUITE("cli_report") {
  TEST_CASE("analyze writes the report and the level diagram") {
    const auto out = (scratch() / "w5.report.json").string();
    const auto dot = (scratch() / "w5.dot").string();
    REQUIRE(run("analyze " + fixture_path("w5.json") + " --report " + out + " --dot " + dot).code == 0);
    const auto j = nlohmann::json::parse(read_text_file(out));
    CHECK(j["depth_count"] == 2);
    CHECK(j["terminal"] == nlohmann::json::array({"5"}));
    CHECK(read_text_file(dot).find("digraph") != std::string::npos);
    const auto again = (scratch() / "w5.again.json").string();
    REQUIRE(run("analyze " + fixture_path("w5.json") + " --report " + again).code == 0);
    CHECK(read_text_file(out) == read_text_file(again));
  }

  TEST_CASE("validation failures exit with 2 and name the edge") {
    const auto bad = write_model("zero.json", R"({"scales":[{"name":"eps","exponent":"1/1"}],"states":["a","b"],
        "edges":[{"from":"a","to":"b","coeff":"0/1","order":"0/1"},
                 {"from":"b","to":"a","coeff":"1/1","order":"0/1"}]})");
    const auto r = run("analyze " + bad);
    CHECK(r.code == 2);
    CHECK(r.err.find("a -> b") != std::string::npos);

    const auto noscale = write_model("noscale.json", R"({"scales":[],"states":["a","b"],
        "edges":[{"from":"a","to":"b","coeff":"1/1","order":"0/1"},
                 {"from":"b","to":"a","coeff":"1/1","order":"0/1"}]})");
    CHECK(run("analyze " + noscale).code == 2);
  }

  TEST_CASE("trivial chain exits 0 with a note") {
    const auto m = write_model("trivial.json", R"({"scales":[{"name":"eps","exponent":"1/1"}],"states":["a","b"],
        "edges":[{"from":"a","to":"b","coeff":"1/1","order":"1/1"},
                 {"from":"b","to":"a","coeff":"1/1","order":"0/1"}]})");
    const auto out = (scratch() / "trivial.report.json").string();
    REQUIRE(run("analyze " + m + " --report " + out).code == 0);
    const auto j = nlohmann::json::parse(read_text_file(out));
    CHECK(j["depth_count"] == 0);
    CHECK(j.contains("note"));
  }

  TEST_CASE("ising emits a model that analyze accepts") {
    const auto model = (scratch() / "ising3.json").string();
    const auto omega = (scratch() / "omega3.json").string();
    REQUIRE(run("ising --L 3 --h 4/5 --emit " + model + " --classify-report " + omega).code == 0);
    const auto j = nlohmann::json::parse(read_text_file(omega));
    CHECK(j["omega_o"].size() == 8);
    CHECK(run("analyze " + model + " --report " + (scratch() / "ising3.report.json").string()).code == 0);
    CHECK(run("ising --L 3 --h 1 --emit " + model).code == 2);
    CHECK(run("ising --L 5 --h 4/5 --emit " + model).code == 2);
  }

  TEST_CASE("simulate") {
    const auto out = (scratch() / "stats.json").string();
    REQUIRE(run("simulate " + fixture_path("w5.json") +
                " --epsilon 1e-1 --start 1 --targets \"3;5\" --samples 200 --seed 1 --out " + out)
                .code == 0);
    const auto j = nlohmann::json::parse(read_text_file(out));
    CHECK(j["samples"] == 200);
    CHECK(run("simulate " + fixture_path("w5.json") + " --epsilon 2 --start 1 --targets 3").code == 2);
    CHECK(run("simulate " + fixture_path("w5.json") + " --start 9 --targets 3").code == 2);
    CHECK(run("simulate " + fixture_path("w5.json") + " --start 1 --targets \"3;3\"").code == 1);
  }

  TEST_CASE("verify-ising strict regime") {
    CHECK(run("verify-ising --L 3 --h 8/5 --out " + (scratch() / "v.json").string()).code == 0);
    const auto r = run("verify-ising --L 3 --h 8/5 --strict-regime --out " + (scratch() / "v.json").string());
    CHECK(r.code == 4);
    CHECK(r.err.find("outside the regime") != std::string::npos);
  }
}
