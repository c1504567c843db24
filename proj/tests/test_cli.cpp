#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sidonlab/cli.hpp"
#include "sidonlab/json_io.hpp"

using namespace sidonlab;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

Json without_time(Json j) {
  j["meta"].erase("wall_time_s");
  return j;
}

const std::string kFirst20 =
    R"({"family":"Z","elements":[1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20]})";

}  // namespace

TEST_CASE("qi-check") {
  const Run yes = run({"qi-check", "--set", R"({"family":"Z","elements":[1,2,4]})"});
  REQUIRE(yes.code == 0);
  CHECK(yes.json()["qi"] == true);
  CHECK(yes.json()["meta"]["tool"] == "sidonlab");
  CHECK(yes.json()["meta"]["version"] == cli::kVersion);
  const Run no = run({"qi-check", "--set", R"({"family":"Z","elements":[1,2,3]})"});
  REQUIRE(no.code == 0);
  CHECK(no.json()["qi"] == false);
  CHECK(no.json()["witness"]["height"] == 3);

  const std::string lines = temp_file("sidonlab_sets.jsonl", R"({"family":"Z","elements":[1,2,4]}
{"family":"Z","elements":[1,2,3]}
{"family":"Walsh","elements":[[0],[1]]}
)");
  const Run many = run({"qi-check", "--set", lines});
  REQUIRE(many.code == 0);
  const Json res = many.json()["results"];
  REQUIRE(res.size() == 3);
  CHECK(res[0]["qi"] == true);
  CHECK(res[1]["qi"] == false);
  CHECK(res[2]["qi"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run({"qi-check", "--set", R"({"family":"Z","elements":[1,2,)"}).code == 2);
  CHECK(run({"qi-check", "--set", R"({"family":"Z","elements":[1,1]})"}).code == 2);
  CHECK(run({"qi-check", "--set", "[1,2,4]"}).code == 2);
  CHECK(run({"riesz", "--set", R"({"family":"Z","elements":[1,2,3]})"}).code == 2);
  std::string big = R"({"family":"Z","elements":[1)";
  for (int j = 2; j <= 30; ++j) big += "," + std::to_string(j);
  big += "]}";
  CHECK(run({"qi-check", "--set", big, "--capacity", "100"}).code == 3);

  int failures = 0;
  for (int s = 0; s < 10; ++s) {
    const Run r = run({"extract-qi", "--set", kFirst20, "--C", "5", "--max-attempts", "1", "--seed", std::to_string(s)});
    CHECK((r.code == 0 || r.code == 4));
    if (r.code == 4) {
      ++failures;
      CHECK(r.err.find("rejections") != std::string::npos);
    }
  }
  CHECK(failures > 0);
  CHECK(run({"no-such-command"}).code != 0);
}

TEST_CASE("artifacts are deterministic") {
  const std::vector<std::string> args{"extract-qi", "--set", kFirst20, "--seed", "42", "--max-attempts", "200"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(without_time(a.json()) == without_time(b.json()));
  CHECK(a.json()["meta"]["seed"] == 42);
  const Run c = run({"extract-qi", "--set", kFirst20, "--seed", "43", "--max-attempts", "200"});
  CHECK(c.json()["meta"]["input_hash"] == a.json()["meta"]["input_hash"]);
}

TEST_CASE("numeric subcommands") {
  const Run k = run({"riesz", "--constants"});
  REQUIRE(k.code == 0);
  CHECK(k.out.find("5.19") != std::string::npos);

  const Run r = run({"rademacher", "--m", "1,2", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("m,ratio", 0) == 0);
  CHECK(r.out.find("\n2,1.414213562373") != std::string::npos);

  const Run n = run({"norms", "--poly",
                     R"({"family":"Z","terms":[{"character":{"family":"Z","n":1},"re":1},{"character":{"family":"Z","n":2},"re":1}]})",
                     "--p", "4"});
  REQUIRE(n.code == 0);
  CHECK(n.out.find("certificates") != std::string::npos);

  const Run w = run({"witness", "--set", R"({"family":"Z","elements":[1,3,9,27]})", "--random-phases", "--seed", "7"});
  REQUIRE(w.code == 0);
  CHECK(w.json()["ok"] == true);
}

TEST_CASE("weighted extraction and output file") {
  const std::string input = temp_file("sidonlab_weighted.json",
                                      R"({"family":"Z","elements":[{"n":1,"w":1},{"n":2,"w":1},{"n":4,"w":1},{"n":8,"w":1}]})");
  const std::string target = (std::filesystem::temp_directory_path() / "sidonlab_cb.json").string();
  const Run r = run({"cb-extract", "--input", input, "-o", target});
  REQUIRE(r.code == 0);
  std::ifstream in(target);
  const Json j = Json::parse(in);
  CHECK(j["ratio"] == 1.0);
  CHECK(j["qi_verified"] == true);
}

TEST_CASE("selftest") {
  CHECK(run({"selftest", "--criteria", "1"}).code == 0);
  CHECK(run({"selftest", "--criteria", "2", "--format", "human"}).code == 0);
}
