#include "multibrot/cli.hpp"
#include "multibrot/serialize.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace multibrot;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = multibrot::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("multibrot_cli_" + tag + "_" + std::to_string(std::random_device{}()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("portrait command") {
  const Run r = invoke({"portrait", "--angle", "3/7"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["kind"] == "primitive");
  CHECK(j["partner"] == "4/7");
  CHECK(j["angle"] == "3/7");
  CHECK(j["ray_period"] == 3);
  CHECK(portrait_from_json(j) == portrait_from_angle(Angle(3, 7), 2));

  const Run cubic = invoke({"--degree", "3", "portrait", "--angle", "1/13"});
  REQUIRE(cubic.code == 0);
  CHECK(cubic.json()["kind"] == "trivial");
  CHECK(cubic.json()["partner"].is_null());
  CHECK(cubic.json()["characteristic"].is_null());

  const Run trailing = invoke({"portrait", "--angle", "1/26", "--degree", "3"});
  REQUIRE(trailing.code == 0);
  CHECK(trailing.json()["kind"] == "satellite");
}

TEST_CASE("portrait validation through the command line") {
  const Run ok = invoke({"portrait", "--sets", "1/3,2/3"});
  CHECK(ok.code == 0);
  CHECK(ok.json()["valid"] == true);
  const Run bad = invoke({"portrait", "--sets", "1/15,4/15;2/15,8/15"});
  CHECK(bad.code == 2);
  CHECK(bad.json()["valid"] == false);
  CHECK(bad.json()["axiom"] == 5);
}

TEST_CASE("kneading command") {
  Run r = invoke({"kneading", "--angle", "1/3"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["text"] == "[1 *]");
  CHECK_FALSE(r.json().contains("ray_count"));

  r = invoke({"--json", "kneading", "--angle", "9/56"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\n') == r.out.size() - 1);
  CHECK(r.json()["text"] == "1 1 0 | [1]");
  CHECK(r.json()["ray_count"]["rule"] == "Exact(3)");
  CHECK(r.json()["ray_count"]["count"] == 3);
  CHECK(kneading_from_json(r.json()) == kneading(Angle(9, 56), 2));

  r = invoke({"kneading", "--angle", "1/3", "--eta", "1/7"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["text"] == "[0 1 1]");
}

TEST_CASE("census and wakes commands") {
  Run r = invoke({"--degree", "3", "census", "--period", "3"});
  REQUIRE(r.code == 0);
  const Census c = census_from_json(r.json());
  CHECK(c == census(3, 3));
  CHECK(r.json()["summary"]["components"] == 8);

  r = invoke({"wakes", "--max-period", "4", "--angle", "9/20"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  REQUIRE(j["containing"].size() == 3);
  CHECK(arc_from_json(j["containing"][0]) == Arc(Angle(1, 3), Angle(2, 3)));
}

TEST_CASE("census uses the atlas cache directory") {
  const fs::path dir = scratch_dir("atlas");
  ::setenv("MULTIBROT_ATLAS_DIR", dir.c_str(), 1);
  const Run first = invoke({"--degree", "3", "census", "--period", "4"});
  const Run second = invoke({"--degree", "3", "census", "--period", "4"});
  ::unsetenv("MULTIBROT_ATLAS_DIR");
  CHECK(first.code == 0);
  CHECK(second.code == 0);
  CHECK(first.out == second.out);
  CHECK(fs::exists(dir / atlas_file_name(3, 4)));
  fs::remove_all(dir);
}

TEST_CASE("trace-ray command") {
  Run r = invoke({"trace-ray", "--angle", "1/3", "--potential", "0.01"});
  REQUIRE(r.code == 0);
  Json j = r.json();
  CHECK(j["plane"] == "parameter");
  CHECK(j["final_potential"] == "1.000000000000e-2");
  CHECK(j["points"].size() > 10);

  r = invoke({"trace-ray", "--angle", "1/3", "--log-potential", "-50", "--csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line, last;
  while (std::getline(in, line)) {
    if (line.rfind("potential", 0) == 0) continue;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    last = line;
  }
  CHECK(last.rfind("1.928749847964e-22,", 0) == 0);

  r = invoke({"trace-ray", "--angle", "0", "--c", "0,0", "--potential", "0.001"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["plane"] == "dynamical");
  CHECK(r.json()["endpoint"][0].get<double>() == doctest::Approx(std::exp(0.001)).epsilon(1e-9));
}

TEST_CASE("solve command") {
  Run r = invoke({"solve", "--angle", "1/3"});
  REQUIRE(r.code == 0);
  SolveResult s = solve_result_from_json(r.json());
  CHECK(s.kind == SolveKind::Parabolic);
  CHECK(std::abs(s.parameter - Complex(-0.75)) < 1e-10);
  CHECK(s.orbit_period == 1);

  r = invoke({"solve", "--angle", "1/6"});
  REQUIRE(r.code == 0);
  s = solve_result_from_json(r.json());
  CHECK(s.kind == SolveKind::Misiurewicz);
  CHECK(std::abs(s.parameter - Complex(0, 1)) < 1e-10);

  r = invoke({"solve", "--kind", "misiurewicz", "--at", "-1.9,0", "-l", "1", "-n", "1"});
  REQUIRE(r.code == 0);
  CHECK(solve_result_from_json(r.json()).parameter.real() == doctest::Approx(-2.0));

  r = invoke({"--degree", "3", "solve", "--kind", "parabolic", "--at", "0.37,0", "-n", "1"});
  REQUIRE(r.code == 0);
  CHECK(solve_result_from_json(r.json()).parameter.real() == doctest::Approx(2 / (3 * std::sqrt(3.0))));
}

TEST_CASE("render command") {
  const fs::path dir = scratch_dir("render");
  const fs::path img = dir / "m3.ppm", svg = dir / "m3.svg";
  const Run r = invoke({"--degree", "3", "--threads", "4", "render", "--size", "80x60", "--max-iter", "100", "--rays",
                     "1/26,3/26", "--mark", "0,0", "--svg", svg.string(), "--out", img.string()});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["width"] == 80);
  CHECK(j["height"] == 60);
  CHECK(j["rays"].size() == 2);
  CHECK(fs::file_size(img) == std::string("P6\n80 60\n255\n").size() + 80 * 60 * 3);
  std::ifstream in(svg);
  std::string head;
  std::getline(in, head);
  CHECK(head.rfind("<svg", 0) == 0);

  const Run julia = invoke({"render", "--julia", "-1,0", "--size", "40x30", "--out", (dir / "j.ppm").string()});
  CHECK(julia.code == 0);
  CHECK(fs::exists(dir / "j.ppm"));
  fs::remove_all(dir);
}

TEST_CASE("verify command") {
  Run r = invoke({"verify", "--degree", "2", "--max-period", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = invoke({"--json", "verify", "--criterion", "2"});
  CHECK(r.code == 0);
  CHECK(r.json()["passed"] == true);
  CHECK(r.json()["checks"].size() == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"portrait", "--angle", "1/0"}).code == 2);
  CHECK(invoke({"portrait", "--angle", "1/4"}).code == 2);
  CHECK(invoke({"portrait"}).code == 2);
  CHECK(invoke({"--degree", "1", "kneading", "--angle", "1/3"}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"kneading", "--angle", "1/7"}).code == 0);
  CHECK(invoke({"render", "--size", "0x10", "--out", "/tmp/never.ppm"}).code == 2);
  CHECK(invoke({"render", "--size", "8x8", "--out", "/nonexistent-dir/x.ppm"}).code == 2);
  const Run help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("census") != std::string::npos);
  const Run bad = invoke({"portrait", "--angle", "x"});
  CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("output file option") {
  const fs::path dir = scratch_dir("out");
  const fs::path file = dir / "k.json";
  const Run r = invoke({"--out", file.string(), "kneading", "--angle", "1/7"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(file);
  CHECK(Json::parse(in)["text"] == "[1 1 *]");
  fs::remove_all(dir);
}
