#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relaxwave/io.hpp"
#include "test_util.hpp"

using namespace relaxwave;
namespace fs = std::filesystem;

namespace {

const std::string kData = RELAXWAVE_DATA_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("relaxwave_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RELAXWAVE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_section(const std::string& csv) {
  const auto nl = csv.find('\n');
  REQUIRE(csv.rfind("# ", 0) == 0);
  return csv.substr(nl + 1);
}

Errc parse_code(const std::string& text) {
  try {
    io::parse_system(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("system files round-trip") {
  for (const char* name : {"damped_wave.json", "goldstein_kac.json", "asymmetric_relaxation.json",
                           "jordan_relaxation.json", "defective.json"}) {
    const auto sys = io::load_system(kData + "/" + name);
    const auto path = scratch("roundtrip") / name;
    io::save_system(sys, path);
    const auto back = io::load_system(path);
    CHECK(back.name() == sys.name());
    CHECK(back.A() == sys.A());
    CHECK(back.B() == sys.B());
    CHECK(back.S().has_value() == sys.S().has_value());
    if (sys.S()) CHECK(*back.S() == *sys.S());
    CHECK(io::system_to_json(back) == io::system_to_json(sys));
  }
}

TEST_CASE("bundled fixtures match the built-in systems") {
  const auto a = io::load_system(kData + "/damped_wave.json");
  const auto b = systems::damped_wave();
  CHECK(a.A() == b.A());
  CHECK(a.B() == b.B());
}

TEST_CASE("malformed system files") {
  CHECK(parse_code("{not json") == Errc::ParseError);
  CHECK(parse_code(R"({"name":"x","n":2,"A":[[1,0],[0,1]]})") == Errc::ParseError);
  CHECK(parse_code(R"({"name":"x","n":2,"A":[[1,0],[0,1]],"B":[[1,0]]})") == Errc::ShapeError);
  CHECK(parse_code(R"({"name":"x","n":3,"A":[[1,0],[0,1]],"B":[[1,0],[0,1]]})") == Errc::ShapeError);
  CHECK(parse_code(R"({"name":"x","n":2,"A":[[1,0],[0,1]],"B":[[1,0],[0,1]],"S":[[1,2],[0,1]]})") ==
        Errc::ValueError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_number(std::nan("")) == "nan");
}

TEST_CASE("cli exit codes") {
  const auto out = scratch("exit").string();
  CHECK(run("check " + kData + "/damped_wave.json --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "report.json"));
  CHECK(fs::exists(fs::path(out) / "conditions.csv"));
  CHECK(run("check " + kData + "/defective.json --out " + out) == 1);
  CHECK(run("reduce " + kData + "/defective.json --out " + out) == 1);
  CHECK(run("reduce " + kData + "/jordan_relaxation.json --out " + out) == 0);
  CHECK(run("check " + kData + "/missing.json --out " + out) == 2);
  CHECK(run("rates " + kData + "/damped_wave.json --pq 1,2 --out " + out) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("solve " + kData + "/damped_wave.json --grid-n 100 --out " + out) == 2);
  // The asymmetric fixture has no symmetry witness, so the refined profile is unavailable.
  CHECK(run("rates " + kData + "/asymmetric_relaxation.json --refined --out " + out) == 1);
}

TEST_CASE("cli output is deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::string sys = kData + "/damped_wave.json";
  for (const auto& dir : {a, b}) {
    REQUIRE(run("reduce " + sys + " --out " + dir.string()) == 0);
    REQUIRE(run("curves " + sys + " --xi-count 50 --out " + dir.string()) == 0);
    REQUIRE(run("solve " + sys + " --grid-n 1024 --grid-l 200 --times 1,4 --profile exact --format csv --out " +
                dir.string()) == 0);
    REQUIRE(run("kernels " + sys + " --regime mid --out " + dir.string()) == 0);
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const auto other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(data_section(slurp(entry.path())) == data_section(slurp(other)));
    ++compared;
  }
  CHECK(compared >= 4);
  const auto report = io::json::parse(slurp(a / "report.json"));
  CHECK(report.contains("generated"));
}
