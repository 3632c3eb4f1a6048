#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "tomo/io.hpp"

namespace fs = std::filesystem;
using namespace tomo;

namespace {

const fs::path& work() {
  static const fs::path dir = [] {
    fs::create_directories(CLI_WORK_DIR);
    return fs::path(CLI_WORK_DIR);
  }();
  return dir;
}

std::string path(const std::string& name) { return (work() / name).string(); }

struct Run {
  int code = -1;
  std::string out;
};

// Runs tomo with `args`, capturing stdout+stderr.
Run run(const std::string& args) {
  const std::string log = path("last.log");
  const std::string cmd = std::string("\"") + TOMO_EXE + "\" " + args + " > \"" + log + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = io::read_file(log);
  return r;
}

void write(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

io::TomogramFile load(const std::string& name) {
  std::ifstream in(path(name));
  return io::read_tomogram_csv(in);
}

}  // namespace

TEST_CASE("forward symplectic: row count and normalization summary") {
  write("c0.json", R"({"kind":"coherent","alpha":[0,0]})");
  const Run r = run("forward --scheme symplectic --state " + path("c0.json") +
                     " --X -6:6:121 --theta 0:pi:64 -o " + path("w.csv"));
  REQUIRE(r.code == 0);
  const auto w = load("w.csv").tomogram;
  CHECK(w.values.size() == 121 * 64);
  CHECK(field(r.out, "slice_integral_min") == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(field(r.out, "slice_integral_max") == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("invert with reference") {
  const Run r = run("invert " + path("w.csv") + " -o " + path("r.csv") + " --reference " + path("c0.json"));
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "round_trip_rel_l2") <= 1e-3);
}

TEST_CASE("forward thick with inline window") {
  const Run r = run("forward --scheme thick --window '{\"kind\":\"rectangular\",\"delta\":2}' --state " +
                     path("c0.json") + " -o " + path("t.csv"));
  REQUIRE(r.code == 0);
  const auto file = load("t.csv");
  CHECK(file.window_json.find("rectangular") != std::string::npos);
  const auto& w = file.tomogram;
  REQUIRE(w.has_theta_lattice());
  CHECK(w.theta_axis.front() == 0.0);
  const std::size_t mid = w.x_axis.size() / 2;
  CHECK(w.x_axis[mid] == doctest::Approx(0.0));
  CHECK(std::abs(w.at_theta(0, mid).real() - std::erf(1.0)) < 1e-3);
}

TEST_CASE("forward quadratic: centre slice is e^{-X}") {
  const Run r = run("forward --scheme quadratic --state " + path("c0.json") +
                     " --X 0:6:61 --mu -0.5:0.5:3 --nu -0.5:0.5:3 -o " + path("q.csv"));
  REQUIRE(r.code == 0);
  const auto w = load("q.csv").tomogram;
  REQUIRE(w.has_center_lattice());
  for (std::size_t i = 1; i < w.x_axis.size(); ++i)
    CHECK(std::abs(w.at_center(1, 1, i).real() - std::exp(-w.x_axis[i])) < 1e-3);
}

TEST_CASE("quantum route agrees with the classical route") {
  const Run r = run("forward --quantum --dim 16 --state " + path("c0.json") +
                     " --X -3:3:7 --theta 0:pi:2 -o " + path("wq.csv"));
  REQUIRE(r.code == 0);
  const auto w = load("wq.csv").tomogram;
  for (std::size_t i = 0; i < w.values.size(); ++i)
    CHECK(std::abs(w.values[i].real() - std::exp(-w.points[i].X * w.points[i].X) / std::sqrt(kPi)) < 1e-3);
}

TEST_CASE("invert error contracts") {
  const Run q = run("invert " + path("q.csv"));
  CHECK(q.code == 2);
  CHECK(q.out.find("--calib") != std::string::npos);
  write("empty.csv", "");
  CHECK(run("invert " + path("empty.csv")).code == 2);
  CHECK(run("invert " + path("does_not_exist.csv")).code == 2);
  CHECK(run("forward --scheme thick --state " + path("c0.json")).code == 2);
  CHECK(run("forward --scheme nonsense --state " + path("c0.json")).code == 2);
  CHECK(run("forward --X 1:2").code == 2);
}

TEST_CASE("truncated support maps to exit 3") {
  write("g.json", R"({"q":[-2,2,41],"p":[-2,2,41]})");
  CHECK(run("forward --state " + path("c0.json") + " --grid " + path("g.json") + " -o " + path("x.csv")).code == 3);
}

TEST_CASE("non-convergent quadratic inversion maps to exit 4") {
  write("cal.json", R"({"c":0.318})");
  const Run f = run("forward --scheme quadratic --state " + path("c0.json") +
                     " --X 0.1:8.1:41 --mu -1:1:11 --nu -1:1:11 -o " + path("qs.csv"));
  REQUIRE(f.code == 0);
  CHECK(run("invert " + path("qs.csv") + " --calib " + path("cal.json")).code == 4);
}

TEST_CASE("kernel request") {
  const Run r = run(
      "kernel --request '{\"scheme\":\"quadratic\",\"x1\":[0,0,0],\"x2\":[0,0,0],\"x3\":[0,0,0],\"test\":{\"eps\":0.05}}'");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double t0 = 1.0 / (std::sqrt(2.0 * kPi) * 0.05);
  CHECK(j["re"].get<double>() == doctest::Approx(0.0));
  CHECK(j["im"].get<double>() == doctest::Approx(-2.0 / (kPi * kPi * kPi) * t0 * 0.25).epsilon(1e-12));
}

TEST_CASE("verify kernels suite with seed") {
  const Run r = run("verify --suite kernels --seed 7 -o " + path("report.json"));
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(io::read_file(path("report.json")));
  CHECK(j["passed"] == true);
  CHECK(j["seed"] == 7);
  CHECK(run("verify --suite nope").code == 2);
}
