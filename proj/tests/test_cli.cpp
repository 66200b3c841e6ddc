#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kicked/manifest.hpp"

using namespace kicked::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("kicked_cli_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(KICKED_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config file parsing: comments, whitespace, errors") {
  auto dir = temp_dir("cfg");
  {
    std::ofstream out(dir / "good.cfg");
    out << "# comment\n  tau = 1.5 \nsteps=100\n\nkicks=none # trailing\n";
  }
  auto kv = parse_config_file(dir / "good.cfg");
  CHECK(kv.at("tau") == "1.5");
  CHECK(kv.at("steps") == "100");
  CHECK(kv.at("kicks") == "none");
  {
    std::ofstream out(dir / "bad.cfg");
    out << "just a line without equals\n";
  }
  CHECK_THROWS(parse_config_file(dir / "bad.cfg"));
}

TEST_CASE("csv writer: RFC-4180 quoting and stable doubles") {
  CsvWriter w({"a", "b"});
  w.row({"plain", "with,comma"});
  w.row({"with\"quote", "line\nbreak"});
  std::string text = w.text();
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"with\"\"quote\"") != std::string::npos);
  CHECK(CsvWriter::format_double(0.5) == "0.5");
  CHECK(CsvWriter::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK_THROWS(w.row({"only-one"}));
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest digests match emitted bytes and keys are sorted") {
  auto dir = temp_dir("manifest");
  RunManifest m("demo", {{"tau", "1.5"}, {"alpha", "2"}});
  m.emit(dir, "data.csv", "x,y\r\n1,2\r\n");
  m.check("ok", true, "detail");
  m.finalize(dir, 0.25);
  std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find(sha256_hex("x,y\r\n1,2\r\n")) != std::string::npos);
  // std::map-backed json serializes keys in sorted order
  CHECK(manifest.find("\"checks\"") < manifest.find("\"config\""));
  CHECK(manifest.find("\"config\"") < manifest.find("\"files\""));
  std::string cfg = slurp(dir / "config.resolved");
  CHECK(cfg == "alpha=2\ntau=1.5\n");
}

TEST_CASE("cli: identity-kick evolution emits the closed-form norm column") {
  auto dir = temp_dir("evolve");
  REQUIRE(run_cli("psl2-evolve --kicks identity --tau 1.5 --steps 4 --out " + dir.string()) == 0);
  std::ifstream in(dir / "evolve.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,k,norm,log_norm,trace\r");
  for (int k = 0; std::getline(in, line); ++k) {
    std::istringstream row(line);
    std::string tau, ks, norm;
    std::getline(row, tau, ',');
    std::getline(row, ks, ',');
    std::getline(row, norm, ',');
    double expect = std::sqrt(2.0 + std::pow(1.5 * k, 2.0));
    CHECK(std::stod(norm) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("cli: unknown config keys are a configuration error (exit 2)") {
  auto dir = temp_dir("badcfg");
  {
    std::ofstream out(dir / "run.cfg");
    out << "tau=1.0\nnonsense_key=3\n";
  }
  CHECK(run_cli("psl2-evolve --config " + (dir / "run.cfg").string() + " --out " + dir.string()) ==
        2);
  CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("cli: config file values apply and flags override them") {
  auto dir = temp_dir("cfgrun");
  {
    std::ofstream out(dir / "run.cfg");
    out << "tau=1.5\nsteps=3\nkicks=identity\nout=" << (dir / "a").string() << "\n";
  }
  REQUIRE(run_cli("psl2-evolve --config " + (dir / "run.cfg").string()) == 0);
  CHECK(fs::exists(dir / "a" / "evolve.csv"));
  // flag overrides the config's out dir
  REQUIRE(run_cli("psl2-evolve --config " + (dir / "run.cfg").string() + " --out " +
                  (dir / "b").string()) == 0);
  CHECK(fs::exists(dir / "b" / "evolve.csv"));
  CHECK(slurp(dir / "a" / "evolve.csv") == slurp(dir / "b" / "evolve.csv"));
}

TEST_CASE("cli: canonical reruns are byte-identical") {
  auto d1 = temp_dir("rerun1"), d2 = temp_dir("rerun2");
  std::string args = "torus-weyl --kicks random --seed 42 --tau-grid 1:2:8 --steps 500 --out ";
  REQUIRE(run_cli(args + d1.string()) == 0);
  REQUIRE(run_cli(args + d2.string()) == 0);
  CHECK(slurp(d1 / "weyl.csv") == slurp(d2 / "weyl.csv"));
  CHECK(slurp(d1 / "config.resolved") == slurp(d2 / "config.resolved"));
  CHECK(!slurp(d1 / "weyl.csv").empty());
}

TEST_CASE("cli: a run replayed from its own resolved config reproduces the bytes") {
  auto d1 = temp_dir("replay1"), d2 = temp_dir("replay2");
  REQUIRE(run_cli("torus-burago --tau-list 1,2 --steps 20000 --out " + d1.string()) == 0);
  REQUIRE(run_cli("torus-burago --config " + (d1 / "config.resolved").string() + " --out " +
                  d2.string()) == 0);
  CHECK(slurp(d1 / "burago.csv") == slurp(d2 / "burago.csv"));
  CHECK(!slurp(d2 / "burago.csv").empty());
}

TEST_CASE("cli: fast mode reproduces canonical output on a tau grid") {
  auto d1 = temp_dir("fast1"), d2 = temp_dir("fast2");
  std::string base = "psl2-escape-scan --kicks signs --seed 3 --tau-grid 8:12:16 --steps 200 ";
  REQUIRE(run_cli(base + "--mode canonical --out " + d1.string()) == 0);
  REQUIRE(run_cli(base + "--mode fast --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "escape.csv") == slurp(d2 / "escape.csv"));
}

TEST_CASE("cli: --strict escalates failed checks to exit 3") {
  auto dir = temp_dir("strict");
  // 100 steps cannot resolve the 1% hit-frequency check
  CHECK(run_cli("torus-burago --tau-list 3 --steps 100 --strict --out " + dir.string()) == 3);
  CHECK(run_cli("torus-burago --tau-list 3 --steps 100 --out " + dir.string()) == 0);
}

TEST_CASE("cli: json format emits sorted-key row objects") {
  auto dir = temp_dir("json");
  REQUIRE(run_cli("torus-burago --tau-list 1 --steps 1000 --format json --out " + dir.string()) ==
          0);
  std::string text = slurp(dir / "burago.json");
  CHECK(text.find("\"dstar\"") != std::string::npos);
  CHECK(text.find("\"dstar\"") < text.find("\"equidistributed\""));
}
