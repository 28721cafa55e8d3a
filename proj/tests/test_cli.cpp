#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "selfsim/commands.hpp"
#include "selfsim/error.hpp"

using namespace selfsim;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SELFSIM_CLI_PATH;
const std::string kConfigs = std::string(SELFSIM_SOURCE_DIR) + "/configs/";

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("selfsim_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

// Runs the CLI quietly into `out` and returns its exit code.
int cli(const std::string& args, const fs::path& out) {
  std::string cmd = kCli + " -q -o " + out.string() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig config(std::initializer_list<std::pair<const char*, const char*>> kv, int workers = 1) {
  RunConfig c;
  c.workers = workers;
  for (auto [k, v] : kv) c.params.set(k, v);
  return c;
}

// Every library output file must appear byte for byte in the CLI directory.
void check_same(const RunOutput& lib, const fs::path& dir) {
  REQUIRE_FALSE(lib.files.empty());
  for (const auto& [name, content] : lib.files) CHECK_MESSAGE(slurp(dir / name) == content, name);
}

}  // namespace

TEST_CASE("key-value configs") {
  auto c = KeyValueConfig::parse("# header\nb = 2\na = x y  # trailing\n\n");
  CHECK(c.get("a") == "x y");
  CHECK(c.get_int("b") == 2);
  CHECK(c.keys() == std::vector<std::string>{"b", "a"});
  CHECK(c.get_or("zz", "d") == "d");
  CHECK(c.get_bool_or("zz", true));
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), InvalidInput);
  CHECK(parse_rows("1 2; 3 4") == std::vector<std::vector<long long>>{{1, 2}, {3, 4}});
}

TEST_CASE("groups from configs") {
  auto g = group_from_config(KeyValueConfig::load(kConfigs + "delta_n3_klein.cfg"));
  CHECK(g->labels() == std::vector<std::string>{"a", "b", "c", "d", "u1", "v1"});
  auto s3 = group_from_config(KeyValueConfig::load(kConfigs + "delta_n2_s3_inline.cfg"));
  auto lib = group_from_config(KeyValueConfig::parse("group = delta\nlevel = 2\nlamp = s3\n"));
  CHECK(matching_radius(s3, lib, 6) == 6);
  CHECK(group_from_config(KeyValueConfig::parse("group = gamma\nlevel = 1\n"))->rank() == 5);
  CHECK_THROWS_AS(group_from_config(KeyValueConfig::parse("group = nope\n")), InvalidInput);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("CLI output equals the library output") {
  fs::path d1 = scratch("ball");
  REQUIRE(cli("ball --group grig --depth 3 --radius 6", d1) == 0);
  RunConfig c = config({{"group", "grig"}, {"depth", "3"}, {"radius", "6"}});
  RunOutput lib = run_command("ball", c);
  check_same(lib, d1);
  CHECK(slurp(d1 / "manifest.json") == run_manifest("ball", c, lib));

  fs::path d2 = scratch("traverse");
  REQUIRE(cli("--format csv traverse --sweep --level 5 --maxlen 8", d2) == 0);
  RunConfig t = config({{"level", "5"}, {"maxlen", "8"}, {"sweep", "true"}});
  t.format = "csv";
  check_same(run_command("traverse", t), d2);

  fs::path d3 = scratch("delta");
  REQUIRE(cli("--config " + kConfigs + "delta_n3_klein.cfg ball", d3) == 0);
  RunConfig dc;
  dc.params = KeyValueConfig::load(kConfigs + "delta_n3_klein.cfg");
  check_same(run_command("ball", dc), d3);

  fs::path d4 = scratch("schedule");
  REQUIRE(cli("schedule --fixture alpha0", d4) == 0);
  check_same(run_command("schedule", config({{"fixture", "alpha0"}})), d4);

  fs::path d5 = scratch("gamma");
  REQUIRE(cli("gamma --level 1 --witness --word tatT", d5) == 0);
  check_same(run_command("gamma", config({{"level", "1"}, {"witness", "true"}, {"word", "tatT"}})), d5);

  for (const auto& d : {d1, d2, d3, d4, d5}) fs::remove_all(d);
}

TEST_CASE("seed and workers leave outputs unchanged") {
  fs::path a = scratch("w1"), b = scratch("w4");
  REQUIRE(cli("--workers 1 --seed 1 ball --group delta --level 3 --lamp s3 --radius 7", a) == 0);
  REQUIRE(cli("--workers 4 --seed 99 ball --group delta --level 3 --lamp s3 --radius 7", b) == 0);
  CHECK(slurp(a / "ball.json") == slurp(b / "ball.json"));
  auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  CHECK(ma["outputs_fnv1a"] == mb["outputs_fnv1a"]);
  CHECK(ma["workers"] == 1);
  CHECK(mb["workers"] == 4);
  RunOutput one = run_command("traverse", config({{"level", "4"}, {"maxlen", "9"}, {"sweep", "true"}}, 1));
  RunOutput many = run_command("traverse", config({{"level", "4"}, {"maxlen", "9"}, {"sweep", "true"}}, 4));
  CHECK(one.files == many.files);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("exit codes") {
  fs::path d = scratch("codes");
  CHECK(cli("ball --group grig --depth 4 --radius 3", d) == 0);
  CHECK(cli("ball --group grig --depth 8 --radius 40 --max-elements 1000", d) == 2);
  CHECK(cli("ball --radius -1", d) == 64);
  CHECK(cli("nosuchcommand", d) == 64);
  CHECK(cli("verify nope", d) == 65);
  CHECK(cli("synth --f " + kConfigs + "f_decreasing.csv", d) == 65);
  CHECK(cli("ball --group delta --level 2 --lamp nope --radius 2", d) == 65);
  CHECK(cli("--config " + kConfigs + "synth_oscillating.cfg synth", d) == 70);
  nlohmann::json m = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(m["status"] == 70);
  CHECK(cli("synth --fixture alpha0 --samples 200", d) == 0);
  fs::remove_all(d);
}

TEST_CASE("library errors") {
  CHECK_THROWS_AS(run_command("nope", RunConfig{}), InvalidInput);
  RunConfig bad;
  bad.format = "xml";
  CHECK_THROWS_AS(run_command("ball", bad), InvalidInput);
  CHECK_THROWS_AS(run_command("ball", config({{"group", "grig"}, {"depth", "5"}, {"radius", "30"},
                                              {"max_elements", "100"}})),
                  BudgetExceeded);
  RunOutput v = run_command("verify", config({{"suite", "worked-example"}}));
  CHECK(v.status == 0);
  CHECK(v.summary.rfind("PASS worked-example", 0) == 0);
}
