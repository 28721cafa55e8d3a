// Batch front end: every subcommand fills a RunConfig and hands it to
// run_command, so files written here match the library output byte for byte.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "selfsim/commands.hpp"
#include "selfsim/error.hpp"

namespace {

enum Exit { kOk = 0, kBudget = 2, kUsage = 64, kInvalid = 65, kViolation = 70 };

struct Flags {
  uint64_t seed = 7;
  int workers = 1;
  std::string format = "json";
  std::string out_dir = "selfsim_out";
  std::string config;
  std::vector<std::string> sets;
  bool quiet = false;
  std::map<std::string, std::string> params;  // flag values actually given
};

// Registers --name bound to params[key] (only recorded when given).
void param(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help,
           const CLI::Validator& check = CLI::Validator()) {
  auto* opt = app->add_option_function<std::string>(
      flag, [&f, key](const std::string& v) { f.params[key] = v; }, help);
  opt->check(check);
}

void toggle(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_flag_callback(flag, [&f, key] { f.params[key] = "true"; }, help);
}

void write_outputs(const std::string& dir, const std::string& command, const selfsim::RunConfig& cfg,
                   const selfsim::RunOutput& out) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : out.files) {
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + name + " in " + dir);
  }
  std::ofstream m(std::filesystem::path(dir) / "manifest.json", std::ios::binary);
  m << selfsim::run_manifest(command, cfg, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar group toolkit: balls, traverse fields, synthesis and verification suites"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  app.add_option("--workers", f.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--out", f.out_dir, "output directory")->capture_default_str();
  app.add_option("--config", f.config, "key = value file with command parameters")->check(CLI::ExistingFile);
  app.add_option("--set", f.sets, "extra parameter key=value (repeatable)");
  app.add_flag("-q,--quiet", f.quiet, "no summary on stdout");
  app.fallthrough();

  auto* ball = app.add_subcommand("ball", "growth function of a marked group");
  param(ball, f, "--group", "group", "grig | delta | gamma | finite | library");
  param(ball, f, "--depth", "depth", "tree depth for grig", CLI::PositiveNumber);
  param(ball, f, "--level", "level", "level n for delta / gamma", CLI::PositiveNumber);
  param(ball, f, "--lamp", "lamp", "klein | s3 | trivial | library name");
  param(ball, f, "--name", "name", "library group name");
  param(ball, f, "--radius", "radius", "ball radius", CLI::NonNegativeNumber);
  param(ball, f, "--max-elements", "max_elements", "element budget", CLI::PositiveNumber);

  auto* trav = app.add_subcommand("traverse", "traverse field of a word, or a max-A sweep");
  param(trav, f, "--word", "word", "word over a, b, c, d");
  param(trav, f, "--level", "level", "level n", CLI::PositiveNumber);
  toggle(trav, f, "--sweep", "sweep", "max A over all words up to --maxlen");
  param(trav, f, "--maxlen", "maxlen", "sweep length", CLI::NonNegativeNumber);
  param(trav, f, "--mode", "mode", "exhaustive | sampled", CLI::IsMember({"exhaustive", "sampled"}));
  param(trav, f, "--samples", "samples", "sampled words per length", CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "schedule, lamp plan and sandwich checks for a target function");
  auto* sched = app.add_subcommand("schedule", "schedule (m_j, theta_j, phi_j) of a target function");
  for (auto* s : {synth, sched}) {
    param(s, f, "--f", "f", "CSV table x,f");
    param(s, f, "--fixture", "fixture", "power | alpha0 | log-ratio | oscillating");
    param(s, f, "--alpha", "alpha", "exponent for the power fixture");
    param(s, f, "--lambda", "lambda", "lambda > 2 (default 2/eta)");
    param(s, f, "--J", "J", "number of terms (default: all the grid supports)", CLI::NonNegativeNumber);
  }
  param(synth, f, "--samples", "samples", "sandwich sample points", CLI::PositiveNumber);
  param(synth, f, "--max-distortion", "max_distortion", "largest accepted diameter distortion");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option_function<std::string>(
      "suite", [&f](const std::string& v) { f.params["suite"] = v; }, "all | recursion | suite name");

  auto* delta = app.add_subcommand("delta", "build Delta_n and evaluate words");
  param(delta, f, "--level", "level", "level n", CLI::PositiveNumber);
  param(delta, f, "--lamp", "lamp", "klein | s3 | trivial | library name");
  param(delta, f, "--base-depth", "base_depth", "depth of the tree quotient", CLI::NonNegativeNumber);
  param(delta, f, "--word", "word", "word over a, b, c, d, u_i, v_j");
  toggle(delta, f, "--kdelta", "kdelta", "also evaluate the commutator witness");

  auto* gamma = app.add_subcommand("gamma", "central extension Gamma_n");
  param(gamma, f, "--level", "level", "level n <= 5", CLI::PositiveNumber);
  param(gamma, f, "--word", "word", "word over a, b, c, d, t, T");
  toggle(gamma, f, "--witness", "witness", "compute and check the center witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    selfsim::RunConfig cfg;
    cfg.seed = f.seed;
    cfg.workers = f.workers;
    cfg.format = f.format;
    if (!f.config.empty()) cfg.params = selfsim::KeyValueConfig::load(f.config);
    for (const auto& [k, v] : f.params) cfg.params.set(k, v);
    for (const auto& kv : f.sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--set expects key=value, got '" << kv << "'\n";
        return kUsage;
      }
      cfg.params.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    selfsim::RunOutput out = selfsim::run_command(command, cfg);
    write_outputs(f.out_dir, command, cfg, out);
    if (!f.quiet) std::cout << out.summary << "\n";
    if (out.status == kViolation) std::cerr << "identity check FAILED (see " << f.out_dir << ")\n";
    return out.status;
  } catch (const selfsim::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (last complete stage " << e.completed << ")\n";
    return kBudget;
  } catch (const selfsim::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const selfsim::InvariantViolation& e) {
    std::cerr << "INVARIANT VIOLATION: " << e.what() << "\n";
    return kViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kViolation;
  }
}
