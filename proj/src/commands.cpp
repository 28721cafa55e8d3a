#include "selfsim/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "selfsim/central.hpp"
#include "selfsim/constants.hpp"
#include "selfsim/error.hpp"
#include "selfsim/finite_group.hpp"
#include "selfsim/growth.hpp"
#include "selfsim/suites.hpp"
#include "selfsim/traverse.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim {

namespace {

using json = nlohmann::ordered_json;

std::string hex64(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

int int_param(const KeyValueConfig& p, const std::string& key, long long lo, long long hi) {
  long long v = p.get_int(key);
  if (v < lo || v > hi)
    throw InvalidInput(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return int(v);
}

FiniteGroupSpec lamp_spec(const KeyValueConfig& p) {
  std::string name = p.get_or("lamp", "");
  if (name == "klein") return klein_lamp_spec();
  if (name == "s3") return s3_lamp_spec();
  if (!name.empty()) return library_group(name).spec;
  return FiniteGroupSpec::from_config(p);  // inline u1 = ..., v1 = ...
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// f from `f = path` (CSV table) or `fixture = name`.
TabulatedFunction function_from(const KeyValueConfig& p, double lambda) {
  if (p.has("f")) return TabulatedFunction::from_csv(read_file(p.get("f")));
  std::string fx = p.get_or("fixture", "");
  int top = int(p.get_int_or("max_power", 60));
  if (fx == "power") {
    double a = std::stod(p.get_or("alpha", std::to_string(constants::kAlpha0)));
    return power_fixture(a, lambda, top);
  }
  if (fx == "alpha0") return power_fixture(Constants::standard().alpha0, lambda, top);
  if (fx == "log-ratio") return log_ratio_fixture(lambda, top);
  if (fx == "oscillating") return oscillating_fixture(lambda, top);
  throw InvalidInput("need f = <csv file> or fixture = power | alpha0 | log-ratio | oscillating");
}

SynthesisSchedule schedule_from(const TabulatedFunction& f, const KeyValueConfig& p, double lambda) {
  if (p.has("J")) return schedule(f, lambda, int_param(p, "J", 0, 1000));
  return schedule_full(f, lambda);
}

double lambda_from(const KeyValueConfig& p) {
  return p.has("lambda") ? std::stod(p.get("lambda")) : Constants::standard().lambda0;
}

RunOutput cmd_ball(const RunConfig& cfg) {
  const auto& p = cfg.params;
  int R = int_param(p, "radius", 0, 1000);
  auto G = group_from_config(p);
  BallOptions opt;
  opt.workers = cfg.workers;
  if (p.has("max_elements")) opt.max_elements = std::size_t(p.get_int("max_elements"));
  GrowthProfile prof = ball(*G, R, opt);
  RunOutput out;
  if (cfg.format == "csv")
    out.files.push_back({"ball.csv", prof.to_csv()});
  else
    out.files.push_back({"ball.json", prof.to_json()});
  out.summary = G->describe() + ": v(" + std::to_string(R) + ") = " + std::to_string(prof.counts.back());
  return out;
}

RunOutput cmd_traverse(const RunConfig& cfg) {
  const auto& p = cfg.params;
  int n = int_param(p, "level", 1, 24);
  RunOutput out;
  if (!p.get_bool_or("sweep", false)) {
    Word w = parse_word(p.get_or("word", ""));
    TraverseField tf = traverse_field(w, n);
    out.files.push_back({"traverse.json", tf.to_json()});
    out.summary = "A(" + std::to_string(n) + ", " + to_string(w) + ") = " + std::to_string(tf.A);
    return out;
  }
  int r = int_param(p, "maxlen", 0, 1000);
  MaxAOptions o;
  o.workers = cfg.workers;
  o.seed = cfg.seed;
  o.samples = std::size_t(p.get_int_or("samples", 10000));
  bool sampled = p.get_or("mode", "exhaustive") == "sampled";
  std::vector<MaxAResult> rows;
  if (!sampled) {
    MaxAResult res = max_A(n, r, MaxAMode::Exhaustive, o);
    uint64_t best = 0;
    for (int L = 0; L <= r; ++L) {
      best = std::max(best, res.by_length[L]);
      MaxAResult row;
      row.level = n;
      row.r = L;
      row.exact = true;
      row.value = best;
      rows.push_back(row);
    }
  } else {
    for (int L = 0; L <= r; ++L) rows.push_back(max_A(n, L, MaxAMode::Sampled, o));
  }
  if (cfg.format == "csv") {
    out.files.push_back({"sweep.csv", sweep_csv(rows, constants::kAContract, constants::kEta)});
  } else {
    json j = json::array();
    for (const auto& row : rows) j.push_back({{"n", row.level}, {"r", row.r}, {"max_A", row.value}, {"exact", row.exact}});
    out.files.push_back({"sweep.json", j.dump()});
  }
  out.summary = "max A(" + std::to_string(n) + ", <= " + std::to_string(r) + ") = " + std::to_string(rows.back().value) +
                (sampled ? " (sampled lower bound)" : "");
  return out;
}

RunOutput cmd_schedule(const RunConfig& cfg) {
  double lambda = lambda_from(cfg.params);
  TabulatedFunction f = function_from(cfg.params, lambda);
  SynthesisSchedule s = schedule_from(f, cfg.params, lambda);
  CheckReport inv = schedule_invariants(f, s);
  RunOutput out;
  out.files.push_back({"schedule.json", s.to_json()});
  out.summary = std::to_string(s.terms.size() - 1) + " terms";
  for (const auto& m : inv.failures) out.summary += "\nINVARIANT FAILED: " + m;
  if (!inv.ok) out.status = 70;
  return out;
}

RunOutput cmd_synth(const RunConfig& cfg) {
  const auto& p = cfg.params;
  double lambda = lambda_from(p);
  TabulatedFunction f = function_from(p, lambda);
  SynthesisSchedule s = schedule_from(f, p, lambda);
  CheckReport inv = schedule_invariants(f, s);
  std::vector<double> xs = sandwich_samples(s, std::size_t(p.get_int_or("samples", 1000)), cfg.seed);
  CheckReport sw = sandwich_check(f, s, xs);
  LampPlan plan = lamp_plan_from_schedule(s, std::stod(p.get_or("max_distortion", "8")));
  CheckReport growth = check_growth_assumption(plan);
  Constants k = Constants::standard();
  k.lambda0 = lambda;

  json report;
  report["samples"] = xs.size();
  report["schedule_invariants"] = {{"ok", inv.ok}, {"failures", inv.failures}};
  report["sandwich"] = {{"ok", sw.ok}, {"violations", sw.failures.size()}, {"failures", sw.failures}};
  report["growth_assumption"] = {{"ok", growth.ok}, {"failures", growth.failures}};

  RunOutput out;
  out.files.push_back({"schedule.json", s.to_json()});
  out.files.push_back({"plan.json", plan.to_json()});
  out.files.push_back({"checks.json", report.dump(2)});
  out.files.push_back({"synthesis_manifest.json", manifest_json(f, s, plan, k)});
  out.summary = std::to_string(s.terms.size() - 1) + " terms, " + std::to_string(plan.levels.size()) +
                " lamp levels, sandwich violations " + std::to_string(sw.failures.size()) + "/" +
                std::to_string(xs.size());
  for (const auto* r : {&inv, &sw, &growth})
    if (!r->ok) {
      out.status = 70;
      out.summary += "\nFAILED: " + r->failures.front();
    }
  return out;
}

RunOutput cmd_verify(const RunConfig& cfg) {
  std::vector<std::string> names = expand_suite(cfg.params.get_or("suite", "all"));
  RunOutput out;
  json all = json::array();
  for (const auto& name : names) {
    SuiteResult r = run_suite(name, {cfg.seed, cfg.workers});
    all.push_back(json::parse(r.to_json()));
    out.summary += (r.report.ok ? "PASS " : "FAIL ") + name + ": " + r.title;
    if (!r.report.ok) {
      out.summary += "\n  first failure: " + r.report.failures.front();
      out.status = 70;
    }
    out.summary += "\n";
  }
  out.files.push_back({"verify.json", all.dump(2)});
  if (!out.summary.empty()) out.summary.pop_back();
  return out;
}

json wreath_element_json(const WreathGroup& G, const WreathElement& e) {
  json lamps = json::object();
  for (const auto& [pt, key] : e.lamps) {
    std::string lamp;
    if (auto fm = std::dynamic_pointer_cast<const FiniteMarkedGroup>(G.lamp()))
      lamp = to_string(fm->group()->shortest_word(FiniteMarkedGroup::from_key(key)));
    else
      lamp = hex64(fnv1a(key));
    lamps[Vertex{pt, G.level()}.str()] = lamp;
  }
  return {{"lamps", lamps}, {"base", e.base.to_hex()}};
}

RunOutput cmd_delta(const RunConfig& cfg) {
  KeyValueConfig p = cfg.params;
  p.set("group", "delta");
  auto G = std::dynamic_pointer_cast<const WreathGroup>(group_from_config(p));
  json j;
  j["group"] = G->describe();
  j["labels"] = G->labels();
  RunOutput out;
  out.summary = G->describe();
  if (p.has("word")) {
    Word w = parse_word(p.get("word"));
    WreathElement e = evaluate_m_word(w, *G);
    j["word"] = to_string(w);
    j["element"] = wreath_element_json(*G, e);
    if (!(lamp_product_formula(w, *G) == e)) throw InvariantViolation("lamp product formula disagrees on " + to_string(w));
    out.summary += "\n" + to_string(w) + " -> " + j["element"].dump();
  }
  if (p.has("kdelta")) {
    Word w = kdelta_word(G->level());
    j["kdelta_word"] = to_string(w);
    j["kdelta_element"] = wreath_element_json(*G, evaluate_m_word(w, *G));
  }
  out.files.push_back({"delta.json", j.dump(2)});
  return out;
}

RunOutput cmd_gamma(const RunConfig& cfg) {
  const auto& p = cfg.params;
  int n = int_param(p, "level", 1, 5);
  json j;
  j["level"] = n;
  RunOutput out;
  out.summary = "Gamma_" + std::to_string(n);
  if (p.has("word")) {
    Word w = parse_word(p.get("word"));
    GammaElement e = gamma_eval(w, n);
    const GermSpace& X = gamma_group(n)->space();
    json lamps = json::object();
    for (const auto& [pt, v] : e.lamp.f) lamps[X.str(pt)] = v;
    j["word"] = to_string(w);
    j["lamps"] = lamps;
    j["z"] = e.lamp.z;
    j["base"] = e.base.to_hex();
    auto cv = central_value(e);
    j["central"] = cv ? json(*cv) : json(nullptr);
    out.summary += "\n" + to_string(w) + ": z = " + std::to_string(e.lamp.z) + (cv ? " (central)" : "");
  }
  if (p.get_bool_or("witness", false)) {
    CenterWitness cw = center_witness(n);
    j["witness"] = json::parse(cw.to_json());
    out.summary += "\nwitness " + to_string(cw.witness) + " -> " + std::to_string(cw.central);
    if (!cw.report.ok) {
      out.status = 70;
      out.summary += "\nFAILED: " + cw.report.failures.front();
    }
  }
  out.files.push_back({"gamma.json", j.dump(2)});
  return out;
}

}  // namespace

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MarkedGroupPtr group_from_config(const KeyValueConfig& p) {
  std::string kind = p.get_or("group", "grig");
  if (kind == "grig") return tree_quotient(OmegaString::parse(p.get_or("omega", "012")), int_param(p, "depth", 1, 20));
  if (kind == "delta") {
    DeltaFactorSpec s;
    s.level = int_param(p, "level", 1, 16);
    s.omega = OmegaString::parse(p.get_or("omega", "012"));
    s.base_depth = int(p.get_int_or("base_depth", 0));
    if (p.get_or("lamp", "") != "trivial") s.lamp = lamp_spec(p);
    return build_delta_n(s);
  }
  if (kind == "gamma") return gamma_group(int_param(p, "level", 1, 5));
  if (kind == "finite") return std::make_shared<FiniteMarkedGroup>(finite_group(FiniteGroupSpec::from_config(p)));
  if (kind == "library") return std::make_shared<FiniteMarkedGroup>(library_group(p.get("name")).group);
  throw InvalidInput("unknown group kind '" + kind + "' (grig, delta, gamma, finite, library)");
}

RunOutput run_command(const std::string& command, const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") throw InvalidInput("format must be json or csv");
  if (command == "ball") return cmd_ball(cfg);
  if (command == "traverse") return cmd_traverse(cfg);
  if (command == "synth") return cmd_synth(cfg);
  if (command == "schedule") return cmd_schedule(cfg);
  if (command == "verify") return cmd_verify(cfg);
  if (command == "delta") return cmd_delta(cfg);
  if (command == "gamma") return cmd_gamma(cfg);
  throw InvalidInput("unknown command '" + command + "'");
}

std::string run_manifest(const std::string& command, const RunConfig& cfg, const RunOutput& out) {
  json j;
  j["command"] = command;
  json params = json::object();
  std::vector<std::string> keys = cfg.params.keys();
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) params[k] = cfg.params.get(k);
  j["params"] = params;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["format"] = cfg.format;
  json files = json::object();
  for (const auto& [name, content] : out.files) files[name] = hex64(fnv1a(content));
  j["outputs_fnv1a"] = files;
  j["status"] = out.status;
  j["constants"] = {{"eta", constants::kEta},
                    {"a_contract", constants::kAContract},
                    {"zeta_band", {constants::kZetaBandLo, constants::kZetaBandHi}},
                    {"main_upper", constants::kMainUpper}};
  return j.dump(2);
}

}  // namespace selfsim
