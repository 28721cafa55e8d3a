#include "selfsim/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>

#include "json.hpp"
#include "selfsim/constants.hpp"
#include "selfsim/error.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim {

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kEqSlack = 1e-12;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool le(double a, double b) { return a <= b + kRelTol * std::max(1.0, std::fabs(b)); }

}  // namespace

Constants Constants::standard() {
  Constants k;
  k.eta = solve_norm_weights().eta;
  k.lambda0 = 2.0 / k.eta;
  k.alpha0 = std::log(2.0) / std::log(k.lambda0);
  k.a_contract = constants::kAContract;
  k.main_upper = constants::kMainUpper;
  return k;
}

// ---- tabulated functions ----

TabulatedFunction::TabulatedFunction(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) throw InvalidInput("tabulated function: need >= 2 (x, f) pairs");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]) || xs_[i] <= 0 || ys_[i] <= 0)
      throw InvalidInput("tabulated function: entries must be finite and positive");
    if (i > 0 && xs_[i] <= xs_[i - 1]) throw InvalidInput("tabulated function: abscissae must increase");
  }
}

TabulatedFunction TabulatedFunction::from_csv(const std::string& text) {
  std::vector<double> xs, ys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bool header = first_row;
    first_row = false;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("f table line " + std::to_string(lineno) + ": expected x,f");
    try {
      std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      double x = std::stod(a);
      double y = std::stod(b);
      xs.push_back(x);
      ys.push_back(y);
    } catch (const std::logic_error&) {
      if (header) continue;
      throw InvalidInput("f table line " + std::to_string(lineno) + ": not a number");
    }
  }
  return TabulatedFunction(std::move(xs), std::move(ys));
}

TabulatedFunction TabulatedFunction::sample(const std::function<double(double)>& f, double lambda, int max_power,
                                            int per_power) {
  std::vector<double> xs, ys;
  for (int i = 0; i <= max_power * per_power; ++i) {
    double x = std::pow(lambda, double(i) / per_power);
    xs.push_back(x);
    ys.push_back(f(x));
  }
  return TabulatedFunction(std::move(xs), std::move(ys));
}

std::string TabulatedFunction::to_csv() const {
  std::string s = "x,f\n";
  for (std::size_t i = 0; i < xs_.size(); ++i) s += fmt(xs_[i]) + "," + fmt(ys_[i]) + "\n";
  return s;
}

double TabulatedFunction::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x > xs_.back() * (1 + 1e-12)) throw InvalidInput("tabulated function: " + fmt(x) + " lies beyond the grid");
  if (x >= xs_.back()) return ys_.back();
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = std::size_t(it - xs_.begin());
  if (*it == x) return ys_[i];
  double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

uint64_t TabulatedFunction::hash() const {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_csv()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

CheckReport TabulatedFunction::validate() const {
  CheckReport rep;
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (ys_[i] < ys_[i - 1]) {
      rep.fail("f decreases between x = " + fmt(xs_[i - 1]) + " and x = " + fmt(xs_[i]));
      return rep;
    }
  for (std::size_t i = 0; i < xs_.size(); ++i)
    for (std::size_t j = i; j < xs_.size() && xs_[i] + xs_[j] <= xs_.back(); ++j) {
      double s = xs_[i] + xs_[j];
      if (!le((*this)(s), ys_[i] + ys_[j])) {
        rep.fail("f is not subadditive at x = " + fmt(xs_[i]) + ", y = " + fmt(xs_[j]));
        return rep;
      }
    }
  return rep;
}

TabulatedFunction power_fixture(double alpha, double lambda, int max_power) {
  return TabulatedFunction::sample([alpha](double x) { return std::pow(x, alpha); }, lambda, max_power);
}

TabulatedFunction log_ratio_fixture(double lambda, int max_power) {
  double a0 = Constants::standard().alpha0;
  return TabulatedFunction::sample(
      [a0](double x) { return std::max(std::pow(x, a0), x / std::log(std::exp(1.0) + x)); }, lambda, max_power);
}

TabulatedFunction oscillating_fixture(double lambda, int max_power) {
  // Climbs with slope 1 (log-log) up to x / log(e + x), then stays flat down to
  // x^a0, then climbs again. f / x never increases, so f is subadditive.
  double a0 = Constants::standard().alpha0;
  const int per = 4;
  std::vector<double> xs, ys;
  double F = 0;  // log f
  bool climbing = true;
  for (int i = 0; i <= max_power * per; ++i) {
    double lx = std::log(lambda) * double(i) / per;
    double x = std::exp(lx);
    double lower = a0 * lx, upper = lx - std::log(std::log(std::exp(1.0) + x));
    if (i > 0) {
      double cand = climbing ? F + std::log(lambda) / per : F;
      cand = std::min(cand, std::max(upper, F));
      F = std::max(lower, cand);
    }
    if (F >= upper) climbing = false;
    if (F <= lower) climbing = true;
    xs.push_back(x);
    ys.push_back(std::exp(F));
  }
  return TabulatedFunction(std::move(xs), std::move(ys));
}

// ---- schedule ----

double c_lambda(double lambda) { return std::min({0.5 - 1.0 / lambda, 1.0 / (2.0 * lambda), lambda / 2.0 - 1.0}); }

SynthesisSchedule schedule(const TabulatedFunction& f, double lambda, int J) {
  if (!(lambda > 2)) throw InvalidInput("schedule: lambda must exceed 2");
  if (J < 0) throw InvalidInput("schedule: J must be nonnegative");
  CheckReport v = f.validate();
  if (!v.ok) throw InvalidInput("schedule: " + v.failures.front());
  double alpha = std::log(2.0) / std::log(lambda);
  for (std::size_t i = 0; i < f.xs().size(); ++i)
    if (!le(std::pow(f.xs()[i], alpha), f.ys()[i]))
      throw InvalidInput("schedule: f(" + fmt(f.xs()[i]) + ") = " + fmt(f.ys()[i]) + " is below x^" + fmt(alpha));
  if (f.xs().front() > 1) throw InvalidInput("schedule: the grid must start at x <= 1");

  SynthesisSchedule s;
  s.lambda = lambda;
  s.c_lambda = c_lambda(lambda);
  s.terms.push_back({0, 0.0, f(1.0)});
  int max_m = int(std::floor(std::log(f.max_x()) / std::log(lambda) + 1e-9));
  auto fm = [&](int m) { return f(std::pow(lambda, m)); };
  double ratio = 2.0 / lambda;
  for (int j = 1; j <= J; ++j) {
    const ScheduleTerm& prev = s.terms.back();
    int m1 = -1, m2 = -1;
    double target1 = std::pow(ratio, prev.theta + 1), target2 = 2 * fm(prev.m);
    for (int m = prev.m + 1; m <= max_m && (m1 < 0 || m2 < 0); ++m) {
      double fv = fm(m);
      // equality cases are hit exactly by f = x^alpha; decide them with slack
      if (m1 < 0 && fv / std::pow(lambda, m) <= target1 * (1 + kEqSlack)) m1 = m;
      if (m2 < 0 && fv >= target2 * (1 - kEqSlack)) m2 = m;
    }
    if (m1 < 0 || m2 < 0)
      throw BudgetExceeded("schedule: the f grid ends after " + std::to_string(j - 1) + " terms (m up to " +
                               std::to_string(max_m) + ")",
                           j - 1);
    ScheduleTerm t;
    t.m = std::max(m1, m2);
    double fv = fm(t.m);
    t.theta = std::log(fv / std::pow(lambda, t.m)) / std::log(ratio);
    t.phi = std::pow(lambda, t.m - t.theta);
    s.terms.push_back(t);
  }
  return s;
}

SynthesisSchedule schedule_full(const TabulatedFunction& f, double lambda, int cap) {
  try {
    return schedule(f, lambda, cap);
  } catch (const BudgetExceeded& e) {
    return schedule(f, lambda, e.completed);
  }
}

CheckReport schedule_invariants(const TabulatedFunction& f, const SynthesisSchedule& s) {
  CheckReport rep;
  for (std::size_t j = 1; j < s.terms.size(); ++j) {
    const auto &a = s.terms[j - 1], &b = s.terms[j];
    if (!le(a.theta + 1, b.theta)) rep.fail("theta_" + std::to_string(j) + " - theta_" + std::to_string(j - 1) + " < 1");
    if (!le(a.phi, b.phi)) rep.fail("phi decreases at j = " + std::to_string(j));
    double fv = f(std::pow(s.lambda, b.m));
    if (std::fabs(b.phi * std::pow(2.0, b.theta) - fv) > kRelTol * fv)
      rep.fail("phi_j 2^theta_j != f(lambda^m_j) at j = " + std::to_string(j));
  }
  return rep;
}

SandwichSample sandwich_at(const TabulatedFunction& f, const SynthesisSchedule& s, double x) {
  SandwichSample out;
  out.x = x;
  out.f = f(x);
  double sum = 0, mx = 0;
  for (const auto& t : s.terms) {
    if (std::pow(s.lambda, t.theta) > x * (1 + kEqSlack)) continue;
    double term = std::pow(2.0, t.theta) * std::min(std::pow(s.lambda, -t.theta) * x, t.phi);
    sum += term;
    mx = std::max(mx, term);
  }
  out.lower = s.c_lambda * sum;
  out.upper = s.lambda * mx;
  return out;
}

CheckReport sandwich_check(const TabulatedFunction& f, const SynthesisSchedule& s, const std::vector<double>& xs) {
  CheckReport rep;
  for (double x : xs) {
    SandwichSample p = sandwich_at(f, s, x);
    if (!le(p.lower, p.f) || !le(p.f, p.upper))
      rep.fail("x = " + fmt(x) + ": lower " + fmt(p.lower) + ", f " + fmt(p.f) + ", upper " + fmt(p.upper));
  }
  rep.notes.push_back(std::to_string(xs.size()) + " sample points");
  return rep;
}

std::vector<double> sandwich_samples(const SynthesisSchedule& s, std::size_t count, uint64_t seed) {
  // beyond lambda^{theta_J + 1} a term past the schedule could enter the sums
  const ScheduleTerm& last = s.terms.back();
  double hi = std::min(std::pow(s.lambda, last.m), std::pow(s.lambda, last.theta + 1));
  std::vector<double> xs;
  for (const auto& t : s.terms)
    if (std::pow(s.lambda, t.m) < hi) xs.push_back(std::pow(s.lambda, t.m));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, std::log(hi));
  while (xs.size() < count + s.terms.size() && hi > 1) xs.push_back(std::exp(u(rng)));
  return xs;
}

std::string SynthesisSchedule::to_json() const {
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["c_lambda"] = c_lambda;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : terms) arr.push_back({{"m", t.m}, {"theta", t.theta}, {"phi", t.phi}});
  j["terms"] = arr;
  return j.dump();
}

// ---- lamp library ----

namespace {

std::vector<std::pair<std::string, FiniteGroupSpec>> library_specs() {
  return {{"Z2", cyclic2_library_spec()},
          {"Klein", klein_library_spec()},
          {"D8", dihedral_library_spec(4)},
          {"D12", dihedral_library_spec(6)},
          {"D16", dihedral_library_spec(8)},
          {"D32", dihedral_library_spec(16)},
          {"PSL2(Z/5)", psl2_library_spec(1)},
          {"PSL2(Z/25)", psl2_library_spec(2)},
          {"PSL2(Z/125)", psl2_library_spec(3)}};
}

std::mutex library_mu;

}  // namespace

const LibraryGroup& library_group(const std::string& name) {
  static std::map<std::string, LibraryGroup> built;
  std::lock_guard<std::mutex> lock(library_mu);
  auto it = built.find(name);
  if (it != built.end()) return it->second;
  for (auto& [n, spec] : library_specs())
    if (n == name) {
      auto g = finite_group(spec);
      g->growth();  // build the metric before the group is shared
      return built.emplace(name, LibraryGroup{name, spec, g}).first->second;
    }
  throw InvalidInput("unknown library group " + name);
}

const std::vector<LibraryGroup>& expander_library() {
  static const std::vector<LibraryGroup> all = [] {
    std::vector<LibraryGroup> v;
    for (auto& [n, spec] : library_specs()) v.push_back(library_group(n));
    return v;
  }();
  return all;
}

double measure_c0(const FiniteGroup& g) {
  const auto& v = g.growth();
  double c = 1;
  for (std::size_t l = 1; l < v.size(); ++l) {
    double lv = std::log(double(v[l]));
    c = std::max({c, double(l) / lv, lv / double(l)});
  }
  return c;
}

namespace {

LampEntry entry_for(int level, const LibraryGroup& lg, double requested) {
  LampEntry e;
  e.level = level;
  e.name = lg.name;
  e.spec = lg.spec;
  e.group = lg.group;
  e.requested_diameter = requested;
  double d = lg.group->diameter();
  e.distortion = requested > 0 ? std::max(d / requested, requested / d) : 1;
  return e;
}

void finish_plan(LampPlan& plan) {
  plan.c0 = 1;
  for (auto& [n, e] : plan.levels) plan.c0 = std::max(plan.c0, measure_c0(*e.group));
}

}  // namespace

LampPlan lamp_plan_from_schedule(const SynthesisSchedule& s, double max_distortion) {
  LampPlan plan;
  const auto& lib = expander_library();
  for (std::size_t j = 1; j < s.terms.size(); ++j) {
    int level = int(std::floor(s.terms[j].theta + 1e-9));
    double d = std::floor(s.terms[j].phi + 1e-9);
    if (level < 1 || d < 1) continue;
    const LibraryGroup* best = nullptr;
    double best_dist = 0;
    for (const auto& lg : lib) {
      double gd = lg.group->diameter();
      double dist = std::max(gd / d, d / gd);
      if (!best || dist < best_dist || (dist == best_dist && lg.group->order() < best->group->order())) {
        best = &lg;
        best_dist = dist;
      }
    }
    if (best_dist > max_distortion)
      throw InvalidInput("lamp plan: no library group within distortion " + fmt(max_distortion) + " of diameter " +
                         fmt(d));
    plan.levels[level] = entry_for(level, *best, d);
  }
  finish_plan(plan);
  return plan;
}

LampPlan make_plan(const std::vector<std::pair<int, std::string>>& levels) {
  LampPlan plan;
  for (auto& [n, name] : levels) {
    if (n < 1) throw InvalidInput("lamp plan: levels start at 1");
    const LibraryGroup& lg = library_group(name);
    plan.levels[n] = entry_for(n, lg, lg.group->diameter());
  }
  finish_plan(plan);
  return plan;
}

CheckReport check_growth_assumption(const LampPlan& plan) {
  CheckReport rep;
  for (const auto& [n, e] : plan.levels) {
    const auto& v = e.group->growth();
    for (std::size_t l = 1; l < v.size(); ++l) {
      double lv = std::log(double(v[l])), phi = double(l);
      if (!le(phi / plan.c0, lv) || !le(lv, plan.c0 * phi))
        rep.fail(e.name + ": log v(" + std::to_string(l) + ") outside [l / C0, C0 l]");
      if (!le(std::log(1.0 + phi) / plan.c0, phi)) rep.fail(e.name + ": Phi below log(1 + l) / C0");
    }
  }
  return rep;
}

std::string LampPlan::to_json() const {
  nlohmann::ordered_json j;
  j["c0"] = c0;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [n, e] : levels)
    arr.push_back({{"level", n},
                   {"group", e.name},
                   {"order", e.group->order()},
                   {"diameter", e.group->diameter()},
                   {"requested_diameter", e.requested_diameter},
                   {"distortion", e.distortion}});
  j["levels"] = arr;
  return j.dump();
}

// ---- bounds ----

std::vector<int> J_r(int r, const LampPlan& plan, const Constants& k) {
  std::vector<int> out;
  for (const auto& [n, e] : plan.levels)
    if (double(r) >= std::pow(2.0 / k.eta, n)) out.push_back(n);
  return out;
}

double main_sum(int r, const LampPlan& plan, const Constants& k, bool use_max) {
  double acc = 0;
  for (int j : J_r(r, plan, k)) {
    double arg = std::min(std::pow(k.eta / 2.0, j) * r, double(plan.levels.at(j).group->diameter()));
    double term = std::pow(2.0, j) * arg;  // Phi(x) = x
    acc = use_max ? std::max(acc, term) : acc + term;
  }
  return acc;
}

double upper_bound(int r, const LampPlan& plan, const Constants& k) {
  return k.main_upper * (main_sum(r, plan, k, false) + std::pow(double(r), k.alpha0));
}

double lower_bound(int r, const LampPlan& plan, const Constants& k) {
  if (k.main_upper <= 0) return 0;
  return (main_sum(r, plan, k, true) + std::pow(double(r), k.alpha0)) / k.main_upper;
}

RegimeValue factor_regime(int n, double r, const FiniteGroup& F, const Constants& k) {
  double T = std::pow(2.0 / k.eta, n);
  double D = F.diameter();
  double tree = std::pow(r, k.alpha0);
  if (r < T) return {Regime::Small, tree};
  if (r < T * D) {
    const auto& v = F.growth();
    std::size_t l = std::min<std::size_t>(v.size() - 1, std::size_t(std::floor(std::pow(k.eta / 2.0, n) * r)));
    return {Regime::Middle, std::pow(2.0, n) * std::log(double(v[l])) + tree};
  }
  return {Regime::Saturated, std::pow(2.0, n) * std::log(double(F.order())) + tree};
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Small: return "i";
    case Regime::Middle: return "ii";
    case Regime::Saturated: return "iii";
  }
  return "?";
}

MarkedGroupPtr plan_group(const LampPlan& plan, int max_level) {
  std::vector<MarkedGroupPtr> factors;
  for (const auto& [n, e] : plan.levels) {
    if (n > max_level) continue;
    factors.push_back(build_delta_n({.level = n,
                                     .lamp = e.spec,
                                     .trivial_labels = e.spec.labels,
                                     .omega = OmegaString::grigorchuk(),
                                     .base_depth = 0}));
  }
  // every other level carries the trivial lamp and only contributes the tree quotient
  std::vector<std::string> lamp_labels =
      plan.levels.empty() ? std::vector<std::string>{"u1", "v1", "v2", "v3"} : plan.levels.begin()->second.spec.labels;
  factors.push_back(std::make_shared<TreeQuotientGroup>(OmegaString::grigorchuk(), std::max(max_level + 4, 12),
                                                        lamp_labels));
  return factors.size() == 1 ? factors[0] : diagonal_product(factors);
}

EmpiricalReport empirical_vs_bounds(const LampPlan& plan, int max_level, int R, const Constants& k,
                                    const BallOptions& opt) {
  EmpiricalReport rep;
  auto G = plan_group(plan, max_level);
  rep.volume = ball(*G, R, opt).counts;
  std::vector<MarkedGroupPtr> factors;
  if (auto d = std::dynamic_pointer_cast<const DiagonalProduct>(G))
    for (std::size_t i = 0; i < d->num_factors(); ++i) factors.push_back(d->factor(i));
  else
    factors.push_back(G);
  for (const auto& f : factors) rep.factor_volume.push_back(ball(*f, R, opt).counts);
  for (int r = 0; r <= R; ++r) {
    uint64_t best = 0;
    for (const auto& fv : rep.factor_volume) best = std::max(best, fv[r]);
    if (rep.volume[r] < best)
      rep.report.fail("r = " + std::to_string(r) + ": v = " + std::to_string(rep.volume[r]) + " below factor volume " +
                      std::to_string(best));
    double lv = std::log(double(rep.volume[r]));
    double shape_up = main_sum(r, plan, k, false) + std::pow(double(r), k.alpha0);
    double shape_low = main_sum(r, plan, k, true) + std::pow(double(r), k.alpha0);
    rep.upper.push_back(k.main_upper * shape_up);
    rep.lower.push_back(k.main_upper > 0 ? shape_low / k.main_upper : 0);
    if (r == 0) continue;
    rep.upper_ratio = std::max(rep.upper_ratio, lv / shape_up);
    rep.lower_ratio = r == 1 ? lv / shape_low : std::min(rep.lower_ratio, lv / shape_low);
    if (k.main_upper > 0 && !le(lv, rep.upper.back()))
      rep.report.fail("r = " + std::to_string(r) + ": log v = " + fmt(lv) + " above the upper curve " +
                      fmt(rep.upper.back()));
  }
  return rep;
}

std::string EmpiricalReport::to_json() const {
  nlohmann::ordered_json j;
  j["volume"] = volume;
  j["factor_volume"] = factor_volume;
  j["upper"] = upper;
  j["lower"] = lower;
  j["upper_ratio"] = upper_ratio;
  j["lower_ratio"] = lower_ratio;
  j["ok"] = report.ok;
  j["failures"] = report.failures;
  return j.dump();
}

std::vector<LampPlan> reference_plans() {
  return {make_plan({{2, "Klein"}}), make_plan({{1, "Z2"}, {3, "D8"}}), make_plan({{2, "PSL2(Z/5)"}, {4, "D12"}})};
}

std::string manifest_json(const TabulatedFunction& f, const SynthesisSchedule& s, const LampPlan& plan,
                          const Constants& k) {
  nlohmann::ordered_json j;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(f.hash()));
  j["f_table_fnv1a"] = hash;
  j["f_points"] = f.xs().size();
  j["schedule"] = nlohmann::ordered_json::parse(s.to_json());
  j["plan"] = nlohmann::ordered_json::parse(plan.to_json());
  j["constants"] = {{"eta", k.eta},           {"lambda0", k.lambda0},       {"alpha0", k.alpha0},
                    {"a_contract", k.a_contract}, {"c0", plan.c0},            {"main_upper", k.main_upper}};
  return j.dump(2);
}

}  // namespace selfsim
