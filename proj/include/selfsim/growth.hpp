#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/finite_group.hpp"
#include "selfsim/marked_group.hpp"
#include "selfsim/recursion.hpp"

namespace selfsim {

struct Constants {
  double eta = 0;
  double lambda0 = 0;  // 2 / eta
  double alpha0 = 0;   // log 2 / log lambda0
  double a_contract = 0;
  double c0 = 0;       // lamp family constant, measured
  double main_upper = 0;  // calibrated upper-bound constant

  static Constants standard();  // c0 left at 0 until a family is measured
};

// Nondecreasing function tabulated at increasing abscissae, linearly
// interpolated in between (and clamped to the first value below the grid).
class TabulatedFunction {
 public:
  TabulatedFunction() = default;
  TabulatedFunction(std::vector<double> xs, std::vector<double> ys);

  static TabulatedFunction from_csv(const std::string& text);  // "x,f" lines, '#' comments
  static TabulatedFunction sample(const std::function<double(double)>& f, double lambda, int max_power,
                                  int per_power = 4);  // grid lambda^{i / per_power}
  std::string to_csv() const;

  double operator()(double x) const;
  double max_x() const { return xs_.back(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  uint64_t hash() const;  // FNV-1a over the serialized table

  // Monotonicity plus f(x + y) <= f(x) + f(y) on grid pairs.
  CheckReport validate() const;

 private:
  std::vector<double> xs_, ys_;
};

// Fixtures used by tests and the synthesis examples.
TabulatedFunction power_fixture(double alpha, double lambda, int max_power);
TabulatedFunction log_ratio_fixture(double lambda, int max_power);   // max(x^a0, x / log(e + x))
TabulatedFunction oscillating_fixture(double lambda, int max_power);  // alternates between x^a0 and x / log(e + x)

struct ScheduleTerm {
  int m = 0;
  double theta = 0;
  double phi = 0;  // lambda^{m - theta} = f(lambda^m) / 2^theta
};

struct SynthesisSchedule {
  double lambda = 0;
  double c_lambda = 0;
  std::vector<ScheduleTerm> terms;  // terms[0] = (0, 0, f(1))
  std::string to_json() const;
};

double c_lambda(double lambda);
// First J terms after the seed (m_0, theta_0) = (0, 0). Throws InvalidInput
// if f < x^{1/log2 lambda} on the grid, BudgetExceeded (with the number of
// finished terms) if the grid runs out.
SynthesisSchedule schedule(const TabulatedFunction& f, double lambda, int J);
// As many terms as the grid supports, at most `cap`.
SynthesisSchedule schedule_full(const TabulatedFunction& f, double lambda, int cap = 200);
CheckReport schedule_invariants(const TabulatedFunction& f, const SynthesisSchedule& s);

struct SandwichSample {
  double x = 0, f = 0, lower = 0, upper = 0;
};
// Lower: c_lambda sum_{lambda^theta_i <= x} 2^theta_i min(lambda^-theta_i x, phi_i).
// Upper: lambda times the max of the same terms.
SandwichSample sandwich_at(const TabulatedFunction& f, const SynthesisSchedule& s, double x);
CheckReport sandwich_check(const TabulatedFunction& f, const SynthesisSchedule& s, const std::vector<double>& xs);
// Deterministic sample points: every lambda^{m_j} in range plus `count`
// log-uniform points below the first abscissa that a missing term could reach.
std::vector<double> sandwich_samples(const SynthesisSchedule& s, std::size_t count, uint64_t seed);

// ---- lamp groups ----

struct LibraryGroup {
  std::string name;
  FiniteGroupSpec spec;
  FiniteGroupPtr group;
};

// PSL_2(Z/5^i), i <= 3, dihedral groups and the two smallest abelian ones,
// all marked by u1, v1, v2, v3. Built lazily and shared.
const std::vector<LibraryGroup>& expander_library();
const LibraryGroup& library_group(const std::string& name);

// max over l in [1, diam] of max(l / log v(l), log v(l) / l) for Phi(l) = l.
double measure_c0(const FiniteGroup& g);

struct LampEntry {
  int level = 0;
  std::string name;
  FiniteGroupSpec spec;
  FiniteGroupPtr group;
  double requested_diameter = 0;
  double distortion = 1;
};

struct LampPlan {
  std::map<int, LampEntry> levels;  // absent levels carry the trivial lamp
  double c0 = 0;
  std::string to_json() const;
  int max_level() const { return levels.empty() ? 0 : levels.rbegin()->first; }
};

// F_{floor theta_j} gets the library group whose diameter is nearest floor(phi_j).
LampPlan lamp_plan_from_schedule(const SynthesisSchedule& s, double max_distortion = 8.0);
LampPlan make_plan(const std::vector<std::pair<int, std::string>>& levels);
// Checks log v_F(l) within [l / c0, c0 l] and l >= log(1 + l) / c0 for every lamp.
CheckReport check_growth_assumption(const LampPlan& plan);

// ---- bounds ----

std::vector<int> J_r(int r, const LampPlan& plan, const Constants& k);
double upper_bound(int r, const LampPlan& plan, const Constants& k);
double lower_bound(int r, const LampPlan& plan, const Constants& k);
double main_sum(int r, const LampPlan& plan, const Constants& k, bool use_max);

enum class Regime { Small, Middle, Saturated };  // (i), (ii), (iii)
struct RegimeValue {
  Regime regime;
  double value;
};
RegimeValue factor_regime(int n, double r, const FiniteGroup& F, const Constants& k);
std::string regime_name(Regime r);

// Diagonal product of Delta_1..Delta_L for the plan (trivial lamps where absent).
MarkedGroupPtr plan_group(const LampPlan& plan, int max_level);

struct EmpiricalReport {
  std::vector<uint64_t> volume;                    // v_Delta(r)
  std::vector<std::vector<uint64_t>> factor_volume;  // per level
  std::vector<double> upper, lower;
  double upper_ratio = 0;  // max log v / (upper / C)
  double lower_ratio = 0;  // min log v / (lower * C)
  CheckReport report;
  std::string to_json() const;
};

// Exact BFS volumes against the bound curves. Dominance v_Delta >= max factor
// v is asserted exactly; the upper curve is asserted with k.main_upper when
// it is positive.
EmpiricalReport empirical_vs_bounds(const LampPlan& plan, int max_level, int R, const Constants& k,
                                    const BallOptions& opt = {});

// The reference plans behind the calibrated constant.
std::vector<LampPlan> reference_plans();

std::string manifest_json(const TabulatedFunction& f, const SynthesisSchedule& s, const LampPlan& plan,
                          const Constants& k);

}  // namespace selfsim
