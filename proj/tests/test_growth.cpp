#include <cmath>

#include "doctest.h"
#include "selfsim/error.hpp"
#include "selfsim/growth.hpp"

using namespace selfsim;

namespace {

const Constants K = Constants::standard();

// The schedule recomputed from its definition: scan m upwards for m' and m''.
// Both comparisons get a 1e-12 relative slack since f = x^alpha hits them
// with equality.
std::vector<ScheduleTerm> schedule_oracle(const TabulatedFunction& f, double lambda, int J) {
  auto g = [&](int m) { return f(std::pow(lambda, m)); };
  double q = std::log(2.0 / lambda);
  std::vector<ScheduleTerm> out{{0, 0, g(0)}};
  for (int j = 1; j <= J; ++j) {
    const ScheduleTerm& prev = out.back();
    int m1 = prev.m + 1, m2 = prev.m + 1;
    double target = std::pow(2.0 / lambda, prev.theta + 1);
    while (g(m1) / std::pow(lambda, m1) > target * (1 + 1e-12)) ++m1;
    while (g(m2) < 2 * g(prev.m) * (1 - 1e-12)) ++m2;
    int m = std::max(m1, m2);
    double theta = std::log(g(m) / std::pow(lambda, m)) / q;
    out.push_back({m, theta, std::pow(lambda, m - theta)});
  }
  return out;
}

}  // namespace

TEST_CASE("constants") {
  CHECK(K.alpha0 > 0.767);
  CHECK(K.alpha0 < 0.768);
  CHECK(K.lambda0 == doctest::Approx(2 / 0.8105357137661367));
  CHECK(K.main_upper > 0);
  for (double l : {K.lambda0, 3.0, 2.2})
    CHECK(c_lambda(l) == doctest::Approx(std::min({0.5 - 1 / l, 1 / (2 * l), l / 2 - 1})));
  CHECK(c_lambda(3.0) == doctest::Approx(1.0 / 6));
}

TEST_CASE("tabulated functions") {
  auto f = TabulatedFunction::from_csv("# comment\nx,f\n1,1\n2,1.5\n4,2.5\n");
  CHECK(f(1) == 1);
  CHECK(f(3) == doctest::Approx(2.0));
  CHECK(f(0.5) == 1);
  CHECK(f.validate().ok);
  CHECK(TabulatedFunction::from_csv(f.to_csv()).ys() == f.ys());
  CHECK_FALSE(TabulatedFunction::from_csv("1,2\n2,1\n").validate().ok);
  CHECK_THROWS_AS(TabulatedFunction::from_csv("1,2\n1,3\n"), InvalidInput);
  // superadditive tables are rejected by validation
  auto g = TabulatedFunction::from_csv("1,1\n2,3\n");
  CHECK_FALSE(g.validate().ok);
  for (auto t : {power_fixture(K.alpha0, K.lambda0, 30), log_ratio_fixture(K.lambda0, 30),
                 oscillating_fixture(K.lambda0, 30)})
    CHECK(t.validate().ok);
}

TEST_CASE("schedule for the boundary function") {
  auto f = power_fixture(K.alpha0, K.lambda0, 60);
  SynthesisSchedule s = schedule_full(f, K.lambda0);
  REQUIRE(s.terms.size() > 10);
  CHECK(s.terms[0].m == 0);
  CHECK(s.terms[0].theta == 0);
  for (const auto& t : s.terms) {
    CHECK(t.phi >= 1 - 1e-9);
    CHECK(t.phi == doctest::Approx(f(std::pow(K.lambda0, t.m)) / std::pow(2.0, t.theta)));
  }
  CHECK(schedule_invariants(f, s).ok);
  auto oracle = schedule_oracle(f, K.lambda0, int(s.terms.size()) - 1);
  for (std::size_t j = 0; j < s.terms.size(); ++j) {
    CHECK(s.terms[j].m == oracle[j].m);
    CHECK(s.terms[j].theta == doctest::Approx(oracle[j].theta).epsilon(1e-9));
  }
}

TEST_CASE("schedule against the definition on other fixtures") {
  for (auto f : {power_fixture(0.95, K.lambda0, 60), log_ratio_fixture(K.lambda0, 60)}) {
    SynthesisSchedule s = schedule_full(f, K.lambda0);
    auto oracle = schedule_oracle(f, K.lambda0, int(s.terms.size()) - 1);
    for (std::size_t j = 0; j < s.terms.size(); ++j) {
      CHECK(s.terms[j].m == oracle[j].m);
      CHECK(s.terms[j].theta == doctest::Approx(oracle[j].theta).epsilon(1e-9));
      if (j > 0) CHECK(s.terms[j].theta >= s.terms[j - 1].theta + 1 - 1e-9);
    }
  }
}

TEST_CASE("schedule errors") {
  CHECK_THROWS_AS(schedule(power_fixture(0.6, K.lambda0, 20), K.lambda0, 3), InvalidInput);
  CHECK_THROWS_AS(schedule(power_fixture(0.9, 2.0, 20), 2.0, 3), InvalidInput);
  auto f = power_fixture(K.alpha0, K.lambda0, 20);
  try {
    schedule(f, K.lambda0, 1000);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.completed >= 1);
    CHECK(schedule_full(f, K.lambda0).terms.size() == std::size_t(e.completed) + 1);
  }
}

TEST_CASE("sandwich") {
  auto f = power_fixture(K.alpha0, K.lambda0, 60);
  SynthesisSchedule s = schedule_full(f, K.lambda0);
  // at x = lambda^{m_j} the largest term is f itself
  for (std::size_t j = 1; j < s.terms.size(); ++j) {
    double x = std::pow(K.lambda0, s.terms[j].m);
    SandwichSample p = sandwich_at(f, s, x);
    CHECK(p.upper / K.lambda0 == doctest::Approx(p.f).epsilon(1e-9));
    CHECK(p.lower <= p.f);
  }
  CheckReport r = sandwich_check(f, s, sandwich_samples(s, 1000, 7));
  CHECK_MESSAGE(r.ok, (r.failures.empty() ? "" : r.failures.front()));
  CHECK(sandwich_samples(s, 100, 3) == sandwich_samples(s, 100, 3));

  // single term: both sides hold on the lattice
  SynthesisSchedule one = schedule(f, K.lambda0, 1);
  REQUIRE(one.terms.size() == 2);
  std::vector<double> lattice;
  for (int m = 0; m <= one.terms[1].m; ++m) lattice.push_back(std::pow(K.lambda0, m));
  CHECK(sandwich_check(f, one, lattice).ok);
}

TEST_CASE("lamp plans") {
  SynthesisSchedule s;
  s.lambda = K.lambda0;
  s.terms = {{0, 0, 1}, {3, 2.0, 1.0}};
  LampPlan p = lamp_plan_from_schedule(s);
  REQUIRE(p.levels.count(2));
  CHECK(p.levels.at(2).name == "Z2");
  CHECK(p.levels.at(2).group->diameter() == 1);
  CHECK(p.max_level() == 2);

  SynthesisSchedule seed_only;
  seed_only.lambda = K.lambda0;
  seed_only.terms = {{0, 0, 1}};
  CHECK(lamp_plan_from_schedule(seed_only).levels.empty());

  const LibraryGroup& psl = library_group("PSL2(Z/5)");
  CHECK(psl.group->order() == 60);
  CHECK(psl.group->diameter() == FiniteGroup(psl2_library_spec(1)).diameter());
  CHECK_THROWS(library_group("nope"));
  for (const LampPlan& plan : reference_plans()) CHECK(check_growth_assumption(plan).ok);
}

TEST_CASE("bounds") {
  LampPlan p = make_plan({{4, "Klein"}});
  double T4 = std::pow(K.lambda0, 4);
  CHECK(J_r(1, p, K).empty());
  CHECK(J_r(int(T4) + 1, p, K) == std::vector<int>{4});
  CHECK(upper_bound(5, p, K) == doctest::Approx(K.main_upper * std::pow(5.0, K.alpha0)));
  CHECK(lower_bound(5, p, K) == doctest::Approx(std::pow(5.0, K.alpha0) / K.main_upper));
  for (const LampPlan& plan : reference_plans())
    for (int r = 0; r <= 2000; r += 7) CHECK(upper_bound(r, plan, K) >= lower_bound(r, plan, K));
}

TEST_CASE("factor regimes") {
  const FiniteGroup& F = *library_group("PSL2(Z/5)").group;
  for (int n = 1; n <= 6; ++n) {
    CHECK(factor_regime(n, 1, F, K).regime == Regime::Small);
    CHECK(factor_regime(n, 1e9, F, K).regime == Regime::Saturated);
    double T = std::pow(2.0 / K.eta, n);
    CHECK(factor_regime(n, T, F, K).regime == Regime::Middle);
  }
  RegimeValue sat = factor_regime(3, 1e9, F, K);
  CHECK(sat.value == doctest::Approx(8 * std::log(60.0) + std::pow(1e9, K.alpha0)));
  CHECK(regime_name(Regime::Middle) == "ii");
}

TEST_CASE("empirical volumes dominate the factors") {
  LampPlan trivial;
  EmpiricalReport t = empirical_vs_bounds(trivial, 3, 6, K);
  CHECK(t.report.ok);
  LampPlan klein = make_plan({{2, "Klein"}});
  EmpiricalReport e = empirical_vs_bounds(klein, 3, 8, K);
  CHECK_MESSAGE(e.report.ok, (e.report.failures.empty() ? "" : e.report.failures.front()));
  for (std::size_t r = 0; r < e.volume.size(); ++r)
    for (const auto& fv : e.factor_volume) CHECK(e.volume[r] >= fv[r]);
  CHECK(e.upper_ratio <= K.main_upper);
}
