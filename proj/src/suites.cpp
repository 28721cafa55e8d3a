#include "selfsim/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "json.hpp"

#include "selfsim/central.hpp"
#include "selfsim/constants.hpp"
#include "selfsim/error.hpp"
#include "selfsim/growth.hpp"
#include "selfsim/parallel.hpp"
#include "selfsim/traverse.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kKeptFailures = 20;

struct Ctx {
  const SuiteOptions& opt;
  CheckReport& rep;
  json& details;
  std::mt19937_64 rng(uint64_t salt) const {
    std::seed_seq seq{uint32_t(opt.seed), uint32_t(opt.seed >> 32), uint32_t(salt)};
    return std::mt19937_64(seq);
  }
  BallOptions ball_opt() const {
    BallOptions b;
    b.workers = opt.workers;
    return b;
  }
};

const OmegaString kGrig = OmegaString::grigorchuk();

void merge(CheckReport& into, const CheckReport& from, const std::string& prefix) {
  for (const auto& f : from.failures) into.fail(prefix + f);
}

std::string pair_str(const std::pair<Vertex, Vertex>& p) { return "(" + p.first.str() + "," + p.second.str() + ")"; }

// ---- 1 ----
void worked_example(Ctx& c) {
  Word w = parse_word("abaca");
  const std::vector<std::string> want = {"(11,10)", "(01,00)", "(01,00)", "(10,11)", "(10,11)", "(00,01)"};
  std::vector<std::string> got;
  for (const auto& p : inverted_orbit_pair(w, 2).pairs) got.push_back(pair_str(p));
  if (got != want) c.rep.fail("inverted orbit of abaca at level 2 differs from the displayed pairs");
  TraverseField tf = traverse_field(w, 2);
  uint32_t v = Vertex::parse("01").value;
  if (tf.raw[v] != "110") c.rep.fail("raw field at 01 is " + tf.raw[v] + ", expected 110");
  if (tf.pattern[v] != "10") c.rep.fail("P(01, abaca) = " + tf.pattern[v] + ", expected 10");
  c.details["pairs"] = got;
  c.details["raw_01"] = tf.raw[v];
  c.details["P_01"] = tf.pattern[v];
  c.details["A"] = tf.A;
}

// ---- 2 ----
void k_recursion(Ctx& c) {
  Word s = substitute_sigma(parse_word("abab"));
  if (to_string(s) != "abadabad") c.rep.fail("sigma(abab) = " + to_string(s));
  RecursionResult r = formal_recursion(s);
  if (!free_reduce(r.w0).empty() || to_string(free_reduce(r.w1)) != "abab" || r.swap != 0)
    c.rep.fail("phi(sigma([a,b])) = (" + to_string(r.w0) + ", " + to_string(r.w1) + ") is not (id, abab)");
  RecursionResult k = formal_recursion(power(parse_word("ad"), 4));
  if (!free_reduce(k.w0).empty() || !free_reduce(k.w1).empty() || k.swap != 0)
    c.rep.fail("(ad)^4 is not in the kernel of phi");

  const int depth = 8, samples = 200;
  TreeGenerators g8(kGrig, depth), g7(kGrig, depth - 1), g6(kGrig, 6);
  auto rng = c.rng(2);
  int checked_k = 0;
  for (int i = 0; i < samples; ++i) {
    Word w = random_K_word(rng(), 6, 1 + i % 3);
    TreeAut x = evaluate_word(substitute_sigma(w), g8);
    TreeAut want1 = evaluate_word(w, g7);
    if (x.bit(0) || !x.section(Vertex{0, 1}).is_identity() || !(x.section(Vertex{1, 1}) == want1)) {
      c.rep.fail("phi(sigma(w)) != (id, w) for w = " + to_string(w));
      continue;
    }
    // phi^k(sigma^k(w)) is supported on 1^k with section w
    if (i < 20) {
      for (int kk = 2; kk <= 3; ++kk) {
        SectionMap m = iterate_recursion(substitute_sigma(w, kk), kk);
        bool ok = m.top.is_identity();
        uint32_t ones = Vertex::ones(kk).value;
        for (uint32_t v = 0; v < m.sections.size() && ok; ++v) {
          TreeAut e = evaluate_word(m.sections[v], g6);
          ok = v == ones ? e == evaluate_word(w, g6) : e.is_identity();
        }
        if (!ok) c.rep.fail("phi^" + std::to_string(kk) + "(sigma^" + std::to_string(kk) + "(w)) not supported on 1^k for w = " + to_string(w));
        ++checked_k;
      }
    }
  }
  c.details["samples"] = samples;
  c.details["depth"] = depth;
  c.details["iterated_checks"] = checked_k;
}

// ---- 3 ----
void short_section(Ctx& c) {
  auto rng = c.rng(3);
  json per = json::object();
  for (int k = 3; k <= 7; ++k) {
    int maxlen = (1 << (k - 1)) - 1;
    auto d1 = schreier_distances(Vertex::ones(k), kGrig);
    auto d2 = schreier_distances(Vertex::ones_then_zero(k), kGrig);
    std::size_t near_ones = 0, near_sib = 0;
    for (uint32_t v = 0; v < d1.size(); ++v) {
      near_ones += d1[v] <= maxlen;
      near_sib += d2[v] <= maxlen;
    }
    for (int i = 0; i < 500; ++i) {
      int len = int(rng() % uint64_t(maxlen + 1));
      Word w = random_pre_reduced_word(rng, len);
      SectionMap m = iterate_recursion(w, k);
      for (uint32_t v = 0; v < m.sections.size(); ++v) {
        const Word& s = m.sections[v];
        std::string where = " at " + Vertex{v, k}.str() + " for w = " + to_string(w);
        if (s.size() > 1) {
          c.rep.fail("section " + to_string(s) + " longer than 1" + where);
        } else if (d1[v] <= maxlen && !s.empty() && !s[0].is_klein()) {
          c.rep.fail("section " + to_string(s) + " not in {id,b,c,d}" + where);
        } else if (d2[v] <= maxlen && !s.empty() && s[0].kind != LetterKind::A) {
          c.rep.fail("section " + to_string(s) + " not in {id,a}" + where);
        }
      }
    }
    per[std::to_string(k)] = {{"max_length", maxlen}, {"words", 500}, {"near_1k", near_ones}, {"near_1k0", near_sib}};
  }
  c.details["levels"] = per;
}

// ---- 4 ----
void contraction(Ctx& c) {
  NormWeights nw = solve_norm_weights();
  double alpha = std::log(2.0) / std::log(2.0 / nw.eta);
  if (!(std::fabs(alpha - 0.7674) < 1e-3)) c.rep.fail("log 2 / log(2/eta) = " + std::to_string(alpha));
  double lam = 2.0 / nw.eta;
  if (std::fabs(lam * lam * lam - lam * lam - 2 * lam - 4) > 1e-9) c.rep.fail("2/eta is not a root of X^3-X^2-2X-4");
  auto rng = c.rng(4);
  double worst = -1e300;
  Word worst_w;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    Word w = random_pre_reduced_word(rng, int(rng() % 61));
    RecursionResult r = formal_recursion(w);
    double lhs = weighted_norm(pre_reduce(r.w0), nw) + weighted_norm(pre_reduce(r.w1), nw);
    double rhs = nw.eta * weighted_norm(w, nw) + nw.C;
    if (lhs - rhs > worst) {
      worst = lhs - rhs;
      worst_w = w;
    }
    if (lhs > rhs + 1e-9) c.rep.fail("contraction fails for w = " + to_string(w));
  }
  c.details["eta"] = nw.eta;
  c.details["weights"] = {nw.wa, nw.wb, nw.wc, nw.wd};
  c.details["C"] = nw.C;
  c.details["alpha0"] = alpha;
  c.details["samples"] = samples;
  c.details["max_lhs_minus_rhs"] = worst;
  c.details["tightest_word"] = to_string(worst_w);
}

// ---- 5 ----
void traverse(Ctx& c) {
  auto rng = c.rng(5);
  const int embed_samples = 10000;
  for (int i = 0; i < embed_samples; ++i) {
    int n = 2 + i % 5;
    Word w = random_pre_reduced_word(rng, int(rng() % 41));
    CheckReport r = recursion_monotonicity_check(w, n);
    if (!r.ok) c.rep.fail("P-recursion, n = " + std::to_string(n) + ", w = " + to_string(w) + ": " + r.failures[0]);
  }
  const double C = constants::kAContract, eta = constants::kEta;
  json sweep = json::array();
  double worst = 0;
  for (int n = 3; n <= 8; ++n) {
    MaxAOptions o;
    o.workers = c.opt.workers;
    MaxAResult res = max_A(n, 12, MaxAMode::Exhaustive, o);
    double nworst = 0;
    for (int L = 0; L <= 12; ++L) {
      double ratio = double(res.by_length[L]) / contraction_scale(n, uint64_t(L), eta);
      nworst = std::max(nworst, ratio);
      if (ratio > C)
        c.rep.fail("A(" + std::to_string(n) + ", len " + std::to_string(L) + ") = " + std::to_string(res.by_length[L]) +
                   " exceeds the frozen bound");
    }
    worst = std::max(worst, nworst);
    sweep.push_back({{"n", n}, {"max_A", res.by_length}, {"worst_ratio", nworst}});
  }
  const int long_samples = 10000;
  double sworst = 0;
  for (int i = 0; i < long_samples; ++i) {
    int n = 3 + i % 6;
    int len = 13 + int(rng() % 288);
    Word w = random_pre_reduced_word(rng, len);
    double ratio = double(traverse_A(w, n)) / contraction_scale(n, uint64_t(len), eta);
    sworst = std::max(sworst, ratio);
    if (ratio > C) c.rep.fail("A(" + std::to_string(n) + ", w) exceeds the frozen bound for w = " + to_string(w));
  }
  c.details["embedding_samples"] = embed_samples;
  c.details["C"] = C;
  c.details["exhaustive"] = sweep;
  c.details["exhaustive_worst_ratio"] = worst;
  c.details["sampled_words"] = long_samples;
  c.details["sampled_worst_ratio"] = sworst;
}

// ---- 6 ----
void zeta(Ctx& c) {
  json cov = json::array(), band = json::array();
  for (int n = 1; n <= 6; ++n) {
    auto orbit = inverted_orbit_pair(zeta_word(n), n);
    std::set<uint32_t> seen;
    for (const auto& p : orbit.pairs) seen.insert(p.first.value);
    if (seen.size() != (std::size_t(1) << n)) c.rep.fail("zeta word " + std::to_string(n) + " misses vertices of L_n");
    cov.push_back(seen.size());
  }
  for (int n = 0; n <= 8; ++n) {
    uint64_t len = zeta_word_length(n);
    if (len != zeta_word(n).size()) c.rep.fail("length formula disagrees with zeta_word at n = " + std::to_string(n));
    double ratio = double(len) / std::pow(constants::kLambda0, n);
    if (ratio < constants::kZetaBandLo || ratio > constants::kZetaBandHi)
      c.rep.fail("|w_" + std::to_string(n) + "| / (2/eta)^n = " + std::to_string(ratio) + " leaves the band");
    band.push_back({{"n", n}, {"length", len}, {"ratio", ratio}});
  }
  c.details["covered"] = cov;
  c.details["band"] = {constants::kZetaBandLo, constants::kZetaBandHi};
  c.details["lengths"] = band;
}

// ---- 7 ----
void convergence(Ctx& c) {
  std::map<int, MarkedGroupPtr> delta;
  for (int n = 2; n <= 5; ++n)
    delta[n] = build_delta_n({.level = n, .lamp = klein_lamp_spec(), .omega = kGrig});
  json d = json::array(), g = json::array();
  for (int n = 2; n <= 5; ++n)
    for (int m = n + 1; m <= 5; ++m) {
      int cap = (1 << (n - 1)) - 1;
      int r = matching_radius(delta[n], delta[m], cap, c.ball_opt());
      if (r < cap)
        c.rep.fail("Delta_" + std::to_string(n) + " and Delta_" + std::to_string(m) + " differ at radius " +
                   std::to_string(r + 1));
      d.push_back({{"n", n}, {"m", m}, {"radius", cap}, {"matched", r}});
    }
  for (int n = 1; n <= 4; ++n)
    for (int m = n + 1; m <= 4; ++m) {
      int cap = (1 << (n - 1)) - 1;
      CheckReport r = gamma_ball_coincidence(n, m, cap, c.ball_opt());
      merge(c.rep, r, "");
      g.push_back({{"n", n}, {"m", m}, {"radius", cap}, {"ok", r.ok}});
    }
  c.details["delta_klein"] = d;
  c.details["gamma"] = g;
}

// ---- 8 ----
void kdelta(Ctx& c) {
  std::vector<WreathGroupPtr> factors;
  std::vector<MarkedGroupPtr> generic;
  for (int n = 1; n <= 5; ++n) {
    factors.push_back(build_delta_n({.level = n, .lamp = s3_lamp_spec(), .omega = kGrig}));
    generic.push_back(factors.back());
  }
  auto prod = std::dynamic_pointer_cast<const DiagonalProduct>(diagonal_product(generic));
  json words = json::array();
  for (int n = 1; n <= 5; ++n) {
    Word w = kdelta_word(n);
    auto parts = prod->split(evaluate(*prod, w));
    for (int j = 1; j <= 5; ++j) {
      const WreathGroup& G = *factors[j - 1];
      if (j == n) {
        Key lamp = evaluate(*G.lamp(), parse_word("u1.v1.U1.V1"));
        WreathElement want{{{Vertex::ones(n).value, lamp}}, TreeAut(G.base_depth())};
        if (!(G.element(parts[j - 1]) == want))
          c.rep.fail("level " + std::to_string(n) + " word " + to_string(w) + " is not (delta_1^n^[u,v], id)");
      } else if (parts[j - 1] != G.identity()) {
        c.rep.fail("level " + std::to_string(n) + " word is nontrivial in factor " + std::to_string(j));
      }
    }
    words.push_back(to_string(w));
  }
  c.details["lamp"] = "Sym(3)";
  c.details["words"] = words;
}

// ---- 9 ----
void center(Ctx& c) {
  json orbits = json::array();
  for (int n = 1; n <= 4; ++n) {
    auto M = orbit_Mn(n);
    if (!M->trivial_sign) c.rep.fail("M_" + std::to_string(n) + " does not have trivial sign");
    orbits.push_back({{"n", n}, {"size", M->size}});
  }
  TreeAut x = evaluate_word(parse_word("abab"), kGrig, 3);
  if (x.is_identity()) c.rep.fail("abab is trivial in G_3");
  if (x.bit(0) || !(x.section(Vertex{0, 1}) == evaluate_word(parse_word("ca"), kGrig, 2)) ||
      !(x.section(Vertex{1, 1}) == evaluate_word(parse_word("ac"), kGrig, 2)))
    c.rep.fail("abab is not (ca, ac) in G_3");

  GrowthProfile g3 = ball(*tree_quotient(kGrig, 3), 40, c.ball_opt());
  uint64_t closure = g3.counts.back();
  if (closure != uint64_t(G3Table::get().order()) || closure != 128)
    c.rep.fail("|G_3| by closure " + std::to_string(closure) + " disagrees with the shared table " +
               std::to_string(G3Table::get().order()));

  json witnesses = json::array();
  for (int n = 1; n <= 3; ++n) {
    CenterWitness w = center_witness(n);
    merge(c.rep, w.report, "witness " + std::to_string(n) + ": ");
    witnesses.push_back(json::parse(w.to_json()));
  }
  merge(c.rep, center_direct_sum_check(3), "direct sum: ");
  for (int n = 1; n <= 2; ++n) merge(c.rep, center0_check(n, 4, c.ball_opt()), "center0, n = " + std::to_string(n) + ": ");

  // cocycle orientation against the normal-form oracle
  auto M = orbit_Mn(1);
  std::vector<uint32_t> pool;
  for (uint32_t p = 0; p < M->points && pool.size() < 12; ++p)
    if (!M->out[p].empty()) {
      pool.push_back(p);
      pool.push_back(M->out[p][0]);
    }
  auto rng = c.rng(9);
  int products = 2000;
  for (int i = 0; i < products; ++i) {
    std::vector<std::pair<uint32_t, int>> letters;
    NilElement acc;
    for (int l = 0; l < 10; ++l) {
      uint32_t p = pool[rng() % pool.size()];
      int e = (rng() & 1) ? 1 : -1;
      letters.push_back({p, e});
      acc = nil_multiply(acc, nil_generator(p, e), *M);
    }
    if (!(nil_normal_form(letters, *M) == acc)) {
      c.rep.fail("cocycle product disagrees with the normal-form oracle");
      break;
    }
  }
  c.details["orbits"] = orbits;
  c.details["G3_order"] = closure;
  c.details["witnesses"] = witnesses;
  c.details["oracle_products"] = products;
}

// ---- 10 ----
void synthesis(Ctx& c) {
  Constants k = Constants::standard();
  const double L = k.lambda0;
  const std::vector<std::pair<std::string, TabulatedFunction>> fixtures = {
      {"x^alpha0", power_fixture(k.alpha0, L, 60)},
      {"x^0.85", power_fixture(0.85, L, 60)},
      {"x^0.95", power_fixture(0.95, L, 60)},
      {"max(x^alpha0, x/log(e+x))", log_ratio_fixture(L, 60)},
      {"oscillating", oscillating_fixture(L, 60)},
  };
  double cl = c_lambda(L);
  if (cl != std::min({0.5 - 1.0 / L, 1.0 / (2.0 * L), L / 2.0 - 1.0})) c.rep.fail("c_lambda formula");
  json out = json::array();
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& [name, f] = fixtures[i];
    SynthesisSchedule s = schedule_full(f, L);
    CheckReport inv = schedule_invariants(f, s);
    merge(c.rep, inv, name + ": ");
    std::vector<double> xs = sandwich_samples(s, 1000, c.opt.seed + i);
    CheckReport sw = sandwich_check(f, s, xs);
    merge(c.rep, sw, name + ": ");
    // lattice points lambda^m alone, where the argument is made
    std::vector<double> lattice;
    double hi = std::min(std::pow(L, s.terms.back().m), std::pow(L, s.terms.back().theta + 1));
    for (int m = 0; std::pow(L, m) < hi; ++m) lattice.push_back(std::pow(L, m));
    CheckReport lat = sandwich_check(f, s, lattice);
    double worst_up = 0, worst_low = 0;
    for (double x : xs) {
      SandwichSample p = sandwich_at(f, s, x);
      worst_up = std::max(worst_up, p.f / p.upper);
      worst_low = std::max(worst_low, p.lower / p.f);
    }
    out.push_back({{"f", name},
                   {"terms", s.terms.size() - 1},
                   {"samples", xs.size()},
                   {"violations", sw.failures.size()},
                   {"max_f_over_upper", worst_up},
                   {"max_lower_over_f", worst_low},
                   {"lattice_points", lattice.size()},
                   {"lattice_violations", lat.failures.size()},
                   {"invariants_ok", inv.ok}});
    char note[256];
    std::snprintf(note, sizeof note, "%s: %zu terms, %zu/%zu sandwich violations (max f/upper %.3f), %zu/%zu on the lattice, invariants %s",
                  name.c_str(), s.terms.size() - 1, sw.failures.size(), xs.size(), worst_up, lat.failures.size(),
                  lattice.size(), inv.ok ? "ok" : "FAIL");
    c.rep.notes.push_back(note);
  }
  c.details["lambda"] = L;
  c.details["c_lambda"] = cl;
  c.details["fixtures"] = out;
}

// ---- 11 ----
void volume_bounds(Ctx& c) {
  Constants k = Constants::standard();
  json plans = json::array();
  for (const LampPlan& p : reference_plans()) {
    EmpiricalReport r = empirical_vs_bounds(p, p.max_level(), 10, k, c.ball_opt());
    merge(c.rep, r.report, p.to_json() + ": ");
    for (int rr = 1; rr <= 10; ++rr)
      if (upper_bound(rr, p, k) < lower_bound(rr, p, k)) c.rep.fail("upper below lower at r = " + std::to_string(rr));
    plans.push_back({{"plan", json::parse(p.to_json())},
                     {"volume", r.volume},
                     {"upper_ratio", r.upper_ratio},
                     {"lower_ratio", r.lower_ratio}});
  }
  c.details["C"] = k.main_upper;
  c.details["radius"] = 10;
  c.details["plans"] = plans;
}

// ---- supporting ----
void theta_identity(Ctx& c) {
  json done = json::array();
  for (auto [i, depth] : std::vector<std::pair<int, int>>{{1, 6}, {2, 8}, {3, 9}}) {
    merge(c.rep, theta_identity_check(i, depth), "theta_" + std::to_string(i) + ": ");
    done.push_back({{"i", i}, {"depth", depth}});
  }
  c.details["checks"] = done;
}

void recursion_soundness(Ctx& c) {
  auto rng = c.rng(12);
  TreeGenerators g8(kGrig, 8);
  std::map<int, TreeGenerators> by_depth;
  for (int d = 1; d <= 10; ++d) by_depth.emplace(d, TreeGenerators(kGrig, d));
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    Word w;
    int len = int(rng() % 25);
    for (int l = 0; l < len; ++l) w.push_back(Letter::tree(int(rng() % 4)));
    Word p = pre_reduce(w);
    if (!is_pre_reduced(p) || pre_reduce(p) != p) c.rep.fail("pre_reduce not idempotent on " + to_string(w));
    if (!(evaluate_word(p, g8) == evaluate_word(w, g8))) c.rep.fail("pre_reduce changes the image of " + to_string(w));
    int kk = 1 + i % 6, m = 1 + (i / 6) % 4;
    SectionMap sm = iterate_recursion(w, kk);
    std::vector<TreeAut> secs;
    for (const auto& s : sm.sections) secs.push_back(evaluate_word(s, by_depth.at(m)));
    if (!(assemble(sm.top, secs) == evaluate_word(w, by_depth.at(kk + m))))
      c.rep.fail("reassembled recursion differs at depth " + std::to_string(kk + m) + " for " + to_string(w));
  }
  c.details["samples"] = samples;
}

void embedding(Ctx& c) {
  json runs = json::array();
  for (int n = 1; n <= 3; ++n) {
    merge(c.rep, theta_embedding_check(n, 5, klein_lamp_spec()), "n = " + std::to_string(n) + ": ");
    runs.push_back({{"n", n}, {"max_len", 5}, {"lamp", "Klein"}});
  }
  c.details["runs"] = runs;
}

struct SuiteDef {
  std::string name, title;
  std::function<void(Ctx&)> run;
};

const std::vector<SuiteDef>& defs() {
  static const std::vector<SuiteDef> d = {
      {"worked-example", "inverted orbit and traverse field of abaca at level 2", worked_example},
      {"k-recursion", "phi(sigma(w)) = (id, w) on K, (ad)^4 in ker phi", k_recursion},
      {"short-section", "sections of short words have length <= 1 with the stated placement", short_section},
      {"contraction", "weighted norm contraction and alpha0", contraction},
      {"traverse", "P-recursion embedding and the A-contraction bound", traverse},
      {"zeta", "zeta words cover L_n; length band", zeta},
      {"convergence", "Delta_n and Gamma_n ball coincidence", convergence},
      {"kdelta", "commutator witnesses in the diagonal product of Delta_1..5", kdelta},
      {"center", "trivial-sign orbits, G_3, center witnesses", center},
      {"synthesis", "schedule invariants and the sandwich inequality", synthesis},
      {"volume-bounds", "diagonal product volumes against the calibrated bound", volume_bounds},
      {"theta-identity", "theta_i commutator identities", theta_identity},
      {"recursion-soundness", "pre-reduction and iterated recursion against evaluation", recursion_soundness},
      {"embedding", "theta embedding of Delta_{n+1} into the level-1 wreath", embedding},
  };
  return d;
}

}  // namespace

std::string SuiteResult::to_json() const {
  json j;
  j["suite"] = name;
  j["title"] = title;
  j["ok"] = report.ok;
  j["failures"] = report.failures;
  j["notes"] = report.notes;
  j["details"] = json::parse(details);
  return j.dump();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : defs()) v.push_back(d.name);
    return v;
  }();
  return names;
}

std::vector<std::string> expand_suite(const std::string& name) {
  if (name == "all") return suite_names();
  if (name == "recursion") return {"k-recursion", "short-section", "theta-identity", "recursion-soundness"};
  for (const auto& d : defs())
    if (d.name == name) return {name};
  throw InvalidInput("unknown suite '" + name + "'");
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  for (const auto& d : defs()) {
    if (d.name != name) continue;
    SuiteResult res;
    res.name = d.name;
    res.title = d.title;
    json details = json::object();
    Ctx c{opt, res.report, details};
    d.run(c);
    if (res.report.failures.size() > kKeptFailures) {
      res.report.notes.push_back(std::to_string(res.report.failures.size()) + " failures, first " +
                                 std::to_string(kKeptFailures) + " kept");
      res.report.failures.resize(kKeptFailures);
    }
    res.details = details.dump();
    return res;
  }
  throw InvalidInput("unknown suite '" + name + "'");
}

CheckReport determinism_check(const std::vector<std::string>& names, uint64_t seed,
                              const std::vector<SuiteResult>& baseline) {
  CheckReport rep;
  int all = resolve_workers(0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string ref = i < baseline.size() ? baseline[i].to_json() : run_suite(names[i], {seed, 1}).to_json();
    for (int w : {1, 2, all}) {
      std::string again = run_suite(names[i], {seed, w}).to_json();
      if (again != ref) rep.fail(names[i] + " differs with " + std::to_string(w) + " workers");
    }
  }
  rep.notes.push_back("worker counts 1, 2, " + std::to_string(all));
  return rep;
}

}  // namespace selfsim
