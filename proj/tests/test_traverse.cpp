#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "selfsim/constants.hpp"
#include "selfsim/error.hpp"
#include "selfsim/finite_group.hpp"
#include "selfsim/traverse.hpp"

using namespace selfsim;

namespace {

const OmegaString kGrig = OmegaString::grigorchuk();

Word random_word(std::mt19937_64& rng, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(Letter::tree(int(rng() % 4)));
  return w;
}

// P~ straight from the recursive definition, with every prefix evaluated
// from scratch.
std::vector<std::string> raw_oracle(const Word& w, int n) {
  uint32_t one = Vertex::ones(n).value, zero = Vertex::ones_then_zero(n).value;
  std::vector<std::string> raw(std::size_t(1) << n);
  raw[one] = "1";
  raw[zero] = "0";
  for (std::size_t i = 1; i <= w.size(); ++i) {
    TreeAut g = evaluate_word(Word(w.begin(), w.begin() + i), kGrig, n);
    raw[g.preimage(one, n)] += '1';
    raw[g.preimage(zero, n)] += '0';
  }
  return raw;
}

std::string collapse(const std::string& s) {
  std::string out;
  for (char c : s)
    if (out.empty() || out.back() != c) out += c;
  return out;
}

bool alternates(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1]) return false;
  return true;
}

}  // namespace

TEST_CASE("inverted orbit of abaca") {
  InvertedOrbitPair p = inverted_orbit_pair(parse_word("abaca"), 2);
  std::vector<std::pair<std::string, std::string>> want = {{"11", "10"}, {"01", "00"}, {"01", "00"},
                                                           {"10", "11"}, {"10", "11"}, {"00", "01"}};
  REQUIRE(p.pairs.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(p.pairs[i].first.str() == want[i].first);
    CHECK(p.pairs[i].second.str() == want[i].second);
  }
  InvertedOrbitPair e = inverted_orbit_pair(Word{}, 4);
  REQUIRE(e.pairs.size() == 1);
  CHECK(e.pairs[0].first == Vertex::ones(4));
  CHECK(e.pairs[0].second == Vertex::ones_then_zero(4));
}

TEST_CASE("Klein letters keep the pair fixed") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + int(rng() % 8);
    Word w = random_word(rng, 1 + int(rng() % 20));
    InvertedOrbitPair p = inverted_orbit_pair(w, n);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i].is_klein()) REQUIRE(p.pairs[i + 1] == p.pairs[i]);
  }
}

TEST_CASE("traverse field examples") {
  TraverseField t = traverse_field(parse_word("abaca"), 2);
  CHECK(t.raw[Vertex::parse("01").value] == "110");
  CHECK(t.pattern[Vertex::parse("01").value] == "10");
  CHECK(t.A == 8);
  for (int n = 1; n <= 6; ++n) {
    TraverseField e = traverse_field(Word{}, n);
    CHECK(e.pattern[Vertex::ones(n).value] == "1");
    CHECK(e.pattern[Vertex::ones_then_zero(n).value] == "0");
    CHECK(e.A == 2);
  }
}

TEST_CASE("traverse field matches the definition") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + int(rng() % 6);
    Word w = random_word(rng, int(rng() % 25));
    TraverseField t = traverse_field(w, n);
    auto raw = raw_oracle(w, n);
    REQUIRE(t.raw == raw);
    uint64_t A = 0;
    for (std::size_t x = 0; x < raw.size(); ++x) {
      REQUIRE(t.pattern[x] == collapse(raw[x]));
      REQUIRE(alternates(t.pattern[x]));
      A += t.pattern[x].size();
    }
    REQUIRE(t.A == A);
    REQUIRE(t.A <= 2 * w.size() + 2);
    REQUIRE(traverse_A(w, n) == t.A);
  }
}

TEST_CASE("pre-reduction keeps the traverse field") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 1 + int(rng() % 7);
    Word w = random_word(rng, int(rng() % 30));
    REQUIRE(traverse_field(w, n).pattern == traverse_field(pre_reduce(w), n).pattern);
  }
}

TEST_CASE("embedding order") {
  CHECK(embeds("10", "110"));
  CHECK(embeds("1010", "1010"));
  CHECK(embeds("", "0"));
  CHECK_FALSE(embeds("101", "01"));
  CHECK_FALSE(embeds("01", "10"));
}

TEST_CASE("recursion monotonicity") {
  for (int n = 2; n <= 4; ++n) CHECK(recursion_monotonicity_check(parse_word("abaca"), n).ok);
  CHECK(recursion_monotonicity_check(Word{}, 3).ok);
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 2 + int(rng() % 5);
    CheckReport r = recursion_monotonicity_check(random_word(rng, int(rng() % 31)), n);
    REQUIRE_MESSAGE(r.ok, (r.failures.empty() ? "" : r.failures.front()));
  }
}

TEST_CASE("superadditivity over the first level") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 2 + int(rng() % 6);
    Word w = random_pre_reduced_word(rng, int(rng() % 60));
    RecursionResult r = formal_recursion(w);
    REQUIRE(traverse_A(w, n) <= traverse_A(r.w0, n - 1) + traverse_A(r.w1, n - 1));
  }
}

TEST_CASE("max A against brute force") {
  for (int n = 1; n <= 8; ++n) CHECK(max_A(n, 0, MaxAMode::Exhaustive).value == 2);
  for (int n = 2; n <= 4; ++n) {
    for (int r = 1; r <= 6; ++r) {
      uint64_t best = 0;
      std::size_t total = std::size_t(1) << (2 * r);
      for (std::size_t code = 0; code < total; ++code) {
        Word w;
        for (int i = 0; i < r; ++i) w.push_back(Letter::tree(int((code >> (2 * i)) & 3)));
        best = std::max(best, traverse_A(w, n));
      }
      // words of length < r are padded by Klein letters, so length r suffices
      MaxAResult m = max_A(n, r, MaxAMode::Exhaustive);
      CHECK(m.exact);
      CHECK(m.value == best);
      CHECK(traverse_A(m.witness, n) == m.value);
    }
  }
}

TEST_CASE("max A is deterministic and bounded") {
  MaxAOptions one, many;
  many.workers = 4;
  MaxAResult a = max_A(5, 10, MaxAMode::Exhaustive, one), b = max_A(5, 10, MaxAMode::Exhaustive, many);
  CHECK(a.value == b.value);
  CHECK(a.by_length == b.by_length);
  CHECK(a.witness == b.witness);
  for (std::size_t len = 1; len < a.by_length.size(); ++len)
    CHECK(double(a.by_length[len]) <= constants::kAContract * contraction_scale(5, len, constants::kEta));
  MaxAOptions s;
  s.samples = 500;
  s.seed = 3;
  MaxAResult x = max_A(6, 40, MaxAMode::Sampled, s), y = max_A(6, 40, MaxAMode::Sampled, s);
  CHECK_FALSE(x.exact);
  CHECK(x.value == y.value);
  CHECK(x.value <= 2 * 40 + 2);
  CHECK_THROWS_AS(max_A(3, 25, MaxAMode::Exhaustive), BudgetExceeded);
  CHECK_THROWS(contraction_scale(2, 10, constants::kEta));
  std::string csv = sweep_csv({a}, constants::kAContract, constants::kEta);
  CHECK(csv.rfind("n,r,max_A,exact,bound,ratio\n5,10,", 0) == 0);
}

TEST_CASE("zeta probes") {
  for (int n = 1; n <= 5; ++n) {
    for (int reps = 1; reps <= 3; ++reps) {
      Word probe = zeta_probe(n, reps);
      CHECK(probe.size() == 2 * reps * zeta_word_length(n));
      TraverseField t = traverse_field(probe, n);
      for (const auto& p : t.pattern) CHECK(p.size() >= std::size_t(2 * reps));
      CHECK(t.A >= (uint64_t(1) << n) * 2 * reps);
    }
    // the inverted orbit of 1^n under w_n covers the level
    std::vector<bool> seen(std::size_t(1) << n);
    for (const auto& pr : inverted_orbit_pair(zeta_word(n), n).pairs) seen[pr.first.value] = true;
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("configuration words: single target and length audit") {
  const int n = 3, ell = 2;
  FiniteGroupSpec spec = klein_lamp_spec();
  FiniteGroup F(spec);
  DeltaFactorSpec ds;
  ds.level = n;
  ds.lamp = spec;
  auto g = build_delta_n(ds);
  Word w = configuration_word(std::map<uint32_t, Word>{{Vertex::ones(n).value, parse_word("u1")}}, *g, 1);
  WreathElement e = evaluate_m_word(w, *g);
  CHECK(e.lamps == LampConfig{{Vertex::ones(n).value, g->lamp()->generator(0)}});
  CHECK(e.base == evaluate_word(tree_part(w), kGrig, g->base_depth()));

  std::map<uint32_t, uint32_t> full;
  for (uint32_t x = 0; x < (1u << n); ++x) full[x] = x % F.order();
  Word all = configuration_word(full, *g, F, ell);
  CHECK(all.size() <= std::size_t(ell) * (zeta_word_length(n) + (1u << n)));
  CHECK_THROWS(configuration_word(std::map<uint32_t, Word>{{0, parse_word("u1.v1.u1")}}, *g, 2));
}
