#include <set>

#include "doctest.h"
#include "selfsim/error.hpp"
#include "selfsim/finite_group.hpp"
#include "selfsim/marked_group.hpp"
#include "selfsim/wreath.hpp"

using namespace selfsim;

namespace {

const OmegaString kGrig = OmegaString::grigorchuk();

MarkedGroupPtr delta_klein(int n) {
  DeltaFactorSpec s;
  s.level = n;
  s.lamp = klein_lamp_spec();
  return build_delta_n(s);
}

// Brute force: evaluate every word of length <= r and count distinct keys.
std::vector<uint64_t> words_oracle(const MarkedGroup& g, int r) {
  std::vector<uint64_t> counts;
  std::set<Key> seen;
  std::vector<Key> layer{g.identity()};
  seen.insert(g.identity());
  counts.push_back(1);
  for (int len = 1; len <= r; ++len) {
    std::vector<Key> next;
    for (const Key& k : layer)
      for (std::size_t i = 0; i < g.rank(); ++i) {
        next.push_back(g.multiply(k, g.generator(i)));
        if (!g.is_involution(i)) next.push_back(g.multiply(k, g.inverse(g.generator(i))));
      }
    for (const Key& k : next) seen.insert(k);
    counts.push_back(seen.size());
    layer = std::move(next);
  }
  return counts;
}

}  // namespace

TEST_CASE("small balls in the tree quotients") {
  for (int k = 3; k <= 8; ++k) {
    GrowthProfile p = ball(*tree_quotient(kGrig, k), 2);
    CHECK(p.counts[0] == 1);
    CHECK(p.counts[1] == 5);
    CHECK(p.counts[2] == 11);
  }
  TrivialGroup triv({"a", "b", "c", "d"});
  for (uint64_t v : ball(triv, 6).counts) CHECK(v == 1);
}

TEST_CASE("ball agrees with brute force word enumeration") {
  auto g = tree_quotient(kGrig, 4);
  CHECK(ball(*g, 6).counts == words_oracle(*g, 6));
  auto d = delta_klein(2);
  CHECK(ball(*d, 5).counts == words_oracle(*d, 5));
}

TEST_CASE("ball invariants and determinism") {
  auto d = delta_klein(3);
  BallOptions one, many;
  many.workers = 4;
  GrowthProfile p = ball(*d, 9, one);
  CHECK(p.counts == ball(*d, 9, many).counts);
  BallOptions two;
  two.workers = 2;
  CHECK(p.counts == ball(*d, 9, two).counts);
  for (int r = 0; r + 1 <= p.radius(); ++r) {
    CHECK(p.counts[r] <= p.counts[r + 1]);
    CHECK(p.counts[r + 1] <= p.counts[r] * (2 * d->rank() + 1));
  }
  for (int m = 0; m <= p.radius(); ++m)
    for (int n = 0; m + n <= p.radius(); ++n) CHECK(p.counts[m + n] <= p.counts[m] * p.counts[n]);
  CHECK(p.to_csv().rfind("radius,count\n0,1\n1,", 0) == 0);
}

TEST_CASE("retained spheres partition the ball") {
  BallOptions opt;
  opt.retain = true;
  GrowthProfile p = ball(*tree_quotient(kGrig, 3), 5, opt);
  std::set<Key> all;
  std::size_t total = 0;
  for (const auto& s : p.spheres) {
    total += s.size();
    all.insert(s.begin(), s.end());
  }
  CHECK(total == p.counts.back());
  CHECK(all.size() == total);
}

TEST_CASE("budget") {
  BallOptions opt;
  opt.max_elements = 50;
  try {
    ball(*tree_quotient(kGrig, 6), 20, opt);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.completed >= 1);
    CHECK(e.completed < 20);
  }
  opt.throw_on_budget = false;
  GrowthProfile p = ball(*tree_quotient(kGrig, 6), 20, opt);
  CHECK_FALSE(p.complete);
}

TEST_CASE("matching radius") {
  auto g = tree_quotient(kGrig, 5);
  CHECK(matching_radius(g, g, 12) == 12);
  int r = matching_radius(tree_quotient(kGrig, 2), tree_quotient(kGrig, 5), 30);
  // d is trivial on level 2 but not on level 5
  CHECK(r == 0);
  for (int n = 2; n <= 4; ++n)
    for (int m = n + 1; m <= 5; ++m) {
      int cap = (1 << (n - 1)) - 1;
      CHECK(matching_radius(delta_klein(n), delta_klein(m), cap) == cap);
    }
}

TEST_CASE("diagonal products") {
  auto g = tree_quotient(kGrig, 4);
  CHECK(matching_radius(diagonal_product({g}), g, 10) == 10);
  auto p2 = tree_quotient(kGrig, 2), p5 = tree_quotient(kGrig, 5);
  GrowthProfile d = ball(*diagonal_product({p2, p5}), 8);
  GrowthProfile a = ball(*p2, 8), b = ball(*p5, 8);
  for (int r = 0; r <= 8; ++r) {
    CHECK(d.counts[r] >= a.counts[r]);
    CHECK(d.counts[r] >= b.counts[r]);
  }
  std::vector<MarkedGroupPtr> deltas;
  for (int n = 2; n <= 5; ++n) deltas.push_back(delta_klein(n));
  auto diag = diagonal_product(deltas);
  CHECK(ball(*diag, 4).counts == words_oracle(*diag, 4));
  CHECK_THROWS(diagonal_product({}));
}

TEST_CASE("finite groups") {
  FiniteGroup psl(psl2_library_spec(1));
  CHECK(psl.order() == 5 * (25 - 1) / 2);
  CHECK(psl.growth().back() == 60);

  FiniteGroupSpec z2;
  z2.kind = FiniteGroupSpec::Kind::Table;
  z2.table = {{0, 1}, {1, 0}};
  z2.labels = {"u1"};
  z2.generators = {{1}};
  FiniteGroup c2(z2);
  CHECK(c2.order() == 2);
  CHECK(c2.diameter() == 1);
  CHECK(c2.growth()[1] == 2);

  FiniteGroup klein(klein_lamp_spec());
  CHECK(klein.order() == 4);
  CHECK(klein.diameter() == 2);
  CHECK(FiniteGroup(s3_lamp_spec()).order() == 6);
  CHECK(FiniteGroup(dihedral_library_spec(4)).order() == 8);

  // shortest words evaluate back to their element
  for (uint32_t x = 0; x < psl.order(); ++x) {
    Word w = psl.shortest_word(x);
    CHECK(psl.evaluate(w) == x);
    CHECK(int(w.size()) == psl.word_length(x));
  }
}

TEST_CASE("finite group from a config") {
  auto cfg = KeyValueConfig::parse(
      "kind = permutation\n"
      "degree = 3\n"
      "u1 = 1 0 2\n"
      "v1 = 0 2 1\n");
  FiniteGroup g(FiniteGroupSpec::from_config(cfg));
  CHECK(g.order() == 6);
  CHECK(g.spec().labels == std::vector<std::string>{"u1", "v1"});
}
