#include <queue>
#include <random>

#include "doctest.h"
#include "selfsim/central.hpp"
#include "selfsim/error.hpp"

using namespace selfsim;

namespace {

const OmegaString kGrig = OmegaString::grigorchuk();

NilElement random_nil(std::mt19937_64& rng, uint32_t points) {
  NilElement e;
  for (int i = 0; i < 4; ++i) {
    int64_t v = int64_t(rng() % 7) - 3;
    if (v) e.f[uint32_t(rng() % points)] += v;
  }
  for (auto it = e.f.begin(); it != e.f.end();)
    it = it->second == 0 ? e.f.erase(it) : std::next(it);
  e.z = int64_t(rng() % 11) - 5;
  return e;
}

}  // namespace

TEST_CASE("G3 and the germ space") {
  const G3Table& g3 = G3Table::get();
  CHECK(g3.order() == 128);
  CHECK(g3.element(g3.identity()).is_identity());
  for (int i = 0; i < g3.order(); ++i) {
    CHECK(g3.mul(i, g3.inv(i)) == g3.identity());
    CHECK(g3.of_word(g3.word(i)) == i);
  }
  // abab = (ca, ac) and is not the identity
  TreeAut abab = evaluate_word(parse_word("abab"), kGrig, 3);
  CHECK_FALSE(abab.is_identity());
  CHECK(abab.fixes_level(1));
  CHECK(abab.section(Vertex::parse("0")) == evaluate_word(parse_word("ca"), kGrig, 2));
  CHECK(abab.section(Vertex::parse("1")) == evaluate_word(parse_word("ac"), kGrig, 2));

  std::mt19937_64 rng(51);
  for (int n = 1; n <= 3; ++n) {
    GermSpace X(n);
    for (int trial = 0; trial < 300; ++trial) {
      uint32_t p = uint32_t(rng() % X.size());
      Word w;
      for (int i = 0; i < 10; ++i) w.push_back(Letter::tree(int(rng() % 4)));
      TreeAut h = evaluate_word(w, kGrig, n + 3);
      uint32_t q = p;
      for (const Letter& l : w) q = X.act(q, l.tree_index());
      REQUIRE(X.act(p, h) == q);
      // (v, gamma) . h = (v . h, gamma h_v)
      Vertex v{GermSpace::vertex_of(p), n};
      int hv = g3.index_of(h.section(v));
      REQUIRE(q == GermSpace::point(h.apply(v).value, g3.mul(GermSpace::germ_of(p), hv)));
      REQUIRE(X.preimage(q, h) == p);
    }
    // G_{n+3} acts transitively on X_n
    std::vector<bool> seen(X.size());
    std::queue<uint32_t> todo;
    seen[0] = true;
    todo.push(0);
    std::size_t count = 1;
    while (!todo.empty()) {
      uint32_t p = todo.front();
      todo.pop();
      for (int l = 0; l < 4; ++l) {
        uint32_t q = X.act(p, l);
        if (!seen[q]) {
          seen[q] = true;
          ++count;
          todo.push(q);
        }
      }
    }
    CHECK(count == X.size());
  }
}

TEST_CASE("the orbit M_n") {
  const G3Table& g3 = G3Table::get();
  int ab = g3.of_word(parse_word("ab"));
  TreeAut a1 = generator('a', kGrig, 1);
  for (int n = 1; n <= 3; ++n) {
    auto M = orbit_Mn(n);
    GermSpace X(n);
    CHECK(M->trivial_sign);
    uint32_t x0 = GermSpace::point(Vertex::ones(n).value, 0), y0 = GermSpace::point(Vertex::ones(n).value, ab);
    CHECK(M->contains(x0, y0));
    CHECK(M->epsilon(x0, y0) == 1);
    CHECK(M->epsilon(y0, x0) == -1);
    std::size_t pairs = 0;
    for (uint32_t x = 0; x < M->points; ++x) {
      for (uint32_t y : M->out[x]) {
        ++pairs;
        REQUIRE(M->contains(x, y));
        REQUIRE_FALSE(M->contains(y, x));
        for (int l = 0; l < 4; ++l) REQUIRE(M->contains(X.act(x, l), X.act(y, l)));
        if (GermSpace::vertex_of(x) == GermSpace::vertex_of(y)) {
          int d = g3.mul(g3.inv(GermSpace::germ_of(x)), GermSpace::germ_of(y));
          REQUIRE(g3.element(d).truncate(1) == a1);
        }
      }
    }
    CHECK(pairs == M->size);
  }
}

TEST_CASE("nil arithmetic") {
  auto M = orbit_Mn(1);
  std::mt19937_64 rng(52);
  auto comm = [&](uint32_t x, uint32_t y) {
    NilElement bx = nil_generator(x), by = nil_generator(y);
    return nil_multiply(nil_multiply(nil_multiply(bx, by, *M), nil_inverse(bx, *M), *M), nil_inverse(by, *M), *M);
  };
  GermSpace X(1);
  int zeros = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    uint32_t x = uint32_t(rng() % M->points), y = uint32_t(rng() % M->points);
    if (trial % 3 == 0 && !M->out[x].empty()) y = M->out[x][rng() % M->out[x].size()];
    NilElement c = comm(x, y);
    REQUIRE(c.f.empty());
    REQUIRE(c.z == M->epsilon(x, y));
    if (c.z == 0) ++zeros;
    for (int l = 0; l < 4; ++l) REQUIRE(comm(X.act(x, l), X.act(y, l)) == c);
  }
  CHECK(zeros > 0);
  for (int trial = 0; trial < 10000; ++trial) {
    NilElement a = random_nil(rng, M->points), b = random_nil(rng, M->points), c = random_nil(rng, M->points);
    REQUIRE(nil_multiply(nil_multiply(a, b, *M), c, *M) == nil_multiply(a, nil_multiply(b, c, *M), *M));
    REQUIRE(nil_multiply(a, nil_inverse(a, *M), *M) == NilElement{});
  }
  // the independent normal form agrees with the cocycle product
  std::vector<uint32_t> pool;
  for (uint32_t x = 0; pool.size() < 8; ++x)
    if (!M->out[x].empty()) {
      pool.push_back(x);
      pool.push_back(M->out[x].front());
    }
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::pair<uint32_t, int>> letters;
    NilElement prod;
    for (int i = 0; i < 10; ++i) {
      uint32_t x = pool[rng() % pool.size()];
      int e = rng() & 1 ? 1 : -1;
      letters.push_back({x, e});
      prod = nil_multiply(prod, nil_generator(x, e), *M);
    }
    REQUIRE(nil_normal_form(letters, *M) == prod);
  }
}

TEST_CASE("Gamma_n evaluation") {
  const G3Table& g3 = G3Table::get();
  for (int n = 1; n <= 3; ++n) {
    uint32_t tp = GermSpace::point(Vertex::ones(n).value, 0);
    GammaElement t = gamma_eval(parse_word("t"), n);
    CHECK(t == GammaElement{NilElement{{{tp, 1}}, 0}, TreeAut(n + 3)});
    CHECK(gamma_eval(parse_word("t.T"), n) == GammaElement{NilElement{}, TreeAut(n + 3)});
    CHECK(gamma_eval(parse_word("abcd"), n).base == evaluate_word(parse_word("abcd"), kGrig, n + 3));

    CenterWitness w = center_witness(n);
    Word g = w.stabilizer_word;
    TreeAut ge = evaluate_word(g, kGrig, n + 3);
    CHECK(ge.fixes_level(n));
    uint32_t yp = GermSpace::point(Vertex::ones(n).value, g3.of_word(parse_word("ab")));
    // g^-1 t g moves the lamp from (1^n, id) to (1^n, ab)
    GammaElement conj = gamma_eval(concat({inverse(g), parse_word("t"), g}), n);
    CHECK(conj == GammaElement{NilElement{{{yp, 1}}, 0}, TreeAut(n + 3)});
  }
}

TEST_CASE("center witnesses") {
  CenterWitness w1 = center_witness(1);
  CHECK_MESSAGE(w1.report.ok, (w1.report.failures.empty() ? "" : w1.report.failures.front()));
  CHECK((w1.central == 1 || w1.central == -1));
  CHECK(w1.trivial_in.at(2));
  CHECK(w1.trivial_in.at(3));
  for (int n = 2; n <= 3; ++n) {
    CenterWitness w = center_witness(n);
    CHECK(w.report.ok);
    CHECK(std::abs(w.central) == 1);
    for (auto [j, trivial] : w.trivial_in) CHECK_MESSAGE(trivial, "level " << j);
  }
  CenterWitness degenerate = check_center_witness(1, Word{});
  CHECK_FALSE(degenerate.report.ok);
  CHECK(center_direct_sum_check(3).ok);
}

TEST_CASE("central elements and ball coincidence") {
  CHECK(gamma_ball_coincidence(3, 4, 0).ok);
  CHECK(gamma_ball_coincidence(3, 4, 3).ok);
  CHECK(gamma_ball_coincidence(2, 3, 1).ok);
  for (int n = 1; n <= 2; ++n) {
    CheckReport r = center0_check(n, 3);
    CHECK_MESSAGE(r.ok, (r.failures.empty() ? "" : r.failures.front()));
  }
  // base conjugation keeps the central coordinate of lamp elements
  auto G = gamma_group(2);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    GammaElement e{random_nil(rng, G->orbit().points), TreeAut(5)};
    Word w;
    for (int i = 0; i < 8; ++i) w.push_back(Letter::tree(int(rng() % 4)));
    GammaElement g = gamma_eval(w, 2);
    GammaElement c = G->mul(G->mul(G->inv(g), e), g);
    REQUIRE(c.base.is_identity());
    REQUIRE(c.lamp.z == e.lamp.z);
  }
}
