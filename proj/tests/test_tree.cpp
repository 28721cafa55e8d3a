#include <queue>
#include <random>

#include "doctest.h"
#include "selfsim/marked_group.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

using namespace selfsim;

namespace {

const OmegaString kGrig = OmegaString::grigorchuk();

// Plain BFS over the generator action, written against TreeAut::apply only.
int bfs_distance(Vertex u, Vertex v) {
  int n = u.level;
  std::vector<int> dist(std::size_t(1) << n, -1);
  std::vector<TreeAut> g;
  for (char s : std::string("abcd")) g.push_back(generator(s, kGrig, n));
  std::queue<uint32_t> q;
  dist[u.value] = 0;
  q.push(u.value);
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop();
    for (const auto& h : g) {
      uint32_t y = h.apply(x, n);
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  return dist[v.value];
}

Word random_word(std::mt19937_64& rng, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(Letter::tree(int(rng() % 4)));
  return w;
}

}  // namespace

TEST_CASE("generators on the first levels") {
  TreeAut a1 = generator('a', kGrig, 1);
  CHECK(a1.apply(0, 1) == 1);
  CHECK(a1.apply(1, 1) == 0);
  CHECK(generator('d', kGrig, 2).is_identity());
  for (char s : std::string("abcd")) CHECK(generator(s, kGrig, 0).is_identity());
  // b = (a, c): swaps below 0, nothing at the root
  TreeAut b2 = generator('b', kGrig, 2);
  CHECK(b2.apply(Vertex::parse("00")) == Vertex::parse("01"));
  CHECK(b2.apply(Vertex::parse("10")) == Vertex::parse("10"));
}

TEST_CASE("defining relations") {
  for (int depth = 1; depth <= 10; ++depth) {
    CHECK(evaluate_word(parse_word("bb"), kGrig, depth).is_identity());
    CHECK(evaluate_word(parse_word("aa"), kGrig, depth).is_identity());
    CHECK(evaluate_word(parse_word("bcd"), kGrig, depth).is_identity());
    CHECK(evaluate_word(power(parse_word("ab"), 16), kGrig, depth).is_identity());
  }
  // ab has order exactly 16 once the tree is deep enough
  CHECK_FALSE(evaluate_word(power(parse_word("ab"), 8), kGrig, 8).is_identity());
  CHECK(evaluate_word(power(parse_word("ad"), 4), kGrig, 12).is_identity());
}

TEST_CASE("sections of b and d") {
  TreeAut b = generator('b', kGrig, 4);
  CHECK(b.section(Vertex::parse("0")) == generator('a', kGrig, 3));
  CHECK(b.section(Vertex::parse("1")) == generator('c', kGrig, 3));
  TreeAut d = generator('d', kGrig, 4);
  CHECK(d.section(Vertex::parse("0")).is_identity());
  CHECK(d.section(Vertex::parse("1")) == generator('b', kGrig, 3));
  // sections of sections
  CHECK(d.section(Vertex::parse("11")) == generator('c', kGrig, 2));
}

TEST_CASE("Schreier distance along the rightmost path") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(schreier_distance(Vertex::ones(n), Vertex::ones_then_zero(n), kGrig) == (1 << n) - 1);
    CHECK(schreier_distance(Vertex::ones(n), Vertex::ones(n), kGrig) == 0);
  }
  for (int n = 1; n <= 6; ++n) {
    auto d = schreier_distances(Vertex::ones(n), kGrig);
    for (uint32_t v = 0; v < (1u << n); ++v) CHECK(d[v] == bfs_distance(Vertex::ones(n), Vertex{v, n}));
  }
}

TEST_CASE("levels are transitive") {
  for (int n = 1; n <= 10; ++n) {
    auto d = schreier_distances(Vertex::ones(n), kGrig);
    bool all = true;
    for (int x : d) all = all && x >= 0;
    CHECK(all);
  }
}

TEST_CASE("right action is a homomorphism") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 1 + int(rng() % 10);
    Word u = random_word(rng, int(rng() % 12)), v = random_word(rng, int(rng() % 12));
    uint32_t x = uint32_t(rng() % (1u << n));
    TreeAut gu = evaluate_word(u, kGrig, n), gv = evaluate_word(v, kGrig, n);
    TreeAut guv = evaluate_word(concat({u, v}), kGrig, n);
    REQUIRE(guv.apply(x, n) == gv.apply(gu.apply(x, n), n));
    REQUIRE(guv == gu * gv);
    REQUIRE(gu.inverse().apply(gu.apply(x, n), n) == x);
  }
}

TEST_CASE("truncation commutes with evaluation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + int(rng() % 9);
    Word w = random_word(rng, int(rng() % 30));
    CHECK(evaluate_word(w, kGrig, n + 1).truncate(n) == evaluate_word(w, kGrig, n));
  }
}

TEST_CASE("orders of the first quotients") {
  CHECK(ball(*tree_quotient(kGrig, 1), 10).counts.back() == 2);
  CHECK(ball(*tree_quotient(kGrig, 2), 10).counts.back() == 8);
  CHECK(ball(*tree_quotient(kGrig, 3), 40).counts.back() == 128);
}

TEST_CASE("portrait serialization round trips") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    int n = int(rng() % 12);
    TreeAut g = evaluate_word(random_word(rng, 25), kGrig, n);
    CHECK(TreeAut::from_hex(g.to_hex()) == g);
  }
}

TEST_CASE("vertex and omega parsing") {
  CHECK(Vertex::parse("110").value == 6);
  CHECK(Vertex::parse("110").str() == "110");
  CHECK(Vertex::parse("").level == 0);
  CHECK(OmegaString::parse("012") == kGrig);
  OmegaString w = OmegaString::parse("0:12");
  CHECK(w.letter(0) == 0);
  CHECK(w.letter(1) == 1);
  CHECK(w.letter(3) == 1);
  CHECK(w.letter(4) == 2);
  CHECK(w.shifted() == OmegaString::parse("12"));
}
