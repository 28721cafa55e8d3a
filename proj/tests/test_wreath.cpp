#include <random>

#include "doctest.h"
#include "selfsim/finite_group.hpp"
#include "selfsim/traverse.hpp"
#include "selfsim/wreath.hpp"

using namespace selfsim;

namespace {

const OmegaString kGrig = OmegaString::grigorchuk();

WreathGroupPtr delta(int n, const FiniteGroupSpec& lamp) {
  DeltaFactorSpec s;
  s.level = n;
  s.lamp = lamp;
  return build_delta_n(s);
}

// Permutation quotient of F on 5 points in which [b, (ad)^4] survives:
// a = (0 1)(2 3), b = (3 4), c = (1 2), d = bc.
MarkedGroupPtr f_quotient_s5() {
  FiniteGroupSpec s;
  s.kind = FiniteGroupSpec::Kind::Permutation;
  s.name = "F-quotient";
  s.degree = 5;
  s.labels = {"a", "b", "c", "d"};
  s.generators = {{1, 0, 3, 2, 4}, {0, 1, 2, 4, 3}, {0, 2, 1, 3, 4}, {0, 2, 1, 4, 3}};
  return std::make_shared<FiniteMarkedGroup>(finite_group(s));
}

Word random_m_word(std::mt19937_64& rng, int len, int p, int q) {
  Word w;
  for (int i = 0; i < len; ++i) {
    int k = int(rng() % (4 + p + q));
    if (k < 4)
      w.push_back(Letter::tree(k));
    else if (k < 4 + p)
      w.push_back(Letter::u(k - 3, rng() & 1));
    else
      w.push_back(Letter::v(k - 3 - p, rng() & 1));
  }
  return w;
}

}  // namespace

TEST_CASE("wreath multiplication") {
  const int n = 3;
  FiniteMarkedGroup lamp(finite_group(s3_lamp_spec()));
  Key u = lamp.generator(0), v = lamp.generator(1);
  TreeAut id(n);
  WreathElement x{{{5, u}}, id}, y{{{5, v}}, id};
  WreathElement xy = wreath_multiply(x, y, lamp, n);
  CHECK(xy.lamps.size() == 1);
  CHECK(xy.lamps.at(5) == lamp.multiply(u, v));
  CHECK(xy.base == id);
  // identity lamps are dropped
  CHECK(wreath_multiply(x, wreath_inverse(x, lamp, n), lamp, n) == WreathElement{{}, id});

  // g (delta_p^v, id) g^-1 = (delta_{p . g^-1}^v, id)
  uint32_t p = Vertex::ones_then_zero(n).value;
  for (const char* gw : {"a", "ab", "abacabad", "dacab"}) {
    TreeAut g = evaluate_word(parse_word(gw), kGrig, n);
    WreathElement conj = wreath_multiply(wreath_multiply(WreathElement{{}, g}, WreathElement{{{p, v}}, id}, lamp, n),
                                         WreathElement{{}, g.inverse()}, lamp, n);
    CHECK(conj == WreathElement{{{g.preimage(p, n), v}}, id});
  }
}

TEST_CASE("random wreath elements: inverses and associativity") {
  const int n = 4;
  FiniteMarkedGroup lamp(finite_group(s3_lamp_spec()));
  std::mt19937_64 rng(31);
  auto random_elem = [&] {
    WreathElement e{{}, evaluate_word(random_m_word(rng, 12, 0, 0), kGrig, n)};
    for (int i = 0; i < 3; ++i) {
      Key k = FiniteMarkedGroup::key_of(uint32_t(rng() % 6));
      if (k != lamp.identity()) e.lamps[uint32_t(rng() % 16)] = k;
    }
    return e;
  };
  WreathElement id{{}, TreeAut(n)};
  for (int trial = 0; trial < 10000; ++trial) {
    WreathElement x = random_elem();
    REQUIRE(wreath_multiply(x, wreath_inverse(x, lamp, n), lamp, n) == id);
    if (trial % 10 == 0) {
      WreathElement y = random_elem(), z = random_elem();
      REQUIRE(wreath_multiply(wreath_multiply(x, y, lamp, n), z, lamp, n) ==
              wreath_multiply(x, wreath_multiply(y, z, lamp, n), lamp, n));
    }
  }
}

TEST_CASE("Delta_n marking and the commutator witness") {
  FiniteGroupSpec s3 = s3_lamp_spec();
  FiniteMarkedGroup lamp(finite_group(s3));
  Key uv = evaluate(lamp, parse_word("u1.v1.U1.V1"));
  for (int n = 1; n <= 5; ++n) {
    auto g = delta(n, s3);
    CHECK(g->base_depth() == n + 4);
    WreathElement u = evaluate_m_word(parse_word("u1"), *g);
    CHECK(u == WreathElement{{{Vertex::ones(n).value, lamp.generator(0)}}, TreeAut(n + 4)});
    WreathElement v = evaluate_m_word(parse_word("v1"), *g);
    CHECK(v == WreathElement{{{Vertex::ones_then_zero(n).value, lamp.generator(1)}}, TreeAut(n + 4)});
    CHECK(int(shortest_mover(n).size()) == (1 << n) - 1);
    Word k = kdelta_word(n);
    for (int m = 1; m <= 5; ++m) {
      WreathElement e = evaluate_m_word(k, *delta(m, s3));
      if (m == n)
        CHECK(e == WreathElement{{{Vertex::ones(n).value, uv}}, TreeAut(m + 4)});
      else
        CHECK(e == WreathElement{{}, TreeAut(m + 4)});
    }
  }
}

TEST_CASE("trivial lamps give the tree quotient") {
  for (int n = 1; n <= 4; ++n) {
    DeltaFactorSpec s;
    s.level = n;
    auto d = build_delta_n(s);
    CHECK(evaluate(*d, parse_word("u1")) == d->identity());
    auto padded = std::make_shared<TreeQuotientGroup>(kGrig, d->base_depth(), std::vector<std::string>{"u1", "v1"});
    CHECK(matching_radius(d, padded, 8) == 8);
    auto gamma = build_gamma_n({n, std::make_shared<TrivialGroup>(std::vector<std::string>{"a", "b", "c", "d"}), kGrig});
    CHECK(matching_radius(gamma, tree_quotient(kGrig, n), 10) == 10);
  }
}

TEST_CASE("Gamma_n splits K words in the kernel") {
  auto A = f_quotient_s5();
  Word w = commutator_word(parse_word("b"), power(parse_word("ad"), 4));
  Key wbar = evaluate(*A, w);
  REQUIRE(wbar != A->identity());
  for (int n = 1; n <= 3; ++n) {
    Word s = substitute_sigma(w, n);
    auto g = build_gamma_n({n, A, kGrig});
    WreathElement e = evaluate_m_word(s, *g);
    CHECK(e == WreathElement{{{Vertex::ones(n).value, wbar}}, TreeAut(g->base_depth())});
    for (int j = n + 1; j <= n + 2; ++j) {
      auto h = build_gamma_n({j, A, kGrig});
      CHECK(evaluate(*h, s) == h->identity());
    }
  }
  for (int n = 2; n <= 3; ++n) {
    int cap = (1 << (n - 1)) - 1;
    CHECK(matching_radius(build_gamma_n({n, A, kGrig}), build_gamma_n({n + 1, A, kGrig}), cap) == cap);
  }
}

TEST_CASE("F-quotient validation") {
  CHECK_NOTHROW(check_F_quotient(*f_quotient_s5()));
  FiniteGroupSpec bad = s3_lamp_spec();
  bad.labels = {"a", "b", "c", "d"};
  bad.generators = {{1, 0, 2}, {0, 2, 1}, {1, 0, 2}, {0, 2, 1}};
  CHECK_THROWS(check_F_quotient(FiniteMarkedGroup(finite_group(bad))));
}

TEST_CASE("lamp evaluation against the closed form and the traverse bound") {
  std::mt19937_64 rng(32);
  for (const FiniteGroupSpec& spec : {klein_lamp_spec(), s3_lamp_spec()}) {
    for (int n = 2; n <= 4; ++n) {
      auto g = delta(n, spec);
      FiniteGroup F(spec);
      for (int trial = 0; trial < 1000; ++trial) {
        Word w = random_m_word(rng, 1 + int(rng() % 20), 1, 1);
        WreathElement e = evaluate_m_word(w, *g);
        REQUIRE(e == lamp_product_formula(w, *g));
        REQUIRE(g->key_of(e) == evaluate(*g, w));
        TraverseField t = traverse_field(tree_part(w), n);
        for (const auto& [x, k] : e.lamps)
          REQUIRE(std::size_t(F.word_length(FiniteMarkedGroup::from_key(k))) <= t.pattern[x].size());
      }
    }
  }
}

TEST_CASE("theta embedding") {
  for (int n = 1; n <= 3; ++n) {
    CheckReport r = theta_embedding_check(n, 5, klein_lamp_spec());
    CHECK_MESSAGE(r.ok, (r.failures.empty() ? "" : r.failures.front()));
  }
  CheckReport sampled = theta_embedding_check(4, 12, s3_lamp_spec(), 1, 1000, 9);
  CHECK_MESSAGE(sampled.ok, (sampled.failures.empty() ? "" : sampled.failures.front()));
}

TEST_CASE("configuration words") {
  const int n = 3, ell = 2;
  FiniteGroupSpec spec = klein_lamp_spec();
  FiniteGroup F(spec);
  auto g = delta(n, spec);
  TreeAut base = evaluate_word(power(zeta_word(n), ell), kGrig, g->base_depth());
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<uint32_t, uint32_t> targets;
    for (uint32_t x = 0; x < (1u << n); ++x)
      if (rng() % 2) targets[x] = uint32_t(rng() % F.order());
    WreathElement e = evaluate_m_word(configuration_word(targets, *g, F, ell), *g);
    LampConfig want;
    for (auto [x, t] : targets)
      if (t != 0) want[x] = FiniteMarkedGroup::key_of(t);
    CHECK(e.lamps == want);
    CHECK(e.base == base);
  }
  WreathElement empty = evaluate_m_word(configuration_word(std::map<uint32_t, uint32_t>{}, *g, F, ell), *g);
  CHECK(empty.lamps.empty());
}
