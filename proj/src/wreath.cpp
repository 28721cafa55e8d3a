#include "selfsim/wreath.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

void check_point(uint32_t p, int level) {
  if (level < 0 || level > kMaxDepth || p >= (uint32_t(1) << level)) throw InvalidInput("lamp point outside L_level");
}

void accumulate(LampConfig& f, uint32_t x, const Key& gamma, const MarkedGroup& lamp, const Key& id) {
  auto it = f.find(x);
  Key v = lamp.multiply(it == f.end() ? id : it->second, gamma);
  if (v == id) {
    if (it != f.end()) f.erase(it);
  } else {
    f[x] = std::move(v);
  }
}

}  // namespace

WreathElement wreath_multiply(const WreathElement& x, const WreathElement& y, const MarkedGroup& lamp, int level) {
  if (x.base.depth() != y.base.depth()) throw InvalidInput("wreath_multiply: base depths differ");
  if (x.base.depth() < level) throw InvalidInput("wreath_multiply: base shallower than the lamp level");
  Key id = lamp.identity();
  WreathElement r{x.lamps, x.base * y.base};
  // (g1 . f2)(p) = f2(p . g1): the lamp of y at q lands on q . g1^-1
  for (const auto& [q, gamma] : y.lamps) {
    check_point(q, level);
    accumulate(r.lamps, x.base.preimage(q, level), gamma, lamp, id);
  }
  return r;
}

WreathElement wreath_inverse(const WreathElement& x, const MarkedGroup& lamp, int level) {
  // (f, g)^-1 = (g^-1 . f^-1, g^-1); f^-1 at q moves to q . g
  WreathElement r{{}, x.base.inverse()};
  for (const auto& [q, gamma] : x.lamps) {
    check_point(q, level);
    r.lamps[x.base.apply(q, level)] = lamp.inverse(gamma);
  }
  return r;
}

WreathGroup::WreathGroup(std::string name, int level, OmegaString omega, int base_depth, MarkedGroupPtr lamp,
                         std::vector<WreathGenerator> gens)
    : name_(std::move(name)), level_(level), tree_(std::move(omega), base_depth), lamp_(std::move(lamp)),
      gens_(std::move(gens)) {
  if (level < 0 || base_depth < level) throw InvalidInput("wreath group: need 0 <= level <= base depth");
  if (level > 16) throw InvalidInput("wreath group: level too large for a dense lamp row");
  lamp_id_ = lamp_->identity();
  base_key_size_ = TreeQuotientGroup::key_of(TreeAut(base_depth)).size();
  for (const auto& g : gens_) {
    labels_.push_back(g.label);
    if (g.tree_letter < -1 || g.tree_letter > 3) throw InvalidInput("wreath group: bad tree letter");
    std::vector<std::pair<uint32_t, Key>> inv;
    for (const auto& [p, gamma] : g.lamps) {
      check_point(p, level);
      if (gamma.size() != lamp_id_.size()) throw InvalidInput("wreath group: lamp key has the wrong size");
      uint32_t q = g.tree_letter < 0 ? p : tree_.act(p, level, g.tree_letter);
      inv.push_back({q, lamp_->inverse(gamma)});
    }
    // inverse placements are applied in reverse so non-abelian products stay ordered
    std::reverse(inv.begin(), inv.end());
    inv_lamps_.push_back(std::move(inv));
  }
}

WreathGroup::Dense WreathGroup::decode(const Key& k) const {
  Dense d;
  d.base = TreeQuotientGroup::from_key(k.substr(0, base_key_size_));
  std::size_t n = std::size_t(1) << level_, w = lamp_id_.size();
  d.lamps.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.lamps[i] = k.substr(base_key_size_ + i * w, w);
  return d;
}

Key WreathGroup::encode(const Dense& d) const {
  Key k = TreeQuotientGroup::key_of(d.base);
  for (const auto& l : d.lamps) k += l;
  return k;
}

Key WreathGroup::identity() const {
  Dense d{TreeAut(tree_.depth()), std::vector<Key>(std::size_t(1) << level_, lamp_id_)};
  return encode(d);
}

Key WreathGroup::key_of(const WreathElement& e) const {
  if (e.base.depth() != tree_.depth()) throw InvalidInput("wreath element has the wrong base depth");
  Dense d{e.base, std::vector<Key>(std::size_t(1) << level_, lamp_id_)};
  for (const auto& [p, gamma] : e.lamps) {
    check_point(p, level_);
    d.lamps[p] = gamma;
  }
  return encode(d);
}

WreathElement WreathGroup::element(const Key& k) const {
  Dense d = decode(k);
  WreathElement e{{}, d.base};
  for (std::size_t p = 0; p < d.lamps.size(); ++p)
    if (d.lamps[p] != lamp_id_) e.lamps[uint32_t(p)] = d.lamps[p];
  return e;
}

Key WreathGroup::multiply(const Key& x, const Key& y) const {
  return key_of(wreath_multiply(element(x), element(y), *lamp_, level_));
}

Key WreathGroup::inverse(const Key& x) const { return key_of(wreath_inverse(element(x), *lamp_, level_)); }

void WreathGroup::apply_generator(Dense& d, std::size_t i, bool inv) const {
  const auto& g = gens_[i];
  const auto& placements = inv ? inv_lamps_[i] : g.lamps;
  for (const auto& [p, gamma] : placements) {
    uint32_t x = d.base.preimage(p, level_);
    d.lamps[x] = lamp_->multiply(d.lamps[x], gamma);
  }
  // tree letters are involutions, so the inverse step multiplies by the same letter
  if (g.tree_letter >= 0) tree_.right_multiply(d.base, g.tree_letter);
}

Key WreathGroup::generator(std::size_t i) const {
  Dense d = decode(identity());
  apply_generator(d, i, false);
  return encode(d);
}

Key WreathGroup::step(const Key& x, std::size_t i, bool inv) const {
  Dense d = decode(x);
  apply_generator(d, i, inv);
  return encode(d);
}

int default_delta_base_depth(int level) { return level + 4; }

DeltaFactorSpec DeltaFactorSpec::from_config(const KeyValueConfig& cfg) {
  DeltaFactorSpec s;
  s.level = int(cfg.get_int("level"));
  s.omega = OmegaString::parse(cfg.get_or("omega", "012"));
  s.base_depth = int(cfg.get_int_or("base_depth", 0));
  if (cfg.get_or("kind", "") == "trivial") {
    s.lamp.reset();
  } else {
    s.lamp = FiniteGroupSpec::from_config(cfg);
  }
  return s;
}

WreathGroupPtr build_delta_n(const DeltaFactorSpec& spec) {
  int n = spec.level;
  if (n < 1) throw InvalidInput("delta: level must be >= 1");
  int depth = spec.base_depth > 0 ? spec.base_depth : default_delta_base_depth(n);
  if (depth < n || depth > 20) throw InvalidInput("delta: base depth must lie in [level, 20]");
  MarkedGroupPtr lamp;
  std::vector<std::string> lamp_labels;
  std::vector<Key> lamp_keys;
  if (spec.lamp) {
    auto fg = finite_group(*spec.lamp);
    auto us = spec.lamp->label_group('u'), vs = spec.lamp->label_group('v');
    if (us.size() + vs.size() != fg->rank()) throw InvalidInput("delta: lamp labels must all be u_i or v_j");
    if (!fg->is_subgroup_image(us) || !fg->is_subgroup_image(vs))
      throw InvalidInput("delta: u (or v) images do not form a subgroup image of U (or V)");
    lamp = std::make_shared<FiniteMarkedGroup>(fg);
    lamp_labels = spec.lamp->labels;
    for (std::size_t i = 0; i < fg->rank(); ++i) lamp_keys.push_back(FiniteMarkedGroup::key_of(fg->gen(i)));
  } else {
    lamp = std::make_shared<TrivialGroup>(spec.trivial_labels);
    lamp_labels = spec.trivial_labels;
    lamp_keys.assign(lamp_labels.size(), Key{});
  }
  std::vector<WreathGenerator> gens;
  for (int x = 0; x < 4; ++x) gens.push_back({std::string(1, char('a' + x)), x, {}});
  uint32_t ones = Vertex::ones(n).value, sib = Vertex::ones_then_zero(n).value;
  for (std::size_t i = 0; i < lamp_labels.size(); ++i) {
    const auto& l = lamp_labels[i];
    if (l.empty() || (l[0] != 'u' && l[0] != 'v')) throw InvalidInput("delta: lamp label '" + l + "' is not u_i or v_j");
    gens.push_back({l, -1, {{l[0] == 'u' ? ones : sib, lamp_keys[i]}}});
  }
  std::string name = "Delta_" + std::to_string(n) + "[" + lamp->describe() + ", base depth " + std::to_string(depth) + "]";
  return std::make_shared<WreathGroup>(name, n, spec.omega, depth, lamp, gens);
}

char psi_image(PsiScheme psi, int level, char x) {
  if (x != 'b' && x != 'c' && x != 'd') throw InvalidInput("psi: letter must be b, c or d");
  if (psi == PsiScheme::Identity) return x;
  static const char* rot[3] = {"bcd", "cdb", "dbc"};
  return rot[((level % 3) + 3) % 3][x - 'b'];
}

void check_F_quotient(const MarkedGroup& g) {
  int ia = g.label_index("a"), ib = g.label_index("b"), ic = g.label_index("c"), id = g.label_index("d");
  if (ia < 0 || ib < 0 || ic < 0 || id < 0) throw InvalidInput("lamp must be marked by a, b, c, d");
  Key e = g.identity();
  Key A = g.generator(ia), B = g.generator(ib), C = g.generator(ic), D = g.generator(id);
  if (g.multiply(A, A) != e || g.multiply(B, B) != e || g.multiply(C, C) != e)
    throw InvalidInput("lamp images of a, b, c must be involutions");
  if (g.multiply(B, C) != g.multiply(C, B) || g.multiply(B, C) != D)
    throw InvalidInput("lamp images must satisfy bc = cb = d");
}

WreathGroupPtr build_gamma_n(const GammaFactorSpec& spec) {
  int n = spec.level;
  if (n < 1 || n > 16) throw InvalidInput("gamma: level must lie in [1, 16]");
  if (!spec.lamp) throw InvalidInput("gamma: lamp group required");
  check_F_quotient(*spec.lamp);
  bool grig = spec.omega == OmegaString::grigorchuk();
  PsiScheme psi = spec.psi.value_or(grig ? PsiScheme::Cyclic : PsiScheme::Identity);
  if (psi == PsiScheme::Cyclic && !grig) throw InvalidInput("gamma: the cyclic psi scheme is defined for omega = (012)^inf only");
  const auto& L = *spec.lamp;
  auto lamp_of = [&](char x) { return L.generator(std::size_t(L.label_index(std::string(1, x)))); };
  uint32_t ones = Vertex::ones(n).value, sib = Vertex::ones_then_zero(n).value;
  std::vector<WreathGenerator> gens{{"a", 0, {}}};
  int w = spec.omega.letter(n - 1);
  for (int x = 1; x <= 3; ++x) {
    char cx = char('a' + x);
    WreathGenerator g{std::string(1, cx), x, {}};
    Key top = lamp_of(psi_image(psi, n, cx));
    if (top != L.identity()) g.lamps.push_back({ones, top});
    if (omega_image_is_a(w, x)) g.lamps.push_back({sib, lamp_of('a')});
    gens.push_back(std::move(g));
  }
  std::string name = "Gamma_" + std::to_string(n) + "[" + L.describe() + "]";
  return std::make_shared<WreathGroup>(name, n, spec.omega, n, spec.lamp, gens);
}

WreathElement evaluate_m_word(const Word& w, const WreathGroup& g) { return g.element(evaluate(g, w)); }

WreathElement lamp_product_formula(const Word& w, const WreathGroup& g) {
  const MarkedGroup& lamp = *g.lamp();
  Key id = lamp.identity();
  int n = g.level();
  Word prefix;
  LampConfig f;
  for (const auto& l : w) {
    Letter base = l;
    base.inverse = false;
    int i = g.label_index(base.str());
    if (i < 0) throw InvalidInput("letter '" + base.str() + "' is not in the group's alphabet");
    const auto& spec = g.generator_spec(std::size_t(i));
    TreeAut pre = evaluate_word(prefix, g.omega(), g.base_depth());
    std::vector<std::pair<uint32_t, Key>> placements;
    if (!l.inverse || l.is_tree()) {
      placements = spec.lamps;
    } else {
      for (const auto& [p, gamma] : spec.lamps)
        placements.push_back({spec.tree_letter < 0 ? p : evaluate_word({Letter::tree(spec.tree_letter)}, g.omega(), n).apply(p, n),
                              lamp.inverse(gamma)});
      std::reverse(placements.begin(), placements.end());
    }
    for (const auto& [p, gamma] : placements) accumulate(f, pre.preimage(p, n), gamma, lamp, id);
    if (spec.tree_letter >= 0) prefix.push_back(Letter::tree(spec.tree_letter));
  }
  return {f, evaluate_word(prefix, g.omega(), g.base_depth())};
}

Word shortest_mover(int n, const OmegaString& omega) {
  if (n < 1) throw InvalidInput("shortest_mover: level must be >= 1");
  Vertex src = Vertex::ones(n), dst = Vertex::ones_then_zero(n);
  std::vector<int> dist = schreier_distances(dst, omega);  // the Schreier graph is undirected
  TreeGenerators gens(omega, n);
  Word w;
  uint32_t v = src.value;
  while (v != dst.value) {
    bool moved = false;
    for (int x = 0; x < 4 && !moved; ++x) {
      uint32_t u = gens.act(v, n, x);
      if (dist[u] == dist[v] - 1) {
        w.push_back(Letter::tree(x));
        v = u;
        moved = true;
      }
    }
    if (!moved) throw InvariantViolation("shortest_mover: Schreier graph is disconnected");
  }
  return w;
}

Word kdelta_word(int n, int i, int j, const OmegaString& omega) {
  Word g = shortest_mover(n, omega);
  Word conj = concat({g, Word{Letter::v(j)}, inverse(g)});
  return commutator_word(Word{Letter::u(i)}, conj);
}

namespace {

// Maps (f, g) in Delta_{split+n} to its image in Delta_n(s^split omega) \wr_{L_split} pi_split.
Key theta_split(const WreathGroup& big, const WreathGroup& target, const WreathGroup& inner, const Key& k) {
  int s = target.level(), n = inner.level();
  WreathElement e = big.element(k);
  WreathElement out{{}, e.base.truncate(s)};
  for (uint32_t p = 0; p < (uint32_t(1) << s); ++p) {
    WreathElement part{{}, e.base.section({p, s})};
    for (const auto& [x, gamma] : e.lamps)
      if ((x >> n) == p) part.lamps[x & ((uint32_t(1) << n) - 1)] = gamma;
    Key ik = inner.key_of(part);
    if (ik != inner.identity()) out.lamps[p] = ik;
  }
  return target.key_of(out);
}

}  // namespace

CheckReport theta_embedding_check(int n, int max_len, const FiniteGroupSpec& lamp, int split, std::size_t samples,
                                  uint64_t seed) {
  CheckReport rep;
  if (n < 1 || split < 1) throw InvalidInput("theta check: levels must be >= 1");
  OmegaString omega = OmegaString::grigorchuk();
  int depth = default_delta_base_depth(n + split);
  auto big = build_delta_n({.level = n + split, .lamp = lamp, .omega = omega, .base_depth = depth});
  auto inner = build_delta_n({.level = n, .lamp = lamp, .omega = omega.shifted(split), .base_depth = depth - split});
  // generator images: a -> (id, a); x -> (d_{1^{s-1}0}^{omega_{s-1}(x)} + d_{1^s}^x, x); lamps -> d_{1^s}
  uint32_t ones = Vertex::ones(split).value, sib = Vertex::ones_then_zero(split).value;
  std::vector<WreathGenerator> gens{{"a", 0, {}}};
  int w = omega.letter(split - 1);
  for (int x = 1; x <= 3; ++x) {
    WreathGenerator g{std::string(1, char('a' + x)), x, {{ones, inner->generator(std::size_t(x))}}};
    if (omega_image_is_a(w, x)) g.lamps.insert(g.lamps.begin(), {sib, inner->generator(0)});
    gens.push_back(std::move(g));
  }
  for (std::size_t i = 4; i < inner->rank(); ++i) gens.push_back({inner->labels()[i], -1, {{ones, inner->generator(i)}}});
  WreathGroup target("theta target", split, omega, split, inner, gens);

  for (std::size_t i = 0; i < big->rank(); ++i)
    if (theta_split(*big, target, *inner, big->generator(i)) != target.generator(i))
      rep.fail("generator " + big->labels()[i] + " maps to the wrong image");

  std::size_t checked = 0;
  auto compare = [&](const Word& word) {
    ++checked;
    Key lhs = theta_split(*big, target, *inner, evaluate(*big, word));
    Key rhs = evaluate(target, word);
    if (lhs != rhs && rep.failures.size() < 5) rep.fail("mismatch on word " + to_string(word));
    else if (lhs != rhs) rep.ok = false;
  };
  std::vector<Letter> alphabet;
  for (const auto& l : big->labels()) alphabet.push_back(parse_word(l).at(0));
  if (samples > 0) {
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
      Word word(rng() % (max_len + 1));
      for (auto& l : word) l = alphabet[rng() % alphabet.size()];
      compare(word);
    }
  } else {
    // all words of length <= max_len
    std::vector<Word> layer{{}};
    compare({});
    for (int len = 1; len <= max_len; ++len) {
      std::vector<Word> next;
      for (const auto& p : layer)
        for (const auto& l : alphabet) {
          Word q = p;
          q.push_back(l);
          compare(q);
          next.push_back(std::move(q));
        }
      layer.swap(next);
    }
  }
  rep.notes.push_back("words checked: " + std::to_string(checked));
  return rep;
}

}  // namespace selfsim
