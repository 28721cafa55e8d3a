#include "selfsim/recursion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

void require_tree(const Word& w, const char* op) {
  if (!is_tree_word(w)) throw InvalidInput(std::string(op) + ": lamp letters present");
}

int klein_index(const Letter& l) { return int(l.kind); }  // b=1 c=2 d=3, xor is the product

}  // namespace

Word pre_reduce(const Word& w) {
  require_tree(w, "pre_reduce");
  Word out;
  out.reserve(w.size());
  std::size_t i = 0;
  while (i < w.size()) {
    if (!w[i].is_klein()) {
      out.push_back(w[i++]);
      continue;
    }
    int acc = 0;
    while (i < w.size() && w[i].is_klein()) acc ^= klein_index(w[i++]);
    if (acc) out.push_back(Letter::tree(acc));
  }
  return out;
}

Word free_reduce(const Word& w) {
  require_tree(w, "free_reduce");
  Word st;
  st.reserve(w.size());
  for (const auto& l : w) {
    if (!st.empty() && st.back().is_klein() && l.is_klein()) {
      int p = klein_index(st.back()) ^ klein_index(l);
      if (p)
        st.back() = Letter::tree(p);
      else
        st.pop_back();
    } else if (!st.empty() && st.back().kind == LetterKind::A && l.kind == LetterKind::A) {
      st.pop_back();
    } else {
      st.push_back(l);
    }
  }
  return st;
}

bool is_pre_reduced(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].is_klein() && w[i + 1].is_klein()) return false;
  return is_tree_word(w);
}

RecursionResult formal_recursion(const Word& w) {
  require_tree(w, "formal_recursion");
  RecursionResult r;
  Word* stream[2] = {&r.w0, &r.w1};
  const Letter a = Letter::tree(0);
  for (const auto& l : w) {
    switch (l.kind) {
      case LetterKind::A: r.swap ^= 1; break;
      case LetterKind::B:
        stream[r.swap]->push_back(a);
        stream[1 - r.swap]->push_back(Letter::tree(2));
        break;
      case LetterKind::C:
        stream[r.swap]->push_back(a);
        stream[1 - r.swap]->push_back(Letter::tree(3));
        break;
      case LetterKind::D: stream[1 - r.swap]->push_back(Letter::tree(1)); break;
      default: break;
    }
  }
  return r;
}

SectionMap iterate_recursion(const Word& w, int k) {
  require_tree(w, "iterate_recursion");
  if (k < 0 || k > kMaxDepth) throw InvalidInput("iterate_recursion: bad level");
  SectionMap m;
  m.level = k;
  m.top = TreeAut(k);
  m.sections = {w};
  for (int l = 0; l < k; ++l) {
    std::vector<Word> next(m.sections.size() * 2);
    for (uint32_t v = 0; v < m.sections.size(); ++v) {
      RecursionResult r = formal_recursion(m.sections[v]);
      if (r.swap) m.top.flip_bit(TreeAut::index(l, v));
      next[2 * v] = pre_reduce(r.w0);
      next[2 * v + 1] = pre_reduce(r.w1);
    }
    m.sections.swap(next);
  }
  return m;
}

Word substitute_sigma(const Word& w) {
  require_tree(w, "substitute_sigma");
  Word out;
  out.reserve(w.size() * 2);
  for (const auto& l : w) {
    switch (l.kind) {
      case LetterKind::A:
        out.push_back(Letter::tree(0));
        out.push_back(Letter::tree(1));
        out.push_back(Letter::tree(0));
        break;
      case LetterKind::B: out.push_back(Letter::tree(3)); break;
      case LetterKind::C: out.push_back(Letter::tree(1)); break;
      case LetterKind::D: out.push_back(Letter::tree(2)); break;
      default: break;
    }
  }
  return out;
}

Word substitute_sigma(const Word& w, int times) {
  Word r = w;
  for (int i = 0; i < times; ++i) r = substitute_sigma(r);
  return r;
}

uint64_t zeta_word_length(int n) {
  // syllable counts (b, c, d); ab -> ab.ad.ac, ac -> ab.ab, ad -> ac.ac
  uint64_t nb = 0, nc = 0, nd = 1;
  for (int i = 0; i < n; ++i) {
    uint64_t b2 = nb + 2 * nc, c2 = nb + 2 * nd, d2 = nb;
    nb = b2, nc = c2, nd = d2;
  }
  return 2 * (nb + nc + nd);
}

Word zeta_word(int n, std::size_t max_letters) {
  if (n < 0) throw InvalidInput("zeta_word: n must be nonnegative");
  if (n > 40 || zeta_word_length(n) > max_letters)
    throw BudgetExceeded("zeta_word: length budget exceeded", -1);
  std::vector<uint8_t> syl{3};
  for (int i = 0; i < n; ++i) {
    std::vector<uint8_t> next;
    next.reserve(syl.size() * 3);
    for (uint8_t x : syl) {
      if (x == 1) {
        next.insert(next.end(), {1, 3, 2});
      } else if (x == 2) {
        next.insert(next.end(), {1, 1});
      } else {
        next.insert(next.end(), {2, 2});
      }
    }
    syl.swap(next);
  }
  Word w;
  w.reserve(2 * syl.size());
  for (uint8_t x : syl) {
    w.push_back(Letter::tree(0));
    w.push_back(Letter::tree(x));
  }
  return w;
}

double real_root_bisect(double c2, double c1, double c0, double lo, double hi) {
  auto p = [&](double x) { return ((x + c2) * x + c1) * x + c0; };
  double plo = p(lo);
  if (plo * p(hi) > 0) throw InvalidInput("real_root_bisect: no sign change");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    double pm = p(mid);
    if ((pm < 0) == (plo < 0)) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

NormWeights solve_norm_weights() {
  NormWeights nw;
  nw.eta = real_root_bisect(1, 1, -2, 0, 1);
  nw.eta_alternative = real_root_bisect(1, 1, -1, 0, 1);
  double e = nw.eta, e3 = e * e * e;
  // equality system: 1+wc = e(wb+1), 1+wd = e(wc+1), wb = e(wd+1)
  nw.wa = 1;
  nw.wc = e / (1 - e3) - 1;
  nw.wd = e * e / (1 - e3) - 1;
  nw.wb = e3 / (1 - e3);
  nw.C = e * nw.wa;
  return nw;
}

double weighted_norm(const Word& w, const NormWeights& nw) {
  require_tree(w, "weighted_norm");
  double s = 0;
  for (const auto& l : w) {
    switch (l.kind) {
      case LetterKind::A: s += nw.wa; break;
      case LetterKind::B: s += nw.wb; break;
      case LetterKind::C: s += nw.wc; break;
      case LetterKind::D: s += nw.wd; break;
      default: break;
    }
  }
  return s;
}

TreeAut theta_element(int i, int depth) {
  if (i < 0 || i > depth) throw InvalidInput("theta_element: level outside depth");
  TreeAut ad = evaluate_word(parse_word("ad"), OmegaString::grigorchuk(), depth - i);
  return assemble(TreeAut(i), std::vector<TreeAut>(std::size_t(1) << i, ad));
}

namespace {

// BFS closure of a set of depth-d automorphisms under right multiplication.
std::vector<TreeAut> closure(const std::vector<TreeAut>& gens, int depth) {
  std::set<std::vector<uint64_t>> seen{TreeAut(depth).words()};
  std::vector<TreeAut> all{TreeAut(depth)};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const auto& s : gens) {
      TreeAut y = all[i] * s;
      if (seen.insert(y.words()).second) all.push_back(y);
    }
  return all;
}

}  // namespace

bool in_K(const TreeAut& g) {
  static const std::set<std::vector<uint64_t>> image = [] {
    TreeGenerators gens(OmegaString::grigorchuk(), 3);
    std::vector<TreeAut> g3 = closure({gens.gen(0), gens.gen(1), gens.gen(2), gens.gen(3)}, 3);
    TreeAut x = evaluate_word(parse_word("abab"), gens);
    std::vector<TreeAut> conj;
    for (const auto& h : g3) conj.push_back(h.inverse() * x * h);
    std::set<std::vector<uint64_t>> out;
    for (const auto& k : closure(conj, 3)) out.insert(k.words());
    return out;
  }();
  if (g.depth() < 3) throw InvalidInput("in_K: need depth >= 3");
  return image.count(g.truncate(3).words()) > 0;
}

std::size_t K_image_order() {
  std::size_t n = 0;
  TreeGenerators gens(OmegaString::grigorchuk(), 3);
  std::vector<TreeAut> g3 = closure({gens.gen(0), gens.gen(1), gens.gen(2), gens.gen(3)}, 3);
  for (const auto& h : g3) n += in_K(h);
  return n;
}

CheckReport theta_identity_check(int i, int depth) {
  if (i < 1 || i > depth - 3) throw InvalidInput("theta_identity_check: need 1 <= i <= depth-3");
  CheckReport rep;
  const OmegaString om = OmegaString::grigorchuk();
  TreeGenerators gens(om, depth);
  TreeAut th = theta_element(i, depth);
  if (!commutator(th, gens.gen(0)).is_identity()) rep.fail("[theta_i, a] != id");
  TreeAut cc = commutator(th, gens.gen(2));
  TreeAut cd = commutator(th, gens.gen(3));
  if (i == 1) {
    TreeAut adad = evaluate_word(parse_word("adad"), om, depth - 1);
    TreeAut adbdab = evaluate_word(parse_word("adbdab"), om, depth - 1);
    if (!(cc == assemble(TreeAut(1), {adad, adad}))) rep.fail("[theta_1, c] != (adad, adad)");
    if (!(cd == assemble(TreeAut(1), {TreeAut(depth - 1), adbdab}))) rep.fail("[theta_1, d] != (1, [ad,b])");
    return rep;
  }
  int lvl = i - 2;
  Vertex target = Vertex::ones(lvl);
  for (auto [name, x] : {std::pair{"c", &cc}, std::pair{"d", &cd}}) {
    if (!x->fixes_level(lvl)) {
      rep.fail(std::string("[theta_i, ") + name + "] moves level i-2");
      continue;
    }
    for (uint32_t v = 0; v < (uint32_t(1) << lvl); ++v) {
      TreeAut s = x->section({v, lvl});
      if (v == target.value) {
        if (!in_K(s)) rep.fail(std::string("[theta_i, ") + name + "] section at 1^{i-2} not in K");
      } else if (!s.is_identity()) {
        rep.fail(std::string("[theta_i, ") + name + "] has a nontrivial section off 1^{i-2}");
      }
    }
  }
  return rep;
}

Word random_K_word(uint64_t seed, int conjugator_length, int factors) {
  if (conjugator_length < 0 || factors < 0) throw InvalidInput("random_K_word: negative parameter");
  std::mt19937_64 rng(seed);
  const Word ab = parse_word("abab"), ba = parse_word("baba");
  Word out;
  for (int f = 0; f < factors; ++f) {
    int len = std::uniform_int_distribution<int>(0, conjugator_length)(rng);
    Word g;
    for (int i = 0; i < len; ++i) g.push_back(Letter::tree(int(rng() % 4)));
    bool inv = rng() & 1;
    Word piece = concat({inverse(g), inv ? ba : ab, g});
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

}  // namespace selfsim
