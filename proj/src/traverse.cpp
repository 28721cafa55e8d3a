#include "selfsim/traverse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "selfsim/error.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim {

namespace {

void require_level(int n) {
  if (n < 1 || n > kMaxDepth) throw InvalidInput("traverse: level must lie in [1, 24]");
}

const TreeGenerators& grig_gens(int n) {
  static const std::vector<TreeGenerators> cache = [] {
    std::vector<TreeGenerators> v;
    for (int d = 0; d <= 16; ++d) v.emplace_back(OmegaString::grigorchuk(), d);
    return v;
  }();
  if (n > 16) throw InvalidInput("traverse: level above 16 is not supported");
  return cache[n];
}

// Incremental inverted orbit of the pair under a growing word.
class OrbitWalker {
 public:
  explicit OrbitWalker(int n) : n_(n), gens_(grig_gens(n)), h_(n) {
    one_ = Vertex::ones(n).value;
    zero_ = Vertex::ones_then_zero(n).value;
  }
  void push(int letter) { gens_.right_multiply(h_, letter); }
  void pop(int letter) { gens_.right_multiply(h_, letter); }  // generators are involutions
  uint32_t p1() const { return h_.preimage(one_, n_); }
  uint32_t p0() const { return h_.preimage(zero_, n_); }

 private:
  int n_;
  const TreeGenerators& gens_;
  TreeAut h_;
  uint32_t one_, zero_;
};

void require_tree(const Word& w) {
  if (!is_tree_word(w)) throw InvalidInput("traverse: only tree letters are allowed");
}

std::string collapse(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (out.empty() || out.back() != ch) out.push_back(ch);
  return out;
}

}  // namespace

InvertedOrbitPair inverted_orbit_pair(const Word& w, int n) {
  require_level(n);
  require_tree(w);
  InvertedOrbitPair r;
  r.level = n;
  OrbitWalker walk(n);
  r.pairs.push_back({{walk.p1(), n}, {walk.p0(), n}});
  for (const auto& l : w) {
    walk.push(l.tree_index());
    r.pairs.push_back({{walk.p1(), n}, {walk.p0(), n}});
  }
  return r;
}

TraverseField traverse_field(const Word& w, int n) {
  InvertedOrbitPair orb = inverted_orbit_pair(w, n);
  TraverseField tf;
  tf.level = n;
  tf.raw.assign(std::size_t(1) << n, "");
  for (const auto& [one, zero] : orb.pairs) {
    tf.raw[one.value].push_back('1');
    tf.raw[zero.value].push_back('0');
  }
  for (const auto& s : tf.raw) {
    tf.pattern.push_back(collapse(s));
    tf.A += tf.pattern.back().size();
  }
  return tf;
}

uint64_t traverse_A(const Word& w, int n) {
  require_level(n);
  require_tree(w);
  std::vector<int8_t> last(std::size_t(1) << n, -1);
  OrbitWalker walk(n);
  uint64_t A = 0;
  auto visit = [&](uint32_t x, int8_t ch) {
    if (last[x] != ch) {
      last[x] = ch;
      ++A;
    }
  };
  visit(walk.p1(), 1);
  visit(walk.p0(), 0);
  for (const auto& l : w) {
    walk.push(l.tree_index());
    visit(walk.p1(), 1);
    visit(walk.p0(), 0);
  }
  return A;
}

std::string TraverseField::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["A"] = A;
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();
  for (uint32_t x = 0; x < pattern.size(); ++x)
    if (!pattern[x].empty()) fields[Vertex{x, level}.str()] = pattern[x];
  j["patterns"] = fields;
  return j.dump();
}

bool embeds(std::string_view u, std::string_view v) {
  std::size_t i = 0;
  for (char ch : v)
    if (i < u.size() && u[i] == ch) ++i;
  return i == u.size();
}

CheckReport recursion_monotonicity_check(const Word& w, int n) {
  if (n < 2) throw InvalidInput("recursion_monotonicity_check: level must be >= 2");
  CheckReport rep;
  RecursionResult r = formal_recursion(w);
  TraverseField top = traverse_field(w, n), left = traverse_field(r.w0, n - 1), right = traverse_field(r.w1, n - 1);
  uint32_t half = uint32_t(1) << (n - 1);
  for (uint32_t x = 0; x < half; ++x) {
    if (!embeds(top.pattern[x], left.pattern[x]))
      rep.fail("P(0" + Vertex{x, n - 1}.str() + ") = " + top.pattern[x] + " does not embed in " + left.pattern[x]);
    if (!embeds(top.pattern[half + x], right.pattern[x]))
      rep.fail("P(1" + Vertex{x, n - 1}.str() + ") = " + top.pattern[half + x] + " does not embed in " + right.pattern[x]);
  }
  return rep;
}

namespace {

// Depth-first enumeration of pre-reduced words extending a fixed prefix.
struct Explorer {
  int n, r;
  OrbitWalker walk;
  std::vector<int8_t> last;
  uint64_t A = 0;
  std::vector<int> word;
  std::vector<uint64_t> best;
  std::vector<std::vector<int>> best_word;
  std::vector<bool> seen;
  uint64_t count = 0;
  int min_record = 0;

  Explorer(int n_, int r_, int min_record_ = 0)
      : n(n_), r(r_), walk(n_), last(std::size_t(1) << n_, -1), best(r_ + 1, 0), best_word(r_ + 1),
        seen(r_ + 1, false), min_record(min_record_) {
    visit_point(walk.p1(), 1, nullptr);
    visit_point(walk.p0(), 0, nullptr);
  }

  struct Undo {
    uint32_t x;
    int8_t prev;
  };

  void visit_point(uint32_t x, int8_t ch, std::vector<Undo>* undo) {
    if (last[x] == ch) return;
    if (undo) undo->push_back({x, last[x]});
    last[x] = ch;
    ++A;
  }

  void push(int letter, std::vector<Undo>& undo) {
    word.push_back(letter);
    walk.push(letter);
    if (letter == 0) {
      visit_point(walk.p1(), 1, &undo);
      visit_point(walk.p0(), 0, &undo);
    }
  }

  void pop(std::vector<Undo>& undo, std::size_t mark) {
    while (undo.size() > mark) {
      last[undo.back().x] = undo.back().prev;
      --A;
      undo.pop_back();
    }
    walk.pop(word.back());
    word.pop_back();
  }

  void record() {
    std::size_t L = word.size();
    if (int(L) < min_record) return;
    ++count;
    if (!seen[L] || A > best[L]) {
      seen[L] = true;
      best[L] = A;
      best_word[L] = word;
    }
  }

  void run(std::vector<Undo>& undo) {
    record();
    if (int(word.size()) == r) return;
    bool klein_ok = word.empty() || word.back() == 0;
    for (int x = 0; x < 4; ++x) {
      if (x > 0 && !klein_ok) break;
      std::size_t mark = undo.size();
      push(x, undo);
      run(undo);
      pop(undo, mark);
    }
  }
};

std::vector<std::vector<int>> prefixes(int len) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < len; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& p : out)
      for (int x = 0; x < 4; ++x) {
        if (x > 0 && !p.empty() && p.back() != 0) continue;
        auto q = p;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    out.swap(next);
  }
  return out;
}

Word to_word(const std::vector<int>& v) {
  Word w;
  for (int x : v) w.push_back(Letter::tree(x));
  return w;
}

}  // namespace

double contraction_scale(int n, uint64_t len, double eta) {
  if (n < 3) throw InvalidInput("contraction_scale: needs level >= 3");
  double best = INFINITY;
  for (int k = 1; k <= n - 2; ++k) best = std::min(best, std::pow(eta, k) * double(len) + std::pow(2.0, k));
  return best;
}

Word zeta_probe(int j, int reps) {
  Word w = zeta_word(j), wi = inverse(w);
  Word out;
  for (int i = 0; i < reps; ++i) {
    out.insert(out.end(), w.begin(), w.end());
    out.insert(out.end(), wi.begin(), wi.end());
  }
  return out;
}

MaxAResult max_A(int n, int r, MaxAMode mode, const MaxAOptions& opt) {
  require_level(n);
  if (r < 0) throw InvalidInput("max_A: r must be nonnegative");
  MaxAResult res;
  res.level = n;
  res.r = r;
  if (mode == MaxAMode::Exhaustive) {
    if (r > opt.max_exhaustive_r)
      throw BudgetExceeded("max_A: exhaustive search limited to r <= " + std::to_string(opt.max_exhaustive_r), -1);
    int plen = std::min(r, 4);
    auto pre = prefixes(plen);
    // words shorter than the prefixes are handled by one serial explorer
    std::vector<Explorer> parts;
    parts.reserve(pre.size() + 1);
    parts.emplace_back(n, std::max(plen - 1, 0));
    for (std::size_t t = 0; t < pre.size(); ++t) parts.emplace_back(n, r, plen);
    parallel_for(pre.size() + 1, opt.workers, [&](std::size_t t) {
      Explorer& e = parts[t];
      std::vector<Explorer::Undo> undo;
      if (t == 0) {
        if (plen > 0) e.run(undo);
        return;
      }
      for (int x : pre[t - 1]) e.push(x, undo);
      e.run(undo);
    });
    res.by_length.assign(r + 1, 0);
    std::vector<bool> seen(r + 1, false);
    std::vector<std::vector<int>> wit(r + 1);
    for (auto& e : parts) {
      res.words += e.count;
      for (std::size_t L = 0; L < e.seen.size(); ++L)
        if (e.seen[L] && (!seen[L] || e.best[L] > res.by_length[L])) {
          seen[L] = true;
          res.by_length[L] = e.best[L];
          wit[L] = e.best_word[L];
        }
    }
    res.exact = true;
    for (int L = 0; L <= r; ++L)
      if (L == 0 || res.by_length[L] > res.value) {
        res.value = res.by_length[L];
        res.witness = to_word(wit[L]);
      }
    return res;
  }
  // sampled: random pre-reduced words of length r plus zeta probes
  std::mt19937_64 rng(opt.seed);
  auto consider = [&](const Word& w) {
    ++res.words;
    uint64_t A = traverse_A(w, n);
    if (A > res.value) {
      res.value = A;
      res.witness = w;
    }
  };
  consider({});
  for (std::size_t s = 0; s < opt.samples; ++s) {
    consider(random_pre_reduced_word(rng, r));
  }
  for (int j = 0; j <= n; ++j) {
    uint64_t len = 2 * zeta_word_length(j);
    if (len == 0 || len > uint64_t(r) || len > (uint64_t(1) << 26)) continue;
    Word probe = zeta_probe(j, int(r / len));
    consider(probe);
  }
  return res;
}

Word configuration_word(const std::map<uint32_t, Word>& targets, const WreathGroup& delta, int ell) {
  int n = delta.level();
  if (!(delta.omega() == OmegaString::grigorchuk())) throw InvalidInput("configuration_word: first Grigorchuk group only");
  if (ell < 0) throw InvalidInput("configuration_word: ell must be nonnegative");
  for (const auto& [x, word] : targets) {
    if (x >= (uint32_t(1) << n)) throw InvalidInput("configuration_word: target point outside L_n");
    if (int(word.size()) > ell) throw InvalidInput("configuration_word: target longer than ell at " + Vertex{x, n}.str());
    for (const auto& l : word) {
      if (!l.is_lamp()) throw InvalidInput("configuration_word: target letters must lie in U or V");
      Letter base = l;
      base.inverse = false;
      if (delta.label_index(base.str()) < 0) throw InvalidInput("configuration_word: unknown lamp letter " + base.str());
    }
  }
  Word wn = zeta_word(n);
  InvertedOrbitPair orb = inverted_orbit_pair(wn, n);
  std::vector<int64_t> first(std::size_t(1) << n, -1);
  for (std::size_t j = 0; j < orb.pairs.size(); ++j)
    if (first[orb.pairs[j].first.value] < 0) first[orb.pairs[j].first.value] = int64_t(j);
  if (std::any_of(first.begin(), first.end(), [](int64_t j) { return j < 0; }))
    throw InvariantViolation("configuration_word: the inverted orbit of 1^n misses a vertex");
  Word out;
  for (int round = 0; round < ell; ++round) {
    std::vector<Word> inserts(wn.size() + 1);
    // U letters sit at first visits of x, V letters at first visits of the sibling
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& [x, word] : targets) {
        if (round >= int(word.size())) continue;
        const Letter& l = word[round];
        bool is_u = l.kind == LetterKind::U;
        if ((pass == 0) != is_u) continue;
        int64_t j = is_u ? first[x] : first[x ^ 1u];
        inserts[std::size_t(j)].push_back(l);
      }
    for (std::size_t j = 0; j <= wn.size(); ++j) {
      out.insert(out.end(), inserts[j].begin(), inserts[j].end());
      if (j < wn.size()) out.push_back(wn[j]);
    }
  }
  return out;
}

Word configuration_word(const std::map<uint32_t, uint32_t>& targets, const WreathGroup& delta, const FiniteGroup& lamp,
                        int ell) {
  std::map<uint32_t, Word> words;
  for (const auto& [x, e] : targets)
    if (e != 0) words[x] = lamp.shortest_word(e);
  return configuration_word(words, delta, ell);
}

std::string sweep_csv(const std::vector<MaxAResult>& rows, double C, double eta) {
  std::ostringstream os;
  os << "n,r,max_A,exact,bound,ratio\n";
  for (const auto& row : rows) {
    double bound = row.level >= 3 ? C * contraction_scale(row.level, uint64_t(row.r), eta) : 0.0;
    os << row.level << "," << row.r << "," << row.value << "," << (row.exact ? 1 : 0) << ",";
    if (row.level >= 3)
      os << bound << "," << double(row.value) / bound;
    else
      os << ",";
    os << "\n";
  }
  return os.str();
}

}  // namespace selfsim
