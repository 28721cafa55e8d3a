#include "selfsim/central.hpp"

#include <array>
#include <cstring>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "json.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

namespace {

constexpr int kMaxGermLevel = 5;

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw BudgetExceeded("central extension: integer overflow", -1);
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw BudgetExceeded("central extension: integer overflow", -1);
  return r;
}

void add_entry(std::map<uint32_t, int64_t>& f, uint32_t x, int64_t v) {
  if (v == 0) return;
  auto [it, fresh] = f.try_emplace(x, v);
  if (fresh) return;
  it->second = checked_add(it->second, v);
  if (it->second == 0) f.erase(it);
}

void require_germ_level(int n) {
  if (n < 1 || n > kMaxGermLevel) throw InvalidInput("central extension: level must lie in [1, 5]");
}

}  // namespace

// ---- G_3 ----

const G3Table& G3Table::get() {
  static const G3Table table;
  return table;
}

G3Table::G3Table() {
  TreeGenerators gens(OmegaString::grigorchuk(), 3);
  std::unordered_map<TreeAut, int> index;
  elems_.push_back(TreeAut(3));
  words_.push_back({});
  index.emplace(elems_[0], 0);
  for (std::size_t i = 0; i < elems_.size(); ++i)
    for (int x = 0; x < 4; ++x) {
      TreeAut g = elems_[i];
      gens.right_multiply(g, x);
      if (index.emplace(g, int(elems_.size())).second) {
        Word w = words_[i];
        w.push_back(Letter::tree(x));
        elems_.push_back(std::move(g));
        words_.push_back(std::move(w));
      }
    }
  int n = order();
  mul_.assign(std::size_t(n) * n, 0);
  inv_.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = index.at(elems_[i] * elems_[j]);
      mul_[std::size_t(i) * n + j] = k;
      if (k == 0) inv_[i] = j;
    }
}

int G3Table::index_of(const TreeAut& g) const {
  if (g.depth() != 3) throw InvalidInput("G3Table: expected a depth-3 automorphism");
  static const std::unordered_map<TreeAut, int> lookup = [this] {
    std::unordered_map<TreeAut, int> m;
    for (int i = 0; i < order(); ++i) m.emplace(elems_[i], i);
    return m;
  }();
  auto it = lookup.find(g);
  if (it == lookup.end()) throw InvariantViolation("G3Table: automorphism outside pi_3 of the group");
  return it->second;
}

int G3Table::of_word(const Word& w) const { return index_of(evaluate_word(w, OmegaString::grigorchuk(), 3)); }

// ---- X_n ----

GermSpace::GermSpace(int n) : n_(n) {
  require_germ_level(n);
  const G3Table& g3 = G3Table::get();
  TreeGenerators gens(OmegaString::grigorchuk(), n + 3);
  for (int l = 0; l < 4; ++l) {
    act_[l].resize(size());
    for (uint32_t v = 0; v < (uint32_t(1) << n); ++v) {
      uint32_t w = gens.gen(l).apply(v, n);
      int s = g3.index_of(gens.gen(l).section({v, n}));
      for (int g = 0; g < 128; ++g) act_[l][point(v, g)] = point(w, g3.mul(g, s));
    }
  }
}

uint32_t GermSpace::act(uint32_t p, const TreeAut& h) const {
  const G3Table& g3 = G3Table::get();
  uint32_t v = vertex_of(p);
  int s = g3.index_of(h.section({v, n_}));
  return point(h.apply(v, n_), g3.mul(germ_of(p), s));
}

uint32_t GermSpace::preimage(uint32_t p, const TreeAut& h) const {
  const G3Table& g3 = G3Table::get();
  uint32_t v = h.preimage(vertex_of(p), n_);
  int s = g3.index_of(h.section({v, n_}));
  return point(v, g3.mul(germ_of(p), g3.inv(s)));
}

std::string GermSpace::str(uint32_t p) const {
  std::string g = to_string(G3Table::get().word(germ_of(p)));
  return "(" + Vertex{vertex_of(p), n_}.str() + "," + (g.empty() ? "id" : g) + ")";
}

// ---- M_n ----

namespace {

std::shared_ptr<const SignedPairOrbit> build_orbit(int n) {
  GermSpace X(n);
  const G3Table& g3 = G3Table::get();
  auto M = std::make_shared<SignedPairOrbit>();
  M->level = n;
  M->points = X.size();
  uint64_t total = uint64_t(M->points) * M->points;
  M->bits.assign((total + 63) / 64, 0);
  auto mark = [&](uint32_t x, uint32_t y) {
    uint64_t i = uint64_t(x) * M->points + y;
    uint64_t& word = M->bits[i >> 6];
    uint64_t bit = uint64_t(1) << (i & 63);
    if (word & bit) return false;
    word |= bit;
    return true;
  };
  uint32_t one = Vertex::ones(n).value;
  uint32_t x0 = GermSpace::point(one, g3.identity());
  uint32_t y0 = GermSpace::point(one, g3.of_word(parse_word("ab")));
  std::vector<std::pair<uint32_t, uint32_t>> queue{{x0, y0}};
  mark(x0, y0);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int l = 0; l < 4; ++l) {
      uint32_t x = X.act(queue[i].first, l), y = X.act(queue[i].second, l);
      if (mark(x, y)) queue.emplace_back(x, y);
    }
  M->size = queue.size();
  M->out.resize(M->points);
  M->in.resize(M->points);
  std::sort(queue.begin(), queue.end());
  for (auto [x, y] : queue) {
    if (M->contains(y, x))
      throw InvariantViolation("orbit M_" + std::to_string(n) + " meets its reverse at " + X.str(x) + ", " + X.str(y));
    M->out[x].push_back(y);
    M->in[y].push_back(x);
  }
  M->trivial_sign = true;
  return M;
}

}  // namespace

std::shared_ptr<const SignedPairOrbit> orbit_Mn(int n) {
  require_germ_level(n);
  static std::mutex mu;
  static std::array<std::shared_ptr<const SignedPairOrbit>, kMaxGermLevel + 1> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[n]) cache[n] = build_orbit(n);
  return cache[n];
}

// ---- nilpotent lamps ----

int64_t nil_cocycle(const NilElement& x, const NilElement& y, const SignedPairOrbit& M) {
  int64_t s = 0;
  for (const auto& [p, a] : x.f)
    for (const auto& [q, b] : y.f)
      if (M.contains(p, q)) s = checked_add(s, checked_mul(a, b));
  return s;
}

NilElement nil_multiply(const NilElement& x, const NilElement& y, const SignedPairOrbit& M) {
  NilElement r = x;
  for (const auto& [q, b] : y.f) add_entry(r.f, q, b);
  r.z = checked_add(checked_add(x.z, y.z), nil_cocycle(x, y, M));
  return r;
}

NilElement nil_inverse(const NilElement& x, const SignedPairOrbit& M) {
  NilElement r;
  for (const auto& [p, a] : x.f) r.f.emplace(p, checked_mul(a, -1));
  r.z = checked_add(checked_mul(x.z, -1), nil_cocycle(x, x, M));
  return r;
}

NilElement nil_generator(uint32_t x, int64_t power) {
  NilElement r;
  add_entry(r.f, x, power);
  return r;
}

NilElement nil_normal_form(const std::vector<std::pair<uint32_t, int>>& letters, const SignedPairOrbit& M) {
  std::vector<std::pair<uint32_t, int>> s = letters;
  int64_t z = 0;
  // bubble sort; each swap of b_x^e b_y^f (x > y) emits [b_x^e, b_y^f]
  for (std::size_t pass = 0; pass < s.size(); ++pass)
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i].first > s[i + 1].first) {
        z = checked_add(z, int64_t(s[i].second) * s[i + 1].second * M.epsilon(s[i].first, s[i + 1].first));
        std::swap(s[i], s[i + 1]);
      }
  NilElement r;
  for (auto [x, e] : s) add_entry(r.f, x, e);
  // ordered product prod_x b_x^{f(x)} in cocycle coordinates
  for (auto i = r.f.begin(); i != r.f.end(); ++i)
    for (auto j = std::next(i); j != r.f.end(); ++j)
      if (M.contains(i->first, j->first)) z = checked_add(z, checked_mul(i->second, j->second));
  r.z = z;
  return r;
}

// ---- Gamma_n ----

GammaGroup::GammaGroup(int n)
    : n_(n), space_(n), M_(orbit_Mn(n)), gens_(OmegaString::grigorchuk(), n + 3) {
  labels_ = {"a", "b", "c", "d", "t"};
  t_point_ = GermSpace::point(Vertex::ones(n).value, G3Table::get().identity());
}

Key GammaGroup::key_of(const GammaElement& e) const {
  Key k;
  e.base.append_key(k);
  char buf[12];
  std::memcpy(buf, &e.lamp.z, 8);
  k.append(buf, 8);
  for (const auto& [p, v] : e.lamp.f) {
    std::memcpy(buf, &p, 4);
    std::memcpy(buf + 4, &v, 8);
    k.append(buf, 12);
  }
  return k;
}

GammaElement GammaGroup::element(const Key& k) const {
  GammaElement e;
  std::size_t base_len = 1 + ((std::size_t(1) << (n_ + 3)) - 1 + 7) / 8;
  e.base = TreeQuotientGroup::from_key(k.substr(0, base_len));
  std::memcpy(&e.lamp.z, k.data() + base_len, 8);
  for (std::size_t i = base_len + 8; i + 12 <= k.size(); i += 12) {
    uint32_t p;
    int64_t v;
    std::memcpy(&p, k.data() + i, 4);
    std::memcpy(&v, k.data() + i + 4, 8);
    e.lamp.f.emplace(p, v);
  }
  return e;
}

GammaElement GammaGroup::mul(const GammaElement& x, const GammaElement& y) const {
  // (N1, g1)(N2, g2) = (N1 (g1 . N2), g1 g2); g1 . b_p = b_{p . g1^-1}
  NilElement moved;
  moved.z = y.lamp.z;
  for (const auto& [p, v] : y.lamp.f) moved.f.emplace(space_.preimage(p, x.base), v);
  return {nil_multiply(x.lamp, moved, *M_), x.base * y.base};
}

GammaElement GammaGroup::inv(const GammaElement& x) const {
  NilElement ni = nil_inverse(x.lamp, *M_);
  NilElement moved;
  moved.z = ni.z;
  for (const auto& [p, v] : ni.f) moved.f.emplace(space_.act(p, x.base), v);
  return {std::move(moved), x.base.inverse()};
}

void GammaGroup::step_in_place(GammaElement& e, std::size_t i, bool inv) const {
  if (i < 4) {
    gens_.right_multiply(e.base, int(i));
    return;
  }
  uint32_t q = space_.preimage(t_point_, e.base);
  int64_t sign = inv ? -1 : 1;
  int64_t s = 0;
  for (const auto& [p, v] : e.lamp.f)
    if (M_->contains(p, q)) s = checked_add(s, v);
  e.lamp.z = checked_add(e.lamp.z, checked_mul(sign, s));
  add_entry(e.lamp.f, q, sign);
}

Key GammaGroup::identity() const { return key_of({NilElement{}, TreeAut(n_ + 3)}); }
Key GammaGroup::multiply(const Key& x, const Key& y) const { return key_of(mul(element(x), element(y))); }
Key GammaGroup::inverse(const Key& x) const { return key_of(inv(element(x))); }

Key GammaGroup::generator(std::size_t i) const {
  GammaElement e{NilElement{}, TreeAut(n_ + 3)};
  step_in_place(e, i, false);
  return key_of(e);
}

Key GammaGroup::step(const Key& x, std::size_t i, bool inv) const {
  GammaElement e = element(x);
  step_in_place(e, i, inv);
  return key_of(e);
}

std::shared_ptr<const GammaGroup> gamma_group(int n) {
  require_germ_level(n);
  static std::mutex mu;
  static std::array<std::shared_ptr<const GammaGroup>, kMaxGermLevel + 1> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (cache[n]) return cache[n];
  }
  auto g = std::make_shared<const GammaGroup>(n);
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[n]) cache[n] = g;
  return cache[n];
}

GammaElement gamma_eval(const Word& w, int n) {
  auto G = gamma_group(n);
  GammaElement e{NilElement{}, TreeAut(n + 3)};
  for (const auto& l : w) {
    if (l.is_tree())
      G->step_in_place(e, std::size_t(l.tree_index()), false);
    else if (l.kind == LetterKind::T)
      G->step_in_place(e, 4, l.inverse);
    else
      throw InvalidInput("gamma_eval: letters must be a, b, c, d, t");
  }
  return e;
}

std::optional<int64_t> central_value(const GammaElement& e) {
  if (!e.lamp.f.empty() || !e.base.is_identity()) return std::nullopt;
  return e.lamp.z;
}

// ---- center ----

namespace {

// Word for some g in St(n) whose section at 1^n is ab modulo level 3: Schreier
// generators of St(n), their sections at 1^n, then BFS inside G_3.
Word stabilizer_word_with_section_ab(int n) {
  const OmegaString om = OmegaString::grigorchuk();
  TreeGenerators top(om, n), full(om, n + 3);
  std::unordered_map<TreeAut, Word> rep;
  std::vector<TreeAut> order{TreeAut(n)};
  rep.emplace(order[0], Word{});
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int x = 0; x < 4; ++x) {
      TreeAut g = order[i];
      top.right_multiply(g, x);
      if (!rep.count(g)) {
        Word w = rep.at(order[i]);
        w.push_back(Letter::tree(x));
        rep.emplace(g, std::move(w));
        order.push_back(std::move(g));
      }
    }
  const G3Table& g3 = G3Table::get();
  Vertex one = Vertex::ones(n);
  std::vector<std::pair<int, Word>> gens;
  std::vector<bool> seen(g3.order(), false);
  for (const TreeAut& t : order)
    for (int x = 0; x < 4; ++x) {
      TreeAut tx = t;
      top.right_multiply(tx, x);
      Word s = concat({rep.at(t), Word{Letter::tree(x)}, inverse(rep.at(tx))});
      TreeAut g = evaluate_word(s, full);
      if (!g.fixes_level(n)) throw InvariantViolation("Schreier generator leaves the level stabilizer");
      int sec = g3.index_of(g.section(one));
      if (!seen[sec]) {
        seen[sec] = true;
        gens.emplace_back(sec, std::move(s));
      }
    }
  int target = g3.of_word(parse_word("ab"));
  std::vector<int> parent(g3.order(), -1), via(g3.order(), -1);
  std::deque<int> queue{g3.identity()};
  parent[g3.identity()] = g3.identity();
  while (!queue.empty() && parent[target] < 0) {
    int h = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gens.size(); ++k) {
      int nh = g3.mul(h, gens[k].first);
      if (parent[nh] >= 0) continue;
      parent[nh] = h;
      via[nh] = int(k);
      queue.push_back(nh);
    }
  }
  if (parent[target] < 0) throw InvariantViolation("no element of St(n) has section ab at 1^n");
  std::vector<int> path;
  for (int h = target; h != g3.identity(); h = parent[h]) path.push_back(via[h]);
  Word w;
  for (auto it = path.rbegin(); it != path.rend(); ++it) w = concat({w, gens[std::size_t(*it)].second});
  return free_reduce(w);
}

}  // namespace

CenterWitness check_center_witness(int n, const Word& g) {
  require_germ_level(n);
  CenterWitness cw;
  cw.level = n;
  cw.stabilizer_word = g;
  Word t{Letter::t()}, ti{Letter::t(true)};
  Word conj = concat({inverse(g), t, g});
  cw.witness = commutator_word(t, conj);

  TreeAut ge = evaluate_word(g, OmegaString::grigorchuk(), n + 3);
  if (ge.is_identity()) cw.report.fail("degenerate witness: g is the identity");
  if (!ge.fixes_level(n)) cw.report.fail("g does not stabilize level " + std::to_string(n));
  const G3Table& g3 = G3Table::get();
  int sec = g3.index_of(ge.section(Vertex::ones(n)));
  if (sec != g3.of_word(parse_word("ab"))) cw.report.fail("section of g at 1^n is not ab modulo level 3");

  auto G = gamma_group(n);
  GammaElement c = gamma_eval(conj, n);
  uint32_t y = GermSpace::point(Vertex::ones(n).value, g3.of_word(parse_word("ab")));
  if (!(c.lamp.f == std::map<uint32_t, int64_t>{{y, 1}} && c.lamp.z == 0 && c.base.is_identity()))
    cw.report.fail("g^-1 t g is not (b_(1^n,ab), id)");

  GammaElement e = gamma_eval(cw.witness, n);
  auto z = central_value(e);
  if (!z || (*z != 1 && *z != -1))
    cw.report.fail("witness image is not (0, +-1) in Gamma_" + std::to_string(n));
  else
    cw.central = *z;
  for (std::size_t i = 0; i < 5; ++i) {
    GammaElement s = gamma_eval(Word{i < 4 ? Letter::tree(int(i)) : Letter::t()}, n);
    if (!(G->mul(e, s) == G->mul(s, e))) cw.report.fail("witness does not commute with generator " + G->labels()[i]);
  }
  std::vector<int> others;
  for (int j = std::max(1, n - 2); j < n; ++j) others.push_back(j);
  for (int j = n + 1; j <= std::min(n + 2, kMaxGermLevel); ++j) others.push_back(j);
  for (int j : others) {
    GammaElement ej = gamma_eval(cw.witness, j);
    bool triv = ej.lamp.f.empty() && ej.lamp.z == 0 && ej.base.is_identity();
    cw.trivial_in[j] = triv;
    if (!triv) cw.report.fail("witness is not trivial in Gamma_" + std::to_string(j));
  }
  if (n + 2 > kMaxGermLevel) cw.report.notes.push_back("levels above 5 not checked");
  return cw;
}

CenterWitness center_witness(int n) {
  require_germ_level(n);
  return check_center_witness(n, stabilizer_word_with_section_ab(n));
}

std::string CenterWitness::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["stabilizer_word"] = to_string(stabilizer_word);
  j["witness"] = to_string(witness);
  j["central"] = central;
  nlohmann::ordered_json triv = nlohmann::ordered_json::object();
  for (auto [lvl, t] : trivial_in) triv[std::to_string(lvl)] = t;
  j["trivial_in"] = triv;
  j["ok"] = report.ok;
  j["failures"] = report.failures;
  return j.dump();
}

CheckReport gamma_ball_coincidence(int n, int m, int radius, const BallOptions& opt) {
  CheckReport rep;
  auto Gn = gamma_group(n), Gm = gamma_group(m);
  int r = matching_radius(Gn, Gm, radius, opt);
  if (r < radius)
    rep.fail("Gamma_" + std::to_string(n) + " and Gamma_" + std::to_string(m) + " differ at radius " +
             std::to_string(r + 1));
  rep.notes.push_back("matching radius " + std::to_string(r));
  const G3Table& g3 = G3Table::get();
  std::vector<bool> allowed(g3.order(), false);
  for (const char* w : {"", "b", "c", "d"}) allowed[g3.of_word(parse_word(w))] = true;
  for (const auto& G : {Gn, Gm}) {
    BallOptions o = opt;
    o.retain = true;
    GrowthProfile prof = ball(*G, radius, o);
    for (const auto& sphere : prof.spheres)
      for (const Key& k : sphere)
        for (const auto& [p, v] : G->element(k).lamp.f)
          if (!allowed[GermSpace::germ_of(p)]) {
            rep.fail("lamp at " + G->space().str(p) + " in " + G->describe() + " has germ outside {id,b,c,d}");
            return rep;
          }
  }
  return rep;
}

CheckReport center0_check(int n, int radius, const BallOptions& opt) {
  CheckReport rep;
  auto G = gamma_group(n);
  std::vector<GammaElement> probes;
  for (std::size_t i = 0; i < 5; ++i) probes.push_back(G->element(G->generator(i)));
  // conjugates h^-1 t h for short tree words h
  for (const char* h : {"a", "ab", "ac", "ad", "aba", "abab", "abac", "abad", "acab", "adab", "abadac"}) {
    Word hw = parse_word(h);
    probes.push_back(gamma_eval(concat({inverse(hw), Word{Letter::t()}, hw}), n));
  }
  BallOptions o = opt;
  o.retain = true;
  GrowthProfile prof = ball(*G, radius, o);
  std::size_t central = 0;
  for (const auto& sphere : prof.spheres)
    for (const Key& k : sphere) {
      GammaElement e = G->element(k);
      bool trivial_projection = e.lamp.f.empty() && e.base.is_identity();
      if (trivial_projection) {
        if (e.lamp.z == 0) continue;
        ++central;
        for (std::size_t i = 0; i < 5; ++i)
          if (!(G->mul(e, probes[i]) == G->mul(probes[i], e)))
            rep.fail("(0, " + std::to_string(e.lamp.z) + ") does not commute with " + G->labels()[i]);
        continue;
      }
      bool found = false;
      for (const auto& p : probes)
        if (!(G->mul(e, p) == G->mul(p, e))) {
          found = true;
          break;
        }
      if (!found) rep.fail("element with nontrivial wreath image commutes with every probe");
    }
  rep.notes.push_back("central elements in ball: " + std::to_string(central));
  // the ball rarely reaches the center, so probe (0, z) directly
  for (int64_t z : {1, -1, 3}) {
    GammaElement e{NilElement{{}, z}, TreeAut(n + 3)};
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (!(G->mul(e, probes[i]) == G->mul(probes[i], e)))
        rep.fail("(0, " + std::to_string(z) + ") does not commute with probe " + std::to_string(i));
  }
  // base conjugation fixes the central coordinate of pure lamp elements
  for (const auto& sphere : prof.spheres)
    for (const Key& k : sphere) {
      GammaElement e = G->element(k);
      if (!e.base.is_identity()) continue;
      for (std::size_t i = 0; i < 4; ++i) {
        GammaElement c = G->mul(G->mul(probes[i], e), probes[i]);  // generators are involutions
        if (c.lamp.z != e.lamp.z) rep.fail("conjugation by " + G->labels()[i] + " moves the central coordinate");
      }
    }
  return rep;
}

CheckReport center_direct_sum_check(int max_n) {
  require_germ_level(max_n);
  CheckReport rep;
  std::vector<CenterWitness> ws;
  for (int n = 1; n <= max_n; ++n) ws.push_back(center_witness(n));
  auto central_vector = [&](const Word& w) {
    std::vector<std::optional<int64_t>> out;
    for (int j = 1; j <= max_n; ++j) out.push_back(central_value(gamma_eval(w, j)));
    return out;
  };
  // witness n lands in factor n only and commutes with every generator of every factor
  for (int n = 1; n <= max_n; ++n) {
    const auto& w = ws[n - 1];
    if (!w.report.ok) rep.fail("witness for level " + std::to_string(n) + ": " + w.report.failures.front());
    auto v = central_vector(w.witness);
    for (int j = 1; j <= max_n; ++j) {
      int64_t want = j == n ? w.central : 0;
      if (!v[j - 1] || *v[j - 1] != want)
        rep.fail("witness " + std::to_string(n) + " has the wrong image in Gamma_" + std::to_string(j));
      auto G = gamma_group(j);
      GammaElement e = gamma_eval(w.witness, j);
      for (std::size_t i = 0; i < 5; ++i) {
        GammaElement s = G->element(G->generator(i));
        if (!(G->mul(e, s) == G->mul(s, e)))
          rep.fail("witness " + std::to_string(n) + " is not central in Gamma_" + std::to_string(j));
      }
    }
  }
  // products over every nonempty subset, with exponents 1 and 2, give the summed vectors
  for (unsigned mask = 1; mask < (1u << max_n); ++mask)
    for (int e = 1; e <= 2; ++e) {
      Word w;
      std::vector<int64_t> want(max_n, 0);
      for (int n = 1; n <= max_n; ++n)
        if (mask >> (n - 1) & 1)
          for (int k = 0; k < e; ++k) {
            w = concat({w, ws[n - 1].witness});
            want[n - 1] += ws[n - 1].central;
          }
      auto v = central_vector(w);
      for (int j = 1; j <= max_n; ++j)
        if (!v[j - 1] || *v[j - 1] != want[j - 1])
          rep.fail("product over subset " + std::to_string(mask) + " is off in Gamma_" + std::to_string(j));
    }
  return rep;
}

}  // namespace selfsim
