#include "selfsim/finite_group.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <set>
#include <sstream>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

std::string pack(const std::vector<long long>& v) {
  std::string s(2 * v.size(), '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    uint16_t x = uint16_t(v[i]);
    std::memcpy(&s[2 * i], &x, 2);
  }
  return s;
}

inline uint16_t entry(const std::string& r, std::size_t i) {
  uint16_t x;
  std::memcpy(&x, r.data() + 2 * i, 2);
  return x;
}

inline void set_entry(std::string& r, std::size_t i, uint16_t x) { std::memcpy(&r[2 * i], &x, 2); }

bool is_generator_label(const std::string& k) {
  if (k == "a" || k == "b" || k == "c" || k == "d") return true;
  if (k.size() >= 2 && (k[0] == 'u' || k[0] == 'v'))
    return std::all_of(k.begin() + 1, k.end(), [](char c) { return c >= '0' && c <= '9'; });
  return false;
}

// u1 < u2 < ... < v1 < ...; tree letters first in alphabetical order
bool label_less(const std::string& x, const std::string& y) {
  auto rank = [](const std::string& s) {
    if (s.size() == 1) return std::pair<int, long>(0, s[0]);
    return std::pair<int, long>(s[0] == 'u' ? 1 : 2, std::stol(s.substr(1)));
  };
  return rank(x) < rank(y);
}

}  // namespace

FiniteGroupSpec FiniteGroupSpec::from_config(const KeyValueConfig& cfg) {
  FiniteGroupSpec s;
  std::string kind = cfg.get_or("kind", "table");
  s.name = cfg.get_or("name", kind);
  s.order_budget = std::size_t(cfg.get_int_or("order_budget", 2'000'000));
  std::vector<std::string> labels;
  for (const auto& k : cfg.keys())
    if (is_generator_label(k)) labels.push_back(k);
  std::sort(labels.begin(), labels.end(), label_less);
  if (labels.empty()) throw InvalidInput("finite group config: no generators (u1=, v1=, or a=..d=)");
  s.labels = labels;
  if (kind == "matrix") {
    s.kind = Kind::Matrix;
    s.modulus = int(cfg.get_int("modulus"));
    s.dimension = int(cfg.get_int("dimension"));
    s.projective = cfg.get_bool_or("projective", false);
    for (const auto& l : labels) {
      auto rows = parse_rows(cfg.get(l));
      std::vector<long long> flat;
      for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
      s.generators.push_back(flat);
    }
  } else if (kind == "permutation") {
    s.kind = Kind::Permutation;
    s.degree = int(cfg.get_int("degree"));
    for (const auto& l : labels) {
      auto rows = parse_rows(cfg.get(l));
      if (rows.size() != 1) throw InvalidInput("permutation generator must be a single image list");
      s.generators.push_back(rows[0]);
    }
  } else if (kind == "table") {
    s.kind = Kind::Table;
    for (const auto& row : parse_rows(cfg.get("table"))) s.table.emplace_back(row.begin(), row.end());
    for (const auto& l : labels) s.generators.push_back({cfg.get_int(l)});
  } else {
    throw InvalidInput("finite group config: unknown kind '" + kind + "'");
  }
  return s;
}

std::vector<std::size_t> FiniteGroupSpec::label_group(char prefix) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!labels[i].empty() && labels[i][0] == prefix) out.push_back(i);
  return out;
}

FiniteGroup::FiniteGroup(FiniteGroupSpec spec) : spec_(std::move(spec)) {
  const auto& s = spec_;
  if (s.generators.size() != s.labels.size()) throw InvalidInput("finite group: labels and generators differ in count");
  std::vector<Rep> gen_reps;
  switch (s.kind) {
    case FiniteGroupSpec::Kind::Matrix: {
      if (s.modulus < 2 || s.modulus > 65535) throw InvalidInput("matrix group: modulus must be in [2, 65535]");
      if (s.dimension < 1 || s.dimension > 8) throw InvalidInput("matrix group: dimension must be in [1, 8]");
      for (const auto& g : s.generators) {
        if (g.size() != std::size_t(s.dimension * s.dimension)) throw InvalidInput("matrix generator has wrong size");
        std::vector<long long> r;
        for (long long x : g) r.push_back(((x % s.modulus) + s.modulus) % s.modulus);
        gen_reps.push_back(normalize(pack(r)));
      }
      break;
    }
    case FiniteGroupSpec::Kind::Permutation: {
      if (s.degree < 1 || s.degree > 65535) throw InvalidInput("permutation group: bad degree");
      for (const auto& g : s.generators) {
        std::vector<long long> sorted = g;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < s.degree; ++i)
          if (sorted.size() != std::size_t(s.degree) || sorted[i] != i)
            throw InvalidInput("permutation generator is not a permutation of 0..degree-1");
        gen_reps.push_back(pack(g));
      }
      break;
    }
    case FiniteGroupSpec::Kind::Table: {
      std::size_t n = s.table.size();
      if (n == 0) throw InvalidInput("table group: empty table");
      for (std::size_t i = 0; i < n; ++i) {
        if (s.table[i].size() != n) throw InvalidInput("table group: table is not square");
        std::vector<char> row_seen(n, 0), col_seen(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
          int x = s.table[i][j], y = s.table[j][i];
          if (x < 0 || std::size_t(x) >= n || y < 0 || std::size_t(y) >= n)
            throw InvalidInput("table group: entry out of range");
          if (row_seen[x]++ || col_seen[y]++) throw InvalidInput("table group: not a Latin square");
        }
        if (s.table[0][i] != int(i) || s.table[i][0] != int(i)) throw InvalidInput("table group: element 0 must be the identity");
      }
      if (n <= 128)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
              if (s.table[s.table[i][j]][k] != s.table[i][s.table[j][k]]) throw InvalidInput("table group: not associative");
      for (const auto& g : s.generators) {
        if (g.size() != 1 || g[0] < 0 || std::size_t(g[0]) >= n) throw InvalidInput("table generator must be an element index");
        gen_reps.push_back(pack(g));
      }
      break;
    }
  }
  Rep id = identity_rep();
  reps_.push_back(id);
  index_[id] = 0;
  std::size_t k = gen_reps.size();
  for (std::size_t x = 0; x < reps_.size(); ++x) {
    for (std::size_t i = 0; i < k; ++i) {
      Rep y = product(reps_[x], gen_reps[i]);
      auto [it, fresh] = index_.emplace(y, uint32_t(reps_.size()));
      if (fresh) {
        if (reps_.size() >= s.order_budget)
          throw BudgetExceeded("finite group: order budget exceeded (" + std::to_string(s.order_budget) + ")", -1);
        reps_.push_back(y);
      }
      right_.push_back(it->second);
    }
  }
  for (std::size_t i = 0; i < k; ++i) gens_.push_back(index_.at(gen_reps[i]));
  // every generator must permute the closure, otherwise it is not invertible
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<char> hit(order(), 0);
    for (std::size_t x = 0; x < order(); ++x)
      if (hit[mul_gen(uint32_t(x), i)]++) throw InvalidInput("finite group: generator " + s.labels[i] + " is not invertible");
  }
  if (s.kind == FiniteGroupSpec::Kind::Table && order() != s.table.size())
    throw InvalidInput("finite group: generators do not generate the table group");
}

FiniteGroup::Rep FiniteGroup::identity_rep() const {
  switch (spec_.kind) {
    case FiniteGroupSpec::Kind::Matrix: {
      std::vector<long long> r(spec_.dimension * spec_.dimension, 0);
      for (int i = 0; i < spec_.dimension; ++i) r[i * spec_.dimension + i] = 1 % spec_.modulus;
      return normalize(pack(r));
    }
    case FiniteGroupSpec::Kind::Permutation: {
      std::vector<long long> r(spec_.degree);
      for (int i = 0; i < spec_.degree; ++i) r[i] = i;
      return pack(r);
    }
    case FiniteGroupSpec::Kind::Table: return pack({0});
  }
  return {};
}

FiniteGroup::Rep FiniteGroup::normalize(const Rep& r) const {
  if (spec_.kind != FiniteGroupSpec::Kind::Matrix || !spec_.projective) return r;
  Rep neg = r;
  for (std::size_t i = 0; i < r.size() / 2; ++i) set_entry(neg, i, uint16_t((spec_.modulus - entry(r, i)) % spec_.modulus));
  // compare as entry sequences
  for (std::size_t i = 0; i < r.size() / 2; ++i) {
    if (entry(r, i) != entry(neg, i)) return entry(r, i) < entry(neg, i) ? r : neg;
  }
  return r;
}

FiniteGroup::Rep FiniteGroup::product(const Rep& x, const Rep& y) const {
  switch (spec_.kind) {
    case FiniteGroupSpec::Kind::Matrix: {
      int n = spec_.dimension;
      uint64_t m = uint64_t(spec_.modulus);
      Rep r(x.size(), '\0');
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          uint64_t acc = 0;
          for (int t = 0; t < n; ++t) acc += uint64_t(entry(x, i * n + t)) * entry(y, t * n + j);
          set_entry(r, i * n + j, uint16_t(acc % m));
        }
      return normalize(r);
    }
    case FiniteGroupSpec::Kind::Permutation: {
      // right action: first x, then y
      Rep r(x.size(), '\0');
      for (int i = 0; i < spec_.degree; ++i) set_entry(r, i, entry(y, entry(x, i)));
      return r;
    }
    case FiniteGroupSpec::Kind::Table: {
      Rep r(2, '\0');
      set_entry(r, 0, uint16_t(spec_.table[entry(x, 0)][entry(y, 0)]));
      return r;
    }
  }
  return {};
}

uint32_t FiniteGroup::multiply(uint32_t x, uint32_t y) const {
  if (x == 0) return y;
  if (y == 0) return x;
  return index_.at(product(reps_[x], reps_[y]));
}

uint32_t FiniteGroup::mul_gen_inv(uint32_t x, std::size_t i) const {
  return multiply(x, inverse(gens_[i]));
}

uint32_t FiniteGroup::inverse(uint32_t x) const {
  if (inv_cache_.empty()) {
    // x^-1 is the last element before returning to the identity in x's cycle
    // under right multiplication by x; done once for all elements.
    std::vector<uint32_t> inv(order(), 0);
    for (uint32_t e = 0; e < order(); ++e) {
      uint32_t y = e, prev = 0;
      while (y != 0) {
        prev = y;
        y = multiply(y, e);
      }
      inv[e] = prev;
    }
    inv_cache_ = std::move(inv);
  }
  return inv_cache_[x];
}

void FiniteGroup::build_metric() const {
  if (!growth_.empty()) return;
  moves_.clear();
  for (std::size_t i = 0; i < rank(); ++i) {
    moves_.push_back({i, false});
    if (!generator_is_involution(i)) moves_.push_back({i, true});
  }
  std::vector<uint32_t> ginv(rank());
  for (std::size_t i = 0; i < rank(); ++i)
    if (!generator_is_involution(i)) ginv[i] = inverse(gens_[i]);
  dist_.assign(order(), -1);
  parent_.assign(order(), {0, -1});
  dist_[0] = 0;
  std::deque<uint32_t> q{0};
  std::vector<uint64_t> sphere{1};
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop_front();
    for (std::size_t m = 0; m < moves_.size(); ++m) {
      auto [i, inv] = moves_[m];
      uint32_t y = inv ? multiply(x, ginv[i]) : mul_gen(x, i);
      if (dist_[y] < 0) {
        dist_[y] = dist_[x] + 1;
        parent_[y] = {x, int(m)};
        if (sphere.size() <= std::size_t(dist_[y])) sphere.push_back(0);
        ++sphere[dist_[y]];
        q.push_back(y);
      }
    }
  }
  growth_.resize(sphere.size());
  uint64_t acc = 0;
  for (std::size_t r = 0; r < sphere.size(); ++r) growth_[r] = acc += sphere[r];
}

const std::vector<uint64_t>& FiniteGroup::growth() const {
  build_metric();
  return growth_;
}

int FiniteGroup::word_length(uint32_t x) const {
  build_metric();
  return dist_[x];
}

Word FiniteGroup::shortest_word(uint32_t x) const {
  build_metric();
  Word w;
  while (x != 0) {
    auto [p, m] = parent_[x];
    auto [i, inv] = moves_[m];
    Letter l = parse_word(spec_.labels[i]).at(0);
    l.inverse = inv;
    w.push_back(l);
    x = p;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

uint32_t FiniteGroup::evaluate(const Word& w) const {
  uint32_t x = 0;
  for (const auto& l : w) {
    Letter base = l;
    base.inverse = false;
    auto it = std::find(spec_.labels.begin(), spec_.labels.end(), base.str());
    if (it == spec_.labels.end()) throw InvalidInput("letter '" + base.str() + "' is not a generator of " + spec_.name);
    std::size_t i = std::size_t(it - spec_.labels.begin());
    x = l.inverse ? mul_gen_inv(x, i) : mul_gen(x, i);
  }
  return x;
}

bool FiniteGroup::is_subgroup_image(const std::vector<std::size_t>& gen_indices) const {
  std::set<uint32_t> s{0};
  for (auto i : gen_indices) s.insert(gens_[i]);
  for (auto x : s)
    for (auto y : s)
      if (!s.count(multiply(x, y))) return false;
  return true;
}

bool FiniteGroup::satisfies_F_relations() const {
  auto idx = [&](const char* l) -> int {
    auto it = std::find(spec_.labels.begin(), spec_.labels.end(), std::string(l));
    return it == spec_.labels.end() ? -1 : int(it - spec_.labels.begin());
  };
  int a = idx("a"), b = idx("b"), c = idx("c"), d = idx("d");
  if (a < 0 || b < 0 || c < 0 || d < 0 || rank() != 4) return false;
  uint32_t A = gens_[a], B = gens_[b], C = gens_[c], D = gens_[d];
  return multiply(A, A) == 0 && multiply(B, B) == 0 && multiply(C, C) == 0 && multiply(B, C) == multiply(C, B) &&
         multiply(B, C) == D;
}

std::string FiniteGroup::describe() const {
  return (spec_.name.empty() ? std::string("finite") : spec_.name) + " (order " + std::to_string(order()) + ")";
}

FiniteGroupPtr finite_group(const FiniteGroupSpec& spec) { return std::make_shared<FiniteGroup>(spec); }

FiniteMarkedGroup::FiniteMarkedGroup(FiniteGroupPtr g) : g_(std::move(g)) { labels_ = g_->spec().labels; }

Key FiniteMarkedGroup::key_of(uint32_t x) { return Key(reinterpret_cast<const char*>(&x), 4); }

uint32_t FiniteMarkedGroup::from_key(const Key& k) {
  uint32_t x;
  std::memcpy(&x, k.data(), 4);
  return x;
}

Key FiniteMarkedGroup::multiply(const Key& x, const Key& y) const {
  return key_of(g_->multiply(from_key(x), from_key(y)));
}

Key FiniteMarkedGroup::inverse(const Key& x) const { return key_of(g_->inverse(from_key(x))); }

Key FiniteMarkedGroup::step(const Key& x, std::size_t i, bool inv) const {
  uint32_t e = from_key(x);
  return key_of(inv ? g_->mul_gen_inv(e, i) : g_->mul_gen(e, i));
}

namespace {

FiniteGroupSpec xor_table(int bits) {
  FiniteGroupSpec s;
  s.kind = FiniteGroupSpec::Kind::Table;
  int n = 1 << bits;
  s.table.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.table[i][j] = i ^ j;
  return s;
}

}  // namespace

FiniteGroupSpec klein_lamp_spec() {
  FiniteGroupSpec s = xor_table(2);
  s.name = "klein";
  s.labels = {"u1", "v1"};
  s.generators = {{1}, {2}};
  return s;
}

FiniteGroupSpec s3_lamp_spec() {
  FiniteGroupSpec s;
  s.kind = FiniteGroupSpec::Kind::Permutation;
  s.name = "sym3";
  s.degree = 3;
  s.labels = {"u1", "v1"};
  s.generators = {{1, 0, 2}, {0, 2, 1}};
  return s;
}

FiniteGroupSpec cyclic2_library_spec() {
  FiniteGroupSpec s = xor_table(1);
  s.name = "Z2";
  s.labels = {"u1", "v1", "v2", "v3"};
  s.generators = {{1}, {1}, {1}, {0}};
  return s;
}

FiniteGroupSpec klein_library_spec() {
  FiniteGroupSpec s = xor_table(2);
  s.name = "Z2xZ2";
  s.labels = {"u1", "v1", "v2", "v3"};
  s.generators = {{1}, {2}, {3}, {1}};
  return s;
}

FiniteGroupSpec dihedral_library_spec(int k) {
  if (k < 4 || k % 2) throw InvalidInput("dihedral lamp: k must be even and >= 4");
  FiniteGroupSpec s;
  s.kind = FiniteGroupSpec::Kind::Permutation;
  s.name = "D" + std::to_string(2 * k);
  s.degree = k;
  s.labels = {"u1", "v1", "v2", "v3"};
  std::vector<long long> u(k), v1(k), v2(k), v3(k);
  for (int i = 0; i < k; ++i) {
    u[i] = (k - i) % k;               // reflection i -> -i
    v1[i] = (k - i + 1) % k;          // reflection then rotation
    v2[i] = (i + k / 2) % k;          // central half turn
    v3[i] = (k - i + 1 + k / 2) % k;  // v1 v2
  }
  s.generators = {u, v1, v2, v3};
  return s;
}

FiniteGroupSpec psl2_library_spec(int power) {
  if (power < 1 || power > 4) throw InvalidInput("psl2 lamp: power must be in [1, 4]");
  int m = 1;
  for (int i = 0; i < power; ++i) m *= 5;
  int lam = -1;
  for (int x = 0; x < m; ++x)
    if ((long long)x * x % m == m - 1 && x % 5 == 2) {
      lam = x;
      break;
    }
  FiniteGroupSpec s;
  s.kind = FiniteGroupSpec::Kind::Matrix;
  s.name = "PSL2(Z/" + std::to_string(m) + ")";
  s.modulus = m;
  s.dimension = 2;
  s.projective = true;
  s.labels = {"u1", "v1", "v2", "v3"};
  s.generators = {{1, 1, m - 2, m - 1}, {lam, 0, 0, m - lam}, {0, 1, m - 1, 0}, {0, lam, lam, 0}};
  return s;
}

}  // namespace selfsim
