#include "selfsim/marked_group.hpp"

#include <cstring>
#include <sstream>
#include <unordered_set>

#include "selfsim/error.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim {

int MarkedGroup::label_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return int(i);
  return -1;
}

Key MarkedGroup::step(const Key& x, std::size_t i, bool inv) const {
  Key s = generator(i);
  return multiply(x, inv ? inverse(s) : s);
}

bool MarkedGroup::is_involution(std::size_t i) const {
  Key s = generator(i);
  return multiply(s, s) == identity();
}

Key evaluate(const MarkedGroup& g, const Word& w) {
  Key x = g.identity();
  for (const auto& l : w) {
    Letter base = l;
    base.inverse = false;
    int i = g.label_index(base.str());
    if (i < 0) throw InvalidInput("letter '" + base.str() + "' is not in the group's alphabet");
    x = g.step(x, std::size_t(i), l.inverse);
  }
  return x;
}

std::string GrowthProfile::to_csv() const {
  std::ostringstream os;
  os << "radius,count\n";
  for (std::size_t r = 0; r < counts.size(); ++r) os << r << "," << counts[r] << "\n";
  return os.str();
}

std::string GrowthProfile::to_json() const {
  std::ostringstream os;
  os << "{\"complete\":" << (complete ? "true" : "false") << ",\"counts\":[";
  for (std::size_t r = 0; r < counts.size(); ++r) os << (r ? "," : "") << counts[r];
  os << "]}";
  return os.str();
}

namespace {

constexpr std::size_t kShards = 64;
constexpr std::size_t kChunk = 512;

// Level-synchronous BFS. Candidates are generated in (frontier index, move)
// order and deduplicated shard by shard in that same order, so the accepted
// sequence does not depend on the worker count.
class BfsState {
 public:
  BfsState(const MarkedGroup& g, const BallOptions& opt) : g_(g), opt_(opt), visited_(kShards) {
    for (std::size_t i = 0; i < g.rank(); ++i) {
      moves_.push_back({i, false});
      if (!g.is_involution(i)) moves_.push_back({i, true});
    }
    Key id = g.identity();
    visited_[shard(id)].insert(id);
    frontier_.push_back(id);
    total_ = 1;
  }

  uint64_t total() const { return total_; }
  const std::vector<Key>& frontier() const { return frontier_; }

  void advance() {
    std::size_t nchunks = (frontier_.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<Key>> cand(nchunks);
    parallel_for(nchunks, opt_.workers, [&](std::size_t c) {
      std::size_t lo = c * kChunk, hi = std::min(frontier_.size(), lo + kChunk);
      auto& out = cand[c];
      out.reserve((hi - lo) * moves_.size());
      for (std::size_t i = lo; i < hi; ++i)
        for (auto [gen, inv] : moves_) out.push_back(g_.step(frontier_[i], gen, inv));
    });
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> by_shard(kShards);
    for (std::size_t c = 0; c < nchunks; ++c)
      for (std::size_t j = 0; j < cand[c].size(); ++j) by_shard[shard(cand[c][j])].push_back({uint32_t(c), uint32_t(j)});
    std::vector<std::vector<char>> accepted(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) accepted[c].assign(cand[c].size(), 0);
    parallel_for(kShards, opt_.workers, [&](std::size_t s) {
      for (auto [c, j] : by_shard[s])
        if (visited_[s].insert(cand[c][j]).second) accepted[c][j] = 1;
    });
    std::vector<Key> next;
    for (std::size_t c = 0; c < nchunks; ++c)
      for (std::size_t j = 0; j < cand[c].size(); ++j)
        if (accepted[c][j]) next.push_back(std::move(cand[c][j]));
    total_ += next.size();
    frontier_.swap(next);
  }

 private:
  static std::size_t shard(const Key& k) { return std::hash<Key>{}(k) % kShards; }

  const MarkedGroup& g_;
  BallOptions opt_;
  std::vector<std::pair<std::size_t, bool>> moves_;
  std::vector<std::unordered_set<Key>> visited_;
  std::vector<Key> frontier_;
  uint64_t total_ = 0;
};

}  // namespace

GrowthProfile ball(const MarkedGroup& g, int radius, const BallOptions& opt) {
  if (radius < 0) throw InvalidInput("ball: radius must be nonnegative");
  GrowthProfile p;
  BfsState st(g, opt);
  p.counts.push_back(1);
  if (opt.retain) p.spheres.push_back(st.frontier());
  for (int r = 1; r <= radius; ++r) {
    st.advance();
    if (st.total() > opt.max_elements) {
      if (opt.throw_on_budget)
        throw BudgetExceeded("ball: element budget exceeded at radius " + std::to_string(r), r - 1);
      p.complete = false;
      return p;
    }
    p.counts.push_back(st.total());
    if (opt.retain) p.spheres.push_back(st.frontier());
  }
  return p;
}

int matching_radius(MarkedGroupPtr g1, MarkedGroupPtr g2, int cap, const BallOptions& opt) {
  if (g1->rank() != g2->rank()) throw InvalidInput("matching_radius: alphabet arity differs");
  auto diag = std::make_shared<DiagonalProduct>(std::vector<MarkedGroupPtr>{g1, g2});
  BfsState s1(*g1, opt), s2(*g2, opt), sd(*diag, opt);
  for (int k = 1; k <= cap; ++k) {
    s1.advance();
    s2.advance();
    sd.advance();
    if (s1.total() != sd.total() || s2.total() != sd.total()) return k - 1;
    if (sd.total() > opt.max_elements) throw BudgetExceeded("matching_radius: element budget exceeded", k);
  }
  return cap;
}

DiagonalProduct::DiagonalProduct(std::vector<MarkedGroupPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidInput("diagonal_product: empty factor list");
  std::size_t k = factors_[0]->rank();
  for (const auto& f : factors_)
    if (f->rank() != k) throw InvalidInput("diagonal_product: factors have different alphabets");
  labels_ = factors_[0]->labels();
}

Key DiagonalProduct::join(const std::vector<Key>& parts) {
  Key out;
  for (const auto& p : parts) {
    uint32_t n = uint32_t(p.size());
    out.append(reinterpret_cast<const char*>(&n), 4);
    out += p;
  }
  return out;
}

std::vector<Key> DiagonalProduct::split(const Key& x) const {
  std::vector<Key> parts;
  parts.reserve(factors_.size());
  std::size_t pos = 0;
  while (pos < x.size()) {
    uint32_t n;
    std::memcpy(&n, x.data() + pos, 4);
    parts.push_back(x.substr(pos + 4, n));
    pos += 4 + n;
  }
  return parts;
}

Key DiagonalProduct::identity() const {
  std::vector<Key> p;
  for (const auto& f : factors_) p.push_back(f->identity());
  return join(p);
}

Key DiagonalProduct::multiply(const Key& x, const Key& y) const {
  auto a = split(x), b = split(y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = factors_[i]->multiply(a[i], b[i]);
  return join(a);
}

Key DiagonalProduct::inverse(const Key& x) const {
  auto a = split(x);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = factors_[i]->inverse(a[i]);
  return join(a);
}

Key DiagonalProduct::generator(std::size_t g) const {
  std::vector<Key> p;
  for (const auto& f : factors_) p.push_back(f->generator(g));
  return join(p);
}

Key DiagonalProduct::step(const Key& x, std::size_t g, bool inv) const {
  auto a = split(x);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = factors_[i]->step(a[i], g, inv);
  return join(a);
}

std::string DiagonalProduct::describe() const {
  std::string s = "diag(";
  for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? ", " : "") + factors_[i]->describe();
  return s + ")";
}

MarkedGroupPtr diagonal_product(std::vector<MarkedGroupPtr> factors) {
  return std::make_shared<DiagonalProduct>(std::move(factors));
}

TrivialGroup::TrivialGroup(std::vector<std::string> labels) { labels_ = std::move(labels); }

TreeQuotientGroup::TreeQuotientGroup(OmegaString omega, int depth, std::vector<std::string> extra_trivial)
    : gens_(std::move(omega), depth) {
  labels_ = {"a", "b", "c", "d"};
  for (auto& l : extra_trivial) labels_.push_back(std::move(l));
}

Key TreeQuotientGroup::key_of(const TreeAut& g) {
  Key k;
  g.append_key(k);
  return k;
}

TreeAut TreeQuotientGroup::from_key(const Key& k) {
  TreeAut g(int(static_cast<unsigned char>(k[0])));
  for (std::size_t i = 0; i < g.num_bits(); ++i)
    if ((static_cast<unsigned char>(k[1 + (i >> 3)]) >> (i & 7)) & 1) g.flip_bit(i);
  return g;
}

Key TreeQuotientGroup::identity() const { return key_of(TreeAut(gens_.depth())); }

Key TreeQuotientGroup::multiply(const Key& x, const Key& y) const { return key_of(from_key(x) * from_key(y)); }

Key TreeQuotientGroup::inverse(const Key& x) const { return key_of(from_key(x).inverse()); }

Key TreeQuotientGroup::generator(std::size_t i) const {
  return i < 4 ? key_of(gens_.gen(int(i))) : identity();
}

Key TreeQuotientGroup::step(const Key& x, std::size_t i, bool) const {
  if (i >= 4) return x;
  TreeAut g = from_key(x);
  gens_.right_multiply(g, int(i));
  return key_of(g);
}

std::string TreeQuotientGroup::describe() const {
  return "G_" + gens_.omega().str() + " mod level " + std::to_string(gens_.depth());
}

MarkedGroupPtr tree_quotient(const OmegaString& omega, int depth) {
  return std::make_shared<TreeQuotientGroup>(omega, depth);
}

}  // namespace selfsim
