#include "selfsim/tree.hpp"

#include <algorithm>
#include <deque>

#include "selfsim/error.hpp"

namespace selfsim {

Vertex Vertex::parse(std::string_view bits) {
  if (bits.size() > std::size_t(kMaxDepth)) throw InvalidInput("vertex deeper than max depth");
  Vertex v{0, int(bits.size())};
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw InvalidInput("vertex must be a binary string");
    v.value = (v.value << 1) | uint32_t(ch - '0');
  }
  return v;
}

Vertex Vertex::ones(int level) { return {(uint32_t(1) << level) - 1, level}; }

Vertex Vertex::ones_then_zero(int level) { return {(uint32_t(1) << level) - 2, level}; }

std::string Vertex::str() const {
  std::string s(level, '0');
  for (int i = 0; i < level; ++i) s[i] = char('0' + bit(i));
  return s;
}

OmegaString OmegaString::parse(std::string_view text) {
  OmegaString w;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    w.prefix.clear();
    w.period = std::string(text);
  } else {
    w.prefix = std::string(text.substr(0, colon));
    w.period = std::string(text.substr(colon + 1));
  }
  if (w.period.empty()) throw InvalidInput("omega period must be nonempty");
  for (char ch : w.prefix + w.period)
    if (ch < '0' || ch > '2') throw InvalidInput("omega letters must be 0, 1 or 2");
  return w;
}

int OmegaString::letter(int k) const {
  if (k < int(prefix.size())) return prefix[k] - '0';
  return period[(k - prefix.size()) % period.size()] - '0';
}

OmegaString OmegaString::shifted(int k) const {
  OmegaString w = *this;
  while (k-- > 0) {
    if (!w.prefix.empty()) {
      w.prefix.erase(0, 1);
    } else {
      std::rotate(w.period.begin(), w.period.begin() + 1, w.period.end());
    }
  }
  return w;
}

std::string OmegaString::str() const { return prefix.empty() ? period : prefix + ":" + period; }

bool omega_image_is_a(int omega_letter, int x) {
  // letter 0 kills d (3), 1 kills c (2), 2 kills b (1)
  return x != 3 - omega_letter;
}

TreeAut::TreeAut(int depth) : depth_(depth) {
  if (depth < 0 || depth > kMaxDepth) throw InvalidInput("tree depth out of range (cap 24)");
  words_.assign((num_bits() + 63) / 64, 0);
}

void TreeAut::set_bit(std::size_t i, bool on) {
  uint64_t m = uint64_t(1) << (i & 63);
  if (on)
    words_[i >> 6] |= m;
  else
    words_[i >> 6] &= ~m;
}

uint32_t TreeAut::apply(uint32_t v, int level) const {
  uint32_t prefix = 0, out = 0;
  for (int l = 0; l < level; ++l) {
    uint32_t x = (v >> (level - 1 - l)) & 1;
    uint32_t s = l < depth_ ? bit(l, prefix) : 0;
    out = (out << 1) | (x ^ s);
    prefix = (prefix << 1) | x;
  }
  return out;
}

uint32_t TreeAut::preimage(uint32_t v, int level) const {
  uint32_t u = 0;
  for (int l = 0; l < level; ++l) {
    uint32_t y = (v >> (level - 1 - l)) & 1;
    uint32_t s = l < depth_ ? bit(l, u) : 0;
    u = (u << 1) | (y ^ s);
  }
  return u;
}

std::vector<uint32_t> TreeAut::level_permutation(int level) const {
  std::vector<uint32_t> img{0};
  for (int l = 0; l < level; ++l) {
    std::vector<uint32_t> next(img.size() * 2);
    for (uint32_t u = 0; u < img.size(); ++u) {
      uint32_t s = l < depth_ ? bit(l, u) : 0;
      next[2 * u] = 2 * img[u] + s;
      next[2 * u + 1] = 2 * img[u] + (1 ^ s);
    }
    img.swap(next);
  }
  return img;
}

TreeAut TreeAut::compose(const TreeAut& h) const {
  if (h.depth_ != depth_) throw InvalidInput("compose: depth mismatch");
  TreeAut r(depth_);
  std::vector<uint32_t> img{0}, next;
  for (int l = 0; l < depth_; ++l) {
    next.resize(img.size() * 2);
    for (uint32_t u = 0; u < img.size(); ++u) {
      uint32_t s = bit(l, u);
      if (s ^ h.bit(l, img[u])) r.flip_bit(index(l, u));
      next[2 * u] = 2 * img[u] + s;
      next[2 * u + 1] = 2 * img[u] + (1 ^ s);
    }
    img.swap(next);
  }
  return r;
}

TreeAut TreeAut::inverse() const {
  TreeAut r(depth_);
  std::vector<uint32_t> img{0}, next;
  for (int l = 0; l < depth_; ++l) {
    next.resize(img.size() * 2);
    for (uint32_t u = 0; u < img.size(); ++u) {
      uint32_t s = bit(l, u);
      if (s) r.flip_bit(index(l, img[u]));
      next[2 * u] = 2 * img[u] + s;
      next[2 * u + 1] = 2 * img[u] + (1 ^ s);
    }
    img.swap(next);
  }
  return r;
}

TreeAut TreeAut::section(Vertex v) const {
  if (v.level > depth_) throw InvalidInput("section: vertex deeper than portrait");
  TreeAut r(depth_ - v.level);
  for (int l = 0; l < r.depth_; ++l) {
    uint32_t base = v.value << l;
    for (uint32_t u = 0; u < (uint32_t(1) << l); ++u)
      if (bit(v.level + l, base + u)) r.flip_bit(index(l, u));
  }
  return r;
}

TreeAut TreeAut::truncate(int depth) const {
  if (depth > depth_) throw InvalidInput("truncate: target deeper than portrait");
  TreeAut r(depth);
  for (std::size_t i = 0; i < r.num_bits(); ++i)
    if (bit(i)) r.flip_bit(i);
  return r;
}

void TreeAut::right_multiply_sparse(const std::vector<std::pair<int, uint32_t>>& support) {
  // (gs) has bit s_g(u) ^ s_s(u.g); flip at u = w.g^-1 for w in supp(s).
  // All preimages are taken before any bit changes.
  uint32_t pre[2 * kMaxDepth + 2];
  if (support.size() > std::size(pre)) throw InvalidInput("right_multiply_sparse: support too large");
  std::size_t k = 0;
  for (auto [level, w] : support) {
    if (level >= depth_) continue;
    pre[k++] = preimage(w, level);
  }
  k = 0;
  for (auto [level, w] : support) {
    if (level >= depth_) continue;
    flip_bit(index(level, pre[k++]));
  }
}

bool TreeAut::is_identity() const {
  for (uint64_t w : words_)
    if (w) return false;
  return true;
}

bool TreeAut::fixes_level(int level) const {
  std::size_t end = index(std::min(level, depth_), 0);
  for (std::size_t i = 0; i < end; ++i)
    if (bit(i)) return false;
  return true;
}

std::string TreeAut::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out = std::to_string(depth_) + ":";
  std::size_t n = num_bits();
  for (std::size_t i = 0; i < n; i += 4) {
    int nib = 0;
    for (std::size_t j = 0; j < 4; ++j) nib = (nib << 1) | (i + j < n ? int(bit(i + j)) : 0);
    out.push_back(digits[nib]);
  }
  return out;
}

TreeAut TreeAut::from_hex(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("portrait hex needs a depth header");
  int depth = std::stoi(std::string(text.substr(0, colon)));
  TreeAut g(depth);
  std::string_view hex = text.substr(colon + 1);
  std::size_t n = g.num_bits();
  if (hex.size() != (n + 3) / 4) throw InvalidInput("portrait hex has wrong length");
  for (std::size_t k = 0; k < hex.size(); ++k) {
    char ch = hex[k];
    int nib = ch >= '0' && ch <= '9' ? ch - '0' : ch >= 'a' && ch <= 'f' ? ch - 'a' + 10 : -1;
    if (nib < 0) throw InvalidInput("portrait hex: bad digit");
    for (int j = 0; j < 4; ++j) {
      bool on = (nib >> (3 - j)) & 1;
      std::size_t i = 4 * k + j;
      if (i < n)
        g.set_bit(i, on);
      else if (on)
        throw InvalidInput("portrait hex: nonzero padding");
    }
  }
  return g;
}

void TreeAut::append_key(std::string& out) const {
  out.push_back(char(depth_));
  std::size_t nbytes = (num_bits() + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) out.push_back(char((words_[b >> 3] >> (8 * (b & 7))) & 0xff));
}

TreeAut operator*(const TreeAut& g, const TreeAut& h) { return g.compose(h); }

TreeAut assemble(const TreeAut& top, const std::vector<TreeAut>& sections) {
  int k = top.depth();
  if (sections.size() != (std::size_t(1) << k)) throw InvalidInput("assemble: need 2^k sections");
  int m = sections.empty() ? 0 : sections[0].depth();
  TreeAut r(k + m);
  for (std::size_t i = 0; i < top.num_bits(); ++i)
    if (top.bit(i)) r.flip_bit(i);
  for (uint32_t v = 0; v < sections.size(); ++v) {
    const TreeAut& s = sections[v];
    if (s.depth() != m) throw InvalidInput("assemble: sections differ in depth");
    for (int l = 0; l < m; ++l)
      for (uint32_t u = 0; u < (uint32_t(1) << l); ++u)
        if (s.bit(l, u)) r.flip_bit(TreeAut::index(k + l, (v << l) + u));
  }
  return r;
}

TreeAut commutator(const TreeAut& x, const TreeAut& y) {
  return x.compose(y).compose(x.inverse()).compose(y.inverse());
}

TreeGenerators::TreeGenerators(OmegaString omega, int depth) : omega_(std::move(omega)), depth_(depth) {
  for (int i = 0; i < 4; ++i) {
    gens_[i] = generator("abcd"[i], omega_, depth);
    for (int l = 0; l < depth; ++l)
      for (uint32_t u = 0; u < (uint32_t(1) << l); ++u)
        if (gens_[i].bit(l, u)) support_[i].push_back({l, u});
  }
}

TreeAut generator(char letter, const OmegaString& omega, int depth) {
  TreeAut g(depth);
  if (letter == 'a') {
    if (depth > 0) g.set_bit(0, true);
    return g;
  }
  if (letter < 'b' || letter > 'd') throw InvalidInput(std::string("unknown generator letter: ") + letter);
  int x = letter - 'a';
  // section at 1^k 0 is omega_k(x) in {id, a}; it sits at vertex 1^k0 (level k+1)
  for (int k = 0; k + 1 < depth; ++k)
    if (omega_image_is_a(omega.letter(k), x)) g.set_bit(TreeAut::index(k + 1, ((uint32_t(1) << (k + 1)) - 2)), true);
  return g;
}

std::vector<int> schreier_distances(Vertex source, const OmegaString& omega) {
  int n = source.level;
  if (n > kMaxDepth) throw InvalidInput("level beyond max depth");
  TreeGenerators gens(omega, n);
  std::vector<int> dist(std::size_t(1) << n, -1);
  std::deque<uint32_t> queue{source.value};
  dist[source.value] = 0;
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    for (int s = 0; s < 4; ++s) {
      uint32_t w = gens.act(v, n, s);
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

int schreier_distance(Vertex u, Vertex v, const OmegaString& omega) {
  if (u.level != v.level) throw InvalidInput("schreier_distance: mismatched levels");
  return schreier_distances(u, omega)[v.value];
}

}  // namespace selfsim

std::size_t std::hash<selfsim::TreeAut>::operator()(const selfsim::TreeAut& g) const noexcept {
  std::size_t h = std::size_t(g.depth()) * 0x9e3779b97f4a7c15ULL;
  for (uint64_t w : g.words()) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}
