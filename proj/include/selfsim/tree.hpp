#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace selfsim {

inline constexpr int kMaxDepth = 24;

// Vertex v1...vn of the binary tree; v1 is the most significant bit of value.
struct Vertex {
  uint32_t value = 0;
  int level = 0;

  static Vertex parse(std::string_view bits);
  static Vertex ones(int level);               // 1^n
  static Vertex ones_then_zero(int level);     // 1^{n-1}0
  std::string str() const;
  int bit(int i) const { return (value >> (level - 1 - i)) & 1; }  // v_{i+1}
  Vertex child(int x) const { return {(value << 1) | uint32_t(x), level + 1}; }
  Vertex sibling() const { return {value ^ 1u, level}; }
  bool operator==(const Vertex&) const = default;
};

// Eventually periodic sequence over {0,1,2}. Letter 0 kills d, 1 kills c,
// 2 kills b.
struct OmegaString {
  std::string prefix;
  std::string period = "012";

  static OmegaString grigorchuk() { return {}; }
  static OmegaString parse(std::string_view text);  // "012" or "prefix:period"
  int letter(int k) const;
  OmegaString shifted(int k = 1) const;
  std::string str() const;
  bool operator==(const OmegaString&) const = default;
};

// Image of x in {b,c,d} (1,2,3) under the homomorphism named by an omega
// letter: true means a, false means id.
bool omega_image_is_a(int omega_letter, int x);

// Automorphism of the depth-n binary tree stored as its portrait: one swap
// bit per internal vertex, breadth-first (vertex at level l with value u has
// index 2^l - 1 + u).
class TreeAut {
 public:
  TreeAut() = default;
  explicit TreeAut(int depth);

  int depth() const { return depth_; }
  static std::size_t index(int level, uint32_t value) { return (std::size_t(1) << level) - 1 + value; }
  std::size_t num_bits() const { return (std::size_t(1) << depth_) - 1; }
  bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool bit(int level, uint32_t value) const { return bit(index(level, value)); }
  void set_bit(std::size_t i, bool on);
  void flip_bit(std::size_t i) { words_[i >> 6] ^= uint64_t(1) << (i & 63); }

  uint32_t apply(uint32_t v, int level) const;
  Vertex apply(Vertex v) const { return {apply(v.value, v.level), v.level}; }
  uint32_t preimage(uint32_t v, int level) const;
  std::vector<uint32_t> level_permutation(int level) const;

  TreeAut compose(const TreeAut& h) const;  // act by *this, then by h
  TreeAut inverse() const;
  TreeAut section(Vertex v) const;
  TreeAut truncate(int depth) const;
  // g <- g * s, assuming s is sparse (cost ~ |supp s| * depth).
  void right_multiply_sparse(const std::vector<std::pair<int, uint32_t>>& support);

  bool is_identity() const;
  bool fixes_level(int level) const;

  std::string to_hex() const;
  static TreeAut from_hex(std::string_view text);

  const std::vector<uint64_t>& words() const { return words_; }
  void append_key(std::string& out) const;

  bool operator==(const TreeAut& o) const { return depth_ == o.depth_ && words_ == o.words_; }

 private:
  int depth_ = 0;
  std::vector<uint64_t> words_;
};

TreeAut operator*(const TreeAut& g, const TreeAut& h);

// Rebuild a depth (k + m) automorphism from its level-k top portrait and the
// 2^k sections (each of depth m).
TreeAut assemble(const TreeAut& top, const std::vector<TreeAut>& sections);

TreeAut commutator(const TreeAut& x, const TreeAut& y);  // x y x^-1 y^-1

// The four generators of G_omega projected to a fixed depth.
class TreeGenerators {
 public:
  TreeGenerators(OmegaString omega, int depth);

  int depth() const { return depth_; }
  const OmegaString& omega() const { return omega_; }
  // letter: 0=a 1=b 2=c 3=d
  const TreeAut& gen(int letter) const { return gens_[letter]; }
  const std::vector<std::pair<int, uint32_t>>& support(int letter) const { return support_[letter]; }
  void right_multiply(TreeAut& g, int letter) const { g.right_multiply_sparse(support_[letter]); }
  uint32_t act(uint32_t v, int level, int letter) const { return gens_[letter].apply(v, level); }

 private:
  OmegaString omega_;
  int depth_;
  std::array<TreeAut, 4> gens_;
  std::array<std::vector<std::pair<int, uint32_t>>, 4> support_;
};

TreeAut generator(char letter, const OmegaString& omega, int depth);

// Distance in the level-|u| Schreier graph of G_omega on {a,b,c,d}.
int schreier_distance(Vertex u, Vertex v, const OmegaString& omega);
// BFS distances from `source` to every vertex of its level.
std::vector<int> schreier_distances(Vertex source, const OmegaString& omega);

}  // namespace selfsim

template <>
struct std::hash<selfsim::TreeAut> {
  std::size_t operator()(const selfsim::TreeAut& g) const noexcept;
};
