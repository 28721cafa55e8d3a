#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/marked_group.hpp"
#include "selfsim/recursion.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

// G_3 = pi_3 of the first Grigorchuk group, materialized once by closure.
class G3Table {
 public:
  static const G3Table& get();
  int order() const { return int(elems_.size()); }
  int index_of(const TreeAut& g) const;  // g of depth 3
  const TreeAut& element(int i) const { return elems_[i]; }
  int mul(int i, int j) const { return mul_[i * order() + j]; }
  int inv(int i) const { return inv_[i]; }
  int identity() const { return 0; }
  int of_word(const Word& w) const;
  const Word& word(int i) const { return words_[i]; }  // shortest, BFS order

 private:
  G3Table();
  std::vector<TreeAut> elems_;
  std::vector<Word> words_;
  std::vector<int> mul_, inv_;
};

// X_n = L_n x G_3 with (v, g) . h = (v . h, g h_v); point index v * 128 + g.
class GermSpace {
 public:
  explicit GermSpace(int n);
  int level() const { return n_; }
  uint32_t size() const { return uint32_t(1) << n_ << 7; }
  static uint32_t point(uint32_t v, int g) { return (v << 7) | uint32_t(g); }
  static uint32_t vertex_of(uint32_t p) { return p >> 7; }
  static int germ_of(uint32_t p) { return int(p & 127); }
  uint32_t act(uint32_t p, int letter) const { return act_[letter][p]; }
  uint32_t act(uint32_t p, const TreeAut& h) const;       // h of depth n + 3
  uint32_t preimage(uint32_t p, const TreeAut& h) const;  // q with q . h = p
  std::string str(uint32_t p) const;

 private:
  int n_;
  std::vector<uint32_t> act_[4];
};

// Diagonal orbit M_n of ((1^n, id), (1^n, ab)) in X_n x X_n.
struct SignedPairOrbit {
  int level = 0;
  uint32_t points = 0;
  std::size_t size = 0;
  std::vector<uint64_t> bits;  // membership of (x, y) at x * points + y
  std::vector<std::vector<uint32_t>> out, in;
  bool trivial_sign = false;

  bool contains(uint32_t x, uint32_t y) const {
    uint64_t i = uint64_t(x) * points + y;
    return (bits[i >> 6] >> (i & 63)) & 1;
  }
  int epsilon(uint32_t x, uint32_t y) const { return contains(x, y) ? 1 : contains(y, x) ? -1 : 0; }
};

// Cached per level; throws InvariantViolation if M_n meets its reverse.
std::shared_ptr<const SignedPairOrbit> orbit_Mn(int n);

// Element of the central extension of Z^{X_n} by Z: lamp vector f and
// central coordinate z, with (f1, z1)(f2, z2) = (f1 + f2, z1 + z2 + B(f1, f2))
// and B(f1, f2) = sum over (x, y) in M of f1(x) f2(y).
struct NilElement {
  std::map<uint32_t, int64_t> f;
  int64_t z = 0;
  bool operator==(const NilElement&) const = default;
};

int64_t nil_cocycle(const NilElement& x, const NilElement& y, const SignedPairOrbit& M);
NilElement nil_multiply(const NilElement& x, const NilElement& y, const SignedPairOrbit& M);
NilElement nil_inverse(const NilElement& x, const SignedPairOrbit& M);
NilElement nil_generator(uint32_t x, int64_t power = 1);

// Independent oracle: collects a product of b_x^{+-1} into the ordered form
// prod_x b_x^{f(x)} (x increasing) times a central power, swapping adjacent
// letters with [b_x^e, b_y^e'] = z^{e e' eps(x, y)}. Returned in cocycle
// coordinates so it compares directly with nil_multiply.
NilElement nil_normal_form(const std::vector<std::pair<uint32_t, int>>& letters, const SignedPairOrbit& M);

struct GammaElement {
  NilElement lamp;
  TreeAut base;  // pi_{n+3}
  bool operator==(const GammaElement&) const = default;
};

// Gamma_n = N_n x| G_{n+3} marked by (a, b, c, d, t), t = (b_{(1^n, id)}, id).
class GammaGroup : public MarkedGroup {
 public:
  explicit GammaGroup(int n);
  int level() const { return n_; }
  const GermSpace& space() const { return space_; }
  const SignedPairOrbit& orbit() const { return *M_; }

  Key identity() const override;
  Key multiply(const Key& x, const Key& y) const override;
  Key inverse(const Key& x) const override;
  Key generator(std::size_t i) const override;
  Key step(const Key& x, std::size_t i, bool inv) const override;
  std::string describe() const override { return "Gamma_" + std::to_string(n_); }

  GammaElement element(const Key& k) const;
  Key key_of(const GammaElement& e) const;
  GammaElement mul(const GammaElement& x, const GammaElement& y) const;
  GammaElement inv(const GammaElement& x) const;
  void step_in_place(GammaElement& e, std::size_t i, bool inv) const;

 private:
  int n_;
  GermSpace space_;
  std::shared_ptr<const SignedPairOrbit> M_;
  TreeGenerators gens_;
  uint32_t t_point_;
};

std::shared_ptr<const GammaGroup> gamma_group(int n);  // cached
GammaElement gamma_eval(const Word& w, int n);

struct CenterWitness {
  int level = 0;
  Word stabilizer_word;  // g in St(n) with section ab at 1^n
  Word witness;          // [t, g^-1 t g]
  int64_t central = 0;
  std::map<int, bool> trivial_in;  // other levels j
  CheckReport report;
  std::string to_json() const;
};

// Central value if the word evaluates to (0, z), otherwise none.
std::optional<int64_t> central_value(const GammaElement& e);
CenterWitness center_witness(int n);
// Same checks for an explicit g (the degenerate g = id is rejected).
CenterWitness check_center_witness(int n, const Word& g);

CheckReport gamma_ball_coincidence(int n, int m, int radius, const BallOptions& opt = {});
// Ball elements with nontrivial wreath image are not central; (0, z) is.
CheckReport center0_check(int n, int radius, const BallOptions& opt = {});
// Witnesses for levels 1..max_n in the diagonal product of Gamma_1..Gamma_max_n:
// each central, supported on its own factor, and adding up under products.
CheckReport center_direct_sum_check(int max_n = 3);

}  // namespace selfsim
