#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/finite_group.hpp"
#include "selfsim/marked_group.hpp"
#include "selfsim/recursion.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

// Finitely supported lamp configuration on L_level: point -> non-identity
// lamp key.
using LampConfig = std::map<uint32_t, Key>;

struct WreathElement {
  LampConfig lamps;
  TreeAut base;
  bool operator==(const WreathElement&) const = default;
};

// (f1, g1)(f2, g2) = (f1 (g1 . f2), g1 g2) with (g . f)(x) = f(x . g).
WreathElement wreath_multiply(const WreathElement& x, const WreathElement& y, const MarkedGroup& lamp, int level);
WreathElement wreath_inverse(const WreathElement& x, const MarkedGroup& lamp, int level);

// A generator (h, s) of a wreath-type marked group: lamps h given by
// placements, s a tree letter or none.
struct WreathGenerator {
  std::string label;
  int tree_letter = -1;                            // 0..3 or -1
  std::vector<std::pair<uint32_t, Key>> lamps;     // (point on L_level, lamp key)
};

// Subgroup of lamp \wr_{L_level} pi_depth(G_omega) generated by the listed
// generators. Keys are the base portrait followed by the dense lamp row.
class WreathGroup : public MarkedGroup {
 public:
  WreathGroup(std::string name, int level, OmegaString omega, int base_depth, MarkedGroupPtr lamp,
              std::vector<WreathGenerator> gens);

  Key identity() const override;
  Key multiply(const Key& x, const Key& y) const override;
  Key inverse(const Key& x) const override;
  Key generator(std::size_t i) const override;
  Key step(const Key& x, std::size_t i, bool inv) const override;
  std::string describe() const override { return name_; }

  int level() const { return level_; }
  int base_depth() const { return tree_.depth(); }
  const OmegaString& omega() const { return tree_.omega(); }
  const MarkedGroupPtr& lamp() const { return lamp_; }
  const TreeGenerators& tree() const { return tree_; }
  const WreathGenerator& generator_spec(std::size_t i) const { return gens_[i]; }

  Key key_of(const WreathElement& e) const;
  WreathElement element(const Key& k) const;

 private:
  struct Dense {
    TreeAut base;
    std::vector<Key> lamps;
  };
  Dense decode(const Key& k) const;
  Key encode(const Dense& d) const;
  void apply_generator(Dense& d, std::size_t i, bool inv) const;

  std::string name_;
  int level_;
  TreeGenerators tree_;
  MarkedGroupPtr lamp_;
  Key lamp_id_;
  std::size_t base_key_size_ = 0;
  std::vector<WreathGenerator> gens_;
  std::vector<std::vector<std::pair<uint32_t, Key>>> inv_lamps_;  // placements of the inverse generator
};

using WreathGroupPtr = std::shared_ptr<const WreathGroup>;

// Delta_n = F_n \wr_{L_n} G_omega marked by (a,b,c,d,u_1..,v_1..) with u lamps
// at 1^n and v lamps at 1^{n-1}0. The base G_omega is represented through
// pi_base_depth; base_depth 0 picks level + 4, which keeps every ball of
// radius <= 2^{n-1} - 1 faithful.
struct DeltaFactorSpec {
  int level = 1;
  std::optional<FiniteGroupSpec> lamp;       // empty: trivial F_n
  std::vector<std::string> trivial_labels = {"u1", "v1"};
  OmegaString omega;
  int base_depth = 0;

  static DeltaFactorSpec from_config(const KeyValueConfig& cfg);
};

int default_delta_base_depth(int level);
WreathGroupPtr build_delta_n(const DeltaFactorSpec& spec);

// Gamma_n^omega: lamp A_n (a marked quotient of F over a,b,c,d) on L_n,
// base pi_n(G_omega), x_n = (delta_{1^n}^{psi_n(x)} + delta_{1^{n-1}0}^{omega_{n-1}(x)}, x).
enum class PsiScheme { Cyclic, Identity };
struct GammaFactorSpec {
  int level = 1;
  MarkedGroupPtr lamp;  // labels a,b,c,d
  OmegaString omega;
  std::optional<PsiScheme> psi;  // default: cyclic for (012)^inf, identity otherwise
};
char psi_image(PsiScheme psi, int level, char x);  // x in {b,c,d}
WreathGroupPtr build_gamma_n(const GammaFactorSpec& spec);

// Validates the involution and Klein relations required of a marked F-quotient.
void check_F_quotient(const MarkedGroup& g);

WreathElement evaluate_m_word(const Word& w, const WreathGroup& g);
// Closed-form ordered lamp product: the i-th letter contributes its lamp at
// p . (z_1 ... z_{i-1})^{-1}; prefixes are evaluated from scratch.
WreathElement lamp_product_formula(const Word& w, const WreathGroup& g);

// Lexicographically least shortest word g with 1^n . g = 1^{n-1}0.
Word shortest_mover(int n, const OmegaString& omega = OmegaString::grigorchuk());
// [u_i, g v_j g^-1] for the level-n mover g.
Word kdelta_word(int n, int i = 1, int j = 1, const OmegaString& omega = OmegaString::grigorchuk());

// Compares evaluation in Delta_{split+n} with the recomposition through
// generator images in Delta_n(s^split omega) \wr_{L_split} pi_split(G_omega),
// on all words of length <= max_len (or `samples` random words when > 0).
CheckReport theta_embedding_check(int n, int max_len, const FiniteGroupSpec& lamp, int split = 1,
                                  std::size_t samples = 0, uint64_t seed = 1);

}  // namespace selfsim
