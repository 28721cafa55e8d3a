#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "selfsim/config.hpp"
#include "selfsim/marked_group.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

struct FiniteGroupSpec {
  enum class Kind { Matrix, Table, Permutation };

  Kind kind = Kind::Table;
  std::string name;
  // matrix kind: entries mod `modulus`, optionally modulo the scalars +-1
  int modulus = 0;
  int dimension = 0;
  bool projective = false;
  // permutation kind: images of 0..degree-1
  int degree = 0;
  // table kind: table[i][j] = i*j, element 0 is the identity
  std::vector<std::vector<int>> table;

  std::vector<std::string> labels;  // u1.., v1.. for lamps; a,b,c,d for F-quotients
  std::vector<std::vector<long long>> generators;  // matrix rows flattened / images / {element}
  std::size_t order_budget = 2'000'000;

  static FiniteGroupSpec from_config(const KeyValueConfig& cfg);
  std::vector<std::size_t> label_group(char prefix) const;  // indices of labels starting with prefix
};

class FiniteGroup {
 public:
  explicit FiniteGroup(FiniteGroupSpec spec);

  const FiniteGroupSpec& spec() const { return spec_; }
  std::size_t order() const { return reps_.size(); }
  std::size_t rank() const { return spec_.labels.size(); }
  uint32_t identity() const { return 0; }
  uint32_t gen(std::size_t i) const { return gens_[i]; }
  uint32_t mul_gen(uint32_t x, std::size_t i) const { return right_[std::size_t(x) * rank() + i]; }
  uint32_t mul_gen_inv(uint32_t x, std::size_t i) const;
  uint32_t multiply(uint32_t x, uint32_t y) const;
  uint32_t inverse(uint32_t x) const;
  bool generator_is_involution(std::size_t i) const { return multiply(gens_[i], gens_[i]) == 0; }

  // Word metric for the generators and their inverses.
  const std::vector<uint64_t>& growth() const;
  int diameter() const { return int(growth().size()) - 1; }
  int word_length(uint32_t x) const;
  Word shortest_word(uint32_t x) const;  // BFS tree, generator order tie-break
  uint32_t evaluate(const Word& w) const;

  bool is_subgroup_image(const std::vector<std::size_t>& gen_indices) const;
  bool satisfies_F_relations() const;  // a^2=b^2=c^2=1, bc=cb, d=bc
  std::string describe() const;

 private:
  using Rep = std::string;  // packed uint16 entries
  Rep product(const Rep& x, const Rep& y) const;
  Rep identity_rep() const;
  Rep normalize(const Rep& r) const;
  void build_metric() const;

  FiniteGroupSpec spec_;
  std::vector<Rep> reps_;
  std::unordered_map<Rep, uint32_t> index_;
  std::vector<uint32_t> gens_;
  std::vector<uint32_t> right_;
  mutable std::vector<uint32_t> inv_cache_;
  mutable std::vector<uint64_t> growth_;
  mutable std::vector<int> dist_;
  mutable std::vector<std::pair<uint32_t, int>> parent_;  // (parent, move)
  mutable std::vector<std::pair<std::size_t, bool>> moves_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

FiniteGroupPtr finite_group(const FiniteGroupSpec& spec);

// MarkedGroup view on a FiniteGroup; keys are 4-byte element indices.
class FiniteMarkedGroup : public MarkedGroup {
 public:
  explicit FiniteMarkedGroup(FiniteGroupPtr g);
  Key identity() const override { return key_of(0); }
  Key multiply(const Key& x, const Key& y) const override;
  Key inverse(const Key& x) const override;
  Key generator(std::size_t i) const override { return key_of(g_->gen(i)); }
  Key step(const Key& x, std::size_t i, bool inv) const override;
  std::string describe() const override { return g_->describe(); }
  static Key key_of(uint32_t x);
  static uint32_t from_key(const Key& k);
  const FiniteGroupPtr& group() const { return g_; }

 private:
  FiniteGroupPtr g_;
};

// Standard lamp groups. "Small" markings use U = {u1}, V = {v1}; the library
// markings use U = Z/2 = {u1} and V = Z/2 x Z/2 = {v1, v2, v3 = v1 v2}.
FiniteGroupSpec klein_lamp_spec();            // Z/2 x Z/2, u1=(1,0), v1=(0,1)
FiniteGroupSpec s3_lamp_spec();               // Sym(3), u1=(0 1), v1=(1 2)
FiniteGroupSpec cyclic2_library_spec();       // Z/2 with u1=v1=v2=g, v3=id
FiniteGroupSpec klein_library_spec();         // Z/2 x Z/2
FiniteGroupSpec dihedral_library_spec(int k);  // dihedral of order 2k, k even
FiniteGroupSpec psl2_library_spec(int power);  // PSL_2(Z/5^power)

}  // namespace selfsim
