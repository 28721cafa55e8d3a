#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

// Canonical, injective serialization of a group element.
using Key = std::string;

class MarkedGroup {
 public:
  virtual ~MarkedGroup() = default;

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t rank() const { return labels_.size(); }
  int label_index(const std::string& label) const;  // -1 if absent

  virtual Key identity() const = 0;
  virtual Key multiply(const Key& x, const Key& y) const = 0;
  virtual Key inverse(const Key& x) const = 0;
  virtual Key generator(std::size_t i) const = 0;
  // x * s_i (or x * s_i^-1); backends override with cheaper updates
  virtual Key step(const Key& x, std::size_t i, bool inv) const;
  virtual std::string describe() const = 0;

  bool is_involution(std::size_t i) const;

 protected:
  std::vector<std::string> labels_;
};

using MarkedGroupPtr = std::shared_ptr<const MarkedGroup>;

// Letters are matched to generators by label (a, b, u1, t, ...); inverse
// letters use the inverse step.
Key evaluate(const MarkedGroup& g, const Word& w);

struct BallOptions {
  bool retain = false;
  int workers = 1;
  std::size_t max_elements = 8'000'000;
  bool throw_on_budget = true;
};

struct GrowthProfile {
  std::vector<uint64_t> counts;           // v(0..R), cumulative
  std::vector<std::vector<Key>> spheres;  // retained elements by exact length
  bool complete = true;
  int radius() const { return int(counts.size()) - 1; }
  std::string to_csv() const;
  std::string to_json() const;
};

GrowthProfile ball(const MarkedGroup& g, int radius, const BallOptions& opt = {});

// Largest k <= cap with v_1(k) = v_diag(k) = v_2(k); equivalent to agreement
// of word-coincidence patterns up to length k.
int matching_radius(MarkedGroupPtr g1, MarkedGroupPtr g2, int cap, const BallOptions& opt = {});

class DiagonalProduct : public MarkedGroup {
 public:
  explicit DiagonalProduct(std::vector<MarkedGroupPtr> factors);
  Key identity() const override;
  Key multiply(const Key& x, const Key& y) const override;
  Key inverse(const Key& x) const override;
  Key generator(std::size_t i) const override;
  Key step(const Key& x, std::size_t i, bool inv) const override;
  std::string describe() const override;

  std::size_t num_factors() const { return factors_.size(); }
  const MarkedGroupPtr& factor(std::size_t i) const { return factors_[i]; }
  std::vector<Key> split(const Key& x) const;
  static Key join(const std::vector<Key>& parts);

 private:
  std::vector<MarkedGroupPtr> factors_;
};

MarkedGroupPtr diagonal_product(std::vector<MarkedGroupPtr> factors);

class TrivialGroup : public MarkedGroup {
 public:
  explicit TrivialGroup(std::vector<std::string> labels);
  Key identity() const override { return {}; }
  Key multiply(const Key&, const Key&) const override { return {}; }
  Key inverse(const Key&) const override { return {}; }
  Key generator(std::size_t) const override { return {}; }
  std::string describe() const override { return "trivial"; }
};

// pi_depth(G_omega) marked by (a,b,c,d), optionally padded with extra labels
// that map to the identity (used to put the tree quotient on a lamp alphabet).
class TreeQuotientGroup : public MarkedGroup {
 public:
  TreeQuotientGroup(OmegaString omega, int depth, std::vector<std::string> extra_trivial = {});
  Key identity() const override;
  Key multiply(const Key& x, const Key& y) const override;
  Key inverse(const Key& x) const override;
  Key generator(std::size_t i) const override;
  Key step(const Key& x, std::size_t i, bool inv) const override;
  std::string describe() const override;

  static Key key_of(const TreeAut& g);
  static TreeAut from_key(const Key& k);
  const TreeGenerators& gens() const { return gens_; }

 private:
  TreeGenerators gens_;
};

MarkedGroupPtr tree_quotient(const OmegaString& omega, int depth);

}  // namespace selfsim
