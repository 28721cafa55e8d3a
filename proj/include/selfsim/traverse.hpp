#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfsim/recursion.hpp"
#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"
#include "selfsim/wreath.hpp"

namespace selfsim {

// (1^n, 1^{n-1}0) . (z_1 ... z_i)^-1 for i = 0..|w|, first Grigorchuk group.
struct InvertedOrbitPair {
  int level = 0;
  std::vector<std::pair<Vertex, Vertex>> pairs;
};

InvertedOrbitPair inverted_orbit_pair(const Word& w, int n);

struct TraverseField {
  int level = 0;
  std::vector<std::string> raw;      // P~(x, w), indexed by vertex value
  std::vector<std::string> pattern;  // P(x, w): runs collapsed
  uint64_t A = 0;                    // sum of |P(x, w)|
  std::string to_json() const;
};

TraverseField traverse_field(const Word& w, int n);
uint64_t traverse_A(const Word& w, int n);

// Order-preserving embedding of u into v (greedy subsequence test).
bool embeds(std::string_view u, std::string_view v);

// P(0x, w) embeds in P(x, w0) and P(1x, w) in P(x, w1) for all x on level n-1.
CheckReport recursion_monotonicity_check(const Word& w, int n);

enum class MaxAMode { Exhaustive, Sampled };

struct MaxAOptions {
  int workers = 1;
  std::size_t samples = 10000;  // sampled mode: random pre-reduced words of length r
  uint64_t seed = 1;
  int max_exhaustive_r = 20;
};

struct MaxAResult {
  int level = 0;
  int r = 0;
  bool exact = false;
  uint64_t value = 0;                 // max A over words of length <= r (lower bound if sampled)
  std::vector<uint64_t> by_length;    // max A over words of length exactly L (exhaustive only)
  Word witness;
  uint64_t words = 0;
};

MaxAResult max_A(int n, int r, MaxAMode mode, const MaxAOptions& opt = {});

// min over 1 <= k <= n-2 of (eta^k len + 2^k); needs n >= 3.
double contraction_scale(int n, uint64_t len, double eta);

// Probe (w_j w_j^-1)^reps with w_j = zeta^j(ad).
Word zeta_probe(int j, int reps);

// Lamp targets given as U/V words (length <= ell); the result evaluates in
// Delta_n to (targets, pi(w_n)^ell) with w_n = zeta^n(ad).
Word configuration_word(const std::map<uint32_t, Word>& targets, const WreathGroup& delta, int ell);
// Same, with targets as lamp elements; shortest representatives come from the
// lamp BFS tree with generator-order tie-breaking.
Word configuration_word(const std::map<uint32_t, uint32_t>& targets, const WreathGroup& delta, const FiniteGroup& lamp,
                        int ell);

std::string sweep_csv(const std::vector<MaxAResult>& rows, double C, double eta);

}  // namespace selfsim
