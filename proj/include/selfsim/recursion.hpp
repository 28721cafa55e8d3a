#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/tree.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

struct RecursionResult {
  Word w0, w1;
  int swap = 0;
};

// Multiply maximal {b,c,d} runs in the Klein group, drop identities, keep a's.
Word pre_reduce(const Word& w);
// Normal form in F = <a> * (<b> x <c>): additionally cancels aa.
Word free_reduce(const Word& w);
bool is_pre_reduced(const Word& w);

// One step of the formal wreath recursion of the first Grigorchuk group:
// a -> ()e, b -> (a,c), c -> (a,d), d -> (,b). No reduction.
RecursionResult formal_recursion(const Word& w);

struct SectionMap {
  int level = 0;
  std::vector<Word> sections;  // indexed by vertex value at `level`
  TreeAut top;                 // pi_level image
};

// k steps of formal_recursion with pre_reduce applied to each component.
SectionMap iterate_recursion(const Word& w, int k);

Word substitute_sigma(const Word& w);
Word substitute_sigma(const Word& w, int times);

// w_n = zeta^n(ad); throws BudgetExceeded past max_letters.
Word zeta_word(int n, std::size_t max_letters = std::size_t(1) << 27);
// Length of zeta^n(ad) computed from syllable counts without building it.
uint64_t zeta_word_length(int n);

struct NormWeights {
  double wa = 1, wb = 0, wc = 0, wd = 0;
  double eta = 0;
  double C = 0;
  double eta_alternative = 0;  // real root of X^3+X^2+X-1, kept for reference only
};

double real_root_bisect(double c2, double c1, double c0, double lo, double hi);  // X^3+c2X^2+c1X+c0
NormWeights solve_norm_weights();
double weighted_norm(const Word& w, const NormWeights& nw);

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

// theta_i: element of St(i) whose level-i sections all equal ad.
TreeAut theta_element(int i, int depth);
CheckReport theta_identity_check(int i, int depth);

// Image of K = <<[a,b]>> in G_3; membership of g in K is decided at depth 3
// because K contains St(3).
bool in_K(const TreeAut& g);
std::size_t K_image_order();  // number of elements of G_3 lying in the image of K

Word random_K_word(uint64_t seed, int conjugator_length, int factors);

}  // namespace selfsim
