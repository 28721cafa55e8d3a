#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/tree.hpp"

namespace selfsim {

enum class LetterKind : uint8_t { A, B, C, D, U, V, T };

struct Letter {
  LetterKind kind = LetterKind::A;
  uint16_t index = 0;    // 1-based for U and V
  bool inverse = false;  // only meaningful for t and lamp letters

  static Letter tree(int i) { return {LetterKind(i), 0, false}; }  // 0=a .. 3=d
  static Letter u(int i, bool inv = false) { return {LetterKind::U, uint16_t(i), inv}; }
  static Letter v(int j, bool inv = false) { return {LetterKind::V, uint16_t(j), inv}; }
  static Letter t(bool inv = false) { return {LetterKind::T, 0, inv}; }

  bool is_tree() const { return kind <= LetterKind::D; }
  bool is_klein() const { return kind == LetterKind::B || kind == LetterKind::C || kind == LetterKind::D; }
  bool is_lamp() const { return kind == LetterKind::U || kind == LetterKind::V; }
  int tree_index() const { return int(kind); }
  std::string str() const;
  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

// Accepts compact tree words ("abad"), dotted tokens ("a.b.u1.a") and the
// t/T letters. Lamp inverses are written U1 / V2. "" is the empty word.
Word parse_word(std::string_view text);
std::string to_string(const Word& w);

bool is_tree_word(const Word& w);
Word inverse(const Word& w);
Word concat(std::initializer_list<Word> parts);
Word power(const Word& w, int k);
Word commutator_word(const Word& x, const Word& y);  // x y x^-1 y^-1
Word tree_part(const Word& w);                       // drop lamp letters

// Uniform letter after an a, forced a after b, c or d.
Word random_pre_reduced_word(std::mt19937_64& rng, int length);

// Product of generator images in word order, projected to Aut(T^depth).
TreeAut evaluate_word(const Word& w, const TreeGenerators& gens);
TreeAut evaluate_word(const Word& w, const OmegaString& omega, int depth);

}  // namespace selfsim
