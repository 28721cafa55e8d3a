#include "selfsim/word.hpp"

#include <algorithm>
#include <cctype>

#include "selfsim/error.hpp"

namespace selfsim {

std::string Letter::str() const {
  switch (kind) {
    case LetterKind::A: return "a";
    case LetterKind::B: return "b";
    case LetterKind::C: return "c";
    case LetterKind::D: return "d";
    case LetterKind::T: return inverse ? "T" : "t";
    case LetterKind::U: return (inverse ? "U" : "u") + std::to_string(index);
    case LetterKind::V: return (inverse ? "V" : "v") + std::to_string(index);
  }
  return "?";
}

namespace {

// Reads one token starting at text[pos]; advances pos.
Letter read_token(std::string_view text, std::size_t& pos) {
  char ch = text[pos++];
  switch (ch) {
    case 'a': return Letter::tree(0);
    case 'b': return Letter::tree(1);
    case 'c': return Letter::tree(2);
    case 'd': return Letter::tree(3);
    case 't': return Letter::t(false);
    case 'T': return Letter::t(true);
    case 'u':
    case 'U':
    case 'v':
    case 'V': {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw InvalidInput(std::string("lamp letter needs an index: ") + ch);
      int idx = std::stoi(std::string(text.substr(start, pos - start)));
      if (idx < 1 || idx > 65535) throw InvalidInput("lamp index out of range");
      bool inv = std::isupper(static_cast<unsigned char>(ch));
      return (ch == 'u' || ch == 'U') ? Letter::u(idx, inv) : Letter::v(idx, inv);
    }
    default: throw InvalidInput(std::string("unknown letter '") + ch + "'");
  }
}

}  // namespace

Word parse_word(std::string_view text) {
  Word w;
  if (text == "1" || text == "id" || text == "e") return w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char ch = text[pos];
    if (ch == '.' || ch == ' ') {
      ++pos;
      continue;
    }
    w.push_back(read_token(text, pos));
  }
  return w;
}

std::string to_string(const Word& w) {
  bool dotted = std::any_of(w.begin(), w.end(), [](const Letter& l) { return l.is_lamp(); });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (dotted && i) out.push_back('.');
    out += w[i].str();
  }
  return out;
}

bool is_tree_word(const Word& w) {
  return std::all_of(w.begin(), w.end(), [](const Letter& l) { return l.is_tree(); });
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r)
    if (!l.is_tree()) l.inverse = !l.inverse;
  return r;
}

Word concat(std::initializer_list<Word> parts) {
  Word r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}

Word power(const Word& w, int k) {
  Word r;
  const Word base = k < 0 ? inverse(w) : w;
  for (int i = 0; i < std::abs(k); ++i) r.insert(r.end(), base.begin(), base.end());
  return r;
}

Word commutator_word(const Word& x, const Word& y) { return concat({x, y, inverse(x), inverse(y)}); }

Word tree_part(const Word& w) {
  Word r;
  for (const auto& l : w)
    if (l.is_tree()) r.push_back(l);
  return r;
}

TreeAut evaluate_word(const Word& w, const TreeGenerators& gens) {
  TreeAut g(gens.depth());
  for (const auto& l : w) {
    if (!l.is_tree()) throw InvalidInput("evaluate_word: only tree letters allowed");
    gens.right_multiply(g, l.tree_index());
  }
  return g;
}

TreeAut evaluate_word(const Word& w, const OmegaString& omega, int depth) {
  return evaluate_word(w, TreeGenerators(omega, depth));
}

Word random_pre_reduced_word(std::mt19937_64& rng, int length) {
  Word w;
  w.reserve(std::size_t(std::max(length, 0)));
  for (int i = 0; i < length; ++i) {
    bool klein_ok = w.empty() || w.back().kind == LetterKind::A;
    w.push_back(Letter::tree(klein_ok ? int(rng() % 4) : 0));
  }
  return w;
}

}  // namespace selfsim
