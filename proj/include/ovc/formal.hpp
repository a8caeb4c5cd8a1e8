#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ovc/errors.hpp"
#include "ovc/ncpart.hpp"

namespace ovc {

using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// One way of splitting a single letter: the letter equals insert(lower, upper).
/// `first_in_lower` says whether position 1 of the letter went to `lower`
/// (meaningless for unit letters).
template <class Letter>
struct LetterCut {
  Letter lower;
  std::vector<Letter> upper;
  bool first_in_lower = false;
};

/// Per-letter structure; specialized for NCPartition here and for LetterWord
/// in winsert.hpp. Required members:
///   size, arity, degree, is_unit, unit, cuts, insert, antipode_sign,
///   to_text, parse.
template <class Letter>
struct LetterTraits;

template <>
struct LetterTraits<NCPartition> {
  static int size(const NCPartition& x) { return x.size(); }
  static int arity(const NCPartition& x) { return x.arity(); }
  static int degree(const NCPartition& x) { return x.block_count(); }
  static bool is_unit(const NCPartition& x) { return x.empty(); }
  static NCPartition unit() { return {}; }
  static const std::vector<LetterCut<NCPartition>>& cuts(const NCPartition& x);
  static NCPartition insert(const NCPartition& x, const std::vector<NCPartition>& ys) {
    return gap_insert(x, ys);
  }
  /// Sign of the antipode on a letter; nullopt when the letter is killed.
  static std::optional<int> antipode_sign(const NCPartition& x) {
    if (x.empty()) return 1;
    if (!x.is_interval()) return std::nullopt;
    return x.block_count() % 2 ? -1 : 1;
  }
  static std::string to_text(const NCPartition& x, const VariableTable& v) { return ovc::to_text(x, v); }
  static NCPartition parse(std::string_view s, const VariableTable& v) { return parse_partition(s, v); }
};

/// A horizontal word of letters; the empty word is the unit 1.
template <class Letter>
struct Word {
  using Traits = LetterTraits<Letter>;
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}
  Word(std::initializer_list<Letter> ls) : letters(ls) {}

  int outputs() const { return static_cast<int>(letters.size()); }
  int inputs() const {
    int n = 0;
    for (const auto& l : letters) n += Traits::arity(l);
    return n;
  }
  int total_size() const {
    int n = 0;
    for (const auto& l : letters) n += Traits::size(l);
    return n;
  }
  int degree() const {
    int n = 0;
    for (const auto& l : letters) n += Traits::degree(l);
    return n;
  }
  /// True when every letter is a unit letter (including the empty word).
  bool is_unit() const {
    return std::all_of(letters.begin(), letters.end(), [](const Letter& l) { return Traits::is_unit(l); });
  }
  /// Index of the first non-unit letter, or -1.
  int first_nonunit() const {
    for (std::size_t i = 0; i < letters.size(); ++i)
      if (!Traits::is_unit(letters[i])) return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
  friend bool operator<(const Word& a, const Word& b) {
    int sa = a.total_size(), sb = b.total_size();
    if (sa != sb) return sa < sb;
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
};

template <class Letter>
Word<Letter> unit_word(int n) {
  return Word<Letter>(std::vector<Letter>(static_cast<std::size_t>(n), LetterTraits<Letter>::unit()));
}

/// A vertical stack x_0 ⊠ x_1 ⊠ ...; x_0 is the bottom (output side) and
/// inputs(x_i) = outputs(x_{i+1}).
template <class Letter>
using Stack = std::vector<Word<Letter>>;

template <class Letter>
void check_stack(const Stack<Letter>& s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i].inputs() != s[i + 1].outputs()) {
      throw ArityMismatch("stack level " + std::to_string(i) + " has " + std::to_string(s[i].inputs()) +
                          " inputs but the next level has " + std::to_string(s[i + 1].outputs()) +
                          " outputs");
    }
  }
}

/// Finite linear combination with exact rational coefficients.
template <class Basis>
class FormalSum {
 public:
  using Map = std::map<Basis, Rational>;

  FormalSum() = default;
  explicit FormalSum(Basis b, Rational c = 1) { add(b, c); }

  void add(const Basis& b, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(b, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  void add(const FormalSum& other, const Rational& c = 1) {
    for (const auto& [b, x] : other.terms_) add(b, x * c);
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Basis& b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  FormalSum& operator+=(const FormalSum& o) { add(o); return *this; }
  FormalSum& operator-=(const FormalSum& o) { add(o, -1); return *this; }
  FormalSum& operator*=(const Rational& c) {
    if (c == 0) terms_.clear();
    for (auto& [b, x] : terms_) x *= c;
    return *this;
  }
  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  friend FormalSum operator-(FormalSum a) { return a *= Rational(-1); }
  friend FormalSum operator*(const Rational& c, FormalSum a) { return a *= c; }
  friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms_ == b.terms_; }

  /// Linear extension of f : Basis -> FormalSum<Out>.
  template <class Out, class F>
  FormalSum<Out> map_linear(F&& f) const {
    FormalSum<Out> out;
    for (const auto& [b, c] : terms_) out.add(f(b), c);
    return out;
  }

 private:
  Map terms_;
};

template <class Letter>
using WordSum = FormalSum<Word<Letter>>;
template <class Letter>
using StackSum = FormalSum<Stack<Letter>>;

using PartitionWord = Word<NCPartition>;

// ---------------------------------------------------------------------------
// horizontal and vertical products

template <class Letter>
Word<Letter> hconcat(const Word<Letter>& u, const Word<Letter>& v) {
  Word<Letter> w = u;
  w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
  return w;
}

/// Levelwise concatenation of two stacks of equal height; this is the
/// middle-four interchange (x1 ⊠ x2) ⊗ (x3 ⊠ x4) -> (x1 x3) ⊠ (x2 x4).
template <class Letter>
Stack<Letter> interchange(const Stack<Letter>& a, const Stack<Letter>& b) {
  if (a.size() != b.size()) throw ArityMismatch("interchange: stacks of different height");
  check_stack(a);
  check_stack(b);
  Stack<Letter> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(hconcat(a[i], b[i]));
  return out;
}

template <class Letter>
WordSum<Letter> hconcat(const WordSum<Letter>& u, const WordSum<Letter>& v) {
  WordSum<Letter> out;
  for (const auto& [a, x] : u.terms())
    for (const auto& [b, y] : v.terms()) out.add(hconcat(a, b), x * y);
  return out;
}

template <class Letter>
StackSum<Letter> hconcat(const StackSum<Letter>& u, const StackSum<Letter>& v) {
  StackSum<Letter> out;
  for (const auto& [a, x] : u.terms())
    for (const auto& [b, y] : v.terms()) out.add(interchange(a, b), x * y);
  return out;
}

/// x on the bottom, y on top: y's letters are grouped by the arities of x's
/// letters and inserted letterwise.
template <class Letter>
Word<Letter> vcompose(const Word<Letter>& x, const Word<Letter>& y) {
  using T = LetterTraits<Letter>;
  if (x.inputs() != y.outputs()) {
    throw ArityMismatch("vcompose: " + std::to_string(x.inputs()) + " inputs against " +
                        std::to_string(y.outputs()) + " outputs");
  }
  Word<Letter> out;
  std::size_t pos = 0;
  for (const auto& l : x.letters) {
    auto n = static_cast<std::size_t>(T::arity(l));
    std::vector<Letter> group(y.letters.begin() + static_cast<std::ptrdiff_t>(pos),
                              y.letters.begin() + static_cast<std::ptrdiff_t>(pos + n));
    out.letters.push_back(T::insert(l, group));
    pos += n;
  }
  return out;
}

template <class Letter>
WordSum<Letter> vcompose(const WordSum<Letter>& x, const WordSum<Letter>& y) {
  WordSum<Letter> out;
  for (const auto& [a, c] : x.terms())
    for (const auto& [b, e] : y.terms()) out.add(vcompose(a, b), c * e);
  return out;
}

/// Composes a stack from the top down into a single word.
template <class Letter>
Word<Letter> nabla(const Stack<Letter>& s) {
  if (s.empty()) throw ArityMismatch("nabla of an empty stack");
  Word<Letter> w = s.back();
  for (std::size_t i = s.size() - 1; i-- > 0;) w = vcompose(s[i], w);
  return w;
}

template <class Letter>
WordSum<Letter> nabla(const StackSum<Letter>& s) {
  return s.template map_linear<Word<Letter>>([](const Stack<Letter>& st) { return WordSum<Letter>(nabla(st)); });
}

// ---------------------------------------------------------------------------
// coproducts

enum class CutSide { All, Prec, Succ };

namespace detail {

template <class Letter>
void expand_cuts(const Word<Letter>& w, int first, CutSide side, StackSum<Letter>& out) {
  using T = LetterTraits<Letter>;
  std::vector<const std::vector<LetterCut<Letter>>*> per_letter;
  for (const auto& l : w.letters) per_letter.push_back(&T::cuts(l));
  std::vector<std::size_t> idx(w.letters.size(), 0);
  while (true) {
    bool keep = true;
    if (side != CutSide::All && first >= 0) {
      bool in_lower = (*per_letter[static_cast<std::size_t>(first)])[idx[static_cast<std::size_t>(first)]].first_in_lower;
      keep = (side == CutSide::Prec) == in_lower;
    }
    if (keep) {
      Word<Letter> lower, upper;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& c = (*per_letter[i])[idx[i]];
        lower.letters.push_back(c.lower);
        upper.letters.insert(upper.letters.end(), c.upper.begin(), c.upper.end());
      }
      out.add(Stack<Letter>{std::move(lower), std::move(upper)}, 1);
    }
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < per_letter[i]->size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
}

}  // namespace detail

/// Full coproduct: letterwise product of the per-letter cut sums.
template <class Letter>
StackSum<Letter> coproduct(const Word<Letter>& w) {
  StackSum<Letter> out;
  detail::expand_cuts(w, -1, CutSide::All, out);
  return out;
}

template <class Letter>
StackSum<Letter> coproduct(const WordSum<Letter>& s) {
  return s.template map_linear<Stack<Letter>>([](const Word<Letter>& w) { return coproduct(w); });
}

/// Terms whose first position (of the first non-unit letter) lies in the
/// bottom factor, including w ⊠ 1.
template <class Letter>
StackSum<Letter> delta_prec_aug(const Word<Letter>& w) {
  int f = w.first_nonunit();
  if (f < 0) throw DomainError("half coproduct of a unit word");
  StackSum<Letter> out;
  detail::expand_cuts(w, f, CutSide::Prec, out);
  return out;
}

/// Terms whose first position lies in the top factor, including 1 ⊠ w.
template <class Letter>
StackSum<Letter> delta_succ_aug(const Word<Letter>& w) {
  int f = w.first_nonunit();
  if (f < 0) throw DomainError("half coproduct of a unit word");
  StackSum<Letter> out;
  detail::expand_cuts(w, f, CutSide::Succ, out);
  return out;
}

template <class Letter>
Stack<Letter> lower_trivial(const Word<Letter>& w) {
  return {w, unit_word<Letter>(w.inputs())};
}
template <class Letter>
Stack<Letter> upper_trivial(const Word<Letter>& w) {
  return {unit_word<Letter>(w.outputs()), w};
}

template <class Letter>
StackSum<Letter> delta_prec(const Word<Letter>& w) {
  auto s = delta_prec_aug(w);
  s.add(lower_trivial(w), -1);
  return s;
}

template <class Letter>
StackSum<Letter> delta_succ(const Word<Letter>& w) {
  auto s = delta_succ_aug(w);
  s.add(upper_trivial(w), -1);
  return s;
}

/// Reduced coproduct; zero on unit words.
template <class Letter>
StackSum<Letter> reduced_coproduct(const Word<Letter>& w) {
  if (w.is_unit()) return {};
  auto s = coproduct(w);
  s.add(lower_trivial(w), -1);
  s.add(upper_trivial(w), -1);
  return s;
}

/// Applies a linear map to level `level` of every stack, splicing the
/// resulting stacks in place of that level.
template <class Letter, class F>
StackSum<Letter> apply_level(const StackSum<Letter>& s, std::size_t level, F&& f) {
  StackSum<Letter> out;
  for (const auto& [st, c] : s.terms()) {
    StackSum<Letter> image = f(st[level]);
    for (const auto& [piece, e] : image.terms()) {
      Stack<Letter> n(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(level));
      n.insert(n.end(), piece.begin(), piece.end());
      n.insert(n.end(), st.begin() + static_cast<std::ptrdiff_t>(level + 1), st.end());
      out.add(n, c * e);
    }
  }
  return out;
}

/// Same, for a map returning plain words (one level in, one level out).
template <class Letter, class F>
StackSum<Letter> apply_level_words(const StackSum<Letter>& s, std::size_t level, F&& f) {
  return apply_level(s, level, [&](const Word<Letter>& w) {
    WordSum<Letter> image = f(w);
    StackSum<Letter> out;
    for (const auto& [x, c] : image.terms()) out.add(Stack<Letter>{x}, c);
    return out;
  });
}

// ---------------------------------------------------------------------------
// antipode, counit, unit

template <class Letter>
WordSum<Letter> antipode(const Word<Letter>& w) {
  int sign = 1;
  for (const auto& l : w.letters) {
    auto s = LetterTraits<Letter>::antipode_sign(l);
    if (!s) return {};
    sign *= *s;
  }
  return WordSum<Letter>(w, sign);
}

/// Returns n when w is the unit word of length n (so ε(w) = 1_n), else nullopt.
template <class Letter>
std::optional<int> counit(const Word<Letter>& w) {
  if (!w.is_unit()) return std::nullopt;
  return w.outputs();
}

/// η∘ε as a word map: w itself on unit words, 0 otherwise.
template <class Letter>
WordSum<Letter> unit_counit(const Word<Letter>& w) {
  if (auto n = counit(w)) return WordSum<Letter>(unit_word<Letter>(*n));
  return {};
}

// ---------------------------------------------------------------------------
// text

template <class Letter>
std::string to_text(const Word<Letter>& w, const VariableTable& v = {}) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) s += " ";
    s += LetterTraits<Letter>::to_text(w.letters[i], v);
  }
  return s + "]";
}

template <class Letter>
std::string to_text(const Stack<Letter>& st, const VariableTable& v = {}) {
  std::string s;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (i) s += " # ";
    s += to_text(st[i], v);
  }
  return s;
}

inline std::string to_text(const Rational& r) { return r.str(); }

template <class Basis>
std::string to_text(const FormalSum<Basis>& s, const VariableTable& v = {}) {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [b, c] : s.terms()) {
    if (!first) out += " + ";
    first = false;
    out += c.str() + "*" + to_text(b, v);
  }
  return out;
}

namespace detail {
std::string_view trim_view(std::string_view s);
std::vector<std::string_view> split_on(std::string_view s, std::string_view sep);
Rational parse_rational(std::string_view s);
}  // namespace detail

template <class Letter>
Word<Letter> parse_word(std::string_view text, const VariableTable& v = {}) {
  text = detail::trim_view(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError("word must be enclosed in brackets: '" + std::string(text) + "'");
  }
  text = detail::trim_view(text.substr(1, text.size() - 2));
  Word<Letter> w;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) w.letters.push_back(LetterTraits<Letter>::parse(text.substr(i, j - i), v));
    i = j;
  }
  return w;
}

template <class Letter>
Stack<Letter> parse_stack(std::string_view text, const VariableTable& v = {}) {
  Stack<Letter> st;
  for (auto part : detail::split_on(text, "#")) st.push_back(parse_word<Letter>(part, v));
  check_stack(st);
  return st;
}

template <class Basis, class ParseBasis>
FormalSum<Basis> parse_sum(std::string_view text, ParseBasis&& parse_basis) {
  text = detail::trim_view(text);
  FormalSum<Basis> s;
  if (text == "0") return s;
  for (auto term : detail::split_on(text, " + ")) {
    auto star = term.find('*');
    if (star == std::string_view::npos) throw ParseError("term without coefficient: '" + std::string(term) + "'");
    s.add(parse_basis(term.substr(star + 1)), detail::parse_rational(term.substr(0, star)));
  }
  return s;
}

}  // namespace ovc
