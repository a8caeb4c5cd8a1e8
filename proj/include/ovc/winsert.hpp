#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "ovc/formal.hpp"
#include "ovc/morphisms.hpp"
#include "ovc/report.hpp"

namespace ovc {

/// A word a_1 ... a_p in the variables; as an operation it has p + 1 inputs.
/// The empty word is the unit of the words-insertion operad.
struct LetterWord {
  std::vector<int> vars;

  LetterWord() = default;
  LetterWord(std::initializer_list<int> v) : vars(v) {}
  explicit LetterWord(std::vector<int> v) : vars(std::move(v)) {}

  int size() const { return static_cast<int>(vars.size()); }
  int arity() const { return size() + 1; }
  bool empty() const { return vars.empty(); }

  auto operator<=>(const LetterWord&) const = default;
  bool operator==(const LetterWord&) const = default;
};

/// "a.b.a"; the empty word is "e".
std::string to_text(const LetterWord& x, const VariableTable& v = {});
LetterWord parse_letter_word(std::string_view s, const VariableTable& v = {});

/// y_1 x_1 y_2 x_2 ... x_p y_{p+1}.
LetterWord word_insert(const LetterWord& x, const std::vector<LetterWord>& ys);

template <>
struct LetterTraits<LetterWord> {
  static int size(const LetterWord& x) { return x.size(); }
  static int arity(const LetterWord& x) { return x.arity(); }
  static int degree(const LetterWord& x) { return x.size(); }
  static bool is_unit(const LetterWord& x) { return x.empty(); }
  static LetterWord unit() { return {}; }
  /// Subwords S with the complementary segments U_0, ..., U_{|S|}.
  static const std::vector<LetterCut<LetterWord>>& cuts(const LetterWord& x);
  static LetterWord insert(const LetterWord& x, const std::vector<LetterWord>& ys) { return word_insert(x, ys); }
  static std::optional<int> antipode_sign(const LetterWord& x) { return x.size() % 2 ? -1 : 1; }
  static std::string to_text(const LetterWord& x, const VariableTable& v) { return ovc::to_text(x, v); }
  static LetterWord parse(std::string_view s, const VariableTable& v) { return parse_letter_word(s, v); }
};

using WWord = Word<LetterWord>;
using WMorphism = Morphism<LetterWord>;

/// Words of 1..max_letters letter-words over the alphabet (empty letters
/// allowed) with total length <= max_total, in a fixed order.
std::vector<WWord> all_w_words(const std::vector<int>& alphabet, int max_total, int max_letters);

/// Sp: the sum of all non-crossing partitions colored by the word.
WordSum<NCPartition> split(const LetterWord& x);
/// Letterwise product of the splits.
WordSum<NCPartition> split(const WWord& w);
/// Sp ⊠ Sp ⊠ ... applied levelwise.
StackSum<NCPartition> split(const StackSum<LetterWord>& s);

/// phi ∘ Sp.
WMorphism pullback(const PartitionMorphism& phi);

/// x ↦ family generator κ_x on single non-empty letters (infinitesimal).
WMorphism w_infinitesimal(const CumulantFamily& family, int max_order);
/// The horizontal moment morphism x ↦ E_x.
WMorphism w_moment(const CumulantFamily& moments, int max_order);

/// Sp(∇(a ⊠ (∅, b))) against ∇(Sp(a) ⊠ Sp(∅, b)).
struct NonProsInstance {
  WordSum<NCPartition> split_of_product;
  WordSum<NCPartition> product_of_splits;
  bool differ() const { return !(split_of_product == product_of_splits); }
};
NonProsInstance non_pros_instance();

/// Exact intertwining of the three coproducts (augmented halves) with Sp on
/// the given words.
std::vector<CheckResult> check_split_intertwining(const std::vector<WWord>& words);

/// The moment-cumulant relations at the level of letter-words: both
/// fixed-point equations, the pullbacks of the free and boolean exponentials
/// and, when intertwining_order > 0, the symbolic intertwining.
std::vector<CheckResult> verify_fixed_points(std::shared_ptr<const OVMatrixSpace> space, int max_order,
                                             double tol = 1e-9, int intertwining_order = 0);

/// log_* of the moment morphism on a^n against the monotone cumulant h_n.
CheckResult monotone_log_check(std::shared_ptr<const OVMatrixSpace> space, int max_order, double tol = 1e-9);

}  // namespace ovc
