#pragma once

// Exact checks of the unshuffle bialgebra axioms, shared by the partition
// words and the letter words.

#include <string>
#include <vector>

#include "ovc/formal.hpp"

namespace ovc {

struct SymbolicCheck {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  std::string failure;  // first counterexample, if any
};

/// All words of 1..max_letters partitions (unit letters allowed) with total
/// size <= max_size, in a deterministic order.
std::vector<PartitionWord> all_partition_words(int max_size, int max_letters);

namespace detail {

template <class Letter>
void record(SymbolicCheck& c, const Word<Letter>& w, bool ok, const std::string& extra = {}) {
  ++c.cases;
  if (!ok && c.pass) {
    c.pass = false;
    c.failure = to_text(w) + (extra.empty() ? "" : ": " + extra);
  }
}

}  // namespace detail

template <class Letter>
SymbolicCheck check_coassociativity(const std::vector<Word<Letter>>& words) {
  SymbolicCheck c{"coassociativity", true, 0, {}};
  for (const auto& w : words) {
    auto d = coproduct(w);
    auto left = apply_level(d, 0, [](const Word<Letter>& x) { return coproduct(x); });
    auto right = apply_level(d, 1, [](const Word<Letter>& x) { return coproduct(x); });
    detail::record(c, w, left == right);
  }
  return c;
}

template <class Letter>
SymbolicCheck check_half_split(const std::vector<Word<Letter>>& words) {
  SymbolicCheck c{"reduced coproduct = prec + succ", true, 0, {}};
  for (const auto& w : words) {
    if (w.is_unit()) continue;
    detail::record(c, w, reduced_coproduct(w) == delta_prec(w) + delta_succ(w));
  }
  return c;
}

/// The three unshuffle relations
///   (Δ≺ ⊠ id)Δ≺ = (id ⊠ Δ̄)Δ≺,  (Δ≻ ⊠ id)Δ≺ = (id ⊠ Δ≺)Δ≻,
///   (Δ̄ ⊠ id)Δ≻ = (id ⊠ Δ≻)Δ≻,
/// with Δ̄ the reduced coproduct.
template <class Letter>
std::vector<SymbolicCheck> check_unshuffle_axioms(const std::vector<Word<Letter>>& words) {
  std::vector<SymbolicCheck> out{{"unshuffle (prec,prec) = (id,reduced)(prec)", true, 0, {}},
                                 {"unshuffle (succ,prec) = (id,prec)(succ)", true, 0, {}},
                                 {"unshuffle (reduced,succ) = (id,succ)(succ)", true, 0, {}}};
  auto prec = [](const Word<Letter>& x) { return delta_prec(x); };
  auto succ = [](const Word<Letter>& x) { return delta_succ(x); };
  auto bar = [](const Word<Letter>& x) { return reduced_coproduct(x); };
  for (const auto& w : words) {
    if (w.is_unit()) continue;
    auto dp = delta_prec(w);
    auto ds = delta_succ(w);
    detail::record(out[0], w, apply_level(dp, 0, prec) == apply_level(dp, 1, bar));
    detail::record(out[1], w, apply_level(dp, 0, succ) == apply_level(ds, 1, prec));
    detail::record(out[2], w, apply_level(ds, 0, bar) == apply_level(ds, 1, succ));
  }
  return out;
}

/// The variant (Δ≺ ⊠ id)Δ≺ = (id ⊠ Δ̄)Δ≻, reported but not expected to hold.
template <class Letter>
SymbolicCheck check_unshuffle_variant(const std::vector<Word<Letter>>& words) {
  SymbolicCheck c{"unshuffle (prec,prec) = (id,reduced)(succ)", true, 0, {}};
  for (const auto& w : words) {
    if (w.is_unit()) continue;
    auto dp = delta_prec(w);
    auto ds = delta_succ(w);
    auto bar = [](const Word<Letter>& x) { return reduced_coproduct(x); };
    detail::record(c, w, apply_level(dp, 0, [](const Word<Letter>& x) { return delta_prec(x); }) ==
                             apply_level(ds, 1, bar));
  }
  return c;
}

template <class Letter>
std::vector<SymbolicCheck> check_antipode(const std::vector<Word<Letter>>& words) {
  std::vector<SymbolicCheck> out{{"nabla (S x id) Delta = unit counit", true, 0, {}},
                                 {"nabla (id x S) Delta = unit counit", true, 0, {}}};
  auto S = [](const Word<Letter>& x) { return antipode(x); };
  for (const auto& w : words) {
    auto d = coproduct(w);
    auto expect = unit_counit(w);
    detail::record(out[0], w, nabla(apply_level_words(d, 0, S)) == expect);
    detail::record(out[1], w, nabla(apply_level_words(d, 1, S)) == expect);
  }
  return out;
}

/// S∘S is idempotent: S^4 = S^2.
template <class Letter>
SymbolicCheck check_antipode_square(const std::vector<Word<Letter>>& words) {
  SymbolicCheck c{"S^4 = S^2", true, 0, {}};
  auto S = [](const WordSum<Letter>& s) {
    return s.template map_linear<Word<Letter>>([](const Word<Letter>& x) { return antipode(x); });
  };
  for (const auto& w : words) {
    WordSum<Letter> x(w);
    auto s2 = S(S(x));
    detail::record(c, w, S(S(s2)) == s2);
  }
  return c;
}

/// Δ(uv) = Δ(u)Δ(v) with stacks multiplied through the interchange.
template <class Letter>
SymbolicCheck check_multiplicativity(const std::vector<Word<Letter>>& words, int max_total) {
  SymbolicCheck c{"Delta(uv) = Delta(u) Delta(v)", true, 0, {}};
  for (const auto& u : words) {
    for (const auto& v : words) {
      if (u.total_size() + v.total_size() > max_total) continue;
      auto uv = hconcat(u, v);
      detail::record(c, uv, coproduct(uv) == hconcat(coproduct(u), coproduct(v)),
                     "split as " + to_text(u) + " . " + to_text(v));
    }
  }
  return c;
}

/// Iterated reduced coproduct vanishes at the degree of the word and, for
/// non-unit words, not one step earlier.
template <class Letter>
SymbolicCheck check_conilpotence(const std::vector<Word<Letter>>& words) {
  SymbolicCheck c{"conilpotence", true, 0, {}};
  auto bar = [](const Word<Letter>& x) { return reduced_coproduct(x); };
  for (const auto& w : words) {
    StackSum<Letter> s(Stack<Letter>{w});
    int deg = w.degree();
    bool ok = true;
    for (int n = 1; n <= deg; ++n) {
      s = apply_level(s, static_cast<std::size_t>(n - 1), bar);
      if (n == deg - 1 && s.is_zero()) ok = false;
    }
    if (deg >= 1 && !s.is_zero()) ok = false;
    detail::record(c, w, ok);
  }
  return c;
}

}  // namespace ovc
