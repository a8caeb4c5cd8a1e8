#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ovc/cumulants.hpp"
#include "ovc/errors.hpp"
#include "ovc/formal.hpp"
#include "ovc/ovps.hpp"

namespace ovc {

inline Complex to_complex(const Rational& r) { return {r.template convert_to<double>(), 0.0}; }

/// A linear map from words of letters to words of maps. The value on w has
/// w.outputs() outputs and w.inputs() inputs; on unit words it is
/// unit_coefficient() times the identity. Values are memoized per word, and
/// words whose total size exceeds max_order() throw OrderOverflow.
template <class Letter>
class Morphism {
 public:
  using W = Word<Letter>;
  /// Called only on non-unit words within max_order.
  using Rule = std::function<MapSum(const Morphism&, const W&)>;

  Morphism() = default;
  Morphism(int d, int max_order, Complex unit, Rule rule, std::string name = "morphism")
      : impl_(std::make_shared<Impl>()) {
    impl_->d = d;
    impl_->max_order = max_order;
    impl_->unit = unit;
    impl_->rule = std::move(rule);
    impl_->name = std::move(name);
  }

  int dim() const { return impl_->d; }
  int max_order() const { return impl_->max_order; }
  Complex unit_coefficient() const { return impl_->unit; }
  const std::string& name() const { return impl_->name; }
  bool valid() const { return static_cast<bool>(impl_); }

  MapSum operator()(const W& w) const {
    if (!impl_) throw DomainError("evaluation of an empty morphism");
    if (w.total_size() > impl_->max_order) {
      throw OrderOverflow(impl_->name + ": word of size " + std::to_string(w.total_size()) +
                          " beyond max order " + std::to_string(impl_->max_order));
    }
    if (w.is_unit()) return MapSum::identity(impl_->d, w.outputs()).scaled(impl_->unit);
    {
      std::lock_guard<std::mutex> lock(impl_->mu);
      auto it = impl_->memo.find(w);
      if (it != impl_->memo.end()) return it->second;
    }
    MapSum v = finish(impl_->rule(*this, w));
    if (v.outputs() != w.outputs() || v.inputs() != w.inputs()) {
      throw ArityMismatch(impl_->name + ": value has the wrong grading");
    }
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->memo.emplace(w, std::move(v)).first->second;
  }

  /// Linear extension; all words of s must share the grading (outputs, inputs).
  MapSum operator()(const WordSum<Letter>& s, int outputs, int inputs) const {
    MapSum out(impl_->d, outputs, inputs);
    for (const auto& [w, c] : s.terms()) out.add((*this)(w), to_complex(c));
    return out.normalized();
  }

  /// Zero value of the grading of w.
  MapSum zero(const W& w) const { return MapSum(impl_->d, w.outputs(), w.inputs()); }

 private:
  // single-output values and the letters of multi-output values are turned
  // into dense tables so later compositions stay cheap
  static constexpr std::size_t kTableCap = std::size_t{1} << 16;

  MapSum finish(const MapSum& v) const {
    auto small = [&](const MultiMap& f) {
      std::size_t n = 1, D = static_cast<std::size_t>(impl_->d) * static_cast<std::size_t>(impl_->d);
      for (int i = 0; i <= f.arity(); ++i) n *= D;
      return n <= kTableCap;
    };
    auto plain = [](const MultiMap& f) { return f.is_identity() || f.name() == "table"; };
    if (v.outputs() == 1 && !v.is_zero()) {
      MultiMap f = v.collapse();
      if (!small(f)) return v.normalized();
      MapSum out(v.dim(), 1, v.inputs());
      out.add(MultiMapWord{v.terms().size() == 1 && v.terms()[0].coeff == Complex(1) && plain(v.terms()[0].maps[0])
                               ? v.terms()[0].maps[0]
                               : tabulate(f)},
              1.0);
      return out;
    }
    MapSum out(v.dim(), v.outputs(), v.inputs());
    for (const auto& t : v.terms()) {
      MultiMapWord w;
      for (const auto& f : t.maps) w.push_back(plain(f) || !small(f) ? f : tabulate(f));
      out.add(w, t.coeff);
    }
    return out;
  }

  struct Impl {
    int d = 1;
    int max_order = 0;
    Complex unit = 0;
    Rule rule;
    std::string name;
    std::mutex mu;
    std::map<W, MapSum> memo;
  };
  std::shared_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// basic morphisms

/// η∘ε: the identity on unit words, zero elsewhere.
template <class Letter>
Morphism<Letter> unit_morphism(int d, int max_order) {
  return Morphism<Letter>(d, max_order, 1.0, [](const Morphism<Letter>& self, const Word<Letter>& w) {
    return self.zero(w);
  }, "unit");
}

/// Generator values on single letters; nullopt means zero.
template <class Letter>
using LetterGenerator = std::function<std::optional<MultiMap>(const Letter&)>;

namespace detail {

template <class Letter>
LetterGenerator<Letter> memoize(LetterGenerator<Letter> gen) {
  struct Cache {
    std::mutex mu;
    std::map<Letter, std::optional<MultiMap>> values;
  };
  auto cache = std::make_shared<Cache>();
  return [cache, gen = std::move(gen)](const Letter& l) -> std::optional<MultiMap> {
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->values.find(l);
      if (it != cache->values.end()) return it->second;
    }
    auto v = gen(l);
    std::lock_guard<std::mutex> lock(cache->mu);
    return cache->values.emplace(l, std::move(v)).first->second;
  };
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

/// id^p ⊗ gen(x) ⊗ id^q on words with exactly one non-unit letter x, zero on
/// every other word (including unit words).
template <class Letter>
Morphism<Letter> infinitesimal(int d, int max_order, LetterGenerator<Letter> gen, std::string name = "infinitesimal") {
  auto g = detail::memoize<Letter>(std::move(gen));
  return Morphism<Letter>(d, max_order, 0.0, [g, d](const Morphism<Letter>& self, const Word<Letter>& w) {
    using T = LetterTraits<Letter>;
    int f = w.first_nonunit();
    for (std::size_t i = static_cast<std::size_t>(f) + 1; i < w.letters.size(); ++i)
      if (!T::is_unit(w.letters[i])) return self.zero(w);
    auto v = g(w.letters[static_cast<std::size_t>(f)]);
    if (!v) return self.zero(w);
    MultiMapWord maps(w.letters.size(), MultiMap::identity(d));
    maps[static_cast<std::size_t>(f)] = *v;
    return MapSum::of(maps);
  }, std::move(name));
}

/// Tensor product of the values on each letter of w.
template <class Letter>
MapSum letterwise(const Morphism<Letter>& self, const Word<Letter>& w) {
  MapSum acc = self(Word<Letter>{w.letters[0]});
  for (std::size_t i = 1; i < w.letters.size(); ++i) acc = tensor(acc, self(Word<Letter>{w.letters[i]}));
  return acc;
}

/// The letterwise extension of values on single non-unit letters.
template <class Letter>
Morphism<Letter> horizontal(int d, int max_order, std::function<MultiMap(const Letter&)> letter,
                            std::string name = "horizontal") {
  return Morphism<Letter>(d, max_order, 1.0, [letter = std::move(letter)](const Morphism<Letter>& self, const Word<Letter>& w) {
    if (w.letters.size() == 1) return MapSum::of({letter(w.letters[0])});
    return letterwise(self, w);
  }, std::move(name));
}

/// Seeded Gaussian generators on every non-unit letter (or only on letters
/// of degree one when single_only is set).
template <class Letter>
Morphism<Letter> seeded_infinitesimal(int d, int max_order, std::uint64_t seed, bool single_only = false) {
  using T = LetterTraits<Letter>;
  LetterGenerator<Letter> gen = [d, seed, single_only](const Letter& l) -> std::optional<MultiMap> {
    if (single_only && T::degree(l) != 1) return std::nullopt;
    return random_multimap(T::arity(l), d, seed ^ detail::fnv1a(T::to_text(l, VariableTable{})));
  };
  return infinitesimal<Letter>(d, max_order, std::move(gen), "seeded(" + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------
// linear structure

template <class Letter>
Morphism<Letter> linear_combination(std::vector<std::pair<Complex, Morphism<Letter>>> parts) {
  if (parts.empty()) throw DomainError("empty linear combination of morphisms");
  int d = parts[0].second.dim();
  int order = parts[0].second.max_order();
  Complex unit = 0;
  for (const auto& [c, m] : parts) {
    order = std::min(order, m.max_order());
    unit += c * m.unit_coefficient();
  }
  return Morphism<Letter>(d, order, unit, [parts](const Morphism<Letter>& self, const Word<Letter>& w) {
    MapSum out = self.zero(w);
    for (const auto& [c, m] : parts) out.add(m(w), c);
    return out;
  }, "sum");
}

template <class Letter>
Morphism<Letter> operator+(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  return linear_combination<Letter>({{1.0, a}, {1.0, b}});
}
template <class Letter>
Morphism<Letter> operator-(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  return linear_combination<Letter>({{1.0, a}, {-1.0, b}});
}
template <class Letter>
Morphism<Letter> operator*(Complex c, const Morphism<Letter>& a) {
  return linear_combination<Letter>({{c, a}});
}

// ---------------------------------------------------------------------------
// convolution and half products

namespace detail {

template <class Letter>
MapSum convolve_over(const Morphism<Letter>& a, const Morphism<Letter>& b, const StackSum<Letter>& cuts,
                     MapSum out) {
  for (const auto& [st, c] : cuts.terms()) {
    MapSum x = a(st[0]);
    if (x.is_zero()) continue;
    MapSum y = b(st[1]);
    if (y.is_zero()) continue;
    out.add(vcompose(x, y), to_complex(c));
  }
  return out;
}

template <class Letter>
int joint_order(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  return std::min(a.max_order(), b.max_order());
}

}  // namespace detail

/// ∇ ∘ (a ⊠ b) ∘ Δ.
template <class Letter>
Morphism<Letter> convolve(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  return Morphism<Letter>(a.dim(), detail::joint_order(a, b), a.unit_coefficient() * b.unit_coefficient(),
                          [a, b](const Morphism<Letter>& self, const Word<Letter>& w) {
                            return detail::convolve_over(a, b, coproduct(w), self.zero(w));
                          }, "(" + a.name() + " * " + b.name() + ")");
}

namespace detail {
template <class Letter>
void check_half(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  if (a.unit_coefficient() * b.unit_coefficient() != Complex(0)) {
    throw PreconditionFailed("half product of two morphisms with non-zero unit parts is undefined");
  }
}
}  // namespace detail

/// Convolution along the augmented Δ≺: gives f ≺ ηε = f and ηε ≺ f = 0.
template <class Letter>
Morphism<Letter> half_prec(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  detail::check_half(a, b);
  return Morphism<Letter>(a.dim(), detail::joint_order(a, b), 0.0,
                          [a, b](const Morphism<Letter>& self, const Word<Letter>& w) {
                            return detail::convolve_over(a, b, delta_prec_aug(w), self.zero(w));
                          }, "(" + a.name() + " < " + b.name() + ")");
}

/// Convolution along the augmented Δ≻: gives ηε ≻ f = f and f ≻ ηε = 0.
template <class Letter>
Morphism<Letter> half_succ(const Morphism<Letter>& a, const Morphism<Letter>& b) {
  detail::check_half(a, b);
  return Morphism<Letter>(a.dim(), detail::joint_order(a, b), 0.0,
                          [a, b](const Morphism<Letter>& self, const Word<Letter>& w) {
                            return detail::convolve_over(a, b, delta_succ_aug(w), self.zero(w));
                          }, "(" + a.name() + " > " + b.name() + ")");
}

// ---------------------------------------------------------------------------
// exponentials and logarithm

/// Solution of K = ηε + k ≺ K for infinitesimal k, evaluated per letter by
/// recursion over cuts with position 1 in the lower part and extended
/// letterwise.
template <class Letter>
Morphism<Letter> exp_prec(const Morphism<Letter>& k) {
  return Morphism<Letter>(k.dim(), k.max_order(), 1.0, [k](const Morphism<Letter>& self, const Word<Letter>& w) {
    using W = Word<Letter>;
    if (w.letters.size() > 1) return letterwise(self, w);
    MapSum out = self.zero(w);
    for (const auto& c : LetterTraits<Letter>::cuts(w.letters[0])) {
      if (!c.first_in_lower) continue;
      MapSum x = k(W{c.lower});
      if (x.is_zero()) continue;
      out.add(vcompose(x, self(W(c.upper))), 1.0);
    }
    return out;
  }, "exp<(" + k.name() + ")");
}

/// Solution of B = ηε + B ≻ b for infinitesimal b, by the mirror recursion
/// over cuts with position 1 in the upper part.
template <class Letter>
Morphism<Letter> exp_succ(const Morphism<Letter>& b) {
  return Morphism<Letter>(b.dim(), b.max_order(), 1.0, [b](const Morphism<Letter>& self, const Word<Letter>& w) {
    using W = Word<Letter>;
    if (w.letters.size() > 1) return letterwise(self, w);
    MapSum out = self.zero(w);
    for (const auto& c : LetterTraits<Letter>::cuts(w.letters[0])) {
      if (c.first_in_lower) continue;
      MapSum y = b(W(c.upper));
      if (y.is_zero()) continue;
      out.add(vcompose(self(W{c.lower}), y), 1.0);
    }
    return out;
  }, "exp>(" + b.name() + ")");
}

namespace detail {

/// x, x*x, x*x*x, ... up to `count` factors; each power is the previous one
/// convolved with x on the right.
template <class Letter>
std::vector<Morphism<Letter>> powers(const Morphism<Letter>& x, int count) {
  std::vector<Morphism<Letter>> p{x};
  for (int i = 2; i <= count; ++i) p.push_back(convolve(p.back(), x));
  return p;
}

}  // namespace detail

/// ηε + Σ_p m^{*p} / p!, truncated at the degree of each word.
template <class Letter>
Morphism<Letter> exp_star(const Morphism<Letter>& m) {
  if (m.unit_coefficient() != Complex(0)) throw DomainError("exp_star needs a morphism vanishing on unit words");
  auto pw = detail::powers(m, std::max(m.max_order(), 1));
  return Morphism<Letter>(m.dim(), m.max_order(), 1.0, [pw](const Morphism<Letter>& self, const Word<Letter>& w) {
    MapSum out = self.zero(w);
    double fact = 1;
    const int top = std::min<int>(w.degree(), static_cast<int>(pw.size()));
    for (int p = 1; p <= top; ++p) {
      fact *= p;
      out.add(pw[static_cast<std::size_t>(p - 1)](w), 1.0 / fact);
    }
    return out;
  }, "exp*(" + m.name() + ")");
}

/// Σ_n (-1)^{n+1}/n (Φ - ηε)^{*n}, truncated at the degree of each word.
template <class Letter>
Morphism<Letter> log_star(const Morphism<Letter>& phi) {
  if (phi.unit_coefficient() != Complex(1)) throw DomainError("log_star needs a morphism equal to 1 on unit words");
  auto x = phi - unit_morphism<Letter>(phi.dim(), phi.max_order());
  auto pw = detail::powers(x, std::max(phi.max_order(), 1));
  return Morphism<Letter>(phi.dim(), phi.max_order(), 0.0, [pw](const Morphism<Letter>& self, const Word<Letter>& w) {
    MapSum out = self.zero(w);
    const int top = std::min<int>(w.degree(), static_cast<int>(pw.size()));
    for (int n = 1; n <= top; ++n) out.add(pw[static_cast<std::size_t>(n - 1)](w), (n % 2 ? 1.0 : -1.0) / n);
    return out;
  }, "log*(" + phi.name() + ")");
}

// ---------------------------------------------------------------------------
// change of source

/// w ↦ phi(f(w)) for a linear map f that preserves gradings and sends unit
/// words to themselves.
template <class Src, class Dst>
Morphism<Dst> precompose(const Morphism<Src>& phi, std::function<WordSum<Src>(const Word<Dst>&)> f,
                         std::string name = "precompose") {
  return Morphism<Dst>(phi.dim(), phi.max_order(), phi.unit_coefficient(),
                       [phi, f = std::move(f)](const Morphism<Dst>&, const Word<Dst>& w) {
                         return phi(f(w), w.outputs(), w.inputs());
                       }, std::move(name));
}

/// α ∘ S.
template <class Letter>
Morphism<Letter> compose_antipode(const Morphism<Letter>& alpha) {
  return precompose<Letter, Letter>(alpha, [](const Word<Letter>& w) { return antipode(w); }, alpha.name() + "oS");
}

// ---------------------------------------------------------------------------
// comparison

struct MorphismComparison {
  Deviation dev;
  std::size_t words = 0;
  std::string worst;  // text of the word with the largest relative deviation
  bool within(double tol) const { return dev.within(tol); }
};

template <class Letter>
MorphismComparison compare_morphisms(const Morphism<Letter>& a, const Morphism<Letter>& b,
                                     const std::vector<Word<Letter>>& words) {
  MorphismComparison r;
  double worst = -1;
  for (const auto& w : words) {
    Deviation d = mapsum_deviation(a(w), b(w));
    if (d.rel > worst && !d.within(0)) {
      worst = d.rel;
      r.worst = to_text(w);
    }
    r.dev.merge(d);
    ++r.words;
  }
  return r;
}

// ---------------------------------------------------------------------------
// partition-level morphisms built from generator families

using PartitionMorphism = Morphism<NCPartition>;

/// Generator on the one-block partition colored by a word.
using BlockGenerator = std::function<MultiMap(const std::vector<int>& colors)>;

BlockGenerator family_generator(const CumulantFamily& family);

/// Largest deviation of G_u ∘_{|u|+1} G_v from G_v ∘_1 G_u over color words
/// u, v (|u|, |v| ≥ 1, |u| + |v| ≤ max_total) from the alphabet.
struct CommutationReport {
  Deviation dev;
  std::vector<int> u, v;  // worst pair
  std::size_t pairs = 0;
};
CommutationReport generator_commutation(const BlockGenerator& gen, const std::vector<int>& alphabet, int max_total);

/// The map attached to a factorization: generators composed by partial
/// insertion.
MultiMap evaluate_factorization(const Factorization& f, const BlockGenerator& gen);

/// The horizontal morphism whose value on a partition is the operadic
/// composite of generator values. Validates the generator relation up to
/// validate_order and throws PreconditionFailed with the first offending
/// pair.
PartitionMorphism operadic_extension(int d, int max_order, BlockGenerator gen, const std::vector<int>& alphabet = {0},
                                     int validate_order = 4, double tol = 1e-9);

/// k(π) = family generator when π has one block, zero otherwise.
PartitionMorphism block_infinitesimal(const CumulantFamily& family, int max_order);

}  // namespace ovc
