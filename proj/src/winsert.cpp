#include "ovc/winsert.hpp"

#include <map>
#include <mutex>

#include "ovc/errors.hpp"

namespace ovc {

std::string to_text(const LetterWord& x, const VariableTable& v) {
  if (x.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < x.vars.size(); ++i) {
    if (i) s += ".";
    s += v.name(x.vars[i]);
  }
  // a lone variable called e would read back as the empty word
  if (s == "e") s += ".";
  return s;
}

LetterWord parse_letter_word(std::string_view s, const VariableTable& v) {
  s = detail::trim_view(s);
  if (s == "e" || s.empty()) return {};
  if (s.back() == '.') s.remove_suffix(1);
  LetterWord x;
  for (auto part : detail::split_on(s, ".")) {
    if (part.empty()) throw ParseError("empty variable name in letter word '" + std::string(s) + "'");
    x.vars.push_back(v.index(std::string(part)));
  }
  return x;
}

LetterWord word_insert(const LetterWord& x, const std::vector<LetterWord>& ys) {
  if (static_cast<int>(ys.size()) != x.arity()) {
    throw ArityMismatch("word_insert: " + std::to_string(ys.size()) + " words for arity " + std::to_string(x.arity()));
  }
  LetterWord out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    out.vars.insert(out.vars.end(), ys[i].vars.begin(), ys[i].vars.end());
    if (i < x.vars.size()) out.vars.push_back(x.vars[i]);
  }
  return out;
}

const std::vector<LetterCut<LetterWord>>& LetterTraits<LetterWord>::cuts(const LetterWord& x) {
  static std::mutex mu;
  static std::map<LetterWord, std::vector<LetterCut<LetterWord>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
  }
  const int p = x.size();
  if (p > max_elements() + 10) throw ResourceLimit("letter word of length " + std::to_string(p) + " is too long to cut");
  std::vector<LetterCut<LetterWord>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
    LetterCut<LetterWord> c;
    c.upper.emplace_back();
    for (int i = 0; i < p; ++i) {
      int a = x.vars[static_cast<std::size_t>(i)];
      if (mask >> i & 1) {
        c.lower.vars.push_back(a);
        c.upper.emplace_back();
      } else {
        c.upper.back().vars.push_back(a);
      }
    }
    c.first_in_lower = p > 0 && (mask & 1);
    out.push_back(std::move(c));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(x, std::move(out)).first->second;
}

std::vector<WWord> all_w_words(const std::vector<int>& alphabet, int max_total, int max_letters) {
  std::vector<LetterWord> letters{LetterWord{}};
  for (const auto& w : all_color_words(alphabet, max_total)) letters.emplace_back(w);
  std::vector<WWord> out, frontier{WWord{}};
  for (int n = 1; n <= max_letters; ++n) {
    std::vector<WWord> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) {
        if (w.total_size() + l.size() > max_total) continue;
        WWord x = w;
        x.letters.push_back(l);
        next.push_back(std::move(x));
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

WordSum<NCPartition> split(const LetterWord& x) {
  WordSum<NCPartition> out;
  if (x.empty()) {
    out.add(PartitionWord{NCPartition()}, 1);
    return out;
  }
  for (const auto& pi : enumerate_nc(x.size())) out.add(PartitionWord{NCPartition(pi.blocks(), x.vars)}, 1);
  return out;
}

WordSum<NCPartition> split(const WWord& w) {
  WordSum<NCPartition> acc(PartitionWord{});
  for (const auto& l : w.letters) acc = hconcat(acc, split(l));
  return acc;
}

StackSum<NCPartition> split(const StackSum<LetterWord>& s) {
  StackSum<NCPartition> out;
  for (const auto& [st, c] : s.terms()) {
    StackSum<NCPartition> acc(Stack<NCPartition>{});
    for (const auto& level : st) {
      StackSum<NCPartition> next;
      auto image = split(level);
      for (const auto& [prefix, e] : acc.terms())
        for (const auto& [w, f] : image.terms()) {
          auto x = prefix;
          x.push_back(w);
          next.add(x, e * f);
        }
      acc = std::move(next);
    }
    out.add(acc, c);
  }
  return out;
}

WMorphism pullback(const PartitionMorphism& phi) {
  return precompose<NCPartition, LetterWord>(phi, [](const WWord& w) { return split(w); },
                                             "pullback(" + phi.name() + ")");
}

WMorphism w_infinitesimal(const CumulantFamily& family, int max_order) {
  return infinitesimal<LetterWord>(family.space().d(), max_order, [family](const LetterWord& x) -> std::optional<MultiMap> {
    return family.generator(x.vars);
  }, to_string(family.kind()) + "_W");
}

WMorphism w_moment(const CumulantFamily& moments, int max_order) {
  return horizontal<LetterWord>(moments.space().d(), max_order, [moments](const LetterWord& x) {
    return moments.generator(x.vars);
  }, "E_W");
}

NonProsInstance non_pros_instance() {
  WWord alpha{LetterWord{0}};
  WWord beta{LetterWord{}, LetterWord{1}};
  NonProsInstance r;
  r.split_of_product = split(vcompose(alpha, beta));
  r.product_of_splits = vcompose(split(alpha), split(beta));
  return r;
}

namespace {

template <class F>
SymbolicCheck intertwining(const std::string& name, const std::vector<WWord>& words, F&& delta) {
  SymbolicCheck c{name, true, 0, {}};
  for (const auto& w : words) {
    if (w.is_unit()) continue;
    auto lhs = split(delta(w));
    StackSum<NCPartition> rhs;
    auto image = split(w);
    for (const auto& [x, e] : image.terms()) rhs.add(delta(x), e);
    detail::record(c, w, lhs == rhs);
  }
  return c;
}

}  // namespace

std::vector<CheckResult> check_split_intertwining(const std::vector<WWord>& words) {
  std::vector<CheckResult> out;
  out.push_back(from_symbolic(
      intertwining("split/coproduct", words, [](const auto& w) { return coproduct(w); }),
      "(Sp ⊠ Sp) Δ = Δ Sp"));
  out.push_back(from_symbolic(
      intertwining("split/delta-prec", words, [](const auto& w) { return delta_prec(w); }),
      "(Sp ⊠ Sp) Δ≺ = Δ≺ Sp"));
  out.push_back(from_symbolic(
      intertwining("split/delta-succ", words, [](const auto& w) { return delta_succ(w); }),
      "(Sp ⊠ Sp) Δ≻ = Δ≻ Sp"));
  return out;
}

std::vector<CheckResult> verify_fixed_points(std::shared_ptr<const OVMatrixSpace> space, int max_order, double tol,
                                             int intertwining_order) {
  const int d = space->d();
  auto mom = CumulantFamily::moments(space, max_order);
  auto fr = build_free(mom);
  auto bo = build_boolean(mom);
  auto alphabet = space->variable_indices();
  auto words = all_w_words(alphabet, max_order, 2);

  auto E = w_moment(mom, max_order);
  auto k = w_infinitesimal(fr, max_order);
  auto b = w_infinitesimal(bo, max_order);
  auto u = unit_morphism<LetterWord>(d, max_order);

  std::vector<CheckResult> out;
  auto add = [&](std::string name, std::string property, const WMorphism& lhs, const WMorphism& rhs) {
    auto r = compare_morphisms(lhs, rhs, words);
    out.push_back(numeric_result(std::move(name), std::move(property), r.dev, tol, r.words,
                                 r.within(tol) ? "" : "worst word " + r.worst));
  };
  add("free fixed point", "E = ηε + k ≺ E", E, u + half_prec(k, E));
  add("boolean fixed point", "E = ηε + E ≻ b", E, u + half_succ(E, b));
  add("free pullback", "exp≺(κ) ∘ Sp = E", pullback(exp_prec(block_infinitesimal(fr, max_order))), E);
  add("boolean pullback", "exp≻(β) ∘ Sp = E", pullback(exp_succ(block_infinitesimal(bo, max_order))), E);

  if (intertwining_order > 0) {
    auto sym = check_split_intertwining(all_w_words(alphabet, intertwining_order, 2));
    out.insert(out.end(), sym.begin(), sym.end());
  }
  return out;
}

CheckResult monotone_log_check(std::shared_ptr<const OVMatrixSpace> space, int max_order, double tol) {
  auto mom = CumulantFamily::moments(space, max_order);
  auto mo = build_monotone(mom);
  auto L = log_star(w_moment(mom, max_order));
  const int a = space->variable_indices().front();
  Deviation dev;
  for (int n = 1; n <= max_order; ++n) {
    std::vector<int> x(static_cast<std::size_t>(n), a);
    dev.merge(multimap_deviation(L(WWord{LetterWord(x)}).collapse(), mo.generator(x)));
  }
  return numeric_result("monotone log", "log*(E)(a^n) = h_n", dev, tol, static_cast<std::size_t>(max_order));
}

}  // namespace ovc
