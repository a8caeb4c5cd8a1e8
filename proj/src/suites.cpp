#include "ovc/suites.hpp"

#include <algorithm>

#include "ovc/errors.hpp"
#include "ovc/morphisms.hpp"
#include "ovc/unshuffle.hpp"
#include "ovc/winsert.hpp"

namespace ovc {

FaultSpec parse_fault(std::string_view s) {
  auto parts = detail::split_on(s, ":");
  if (parts.size() < 2 || parts.size() > 3) throw ParseError("fault must look like KIND:LENGTH[:FACTOR]");
  FaultSpec f;
  f.kind = parse_kind(parts[0]);
  if (f.kind == CumulantKind::Moment) throw ParseError("faults apply to cumulant tables, not moments");
  try {
    f.length = std::stoi(std::string(parts[1]));
    if (parts.size() == 3) f.factor = std::stod(std::string(parts[2]));
  } catch (const std::exception&) {
    throw ParseError("bad number in fault spec '" + std::string(s) + "'");
  }
  if (f.length < 1) throw ParseError("fault length must be positive");
  return f;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hopf",   "shuffle",   "operad",         "oracle",
                                              "moment-cumulant", "splitting", "monotone-scalar"};
  return names;
}

namespace {

CheckResult exact_result(std::string name, std::string property, bool pass, std::size_t cases,
                         std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.property = std::move(property);
  r.exact = true;
  r.pass = pass;
  r.cases = cases;
  r.detail = std::move(detail);
  return r;
}

std::vector<NCPartition> partitions_up_to(int max_size) {
  std::vector<NCPartition> out;
  for (int s = 0; s <= max_size; ++s)
    for (const auto& p : enumerate_nc(s)) out.push_back(p);
  return out;
}

/// All colorings of all non-empty partitions of size <= max_size.
std::vector<NCPartition> colored_partitions(const std::vector<int>& alphabet, int max_size) {
  std::vector<NCPartition> out;
  for (const auto& word : all_color_words(alphabet, max_size))
    for (const auto& p : enumerate_nc(static_cast<int>(word.size()))) out.emplace_back(p.blocks(), word);
  return out;
}

template <class Letter>
std::vector<Word<Letter>> without_units(std::vector<Word<Letter>> words) {
  words.erase(std::remove_if(words.begin(), words.end(), [](const Word<Letter>& w) { return w.is_unit(); }),
              words.end());
  return words;
}

template <class Letter>
CheckResult compare_check(std::string name, std::string property, const Morphism<Letter>& a,
                          const Morphism<Letter>& b, const std::vector<Word<Letter>>& words, double tol) {
  auto r = compare_morphisms(a, b, words);
  return numeric_result(std::move(name), std::move(property), r.dev, tol, r.words,
                        r.within(tol) ? "" : "worst word " + r.worst);
}

template <class Letter>
void symbolic_bialgebra(std::vector<CheckResult>& out, const std::vector<Word<Letter>>& words,
                        const std::vector<Word<Letter>>& factors, int max_total, const std::string& prefix) {
  auto add = [&](const SymbolicCheck& s, const std::string& property) {
    auto r = from_symbolic(s, property);
    r.name = prefix + r.name;
    out.push_back(r);
  };
  add(check_coassociativity(words), "(Δ ⊠ id)Δ = (id ⊠ Δ)Δ");
  add(check_half_split(words), "Δ̄ = Δ≺ + Δ≻");
  auto ax = check_unshuffle_axioms(words);
  add(ax[0], "(Δ≺ ⊠ id)Δ≺ = (id ⊠ Δ̄)Δ≺");
  add(ax[1], "(Δ≻ ⊠ id)Δ≺ = (id ⊠ Δ≺)Δ≻");
  add(ax[2], "(Δ̄ ⊠ id)Δ≻ = (id ⊠ Δ≻)Δ≻");
  auto an = check_antipode(words);
  add(an[0], "∇(S ⊠ id)Δ = ηε");
  add(an[1], "∇(id ⊠ S)Δ = ηε");
  add(check_antipode_square(words), "S² ∘ S² = S²");
  add(check_multiplicativity(factors, max_total), "Δ(uv) = Δ(u)Δ(v) through the interchange");
  add(check_conilpotence(words), "Δ̄ iterated past the degree vanishes");
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> shuffle_suite(const SuiteConfig& cfg) {
  const int d = cfg.space->d();
  const int order = std::min(cfg.max_order, 4);
  const double tol = cfg.tol;
  using M = PartitionMorphism;
  auto f = seeded_infinitesimal<NCPartition>(d, order, cfg.seed * 8 + 1);
  auto g = seeded_infinitesimal<NCPartition>(d, order, cfg.seed * 8 + 2);
  auto h = seeded_infinitesimal<NCPartition>(d, order, cfg.seed * 8 + 3);
  auto x = seeded_infinitesimal<NCPartition>(d, order, cfg.seed * 8 + 4);
  auto u = unit_morphism<NCPartition>(d, order);
  M zero = 0.0 * f;
  auto all = all_partition_words(order, 2);
  auto words = without_units(all);

  std::vector<CheckResult> out;
  out.push_back(compare_check("counit law (left)", "ηε ⋆ f = f", convolve(u, f), f, all, tol));
  out.push_back(compare_check("counit law (right)", "f ⋆ ηε = f", convolve(f, u), f, all, tol));
  out.push_back(compare_check("associativity", "(f ⋆ g) ⋆ h = f ⋆ (g ⋆ h)", convolve(convolve(f, g), h),
                              convolve(f, convolve(g, h)), words, tol));
  out.push_back(compare_check("prec unit (right)", "f ≺ ηε = f", half_prec(f, u), f, words, tol));
  out.push_back(compare_check("prec unit (left)", "ηε ≺ f = 0", half_prec(u, f), zero, words, tol));
  out.push_back(compare_check("succ unit (left)", "ηε ≻ f = f", half_succ(u, f), f, words, tol));
  out.push_back(compare_check("succ unit (right)", "f ≻ ηε = 0", half_succ(f, u), zero, words, tol));
  out.push_back(compare_check("half products sum", "f ≺ g + f ≻ g = f ⋆ g", half_prec(f, g) + half_succ(f, g),
                              convolve(f, g), words, tol));
  out.push_back(compare_check("shuffle axiom 1", "(f ≺ g) ≺ h = f ≺ (g ⋆ h)", half_prec(half_prec(f, g), h),
                              half_prec(f, convolve(g, h)), words, tol));
  out.push_back(compare_check("shuffle axiom 2", "(f ≻ g) ≺ h = f ≻ (g ≺ h)", half_prec(half_succ(f, g), h),
                              half_succ(f, half_prec(g, h)), words, tol));
  out.push_back(compare_check("shuffle axiom 3", "f ≻ (g ≻ h) = (f ⋆ g) ≻ h", half_succ(f, half_succ(g, h)),
                              half_succ(convolve(f, g), h), words, tol));
  auto K = exp_prec(x), B = exp_succ(x);
  out.push_back(compare_check("left-right inverse", "exp≻(-x) ⋆ exp≺(x) = ηε", convolve(exp_succ(-1.0 * x), K), u,
                              all, tol));
  out.push_back(compare_check("exp prec fixed point", "K = ηε + x ≺ K", K, u + half_prec(x, K), all, tol));
  out.push_back(compare_check("exp succ fixed point", "B = ηε + B ≻ x", B, u + half_succ(B, x), all, tol));
  out.push_back(compare_check("exp/log round trip", "log*(exp*(x)) = x", log_star(exp_star(x)), x, words, tol));
  return out;
}

std::vector<CheckResult> oracle_suite(const SuiteConfig& cfg) {
  const int d = cfg.space->d();
  const int order = std::min(cfg.max_order, 5);
  const double tol = std::min(cfg.tol, 1e-10);
  auto alphabet = cfg.space->variable_indices();
  auto mom = CumulantFamily::moments(cfg.space, order);
  auto fr = build_free(mom);

  std::vector<CheckResult> out;
  auto commute = [&](const char* name, const CumulantFamily& fam) {
    auto r = generator_commutation(family_generator(fam), alphabet, std::min(order, 4));
    out.push_back(numeric_result(name, "G_u ∘_last G_v = G_v ∘_1 G_u", r.dev, cfg.tol, r.pairs));
  };
  commute("generator relation (moments)", mom);
  commute("generator relation (free)", fr);
  commute("monotone hypothesis", build_monotone(mom));

  auto E = operadic_extension(d, order, family_generator(mom), alphabet, 0);
  auto Kx = exp_prec(block_infinitesimal(mom, order));
  auto Kf = operadic_extension(d, order, family_generator(fr), alphabet, 0);
  auto Kfx = exp_prec(block_infinitesimal(fr, order));
  Deviation pi_dev, exp_dev, free_dev;
  std::size_t n = 0;
  for (const auto& pi : colored_partitions(alphabet, order)) {
    PartitionWord w{pi};
    MultiMap ext = E(w).collapse();
    pi_dev.merge(multimap_deviation(ext, e_pi_map(pi, mom)));
    exp_dev.merge(multimap_deviation(ext, Kx(w).collapse()));
    free_dev.merge(mapsum_deviation(Kf(w), Kfx(w)));
    ++n;
  }
  out.push_back(numeric_result("extension vs e_pi", "E(π) = e_π", pi_dev, tol, n));
  out.push_back(numeric_result("extension vs exp prec", "E(π) = exp≺(E_n)(π)", exp_dev, tol, n));
  out.push_back(numeric_result("free extension vs exp prec", "K(π) = exp≺(κ)(π)", free_dev, tol, n));
  out.push_back(compare_check("PROS inverse", "E ⋆ (E ∘ S) = ηε", convolve(E, compose_antipode(E)),
                              unit_morphism<NCPartition>(d, order), all_partition_words(std::min(order, 4), 2), tol));
  return out;
}

std::vector<CheckResult> moment_cumulant_suite(const SuiteConfig& cfg) {
  auto alphabet = cfg.space->variable_indices();
  auto mom = CumulantFamily::moments(cfg.space, cfg.max_order);
  auto fr = build_free(mom), bo = build_boolean(mom), mo = build_monotone(mom);
  if (cfg.fault) {
    auto& target = cfg.fault->kind == CumulantKind::Free ? fr : cfg.fault->kind == CumulantKind::Boolean ? bo : mo;
    target.inject_fault(cfg.fault->length, cfg.fault->factor);
  }
  auto words = all_color_words(alphabet, cfg.max_order);
  auto rep = verify_mc(mom, fr, bo, mo, words, cfg.tol);
  VariableTable names;
  std::vector<CheckResult> out;
  auto add = [&](const char* name, const char* property, Deviation McEntry::*field) {
    Deviation dev;
    std::string worst;
    double w = -1;
    for (const auto& e : rep.entries) {
      const Deviation& x = e.*field;
      dev.merge(x);
      if (!x.within(cfg.tol) && x.rel > w) {
        w = x.rel;
        worst = "worst word " + to_text(LetterWord(e.word), names);
      }
    }
    out.push_back(numeric_result(name, property, dev, cfg.tol, rep.entries.size(), worst));
  };
  add("free moment-cumulant", "Σ_{π∈NC(n)} κ_π = E_n", &McEntry::free);
  add("boolean moment-cumulant", "Σ_{π∈Int(n)} β_π = E_n", &McEntry::boolean);
  add("monotone moment-cumulant", "Σ_{π∈NC(n)} h_π / τ(π)! = E_n", &McEntry::monotone);
  return out;
}

std::vector<CheckResult> splitting_suite(const SuiteConfig& cfg) {
  auto alphabet = cfg.space->variable_indices();
  std::vector<CheckResult> out;

  // words-insertion operad laws, total length <= 5
  {
    std::vector<LetterWord> small{LetterWord{}};
    for (const auto& w : all_color_words(alphabet, 2)) small.emplace_back(w);
    std::vector<LetterWord> tiny{LetterWord{}};
    for (int a : alphabet) tiny.push_back(LetterWord{a});
    std::size_t cases = 0;
    bool unit_ok = true, assoc_ok = true;
    std::string failure;
    for (const auto& x : small) {
      unit_ok = unit_ok && word_insert(x, std::vector<LetterWord>(static_cast<std::size_t>(x.arity()))) == x &&
                word_insert(LetterWord{}, {x}) == x;
      // every choice of ys from `tiny`, then every zs from `tiny`
      std::vector<std::size_t> yi(static_cast<std::size_t>(x.arity()), 0);
      while (true) {
        std::vector<LetterWord> ys;
        for (auto i : yi) ys.push_back(tiny[i]);
        auto xy = word_insert(x, ys);
        if (xy.size() <= 4) {
          std::vector<std::size_t> zi(static_cast<std::size_t>(xy.arity()), 0);
          while (true) {
            std::vector<LetterWord> zs;
            for (auto i : zi) zs.push_back(tiny[i]);
            auto lhs = word_insert(xy, zs);
            if (lhs.size() <= 5) {
              std::vector<LetterWord> grouped;
              std::size_t pos = 0;
              for (const auto& y : ys) {
                std::vector<LetterWord> part(zs.begin() + static_cast<std::ptrdiff_t>(pos),
                                             zs.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(y.arity())));
                grouped.push_back(word_insert(y, part));
                pos += static_cast<std::size_t>(y.arity());
              }
              bool ok = lhs == word_insert(x, grouped);
              if (!ok && assoc_ok) failure = to_text(x) + " with " + to_text(xy);
              assoc_ok = assoc_ok && ok;
              ++cases;
            }
            std::size_t k = 0;
            for (; k < zi.size(); ++k) {
              if (++zi[k] < tiny.size()) break;
              zi[k] = 0;
            }
            if (k == zi.size()) break;
          }
        }
        std::size_t k = 0;
        for (; k < yi.size(); ++k) {
          if (++yi[k] < tiny.size()) break;
          yi[k] = 0;
        }
        if (k == yi.size()) break;
      }
    }
    out.push_back(exact_result("words insertion unit", "∅ ∘ x = x = x ∘ (∅, ..., ∅)", unit_ok, small.size()));
    out.push_back(exact_result("words insertion associativity", "(x ∘ ys) ∘ zs = x ∘ (ys ∘ zs)", assoc_ok, cases, failure));
  }

  const int sym = std::min(cfg.max_order, 4);
  std::vector<WWord> factors{WWord{LetterWord{}}};
  for (const auto& w : all_color_words(alphabet, sym)) factors.push_back(WWord{LetterWord(w)});
  symbolic_bialgebra(out, all_w_words(alphabet, sym, 2), factors, sym, "W ");

  auto fp = verify_fixed_points(cfg.space, std::min(cfg.max_order, 4), cfg.tol, std::min(cfg.max_order + 1, 5));
  out.insert(out.end(), fp.begin(), fp.end());

  auto np = non_pros_instance();
  VariableTable names;
  out.push_back(exact_result("split is not a PROS morphism", "Sp(∇(a ⊠ (∅, b))) ≠ ∇(Sp(a) ⊠ Sp(∅, b))", np.differ(), 1,
                             to_text(np.split_of_product, names) + " vs " + to_text(np.product_of_splits, names)));
  return out;
}

std::vector<CheckResult> monotone_scalar_suite(const SuiteConfig& cfg) {
  auto scalar = cfg.space->d() == 1 ? cfg.space
                                    : std::make_shared<const OVMatrixSpace>(OVMatrixSpace::random(1, 4, 1, cfg.seed));
  const int order = std::min(cfg.max_order, 5);
  std::vector<CheckResult> out;

  auto mom = CumulantFamily::moments(scalar, order);
  auto h = block_infinitesimal(build_monotone(mom), order);
  auto seeded = seeded_infinitesimal<NCPartition>(1, order, cfg.seed * 8 + 5, true);
  auto formula = [&](const char* name, const PartitionMorphism& m) {
    auto e = exp_star(m), K = exp_prec(m);
    Deviation dev;
    std::size_t n = 0;
    for (const auto& pi : partitions_up_to(order)) {
      if (pi.empty()) continue;
      PartitionWord w{pi};
      auto rhs = (1.0 / static_cast<double>(tree_factorial(pi))) * K(w).collapse();
      dev.merge(multimap_deviation(e(w).collapse(), rhs));
      ++n;
    }
    out.push_back(numeric_result(name, "exp*(m)(π) = exp≺(m)(π) / τ(π)!", dev, cfg.tol, n));
  };
  formula("monotone formula (h)", h);
  formula("monotone formula (seeded)", seeded);

  auto hyp = generator_commutation(family_generator(build_monotone(mom)), scalar->variable_indices(), std::min(order, 4));
  out.push_back(numeric_result("monotone hypothesis", "m(1_n) ∘_1 m(1_m) = m(1_m) ∘_last m(1_n)", hyp.dev, cfg.tol, hyp.pairs));

  bool ok = true;
  std::size_t n = 0;
  std::string failure;
  for (int p = 0; p <= 6; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      try {
        count_monotone_labelings(pi);
      } catch (const Error& e) {
        if (ok) failure = e.what();
        ok = false;
      }
      ++n;
    }
  out.push_back(exact_result("monotone labelings", "#labelings = #π! / τ(π)!", ok, n, failure));
  auto lg = monotone_log_check(scalar, order, cfg.tol);
  out.push_back(lg);
  return out;
}

}  // namespace

std::vector<CheckResult> operad_checks(int max_arity) {
  std::vector<CheckResult> out;
  bool ok = true;
  std::size_t n = 0;
  for (const auto& pi : partitions_up_to(5)) {
    ok = ok && gap_insert(pi, std::vector<NCPartition>(static_cast<std::size_t>(pi.arity()))) == pi &&
         gap_insert(NCPartition(), {pi}) == pi;
    ++n;
  }
  out.push_back(exact_result("gap insertion unit", "∅ ∘ π = π = π ∘ (∅, ..., ∅)", ok, n));

  auto small = partitions_up_to(2);
  auto tiny = partitions_up_to(1);
  ok = true;
  n = 0;
  std::string failure;
  for (const auto& pi : small) {
    std::vector<std::size_t> ai(static_cast<std::size_t>(pi.arity()), 0);
    while (true) {
      std::vector<NCPartition> alphas;
      for (auto i : ai) alphas.push_back(small[i]);
      auto inner = gap_insert(pi, alphas);
      std::vector<std::size_t> bi(static_cast<std::size_t>(inner.arity()), 0);
      while (true) {
        std::vector<NCPartition> betas;
        for (auto i : bi) betas.push_back(tiny[i]);
        std::vector<NCPartition> grouped;
        std::size_t pos = 0;
        for (const auto& a : alphas) {
          std::vector<NCPartition> part(betas.begin() + static_cast<std::ptrdiff_t>(pos),
                                        betas.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(a.arity())));
          grouped.push_back(gap_insert(a, part));
          pos += static_cast<std::size_t>(a.arity());
        }
        bool same = gap_insert(inner, betas) == gap_insert(pi, grouped);
        if (!same && ok) failure = to_text(pi) + " with inner " + to_text(inner);
        ok = ok && same;
        ++n;
        std::size_t k = 0;
        for (; k < bi.size(); ++k) {
          if (++bi[k] < tiny.size()) break;
          bi[k] = 0;
        }
        if (k == bi.size()) break;
      }
      std::size_t k = 0;
      for (; k < ai.size(); ++k) {
        if (++ai[k] < small.size()) break;
        ai[k] = 0;
      }
      if (k == ai.size()) break;
    }
  }
  out.push_back(exact_result("gap insertion associativity", "(π ∘ αs) ∘ βs = π ∘ (αs ∘ βs)", ok, n, failure));

  ok = true;
  n = 0;
  failure.clear();
  for (int m = 2; m <= max_arity; ++m)
    for (int k = 2; k <= max_arity; ++k) {
      auto one = [](int arity) { return NCPartition::single_block(arity - 1); };
      bool same = partial_insert(one(m), m, one(k)) == partial_insert(one(k), 1, one(m));
      if (!same && ok) failure = "m=" + std::to_string(m) + " n=" + std::to_string(k);
      ok = ok && same;
      ++n;
    }
  out.push_back(exact_result("generator relation", "1_m ∘_m 1_n = 1_n ∘_1 1_m", ok, n, failure));
  return out;
}

std::vector<CheckResult> hopf_checks(int max_size, int max_letters) {
  std::vector<CheckResult> out;
  symbolic_bialgebra(out, all_partition_words(max_size, max_letters), all_partition_words(max_size, 1), max_size, "");
  return out;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  SuiteReport r;
  r.name = name;
  if (name == "hopf") {
    r.checks = hopf_checks(std::min(cfg.max_order, 5), 3);
    const int sym = std::min(cfg.max_order, 4);
    auto alphabet = cfg.space->variable_indices();
    std::vector<WWord> factors{WWord{LetterWord{}}};
    for (const auto& w : all_color_words(alphabet, sym)) factors.push_back(WWord{LetterWord(w)});
    symbolic_bialgebra(r.checks, all_w_words(alphabet, sym, 2), factors, sym, "W ");
  } else if (name == "shuffle") {
    r.checks = shuffle_suite(cfg);
  } else if (name == "operad") {
    r.checks = operad_checks(5);
  } else if (name == "oracle") {
    r.checks = oracle_suite(cfg);
  } else if (name == "moment-cumulant") {
    r.checks = moment_cumulant_suite(cfg);
  } else if (name == "splitting") {
    r.checks = splitting_suite(cfg);
  } else if (name == "monotone-scalar") {
    r.checks = monotone_scalar_suite(cfg);
  } else {
    throw ParseError("unknown suite '" + name + "'");
  }
  r.pass = all_pass(r.checks);
  return r;
}

}  // namespace ovc
