#include "ovc/morphisms.hpp"

namespace ovc {

BlockGenerator family_generator(const CumulantFamily& family) {
  return [family](const std::vector<int>& colors) { return family.generator(colors); };
}

CommutationReport generator_commutation(const BlockGenerator& gen, const std::vector<int>& alphabet, int max_total) {
  CommutationReport r;
  double worst = -1;
  auto words = all_color_words(alphabet, max_total - 1);
  for (const auto& u : words)
    for (const auto& v : words) {
      if (static_cast<int>(u.size() + v.size()) > max_total) continue;
      MultiMap gu = gen(u), gv = gen(v);
      Deviation d = multimap_deviation(multimap_partial(gu, static_cast<int>(u.size()) + 1, gv),
                                       multimap_partial(gv, 1, gu));
      if (d.rel > worst) {
        worst = d.rel;
        r.u = u;
        r.v = v;
      }
      r.dev.merge(d);
      ++r.pairs;
    }
  return r;
}

MultiMap evaluate_factorization(const Factorization& f, const BlockGenerator& gen) {
  MultiMap m = gen(colors_or_default(f.generator));
  for (std::size_t j = 0; j < f.slots.size(); ++j)
    m = multimap_partial(m, f.slots[j], evaluate_factorization(f.operands[j], gen));
  return m;
}

PartitionMorphism operadic_extension(int d, int max_order, BlockGenerator gen, const std::vector<int>& alphabet,
                                     int validate_order, double tol) {
  if (validate_order >= 2) {
    auto r = generator_commutation(gen, alphabet, validate_order);
    if (!r.dev.within(tol)) {
      throw PreconditionFailed("generators fail the relation G_u o_last G_v = G_v o_1 G_u at (n, m) = (" +
                               std::to_string(r.u.size() + 1) + ", " + std::to_string(r.v.size() + 1) +
                               "), relative deviation " + std::to_string(r.dev.rel));
    }
  }
  return horizontal<NCPartition>(d, max_order, [gen](const NCPartition& pi) {
    return evaluate_factorization(operadic_factorization(pi), gen);
  }, "operadic");
}

PartitionMorphism block_infinitesimal(const CumulantFamily& family, int max_order) {
  return infinitesimal<NCPartition>(family.space().d(), max_order, [family](const NCPartition& pi) -> std::optional<MultiMap> {
    if (pi.block_count() != 1) return std::nullopt;
    return family.generator(colors_or_default(pi));
  }, to_string(family.kind()));
}

}  // namespace ovc
