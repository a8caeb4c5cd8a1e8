#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ovc/errors.hpp"
#include "ovc/morphisms.hpp"
#include "ovc/unshuffle.hpp"

using namespace ovc;

namespace {

using PM = PartitionMorphism;
using PW = PartitionWord;

constexpr double kTol = 1e-10;

NCPartition P(const char* s) { return parse_partition(s); }
PW word(std::initializer_list<const char*> ls) {
  PW w;
  for (auto s : ls) w.letters.push_back(P(s));
  return w;
}

std::vector<PW> nonunit_words(int max_size, int max_letters) {
  std::vector<PW> out;
  for (auto& w : all_partition_words(max_size, max_letters))
    if (!w.is_unit()) out.push_back(w);
  return out;
}

void check_equal(const PM& a, const PM& b, const std::vector<PW>& words, double tol = kTol) {
  auto r = compare_morphisms(a, b, words);
  CHECK_MESSAGE(r.within(tol), "worst word " << r.worst << " rel " << r.dev.rel << " abs " << r.dev.abs);
}

std::shared_ptr<const OVMatrixSpace> space22() {
  return std::make_shared<OVMatrixSpace>(OVMatrixSpace::random(2, 2, 2, 21));
}

}  // namespace

TEST_CASE("basic morphisms") {
  auto f = seeded_infinitesimal<NCPartition>(2, 4, 1);
  auto words = all_partition_words(3, 3);
  for (const auto& w : words) {
    auto v = f(w);
    CHECK(v.outputs() == w.outputs());
    CHECK(v.inputs() == w.inputs());
    int nonunit = 0;
    for (const auto& l : w.letters) nonunit += !l.empty();
    if (nonunit != 1) CHECK(v.is_zero());
  }
  auto v = f(word({"0", "1,2", "0"}));
  REQUIRE(v.terms().size() == 1);
  CHECK(v.terms()[0].maps[0].is_identity());
  CHECK(v.terms()[0].maps[2].is_identity());
  CHECK(multimap_eq(v.terms()[0].maps[1], f(word({"1,2"})).collapse(), 1e-14));
  CHECK_THROWS_AS(f(word({"1|2|3", "1,2"})), OrderOverflow);
  auto u = unit_morphism<NCPartition>(2, 4);
  CHECK(u(word({"0", "0"})).terms().size() == 1);
  CHECK(u(word({"1"})).is_zero());
}

TEST_CASE("convolution unit and associativity") {
  auto f = seeded_infinitesimal<NCPartition>(2, 4, 2);
  auto g = seeded_infinitesimal<NCPartition>(2, 4, 3);
  auto h = seeded_infinitesimal<NCPartition>(2, 4, 4);
  auto u = unit_morphism<NCPartition>(2, 4);
  auto words = all_partition_words(4, 2);
  check_equal(convolve(u, f), f, words);
  check_equal(convolve(f, u), f, words);
  check_equal(convolve(convolve(f, g), h), convolve(f, convolve(g, h)), nonunit_words(4, 2));
}

TEST_CASE("half products") {
  auto f = seeded_infinitesimal<NCPartition>(2, 4, 5);
  auto g = seeded_infinitesimal<NCPartition>(2, 4, 6);
  auto u = unit_morphism<NCPartition>(2, 4);
  auto words = nonunit_words(4, 2);
  check_equal(half_prec(f, u), f, words);
  check_equal(half_succ(u, f), f, words);
  auto zero = 0.0 * f;
  check_equal(half_prec(u, f), zero, words);
  check_equal(half_succ(f, u), zero, words);
  check_equal(half_prec(f, g) + half_succ(f, g), convolve(f, g), words);
  CHECK_THROWS_AS(half_prec(u, u), PreconditionFailed);
}

TEST_CASE("shuffle axioms") {
  auto f = seeded_infinitesimal<NCPartition>(2, 4, 7);
  auto g = seeded_infinitesimal<NCPartition>(2, 4, 8);
  auto h = seeded_infinitesimal<NCPartition>(2, 4, 9);
  auto words = nonunit_words(4, 2);
  check_equal(half_prec(half_prec(f, g), h), half_prec(f, convolve(g, h)), words);
  check_equal(half_prec(half_succ(f, g), h), half_succ(f, half_prec(g, h)), words);
  check_equal(half_succ(f, half_succ(g, h)), half_succ(convolve(f, g), h), words);
}

TEST_CASE("half-shuffle exponentials solve their fixed-point equations") {
  auto k = seeded_infinitesimal<NCPartition>(2, 4, 10);
  auto u = unit_morphism<NCPartition>(2, 4);
  auto words = all_partition_words(4, 2);
  auto K = exp_prec(k);
  check_equal(K, u + half_prec(k, K), words);
  auto B = exp_succ(k);
  check_equal(B, u + half_succ(B, k), words);
  check_equal(convolve(exp_succ(-1.0 * k), K), u, words);
}

TEST_CASE("exp_prec and exp_succ on small partitions") {
  auto k = seeded_infinitesimal<NCPartition>(2, 5, 11, true);
  auto K = exp_prec(k);
  for (int n = 1; n <= 4; ++n) {
    auto one = PW{NCPartition::single_block(n)};
    CHECK(mapsum_deviation(K(one), k(one)).rel < kTol);
  }
  auto k3 = k(word({"1,2"})).collapse(), k2 = k(word({"1"})).collapse();
  CHECK(multimap_deviation(K(word({"1,3|2"})).collapse(), multimap_partial(k3, 2, k2)).rel < kTol);

  auto space = space22();
  auto mom = CumulantFamily::moments(space, 5);
  auto b = block_infinitesimal(build_boolean(mom), 5);
  auto B = exp_succ(b);
  CHECK(B(word({"1,3|2"})).is_zero());
  auto b1 = b(word({"1"})).collapse();
  CHECK(multimap_deviation(B(word({"1|2"})).collapse(), multimap_partial(b1, 1, b1)).rel < kTol);
  CHECK(mapsum_deviation(B(word({"1,2,3"})), b(word({"1,2,3"}))).rel < kTol);
  // boolean morphism: zero off interval partitions
  for (const auto& pi : enumerate_nc(4))
    if (!pi.is_interval()) CHECK(B(PW{pi}).is_zero());
}

TEST_CASE("convolution exponential and logarithm") {
  auto m = seeded_infinitesimal<NCPartition>(2, 4, 12);
  auto e = exp_star(m);
  for (int n = 1; n <= 4; ++n) {
    auto one = PW{NCPartition::single_block(n)};
    CHECK(mapsum_deviation(e(one), m(one)).rel < kTol);
  }
  auto words = nonunit_words(4, 2);
  check_equal(log_star(e), m, words);
  auto phi = exp_prec(m);
  check_equal(exp_star(log_star(phi)), phi, all_partition_words(3, 2));
  CHECK_THROWS_AS(exp_star(phi), DomainError);
  CHECK_THROWS_AS(log_star(m), DomainError);
}

TEST_CASE("monotone formula on the scalar backend") {
  auto m = seeded_infinitesimal<NCPartition>(1, 5, 13, true);
  auto e = exp_star(m), K = exp_prec(m);
  for (int p = 1; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      auto lhs = e(PW{pi}).collapse();
      auto rhs = (1.0 / static_cast<double>(tree_factorial(pi))) * K(PW{pi}).collapse();
      CHECK_MESSAGE(multimap_deviation(lhs, rhs).within(kTol), to_text(pi));
    }
}

TEST_CASE("operadic extension") {
  auto space = space22();
  auto mom = CumulantFamily::moments(space, 5);
  auto E = operadic_extension(2, 5, family_generator(mom), {0, 1});
  auto e1 = mom.generator({0});
  CHECK(multimap_deviation(E(word({"1|2"})).collapse(), multimap_partial(e1, 2, e1)).rel < kTol);
  for (int p = 1; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      CHECK(multimap_deviation(E(PW{pi}).collapse(), e_pi_map(pi, mom)).within(kTol));
    }
  for (const auto& pi : enumerate_nc(3)) {
    NCPartition c(pi.blocks(), std::vector<int>{0, 1, 1});
    CHECK(multimap_deviation(E(PW{c}).collapse(), e_pi_map(c, mom)).within(kTol));
  }

  auto fr = build_free(mom);
  auto K = operadic_extension(2, 5, family_generator(fr), {0, 1});
  auto Kx = exp_prec(block_infinitesimal(fr, 5));
  for (int p = 1; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p)) CHECK(mapsum_deviation(K(PW{pi}), Kx(PW{pi})).within(kTol));

  // a PROS morphism is inverted by precomposing with the antipode
  check_equal(convolve(E, compose_antipode(E)), unit_morphism<NCPartition>(2, 5), all_partition_words(4, 2));

  auto bad = seeded_infinitesimal<NCPartition>(2, 4, 14);
  BlockGenerator g = [&](const std::vector<int>& u) {
    return bad(PW{NCPartition::single_block(static_cast<int>(u.size()))}).collapse();
  };
  CHECK_THROWS_AS(operadic_extension(2, 4, g), PreconditionFailed);
  CHECK(generator_commutation(family_generator(build_monotone(mom)), {0, 1}, 4).dev.within(1e-9));
}
