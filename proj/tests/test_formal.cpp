#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ovc/formal.hpp"
#include "ovc/unshuffle.hpp"

using namespace ovc;

namespace {
NCPartition P(const char* s) { return parse_partition(s); }
NCPartition one(int arity) { return NCPartition::single_block(arity - 1); }
const NCPartition E{};
PartitionWord W(std::initializer_list<NCPartition> ls) { return PartitionWord(ls); }
using PStack = Stack<NCPartition>;
using PStackSum = StackSum<NCPartition>;
using PWordSum = WordSum<NCPartition>;

PStackSum pair(const PartitionWord& a, const PartitionWord& b, Rational c = 1) {
  return PStackSum(PStack{a, b}, c);
}
}  // namespace

TEST_CASE("horizontal concatenation") {
  PartitionWord w = W({one(3), one(2)});
  CHECK(hconcat(PartitionWord{}, w) == w);
  CHECK(hconcat(W({one(3)}), W({one(2)})) == w);
  CHECK(w.inputs() == 5);
  CHECK(w.outputs() == 2);
}

TEST_CASE("vertical composition") {
  CHECK(vcompose(W({one(3)}), W({E, one(2), E})) == W({P("1,3|2")}));
  CHECK(vcompose(W({one(2), one(2)}), W({one(2), E, E, one(2)})) == W({P("1|2"), P("1|2")}));
  auto w = W({P("1,3|2"), E, one(2)});
  CHECK(vcompose(w, unit_word<NCPartition>(w.inputs())) == w);
  CHECK(vcompose(unit_word<NCPartition>(w.outputs()), w) == w);
  CHECK_THROWS_AS(vcompose(W({one(3)}), W({E, E})), ArityMismatch);
}

TEST_CASE("coproduct examples") {
  CHECK(coproduct(W({E})) == pair(W({E}), W({E})));
  CHECK(coproduct(PartitionWord{}) == pair(PartitionWord{}, PartitionWord{}));
  CHECK(coproduct(W({one(3)})) == pair(W({E}), W({one(3)})) + pair(W({one(3)}), W({E, E, E})));
  auto d = coproduct(W({P("1,3|2")}));
  CHECK(d.size() == 3);
  CHECK(d.coefficient(PStack{W({one(3)}), W({E, one(2), E})}) == 1);
}

TEST_CASE("half coproducts") {
  CHECK(delta_prec_aug(W({one(3)})) == pair(W({one(3)}), W({E, E, E})));
  CHECK(delta_succ_aug(W({one(3)})) == pair(W({E}), W({one(3)})));
  CHECK(delta_prec(W({one(3)})).is_zero());
  CHECK(delta_succ(W({one(3)})).is_zero());
  auto pi = W({P("1,3|2")});
  CHECK(delta_prec(pi) == pair(W({one(3)}), W({E, one(2), E})));
  CHECK(delta_succ(pi).is_zero());
  CHECK_THROWS_AS(delta_prec(W({E, E})), DomainError);
  CHECK_THROWS_AS(delta_succ(PartitionWord{}), DomainError);
  // {1}|{2}: the block of 1 sits in the upper word when only {2} is kept
  auto two = W({P("1|2")});
  CHECK(delta_succ(two) == pair(W({one(2)}), W({one(2), E})));
  CHECK(delta_prec(two) == pair(W({one(2)}), W({E, one(2)})));
}

TEST_CASE("antipode, counit, unit") {
  CHECK(antipode(W({one(3)})) == PWordSum(W({one(3)}), -1));
  CHECK(antipode(W({P("1|2")})) == PWordSum(W({P("1|2")}), 1));
  CHECK(antipode(W({P("1,3|2")})).is_zero());
  CHECK(antipode(W({E, one(2)})) == PWordSum(W({E, one(2)}), -1));
  CHECK(counit(W({E, E})) == 2);
  CHECK_FALSE(counit(W({one(3)})).has_value());
  CHECK(unit_word<NCPartition>(0) == PartitionWord{});
}

TEST_CASE("interchange") {
  PStack a{W({one(3)}), W({E, E, E})};
  PStack b{W({one(2)}), W({E, E})};
  CHECK(interchange(a, b) == PStack{W({one(3), one(2)}), unit_word<NCPartition>(5)});
  PStack u{W({E}), W({E})};
  CHECK(interchange(u, u) == PStack{W({E, E}), W({E, E})});
  CHECK_THROWS_AS(interchange(PStack{W({one(3)}), W({E})}, b), ArityMismatch);
}

TEST_CASE("text round trip") {
  auto d = coproduct(W({P("1,4|2,3|5"), E}));
  auto text = to_text(d);
  auto back = parse_sum<PStack>(text, [](std::string_view s) { return parse_stack<NCPartition>(s); });
  CHECK(back == d);
  PWordSum s(W({P("1,3|2;a,b,a")}), Rational(3, 2));
  s.add(W({}), -1);
  auto t = to_text(s);
  CHECK(t == "-1*[] + 3/2*[1,3|2;a,b,a]");
  CHECK(parse_sum<PartitionWord>(t, [](std::string_view x) { return parse_word<NCPartition>(x); }) == s);
  CHECK(to_text(PWordSum{}) == "0");
  CHECK(parse_sum<PartitionWord>("0", [](std::string_view x) { return parse_word<NCPartition>(x); }).is_zero());
  CHECK_THROWS_AS(parse_word<NCPartition>("1,2"), ParseError);
}

TEST_CASE("bialgebra axioms on small words") {
  auto words = all_partition_words(4, 2);
  CHECK(check_coassociativity(words).pass);
  CHECK(check_half_split(words).pass);
  for (const auto& c : check_unshuffle_axioms(words)) CHECK_MESSAGE(c.pass, c.name << " " << c.failure);
  for (const auto& c : check_antipode(words)) CHECK_MESSAGE(c.pass, c.name << " " << c.failure);
  CHECK(check_antipode_square(words).pass);
  CHECK(check_conilpotence(words).pass);
  CHECK(check_multiplicativity(all_partition_words(2, 2), 4).pass);
}

TEST_CASE("pairing the first unshuffle relation with the succ half fails") {
  auto c = check_unshuffle_variant(all_partition_words(3, 1));
  CHECK_FALSE(c.pass);
}

TEST_CASE("S squared projects onto interval words") {
  for (const auto& w : all_partition_words(4, 2)) {
    auto s2 = antipode(w).map_linear<PartitionWord>([](const PartitionWord& x) { return antipode(x); });
    bool all_interval = std::all_of(w.letters.begin(), w.letters.end(), [](const NCPartition& x) { return x.is_interval(); });
    CHECK(s2 == (all_interval ? PWordSum(w) : PWordSum{}));
  }
}
