#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "ovc/errors.hpp"
#include "ovc/ncpart.hpp"

using namespace ovc;

namespace {
NCPartition P(const char* s) { return parse_partition(s); }
NCPartition one(int arity) { return NCPartition::single_block(arity - 1); }
}  // namespace

TEST_CASE("crossing detection") {
  CHECK(is_noncrossing({{1, 2}, {3}}));
  CHECK_FALSE(is_noncrossing({{1, 3}, {2, 4}}));
  CHECK(is_noncrossing({{1, 4}, {2, 3}}));
  CHECK_THROWS_AS(is_noncrossing({{1, 2}, {2, 3}}), MalformedPartition);
  CHECK_THROWS_AS(is_noncrossing({{1}, {3}}), MalformedPartition);
  CHECK_THROWS_AS(NCPartition({{1, 3}, {2, 4}}), MalformedPartition);
}

TEST_CASE("canonical form and text") {
  NCPartition p({{2}, {3, 1}});
  CHECK(to_text(p) == "1,3|2");
  CHECK(P("2|1,3") == p);
  CHECK(to_text(NCPartition()) == "0");
  CHECK(P("0").empty());
  auto c = P("1,3|2;a,b,a");
  REQUIRE(c.colored());
  CHECK(*c.colors() == ColorList{0, 1, 0});
  CHECK(to_text(c) == "1,3|2;a,b,a");
  CHECK(P("0;") == NCPartition());
  CHECK_THROWS_AS(P("1,x"), ParseError);
  CHECK_THROWS_AS(P("1,2;a"), MalformedPartition);
}

TEST_CASE("enumeration counts agree with brute-force filtering") {
  for (int p = 0; p <= 7; ++p) {
    std::set<NCPartition> brute, brute_int;
    for (const auto& b : oracle::set_partitions(p)) {
      if (oracle::has_crossing(b)) continue;
      brute.insert(NCPartition(b));
      if (oracle::is_interval(b)) brute_int.insert(NCPartition(b));
    }
    auto nc = enumerate_nc(p);
    auto in = enumerate_interval(p);
    CHECK(std::set<NCPartition>(nc.begin(), nc.end()) == brute);
    CHECK(std::set<NCPartition>(in.begin(), in.end()) == brute_int);
    CHECK(std::is_sorted(nc.begin(), nc.end()));
    CHECK(std::includes(nc.begin(), nc.end(), in.begin(), in.end()));
  }
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (int p = 0; p <= 7; ++p) CHECK(enumerate_nc(p).size() == catalan[p]);
  CHECK(enumerate_interval(3).size() == 4);
  CHECK(enumerate_interval(5).size() == 16);
  CHECK(enumerate_nc(0) == std::vector<NCPartition>{NCPartition()});
  CHECK_THROWS_AS(enumerate_nc(11), ResourceLimit);
}

TEST_CASE("gap insertion examples") {
  CHECK(gap_insert(one(2), {one(2), NCPartition()}) == P("1|2"));
  CHECK(partial_insert(one(2), 2, one(2)) == partial_insert(one(2), 1, one(2)));
  CHECK(gap_insert(one(3), {NCPartition(), one(2), NCPartition()}) == P("1,3|2"));
  CHECK(partial_insert(one(3), 2, one(2)) == P("1,3|2"));
  CHECK(partial_insert(one(2), 1, one(3)) == P("1,2|3"));
  CHECK(partial_insert(P("1,3|2"), 2, NCPartition()) == P("1,3|2"));
  CHECK_THROWS_AS(partial_insert(one(2), 3, one(2)), ArityMismatch);
  CHECK_THROWS_AS(gap_insert(one(2), {one(2)}), ArityMismatch);
  CHECK_THROWS_AS(gap_insert(P("1;a"), {P("1"), NCPartition()}), ColorMismatch);
  CHECK(gap_insert(P("1,2;a,b"), {NCPartition(), P("1;c"), NCPartition()}) == P("1,3|2;a,c,b"));
}

TEST_CASE("unit laws") {
  for (int p = 0; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      CHECK(gap_insert(pi, std::vector<NCPartition>(static_cast<std::size_t>(pi.arity()))) == pi);
      CHECK(gap_insert(NCPartition(), {pi}) == pi);
    }
}

TEST_CASE("generator relation") {
  for (int m = 2; m <= 5; ++m)
    for (int n = 2; n <= 5; ++n) CHECK(partial_insert(one(m), m, one(n)) == partial_insert(one(n), 1, one(m)));
}

TEST_CASE("associativity of gap insertion") {
  std::vector<NCPartition> small;
  for (int s = 0; s <= 2; ++s)
    for (const auto& x : enumerate_nc(s)) small.push_back(x);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
  std::size_t checked = 0;
  for (int p = 0; p <= 4; ++p) {
    for (const auto& pi : enumerate_nc(p)) {
      const auto r = static_cast<std::size_t>(pi.arity());
      std::vector<std::size_t> idx(r, 0);
      while (true) {
        std::vector<NCPartition> alphas;
        for (auto i : idx) alphas.push_back(small[i]);
        auto inner = gap_insert(pi, alphas);
        for (int trial = 0; trial < 2; ++trial) {
          std::vector<NCPartition> betas;
          for (int j = 0; j < inner.arity(); ++j) betas.push_back(small[pick(rng)]);
          std::vector<NCPartition> grouped;
          std::size_t pos = 0;
          for (const auto& a : alphas) {
            std::vector<NCPartition> part(betas.begin() + static_cast<std::ptrdiff_t>(pos),
                                          betas.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(a.arity())));
            grouped.push_back(gap_insert(a, part));
            pos += static_cast<std::size_t>(a.arity());
          }
          REQUIRE(gap_insert(inner, betas) == gap_insert(pi, grouped));
          ++checked;
        }
        std::size_t k = 0;
        for (; k < r; ++k) {
          if (++idx[k] < small.size()) break;
          idx[k] = 0;
        }
        if (k == r) break;
      }
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("cuts match brute-force inversion") {
  auto c = cuts(one(3));
  REQUIRE(c.size() == 2);
  CHECK(c[0].lower == NCPartition());
  CHECK(c[0].upper == std::vector<NCPartition>{one(3)});
  CHECK(c[1].lower == one(3));
  CHECK(c[1].upper == std::vector<NCPartition>(3));

  auto nested = cuts(P("1,3|2"));
  REQUIRE(nested.size() == 3);
  CHECK(nested[1].lower == one(3));
  CHECK(nested[1].upper == std::vector<NCPartition>{NCPartition(), one(2), NCPartition()});
  CHECK(cuts(P("1|2")).size() == 4);
  auto unit = cuts(NCPartition());
  REQUIRE(unit.size() == 1);
  CHECK(unit[0].upper.size() == 1);

  for (int p = 0; p <= 6; ++p) {
    for (const auto& pi : enumerate_nc(p)) {
      std::vector<std::pair<NCPartition, std::vector<NCPartition>>> got;
      std::uint64_t last = 0;
      bool first = true;
      for (const auto& cut : cuts(pi)) {
        CHECK(gap_insert(cut.lower, cut.upper) == pi);
        if (!first) CHECK(cut.kept_mask > last);
        first = false;
        last = cut.kept_mask;
        got.emplace_back(cut.lower, cut.upper);
      }
      std::sort(got.begin(), got.end());
      if (p == 0) continue;
      CHECK(got == oracle::cut_inversions(pi));
    }
  }
}

TEST_CASE("cuts carry colors") {
  auto pi = P("1,3|2;a,b,a");
  for (const auto& cut : cuts(pi)) CHECK(gap_insert(cut.lower, cut.upper) == pi);
  CHECK(oracle::cut_inversions(pi).size() == 3);
}

TEST_CASE("nesting forest and tree factorial") {
  auto f = nesting_forest(P("1|2"));
  CHECK(f.roots == std::vector<int>{0, 1});
  auto g = nesting_forest(P("1,3|2"));
  CHECK(g.parent == std::vector<int>{-1, 0});
  auto h = nesting_forest(P("1,6|2,3|4,5"));
  CHECK(h.roots == std::vector<int>{0});
  CHECK(h.children[0] == std::vector<int>{1, 2});
  CHECK(tree_factorial(P("1")) == 1);
  CHECK(tree_factorial(P("1,3|2")) == 2);
  CHECK(tree_factorial(h) == 3);
  CHECK(tree_factorial(NestingForest{}) == 1);
  CHECK(tree_factorial(P("1,8|2,5|3,4|6,7")) == 4 * 2);
}

TEST_CASE("monotone labelings") {
  CHECK(count_monotone_labelings(P("1|2")) == 2);
  CHECK(count_monotone_labelings(P("1,3|2")) == 1);
  CHECK(count_monotone_labelings(P("1,6|2,3|4,5")) == 2);
  for (int p = 1; p <= 6; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      auto n = count_monotone_labelings(pi);
      CHECK(n == oracle::monotone_labelings_dp(pi));
      CHECK(n == oracle::factorial(pi.block_count()) / tree_factorial(pi));
    }
}

TEST_CASE("operadic factorization") {
  CHECK(to_string(operadic_factorization(one(3))) == "1_3");
  CHECK(to_string(operadic_factorization(P("1,3|2"))) == "1_3 o_2 1_2");
  CHECK(to_string(operadic_factorization(P("1|2"))) == "1_2 o_2 1_2");
  CHECK_THROWS_AS(operadic_factorization(NCPartition()), DomainError);
  for (int p = 1; p <= 6; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      auto f = operadic_factorization(pi);
      CHECK(evaluate(f) == pi);
    }
  auto colored = P("1,4|2,3|5;a,b,a,b,b");
  CHECK(evaluate(operadic_factorization(colored)) == colored);
}

TEST_CASE("standardize") {
  CHECK(standardize({{2, 7}, {4}}) == P("1,3|2"));
  CHECK(standardize({}) == NCPartition());
  CHECK(standardize({{5}}) == P("1"));
  CHECK(standardize({{2, 7}, {4}}, ColorList{9, 1, 9, 2, 9, 9, 3}) == P("1,3|2;b,c,d"));
  CHECK_THROWS_AS(standardize({{2, 3}, {3}}), MalformedPartition);
  CHECK_THROWS_AS(standardize({{0}}), MalformedPartition);
}
