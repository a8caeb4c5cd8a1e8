#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ovc/errors.hpp"
#include "ovc/ovps.hpp"

using namespace ovc;

namespace {

double maxdiff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<Mat> probes(int n, int d, std::uint64_t seed) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i) out.push_back(random_matrix(d, d, seed + static_cast<std::uint64_t>(i)));
  return out;
}

MultiMap E(const OVMatrixSpace& s, int n, int var = 0) { return s.moment_map(std::vector<int>(static_cast<std::size_t>(n), var)); }

}  // namespace

TEST_CASE("conditional expectation") {
  auto s = OVMatrixSpace::random(2, 2, 1, 3);
  CHECK(maxdiff(s.cond_expect(Mat::Identity(4, 4)), Mat::Identity(2, 2)) < 1e-14);
  Mat b = random_matrix(2, 2, 9);
  CHECK(maxdiff(s.cond_expect(s.embed(b)), b) < 1e-14);
  Mat a = random_matrix(4, 4, 10), b1 = random_matrix(2, 2, 11), b2 = random_matrix(2, 2, 12);
  CHECK(maxdiff(s.cond_expect(s.embed(b1) * a * s.embed(b2)), b1 * s.cond_expect(a) * b2) < 1e-12);
  CHECK(s.bimodule_deviation() < 1e-12);
  CHECK_THROWS_AS(s.cond_expect(Mat::Identity(3, 3)), DomainError);
  CHECK_THROWS_AS(OVMatrixSpace(2, 2, {{0, Mat::Identity(3, 3)}}), DomainError);
}

TEST_CASE("moment maps") {
  auto s = OVMatrixSpace::random(2, 2, 2, 5);
  auto e0 = s.moment_map({});
  auto args = probes(1, 2, 1);
  CHECK(maxdiff(e0(args), args[0]) < 1e-14);
  Mat one = Mat::Identity(2, 2);
  CHECK(maxdiff(s.moment_map({1})(std::vector<Mat>{one, one}), s.cond_expect(s.variable(1))) < 1e-14);
  CHECK_THROWS_AS(s.moment_map({4}), DomainError);
  for (int n = 2; n <= 4; ++n)
    for (int m = 2; m <= 4; ++m) {
      auto lhs = multimap_partial(E(s, n - 1), n, E(s, m - 1));
      auto rhs = multimap_partial(E(s, m - 1), 1, E(s, n - 1));
      CHECK(multimap_eq(lhs, rhs, 1e-10));
    }
  CHECK(multilinearity_deviation(E(s, 3)).rel < 1e-10);
}

TEST_CASE("composition") {
  auto s = OVMatrixSpace::random(2, 2, 1, 8);
  auto E2 = E(s, 1);
  auto f = E(s, 2);
  auto id = MultiMap::identity(2);
  CHECK(multimap_eq(multimap_compose(f, {id, id, id}), f));
  auto args = probes(3, 2, 20);
  auto nested = multimap_partial(E2, 2, E2);
  const Mat& a = s.variable(0);
  Mat inner = s.cond_expect(s.embed(args[1]) * a * s.embed(args[2]));
  Mat expect = s.cond_expect(s.embed(args[0]) * a * s.embed(inner));
  CHECK(maxdiff(nested(args), expect) < 1e-12);
  CHECK(multimap_eq(multimap_partial(E2, 2, E2), multimap_partial(E2, 1, E2)));
  CHECK_FALSE(multimap_eq(E(s, 2), multimap_partial(E2, 2, E2)));

  // three levels, both bracketings
  auto g = E(s, 2), h = E(s, 1), k = E(s, 3);
  auto left = multimap_partial(multimap_partial(g, 2, h), 3, k);
  auto right = multimap_partial(g, 2, multimap_partial(h, 2, k));
  CHECK(multimap_deviation(left, right).rel < 1e-10);
  CHECK_THROWS_AS(multimap_partial(E2, 3, E2), ArityMismatch);
  CHECK_THROWS_AS(multimap_compose(E2, {id}), ArityMismatch);
  CHECK_THROWS_AS(multimap_eq(E2, f), ArityMismatch);
}

TEST_CASE("tabulation") {
  auto s = OVMatrixSpace::random(2, 2, 1, 4);
  auto f = multimap_partial(multimap_partial(E(s, 2), 2, E(s, 1)), 1, E(s, 1));
  auto t = tabulate(f);
  CHECK(compare_evaluators(2, f.arity(), [&](std::span<const Mat> x) { return vectorize(f(x)); }, [&](std::span<const Mat> x) { return vectorize(t(x)); }).rel < 1e-12);
  auto args = probes(f.arity(), 2, 77);
  CHECK(maxdiff(f(args), t(args)) < 1e-12);
  auto c = multimap_compose(MultiMap::product(2), {MultiMap::identity(2), multimap_compose(E(s, 1), {MultiMap::constant(Mat::Identity(2, 2)), MultiMap::identity(2)})});
  CHECK(c.arity() == 2);
  CHECK(multimap_deviation(c, tabulate(c)).rel < 1e-12);
  auto lin = 2.0 * f - t;
  CHECK(multimap_deviation(lin, f).rel < 1e-12);
}

TEST_CASE("words of maps") {
  auto s = OVMatrixSpace::random(2, 2, 1, 6);
  auto id = MultiMap::identity(2);
  MultiMapWord x{E(s, 1), E(s, 2)};
  CHECK(vcompose_maps(x, MultiMapWord(5, id)).size() == 2);
  auto y = MultiMapWord{E(s, 1), id, id, E(s, 1), id};
  auto z = vcompose_maps(x, y);
  REQUIRE(z.size() == 2);
  CHECK(multimap_eq(z[0], multimap_compose(x[0], {y[0], y[1]})));
  CHECK(multimap_eq(z[1], multimap_compose(x[1], {y[2], y[3], y[4]})));
  CHECK(multimap_eq(vcompose_maps(MultiMapWord{x[1]}, MultiMapWord{id, x[0], id})[0], multimap_partial(x[1], 2, x[0])));
  CHECK_THROWS_AS(vcompose_maps(x, MultiMapWord(4, id)), ArityMismatch);

  auto sum = MapSum::of(x);
  sum.add(x, 1.0);
  CHECK(sum.terms().size() == 1);
  auto id2 = MapSum::identity(2, 2);
  CHECK(mapsum_deviation(vcompose(sum, MapSum::identity(2, 5)), sum).rel < 1e-12);
  CHECK(mapsum_deviation(vcompose(id2, sum), sum).rel < 1e-12);
  auto single = MapSum::of({E(s, 2)});
  single.add(MultiMapWord{E(s, 2)}, 1.0);
  auto collapsed = single.normalized();
  CHECK(collapsed.terms().size() == 1);
}
