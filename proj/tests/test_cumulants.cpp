#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ovc/cumulants.hpp"
#include "ovc/errors.hpp"

using namespace ovc;

namespace {

std::vector<Mat> probes(int n, int d, std::uint64_t seed) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i) out.push_back(random_matrix(d, d, seed + static_cast<std::uint64_t>(i)));
  return out;
}

double rel(const Mat& a, const Mat& b) {
  double s = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / std::max(s, 1e-12);
}

struct Fixture {
  std::shared_ptr<const OVMatrixSpace> space = std::make_shared<OVMatrixSpace>(OVMatrixSpace::random(2, 2, 2, 11));
  CumulantFamily mom = CumulantFamily::moments(space, 5);
  CumulantFamily fr = build_free(mom);
  CumulantFamily bo = build_boolean(mom);
  CumulantFamily mo = build_monotone(mom);
  Mat E(std::vector<Mat> b, const std::vector<int>& vars) const {
    Mat acc = space->embed(b[0]);
    for (std::size_t i = 0; i < vars.size(); ++i) acc = acc * space->variable(vars[i]) * space->embed(b[i + 1]);
    return space->cond_expect(acc);
  }
};

}  // namespace

TEST_CASE("e_pi on small partitions") {
  Fixture f;
  auto b = probes(4, 2, 3);
  const auto& a = f.space->variable(0);
  auto full = NCPartition::single_block(3);
  CHECK(rel(e_pi(full, f.mom, b), f.E(b, {0, 0, 0})) < 1e-12);

  auto two = parse_partition("1|2");
  std::vector<Mat> b3(b.begin(), b.begin() + 3);
  Mat right = f.space->cond_expect(f.space->embed(b3[0]) * a * f.space->embed(f.E({b3[1], b3[2]}, {0})));
  Mat left = f.space->cond_expect(f.space->embed(f.E({b3[0], b3[1]}, {0})) * a * f.space->embed(b3[2]));
  CHECK(rel(e_pi(two, f.mom, b3, Collapse::Leftmost), right) < 1e-12);
  CHECK(rel(e_pi(two, f.mom, b3, Collapse::Rightmost), left) < 1e-12);
  CHECK(rel(left, right) < 1e-10);

  auto nested = parse_partition("1,3|2");
  Mat inner = f.E({b[1], b[2]}, {0});
  Mat expect = f.space->cond_expect(f.space->embed(b[0]) * a * f.space->embed(inner) * a * f.space->embed(b[3]));
  CHECK(rel(e_pi(nested, f.mom, b), expect) < 1e-12);
  CHECK_THROWS_AS(e_pi(nested, f.mom, b3), ArityMismatch);
}

TEST_CASE("collapse order and grouping do not matter") {
  Fixture f;
  for (int p = 1; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p)) {
      auto b = probes(pi.arity(), 2, static_cast<std::uint64_t>(p) * 100);
      for (const auto* fam : {&f.mom, &f.fr}) {
        Mat x = e_pi(pi, *fam, b, Collapse::Leftmost, Grouping::Absorb);
        CHECK(rel(x, e_pi(pi, *fam, b, Collapse::Rightmost, Grouping::Absorb)) < 1e-10);
        CHECK(rel(x, e_pi(pi, *fam, b, Collapse::Leftmost, Grouping::Outside)) < 1e-10);
        CHECK(rel(x, e_pi_map(pi, *fam, Collapse::Rightmost)(b)) < 1e-10);
      }
    }
}

TEST_CASE("low-order cumulants") {
  Fixture f;
  auto b2 = probes(2, 2, 5);
  CHECK(rel(f.fr.generator({1})(b2), f.E(b2, {1})) < 1e-12);
  CHECK(rel(f.bo.generator({1})(b2), f.E(b2, {1})) < 1e-12);
  CHECK(rel(f.mo.generator({1})(b2), f.E(b2, {1})) < 1e-12);

  auto b3 = probes(3, 2, 6);
  Mat k2 = f.E(b3, {0, 1}) - f.E({b3[0], f.E({b3[1], b3[2]}, {1})}, {0});
  CHECK(rel(f.fr.generator({0, 1})(b3), k2) < 1e-10);
  CHECK(multimap_eq(f.bo.generator({0, 1}), f.fr.generator({0, 1}), 1e-10));
  CHECK(multimap_eq(f.mo.generator({0, 1}), f.fr.generator({0, 1}), 1e-10));
  CHECK_FALSE(multimap_eq(f.bo.generator({0, 0, 0}), f.fr.generator({0, 0, 0}), 1e-6));
  CHECK(multilinearity_deviation(f.fr.generator({0, 1, 0})).rel < 1e-10);
  CHECK_THROWS_AS(f.fr.generator({0, 0, 0, 0, 0, 0}), MissingEntry);
  CHECK_THROWS_AS(f.fr.generator({7}), DomainError);
}

TEST_CASE("moment-cumulant relations") {
  Fixture f;
  auto words = all_color_words({0, 1}, 3);
  words.push_back({0, 0, 0, 0});
  words.push_back({0, 1, 1, 0});
  auto r = verify_mc(f.mom, f.fr, f.bo, f.mo, words, 1e-10);
  CHECK(r.pass);
  for (const auto& [order, dev] : r.per_order) CHECK_MESSAGE(dev.within(1e-10), "order " << order);

  auto scalar = std::make_shared<OVMatrixSpace>(OVMatrixSpace::random(1, 4, 1, 2));
  auto m = CumulantFamily::moments(scalar, 5);
  auto rs = verify_mc(m, build_free(m), build_boolean(m), build_monotone(m), all_color_words({0}, 5), 1e-10);
  CHECK(rs.pass);
}

TEST_CASE("a corrupted table is detected") {
  Fixture f;
  f.fr.inject_fault(2, 1.5);
  auto r = verify_mc(f.mom, f.fr, f.bo, f.mo, {{0, 0}}, 1e-9);
  CHECK_FALSE(r.pass);
}
