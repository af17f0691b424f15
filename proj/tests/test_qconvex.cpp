#include <doctest.h>

#include <cmath>
#include <limits>

#include "hyperwalk/coarse_checks.hpp"
#include "hyperwalk/qconvex.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/sampling.hpp"
#include "test_util.hpp"

using namespace hyperwalk;
using testutil::W;

namespace {

const ModelSpace kTree = ModelSpace::free_group_tree(2);
const ModelSpace kPlane = ModelSpace::half_plane(1.0);

std::vector<std::vector<Word>> generator_sets() {
  return {{W("a")}, {W("aa"), W("bab")}, {W("ab"), W("ba")}, {W("a"), W("bAB")}, {W("bb"), W("aba")}};
}

}  // namespace

TEST_CASE("folded graphs") {
  const std::vector<Word> a{W("a")};
  const SubgroupGraph ga(2, a);
  CHECK(ga.vertex_count() == 1);
  CHECK(ga.orbit_is_hull());
  CHECK(ga.contains(W("aaa")));
  CHECK_FALSE(ga.contains(W("ab")));

  // <ab, aB> folds to a graph with two vertices.
  const std::vector<Word> g2{W("ab"), W("aB")};
  const SubgroupGraph h(2, g2);
  CHECK(h.vertex_count() == 2);
  CHECK(h.edge_count() == 3);
  CHECK(h.contains(W("abbA")));
  CHECK_FALSE(h.contains(W("a")));

  for (const auto& gens : generator_sets()) {
    const SubgroupGraph g(2, gens);
    for (const Word& e : testutil::subgroup_elements(gens, 6, 10)) CHECK(g.contains(e));
  }
}

TEST_CASE("projection examples") {
  const auto axis = QuasiconvexSet::axis(kTree, W("a"));
  const auto p = project(kTree, axis, W("aab"));
  CHECK(std::get<Word>(p.point) == W("aa"));
  CHECK(p.distance == 1.0);
  const auto q = project(kTree, axis, W("AAA"));
  CHECK(std::get<Word>(q.point) == W("AAA"));
  CHECK(q.distance == 0.0);

  const auto line = QuasiconvexSet::geodesic_line(kPlane, 0.0, std::numeric_limits<double>::infinity());
  const auto r = project(kPlane, line, HPoint{1, 1});
  CHECK(r.distance == doctest::Approx(std::asinh(1.0)).epsilon(1e-12));
  CHECK(std::get<HPoint>(r.point).re == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::get<HPoint>(r.point).im == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("tree orbit projection minimizes over an enumerated ball") {
  const std::vector<Word> translates{W(""), W("b"), W("Ab"), W("bba")};
  for (const auto& gens : generator_sets()) {
    const auto elems = testutil::subgroup_elements(gens, 12, 12);
    for (const Word& t : translates) {
      const auto set = QuasiconvexSet::subgroup_orbit(kTree, gens, t);
      for (const Word& y : tree_ball(2, Word{}, 4)) {
        double brute = std::numeric_limits<double>::infinity();
        for (const Word& h : elems) brute = std::min(brute, distance(kTree, t * h, y));
        const auto p = project(kTree, set, y);
        CHECK(p.distance == brute);
        CHECK(distance(kTree, p.point, y) == brute);
        CHECK(contains(kTree, set, p.point));
        CHECK(distance_to_set(kTree, set, y) == brute);
      }
    }
  }
}

TEST_CASE("orbit to orbit distance matches enumeration") {
  const auto sets = generator_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const auto hi = testutil::subgroup_elements(sets[i], 8, 8);
      const auto kj = testutil::subgroup_elements(sets[j], 8, 8);
      const auto d = QuasiconvexSet::subgroup_orbit(kTree, sets[i]);
      for (const Word& u : tree_ball(2, Word{}, 3)) {
        const auto e = QuasiconvexSet::subgroup_orbit(kTree, sets[j], u);
        double brute = std::numeric_limits<double>::infinity();
        for (const Word& h : hi) {
          for (const Word& k : kj) brute = std::min(brute, distance(kTree, h, u * k));
        }
        CHECK_MESSAGE(set_distance(kTree, d, e) == brute, "H=" << d.describe() << " E=" << e.describe());
      }
    }
  }
}

TEST_CASE("members near a center") {
  const auto set = QuasiconvexSet::subgroup_orbit(kTree, {W("aa"), W("bab")}, W("b"));
  const auto elems = testutil::subgroup_elements({W("aa"), W("bab")}, 12, 14);
  const Word c = W("ba");
  std::size_t brute = 0;
  for (const Word& h : elems) brute += distance(kTree, W("b") * h, c) <= 5.0 ? 1 : 0;
  CHECK(members_near(kTree, set, c, 5.0).size() == brute);
}

TEST_CASE("line to line distance") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto axis = QuasiconvexSet::geodesic_line(kPlane, 0.0, inf);
  const auto far = QuasiconvexSet::geodesic_line(kPlane, 1.0, 3.0);
  // Minimize the point-to-axis distance asinh(|re|/im) along the semicircle.
  double oracle = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 200000; ++i) {
    const double th = 3.14159265358979 * i / 200000.0;
    oracle = std::min(oracle, std::asinh((2.0 + std::cos(th)) / std::sin(th)));
  }
  CHECK(set_distance(kPlane, axis, far) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(set_distance(kPlane, axis, QuasiconvexSet::geodesic_line(kPlane, -1.0, 1.0)) == 0.0);
  CHECK(set_distance(kPlane, axis, QuasiconvexSet::geodesic_line(kPlane, 0.0, 1.0)) == 0.0);
}

TEST_CASE("one quasiconvex set: worked example") {
  const auto d = QuasiconvexSet::axis(kTree, W("a"));
  const Word y = W("b^5");
  const Word z = W("b^5a^5");
  const auto r = check_one_quasiconvex(kTree, d, y, z, {1, 0, 0});
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.worst_margin == 0.0);
  CHECK(distance_to_set(kTree, d, z) == 10.0);
}

TEST_CASE("one quasiconvex set: vacuous when z lies behind D") {
  const auto d = QuasiconvexSet::axis(kTree, W("a"));
  const auto r = check_one_quasiconvex(kTree, d, W("b^5"), W("A"), {1, 0, 0});
  CHECK(r.verdict == Verdict::Vacuous);
  CHECK(r.hypothesis_met == 0);
}

TEST_CASE("one quasiconvex set: exhaustive over convex sets") {
  const auto ball = tree_ball(2, Word{}, 6);
  const std::vector<QuasiconvexSet> sets{QuasiconvexSet::axis(kTree, W("a")),
                                         QuasiconvexSet::axis(kTree, W("b"), W("ab")),
                                         QuasiconvexSet::vertex_set(kTree, {W("b"), W("ba"), W("bA")}, 0.0)};
  for (const auto& d : sets) {
    CheckReport total;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      for (std::size_t j = 0; j < ball.size(); ++j) {
        total.absorb(check_one_quasiconvex(kTree, d, ball[i], ball[j], {1, 0, 0}));
      }
    }
    total.finish();
    CHECK_MESSAGE(total.verdict == Verdict::Pass, d.describe() << " " << total.summary());
    CHECK(total.hypothesis_met > 0);
  }
}

TEST_CASE("constants depend on the quasiconvexity constant") {
  // <ab> has q = 1; the zero-constant version fails at y = a.
  const auto d = QuasiconvexSet::subgroup_orbit(kTree, {W("ab")});
  CHECK(d.q_const() == 1.0);
  const auto r = check_one_quasiconvex(kTree, d, W("a"), W("abb"), {1, 0, 0});
  CHECK(r.verdict == Verdict::Fail);
  const auto r2 = check_one_quasiconvex(kTree, d, W("a"), W("abb"), {1, 2, 2});
  CHECK(r2.verdict == Verdict::Pass);
}

TEST_CASE("two quasiconvex sets: worked example") {
  const auto d = QuasiconvexSet::axis(kTree, W("a"));
  const auto e = QuasiconvexSet::axis(kTree, W("a"), W("b^10"));
  const auto r = check_two_quasiconvex(kTree, d, e, W("b^5"), {1, 0, 0});
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.worst_margin == 0.0);
  CHECK(set_distance(kTree, d, e) == 10.0);
}

TEST_CASE("two quasiconvex sets: D = E containing y is vacuous") {
  const auto d = QuasiconvexSet::axis(kTree, W("a"));
  const auto r = check_two_quasiconvex(kTree, d, d, W("aa"), {1, 0, 0});
  CHECK(r.verdict == Verdict::Vacuous);
}

TEST_CASE("two quasiconvex sets: exhaustive over convex sets") {
  const auto ball = tree_ball(2, Word{}, 6);
  const std::vector<std::pair<QuasiconvexSet, QuasiconvexSet>> pairs{
      {QuasiconvexSet::axis(kTree, W("a")), QuasiconvexSet::axis(kTree, W("a"), W("bbb"))},
      {QuasiconvexSet::axis(kTree, W("a")), QuasiconvexSet::axis(kTree, W("b"), W("ba"))},
      {QuasiconvexSet::axis(kTree, W("b"), W("A")), QuasiconvexSet::axis(kTree, W("a"), W("BBa"))}};
  for (const auto& [d, e] : pairs) {
    CheckReport total;
    for (const Word& y : ball) total.absorb(check_two_quasiconvex(kTree, d, e, y, {1, 0, 0}));
    total.finish();
    CHECK_MESSAGE(total.verdict == Verdict::Pass, total.summary());
    CHECK(total.hypothesis_met > 0);
  }
}

TEST_CASE("two quasiconvex sets: disjoint half-plane geodesics") {
  const auto d = QuasiconvexSet::geodesic_line(kPlane, -1.0, 1.0);
  const double big = std::exp(10.0);
  const auto e = QuasiconvexSet::geodesic_line(kPlane, -big, big);
  auto gen = trial_rng(21, 0);
  CheckReport total;
  for (int i = 0; i < 1000; ++i) {
    // y strictly between the two semicircles
    const double r = std::exp(4.0 + 2.0 * uniform01(gen));
    const double theta = 0.05 + uniform01(gen) * (3.14159265358979 - 0.1);
    const HPoint y{r * std::cos(theta), r * std::sin(theta)};
    total.absorb(check_two_quasiconvex(kPlane, d, e, y, {4, 8, 4}, 3.0));
  }
  total.finish();
  CHECK_MESSAGE(total.ok(), total.summary());
  CHECK(total.hypothesis_met > 0);
}
