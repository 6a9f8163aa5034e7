#include <doctest.h>

#include "instances.hpp"
#include "oracles.hpp"
#include "troplift/smoothing.hpp"

using namespace troplift;
using namespace testsupport;

namespace {

RationalFunction rf(const char* s) { return parse_rational_function(s); }

PointDivisor pd(std::initializer_list<std::pair<long, long>> items) {
  PointDivisor d;
  for (auto [x, c] : items) d[Point::at(x)] = c;
  return d;
}

MetrizedComplexSeries bad_pair_mc(const MetricGraph& mg) {
  MetrizedComplexSeries mc;
  mc.r = 1;
  mc.gamma = MetricDivisor(mg.graph.vertex_count());
  mc.gamma.vertex[0] = 2;
  mc.divisors = {pd({{2, 2}}), {}};
  mc.spaces = {{rf("x/(x-2)"), rf("x*(x-1)/(x-2)^2")}, {rf("(x-2)/(x-1)"), rf("1")}};
  return mc;
}

// r = 0 series on two vertices joined by edges of length 2 and 2, with a
// chip at the midpoint of the first edge.
MetrizedComplexSeries residue_mc(const MetricGraph& mg) {
  AdmissibleMultidegree w0{{0, 0}, {1, 0}};
  PreLimitSeries s;
  s.r = 0;
  s.tuple = tight_tuple(w0, mg);
  s.spaces.emplace_back(PointDivisor{}, std::vector{rf("1")});
  s.spaces.emplace_back(PointDivisor{}, std::vector{rf("1")});
  return forgetful_map(s, w0, mg, Markings::defaults(mg.graph));
}

void check_pipeline(const LiftInstance& inst, const PreLimitSeries& s) {
  auto marks = Markings::defaults(inst.mg.graph);
  REQUIRE(check_condition_I(s, inst.mg, marks).ok);
  CHECK(check_weak_glueing(s, inst.mg, marks).ok);
}

}  // namespace

TEST_CASE("Brill-Noether number") {
  CHECK(expected_rho(1, 1, 2) == 1);
  CHECK(expected_rho(4, 1, 3) == 0);
  CHECK(expected_rho(0, 2, 5) == 9);
}

TEST_CASE("d' bounds from parallel edge lengths") {
  CHECK(fiber_dprime({4, 2, 3}) == 3);
  CHECK(fiber_dprime({2, 3}) == 4);
  CHECK_FALSE(fiber_dprime({5}).has_value());
  CHECK_THROWS(fiber_dprime({1, 2, 3, 4}));
  CHECK(max_dprime(three_edge_pair()) == 3);
  CHECK(max_dprime(two_edge_pair()) == 2);
  CHECK_FALSE(max_dprime(chain_graph({{3}, {2}})).has_value());
  CHECK(check_condition_II(two_edge_pair(), 2));
  CHECK_FALSE(check_condition_II(two_edge_pair(), 3));
}

TEST_CASE("d' agrees with the brute-force relation search") {
  for (long a = 1; a <= 8; ++a)
    for (long b = a; b <= 8; ++b) {
      CHECK(*fiber_dprime({a, b}) == oracle::dprime_brute_force({a, b}));
      for (long c = b; c <= 8; ++c) CHECK(*fiber_dprime({a, b, c}) == oracle::dprime_brute_force({a, b, c}));
    }
}

TEST_CASE("residue condition") {
  auto mg = make_graph({"v", "w"}, {{"a", "v", "w", 2}, {"b", "v", "w", 4}});
  CHECK(check_residue_condition(AdmissibleMultidegree{{0, 0}, {1, 2}}, mg));
  CHECK_FALSE(check_residue_condition(AdmissibleMultidegree{{0, 0}, {0, 2}}, mg));
  CHECK(check_residue_condition(AdmissibleMultidegree{{1}, {}}, make_graph({"v"}, {})));
  CHECK_FALSE(check_residue_condition(AdmissibleMultidegree{{3, 0}, {1, 1, 0}}, three_edge_pair()));
  // A chip at 1/2 on an edge of length 1 becomes residue 1 mod 2 after doubling.
  auto unit = make_graph({"v", "w"}, {{"a", "v", "w", 1}, {"b", "v", "w", 1}});
  MetricDivisor d(2);
  d.add_chip(0, Rational(1, 2), 1);
  CHECK(check_residue_condition(d, unit));
}

TEST_CASE("classification of the two-edge series") {
  auto mg = two_edge_pair();
  auto marks = Markings::defaults(mg.graph);
  for (bool general : {false, true}) {
    auto v = classify(bad_pair_mc(mg), mg, marks, {general, std::nullopt});
    CHECK(v.kind == Verdict::Kind::NotSmoothable);
    CHECK(v.rule == "thm4.5");
    CHECK(v.weak_glueing == false);
    CHECK(v.condition_I);
  }
}

TEST_CASE("classification rules on a series with distinct residues") {
  auto mg = make_graph({"v", "w"}, {{"a", "v", "w", 2}, {"b", "v", "w", 2}});
  auto marks = Markings::defaults(mg.graph);
  auto mc = residue_mc(mg);
  auto by_residues = classify(mc, mg, marks, {true, 0});
  CHECK(by_residues.kind == Verdict::Kind::Smoothable);
  CHECK(by_residues.rule == "thm4.3");
  CHECK(by_residues.residues_distinct);

  auto by_dimension = classify(mc, mg, marks, {true, std::nullopt});
  CHECK(by_dimension.kind == Verdict::Kind::Smoothable);
  CHECK(by_dimension.rule == "thm4.8");

  auto none = classify(mc, mg, marks, {false, std::nullopt});
  CHECK(none.kind == Verdict::Kind::Inconclusive);
  CHECK(none.rule.empty());
}

TEST_CASE("chain order walks from the smaller end") {
  auto mg = chain_graph({{1, 2}, {3}, {1, 1}});
  auto order = chain_order(contract(mg.graph));
  CHECK(order.vertices == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(order.edges.size() == 3);
  CHECK_THROWS(chain_order(contract(make_graph({"a", "b", "c", "d"}, {{"x", "a", "b"}, {"y", "a", "c"}, {"z", "a", "d"}}).graph)));
}

TEST_CASE("compute_Dj on a path") {
  auto mg = chain_graph({{2}, {1}});
  MetricDivisor d(3);
  d.vertex[0] = 2;
  for (long j = 0; j <= 2; ++j) {
    auto [dj, f] = compute_Dj(d, j, 2, 0, 2, mg);
    CHECK(dj.vertex[0] == j);
    CHECK(dj.vertex[2] == 2 - j);
    SubdividedGraph sg(mg);
    auto back = to_subdivided(d, sg);
    auto divf = div(f, sg);
    for (std::size_t i = 0; i < back.size(); ++i) back[i] += divf[i];
    CHECK(back == to_subdivided(dj, sg));
  }
  MetricDivisor neg(3);
  CHECK_THROWS(compute_Dj(neg, 0, 1, 0, 2, mg));
}

TEST_CASE("rank-one lifting pipeline") {
  std::mt19937 rng(51);
  int done = 0;
  for (int k = 0; k < 6; ++k) {
    auto inst = random_rank_one_instance(rng);
    REQUIRE(inst.has_value());
    auto marks = Markings::defaults(inst->mg.graph);
    auto res = lift_rank_one(inst->d, inst->mg, marks);
    REQUIRE(res.series.has_value());
    check_pipeline(*inst, *res.series);
    for (const auto& space : res.series->spaces) CHECK(space.basis()[0] == RationalFunction(Rational(1)));
    auto mc = forgetful_map(*res.series, divisor_to_multidegree(inst->d, inst->mg), inst->mg, marks);
    long g = genus(inst->mg.graph);
    auto v = classify(mc, inst->mg, marks, {true, std::min(2 * g - 2, g + 1)});
    CHECK(v.kind == Verdict::Kind::Smoothable);
    CHECK(v.rule == "thm4.8");
    ++done;
  }
  CHECK(done == 6);
}

TEST_CASE("rank-one lifting preconditions") {
  auto mg = chain_graph({{3, 5}, {4, 7}});
  auto marks = Markings::defaults(mg.graph);
  MetricDivisor zero(3);
  CHECK_THROWS_WITH(lift_rank_one(zero, mg, marks), doctest::Contains("rank"));
  auto tree_mg = make_graph({"a", "b", "c", "d"}, {{"x", "a", "b"}, {"y", "a", "c"}, {"z", "a", "d"}});
  MetricDivisor one(4);
  one.vertex[0] = 1;
  CHECK_THROWS_WITH(lift_rank_one(one, tree_mg, Markings::defaults(tree_mg.graph)), doctest::Contains("chain"));
  // Genus one: any rank-one divisor has degree 2 > 2g - 2.
  auto loop = two_edge_pair();
  MetricDivisor two(2);
  two.vertex[0] = 2;
  auto res = lift_rank_one(two, loop, Markings::defaults(loop.graph));
  CHECK(res.route == "riemann-roch");
  CHECK_FALSE(res.series.has_value());
}

TEST_CASE("vertex avoiding lifting pipeline") {
  std::mt19937 rng(77);
  std::set<long> ranks;
  for (int k = 0; k < 8; ++k) {
    auto inst = random_vertex_avoiding_instance(rng, 2);
    REQUIRE(inst.has_value());
    auto res = lift_vertex_avoiding(inst->d, inst->r, inst->mg, Markings::defaults(inst->mg.graph));
    REQUIRE(res.series.has_value());
    CHECK(res.series->r == inst->r);
    check_pipeline(*inst, *res.series);
    ranks.insert(inst->r);
  }
  CHECK(ranks.size() >= 2);
}

TEST_CASE("vertex avoiding rank zero uses one section per component") {
  auto mg = chain_graph({{2, 3}, {3, 5}});
  MetricDivisor d(3);
  d.vertex[1] = 1;
  auto res = lift_vertex_avoiding(d, 0, mg, Markings::defaults(mg.graph));
  REQUIRE(res.series.has_value());
  for (const auto& space : res.series->spaces) CHECK(space.dimension() == 1);
}

TEST_CASE("lift dispatch routes") {
  auto mg = chain_graph({{3, 5}, {4, 7}});
  MetricDivisor d(3);
  d.vertex[0] = 1;
  auto plan = lift_dispatch(d, mg);
  CHECK(plan.route == "direct");
  CHECK(plan.rank == 0);

  // Genus 2: the canonical divisor has rank 1; 2K has rank 2 and K - 2K has rank -1.
  SubdividedGraph sg(mg);
  auto k = canonical_divisor(sg);
  GraphDivisor k2(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) k2[i] = 2 * k[i];
  auto plan2 = lift_dispatch(from_subdivided(k2, sg), mg);
  CHECK(plan2.rank == 2);
  CHECK(plan2.route == "dual");
  REQUIRE(plan2.target.has_value());
  CHECK(rank(mg, *plan2.target) == -1);
}

TEST_CASE("generated two-component series and the bijection") {
  std::mt19937 rng(5);
  int made = 0;
  for (int k = 0; k < 400 && made < 30; ++k) {
    auto gen = random_two_component_series(rng);
    if (!gen) continue;
    auto& [mg, s] = *gen;
    auto marks = Markings::defaults(mg.graph);
    auto target = normalize(s);
    for (const auto& w : s.tuple.w) {
      auto mc = forgetful_map(s, w, mg, marks);
      CHECK(normalize(inverse_forgetful(mc, s.tuple, mg, marks)) == target);
      CHECK(normalize(forgetful_map(inverse_forgetful(mc, mg, marks), w, mg, marks), mg, marks) ==
            normalize(mc, mg, marks));
    }
    ++made;
  }
  CHECK(made >= 30);
}
