#include "doctest.h"
#include "support.hpp"
#include "troplift/twisting.hpp"

using namespace testsupport;

namespace {

std::vector<bool> side_of(const ContractedTree& tree, std::size_t t, std::size_t v) { return tree.side(t, v); }

// D^v along an explicit twist path: a twist at v loses a chip along every
// edge whose residue is 0 beforehand; a twist at a neighbour delivers a chip
// along e exactly when the residue of e becomes 0.
MarkedDivisor path_relative_divisor(AdmissibleMultidegree w, const MetricGraph& mg,
                                    const std::vector<std::size_t>& path, std::size_t v) {
  MarkedDivisor out;
  for (std::size_t u : path) {
    auto next = twist(w, mg, u);
    for (std::size_t e : mg.graph.incident(v)) {
      if (u == v && w.mu[e] == 0) --out[e];
      if (u == mg.graph.other_end(e, v) && next.mu[e] == 0) ++out[e];
    }
    w = next;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

TEST_CASE("twist on the three-edge pair") {
  auto mg = three_edge_pair();
  AdmissibleMultidegree w{{3, 0}, {1, 1, 0}};
  auto t = twist(w, mg, 0);
  CHECK(t == AdmissibleMultidegree{{2, 1}, {2, 0, 1}});
  CHECK(negative_twist(t, mg, 0) == w);
  CHECK(twist(twist(w, mg, 0), mg, 1) == w);
}

TEST_CASE("twisting divisors and tightness on the three-edge pair") {
  auto mg = three_edge_pair();
  auto tree = contract(mg.graph);
  AdmissibleMultidegree w{{3, 0}, {1, 1, 0}};
  auto seq = twisting_divisors(w, mg, tree, 0, 0, 4);
  std::vector<MarkedDivisor> expected{{}, {{2, 1}}, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}}, {{0, 1}, {1, 2}, {2, 2}}};
  CHECK(seq == expected);
  CHECK(critical_indices(seq) == std::vector<long>{0, 1, 3});
  CHECK(critical_indices({{}, {}, {}}).empty());

  AdmissibleMultidegree w1 = w;
  for (int k = 0; k < 3; ++k) w1 = partial_twist(w1, mg, tree, 0, 0);
  TightTuple tt{{w, w1}, {3}};
  CHECK(is_tight(tt, mg));
  auto computed = tight_tuple(w, mg);
  CHECK(computed.w[0] == w);
  CHECK(computed.w[1] == w1);
  CHECK(computed.b == std::vector<long>{3});

  auto order = concentration_order(w, mg, 0);
  REQUIRE(order);
  CHECK(*order == std::vector<std::size_t>{0, 1});
  // For two vertices, concentration on v means negative at v1 after twisting at (e, v1).
  CHECK(partial_twist(w, mg, tree, 0, 1).w[1] < 0);
}

TEST_CASE("tight tuple and relative twist divisors on the two-edge pair") {
  auto mg = two_edge_pair();
  auto tree = contract(mg.graph);
  AdmissibleMultidegree w0{{2, 0}, {0, 0}};
  CHECK(reduced_multidegree(w0, mg, 0) == w0);
  auto tt = tight_tuple(w0, mg);
  CHECK(tt.w[0] == w0);
  CHECK(tt.w[1] == AdmissibleMultidegree{{0, 1}, {1, 0}});
  CHECK(tt.b == std::vector<long>{1});
  CHECK(tt.between(tree, 0, 1) == 1);
  CHECK(is_tight(tt, mg));

  CHECK(relative_twist_divisor(w0, tt.w[0], mg, 0).empty());
  CHECK(relative_twist_divisor(w0, tt.w[1], mg, 1) == MarkedDivisor{{1, 1}});

  auto side_v = twisting_divisors(tt.w[0], mg, tree, 0, 0, 3);
  CHECK(side_v == std::vector<MarkedDivisor>{{}, {{0, 1}, {1, 1}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 3}}});
  auto side_v1 = twisting_divisors(tt.w[1], mg, tree, 0, 1, 3);
  CHECK(side_v1 == std::vector<MarkedDivisor>{{}, {{1, 1}}, {{0, 1}, {1, 2}}, {{0, 1}, {1, 3}}});
  CHECK(critical_indices({side_v.begin(), side_v.begin() + 3}) == std::vector<long>{0, 1});
  CHECK(critical_indices(side_v) == std::vector<long>{0, 1, 2});
}

TEST_CASE("non-effective classes give no tight tuple") {
  auto mg = make_graph({"a", "b"}, {{"e1", "a", "b", 3}, {"e2", "a", "b", 3}});
  AdmissibleMultidegree w0{{0, -1}, {0, 1}};
  CHECK_THROWS_AS(tight_tuple(w0, mg), Error);
}

TEST_CASE("one-vertex graph has a trivial tight tuple") {
  auto mg = make_graph({"a"}, {});
  AdmissibleMultidegree w{{3}, {}};
  auto tt = tight_tuple(w, mg);
  CHECK(tt.w.size() == 1);
  CHECK(tt.b.empty());
  CHECK(is_tight(tt, mg));
}

TEST_CASE("twisting algebra on random multidegrees") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    auto mg = random_multitree(rng, 2 + trial % 4, 3, 5);
    auto tree = contract(mg.graph);
    auto w = random_multidegree(rng, mg, -2, 3);
    const std::size_t n = mg.graph.vertex_count();
    std::size_t u = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::size_t v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    CHECK(twist(twist(w, mg, u), mg, v) == twist(twist(w, mg, v), mg, u));
    CHECK(negative_twist(twist(w, mg, u), mg, u) == w);
    CHECK(twist(negative_twist(w, mg, u), mg, u) == w);
    auto all = w;
    for (std::size_t x = 0; x < n; ++x) all = twist(all, mg, x);
    CHECK(all == w);
    CHECK(twist(w, mg, u).degree() == w.degree());

    std::size_t t = std::uniform_int_distribution<std::size_t>(0, tree.edge_count() - 1)(rng);
    auto [a, b] = std::pair{tree.edge(t).a, tree.edge(t).b};
    CHECK(partial_twist(partial_twist(w, mg, tree, t, a), mg, tree, t, b) == w);
    auto side = side_of(tree, t, a);
    auto by_side = w;
    for (std::size_t x = 0; x < n; ++x)
      if (side[x]) by_side = twist(by_side, mg, x);
    CHECK(partial_twist(w, mg, tree, t, a) == by_side);

    // Twisting preserves the linear equivalence class.
    SubdividedGraph sg(mg);
    auto d1 = to_subdivided(multidegree_to_divisor(w, mg), sg);
    auto d2 = to_subdivided(multidegree_to_divisor(twist(w, mg, u), mg), sg);
    CHECK(linearly_equivalent(sg, d1, d2));
  }
}

TEST_CASE("reduced multidegrees are concentrated and nonnegative off the vertex") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    auto mg = random_multitree(rng, 2 + trial % 4, 3, 4);
    auto w0 = random_multidegree(rng, mg, 0, 3);
    auto tt = tight_tuple(w0, mg);
    CHECK(is_tight(tt, mg));
    for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v) {
      CHECK(is_concentrated(tt.w[v], mg, v));
      for (std::size_t u = 0; u < mg.graph.vertex_count(); ++u)
        if (u != v) CHECK(tt.w[v].w[u] >= 0);
      CHECK(reduced_multidegree(tt.w[v], mg, v) == tt.w[v]);
    }
  }
}

TEST_CASE("b is the largest twist count keeping the far side effective") {
  std::mt19937 rng(107);
  for (int trial = 0; trial < 60; ++trial) {
    auto mg = random_multitree(rng, 2 + trial % 3, 3, 4);
    auto tree = contract(mg.graph);
    auto w0 = random_multidegree(rng, mg, 0, 3);
    auto tt = tight_tuple(w0, mg);
    for (std::size_t t = 0; t < tree.edge_count(); ++t) {
      auto [a, b] = std::pair{tree.edge(t).a, tree.edge(t).b};
      // Twisting w_a at (t, a) k times: effective away from b exactly for k <= b_t.
      auto effective_off = [&](const AdmissibleMultidegree& w, std::size_t skip) {
        for (std::size_t u = 0; u < w.w.size(); ++u)
          if (u != skip && w.w[u] < 0) return false;
        return true;
      };
      auto cur = tt.w[a];
      long last_good = -1;
      for (long k = 0; k <= tt.b[t] + 3; ++k) {
        if (effective_off(cur, b)) last_good = k;
        cur = partial_twist(cur, mg, tree, t, a);
      }
      CHECK(last_good == tt.b[t]);
    }
  }
}

TEST_CASE("relative twist divisors match the twist-path formula") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 80; ++trial) {
    auto mg = random_graph(rng, 2 + trial % 3, trial % 3, 4);
    auto w = random_multidegree(rng, mg, -1, 2);
    std::vector<std::size_t> path;
    int len = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int i = 0; i < len; ++i)
      path.push_back(std::uniform_int_distribution<std::size_t>(0, mg.graph.vertex_count() - 1)(rng));
    auto w2 = w;
    for (auto u : path) w2 = twist(w2, mg, u);
    for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v)
      CHECK(relative_twist_divisor(w, w2, mg, v) == path_relative_divisor(w, mg, path, v));
    CHECK(relative_twist_divisor(w, w, mg, 0).empty());
  }
}

TEST_CASE("twisting-divisor increments mirror across each edge") {
  std::mt19937 rng(113);
  int tuples = 0;
  for (int trial = 0; trial < 110; ++trial) {
    auto mg = random_multitree(rng, 2 + trial % 4, 3, 5);
    auto tree = contract(mg.graph);
    auto w0 = random_multidegree(rng, mg, 0, 4);
    auto tt = tight_tuple(w0, mg);
    ++tuples;
    for (std::size_t t = 0; t < tree.edge_count(); ++t) {
      auto [a, b] = std::pair{tree.edge(t).a, tree.edge(t).b};
      long bt = tt.b[t];
      auto da = twisting_divisors(tt.w[a], mg, tree, t, a, bt + 1);
      auto db = twisting_divisors(tt.w[b], mg, tree, t, b, bt + 1);
      for (long i = 0; i <= bt; ++i) {
        auto inc_a = difference(da[i + 1], da[i]);
        auto inc_b = difference(db[bt - i + 1], db[bt - i]);
        CHECK(degree(inc_a) == degree(inc_b));
        std::vector<std::size_t> sa, sb;
        for (auto& [e, c] : inc_a) sa.push_back(e);
        for (auto& [e, c] : inc_b) sb.push_back(e);
        CHECK(sa == sb);
      }
      std::vector<long> mirrored;
      for (long j : critical_indices(da)) mirrored.push_back(bt - j);
      std::sort(mirrored.begin(), mirrored.end());
      CHECK(mirrored == critical_indices(db));
    }
  }
  CHECK(tuples >= 100);
}
