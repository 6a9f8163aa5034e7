#pragma once

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "troplift/divisor.hpp"
#include "troplift/graph.hpp"

namespace testsupport {

using namespace troplift;

struct E {
  std::string id, tail, head;
  long n = 1;
};

inline MetricGraph make_graph(std::vector<std::string> vertices, const std::vector<E>& edges) {
  std::vector<EdgeSpec> specs;
  std::vector<std::pair<std::string, long>> lengths;
  for (const auto& e : edges) {
    specs.push_back({e.id, e.tail, e.head});
    lengths.push_back({e.id, e.n});
  }
  Multigraph g(std::move(vertices), specs);
  std::vector<long> n(g.edge_count());
  for (const auto& [id, len] : lengths) n[g.edge_index(id)] = len;
  return MetricGraph(std::move(g), ChainStructure(n));
}

// Two vertices joined by three edges of lengths 4, 2, 3.
inline MetricGraph three_edge_pair() {
  return make_graph({"v", "v1"}, {{"e1", "v", "v1", 4}, {"e2", "v", "v1", 2}, {"e3", "v", "v1", 3}});
}

// Two vertices joined by edges of lengths 2 and 1.
inline MetricGraph two_edge_pair() {
  return make_graph({"v", "v1"}, {{"e1", "v", "v1", 2}, {"e2", "v", "v1", 1}});
}

inline std::string vname(int i) { return "u" + std::to_string(i); }

// Random connected loopless multigraph: a random spanning tree plus extra
// edges, all oriented from the smaller to the larger vertex name.
inline MetricGraph random_graph(std::mt19937& rng, int vertices, int extra, long max_len) {
  std::vector<std::string> names;
  for (int i = 0; i < vertices; ++i) names.push_back(vname(i));
  std::vector<E> edges;
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    long n = std::uniform_int_distribution<long>(1, max_len)(rng);
    edges.push_back({"e" + std::to_string(edges.size() + 10), vname(a), vname(b), n});
  };
  for (int i = 1; i < vertices; ++i) add(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
  for (int k = 0; k < extra && vertices > 1; ++k) {
    int a = std::uniform_int_distribution<int>(0, vertices - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, vertices - 2)(rng);
    if (b >= a) ++b;
    add(a, b);
  }
  return make_graph(names, edges);
}

// Random multitree: a random tree on the vertices with each tree edge
// replaced by 1..max_fiber parallel edges.
inline MetricGraph random_multitree(std::mt19937& rng, int vertices, int max_fiber, long max_len) {
  std::vector<std::string> names;
  for (int i = 0; i < vertices; ++i) names.push_back(vname(i));
  std::vector<E> edges;
  for (int i = 1; i < vertices; ++i) {
    int p = std::uniform_int_distribution<int>(0, i - 1)(rng);
    int k = std::uniform_int_distribution<int>(1, max_fiber)(rng);
    for (int j = 0; j < k; ++j) {
      long n = std::uniform_int_distribution<long>(1, max_len)(rng);
      edges.push_back({"e" + std::to_string(edges.size() + 10), vname(p), vname(i), n});
    }
  }
  return make_graph(names, edges);
}

inline AdmissibleMultidegree random_multidegree(std::mt19937& rng, const MetricGraph& mg, long lo, long hi) {
  AdmissibleMultidegree w;
  for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v)
    w.w.push_back(std::uniform_int_distribution<long>(lo, hi)(rng));
  for (std::size_t e = 0; e < mg.graph.edge_count(); ++e)
    w.mu.push_back(std::uniform_int_distribution<long>(0, mg.chain[e] - 1)(rng));
  return w;
}

// Chain u0 - u1 - ... with fibers[i] the lengths of the parallel edges
// between u_i and u_{i+1}.
inline MetricGraph chain_graph(const std::vector<std::vector<long>>& fibers) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i <= fibers.size(); ++i) names.push_back(vname(static_cast<int>(i)));
  std::vector<E> edges;
  for (std::size_t i = 0; i < fibers.size(); ++i)
    for (long n : fibers[i])
      edges.push_back({"e" + std::to_string(edges.size() + 10), vname(static_cast<int>(i)),
                       vname(static_cast<int>(i + 1)), n});
  return make_graph(names, edges);
}

// Fibers of a random chain with genus in [min_genus, max_genus].
inline std::vector<std::vector<long>> random_chain_fibers(std::mt19937& rng, long min_genus, long max_genus,
                                                          int max_fiber, long max_len) {
  while (true) {
    std::vector<std::vector<long>> fibers;
    long g = 0;
    long target = std::uniform_int_distribution<long>(min_genus, max_genus)(rng);
    while (g < target && fibers.size() < 8) {
      int k = std::uniform_int_distribution<int>(1, max_fiber)(rng);
      std::vector<long> f;
      for (int j = 0; j < k; ++j) f.push_back(std::uniform_int_distribution<long>(1, max_len)(rng));
      g += k - 1;
      fibers.push_back(std::move(f));
    }
    if (g >= min_genus && g <= max_genus) return fibers;
  }
}

// Random multidegree with nonnegative vertex degrees and total degree d (when reachable).
inline AdmissibleMultidegree random_effective_multidegree(std::mt19937& rng, const MetricGraph& mg, long d) {
  AdmissibleMultidegree w;
  w.w.assign(mg.graph.vertex_count(), 0);
  w.mu.assign(mg.graph.edge_count(), 0);
  long left = d;
  for (std::size_t e = 0; e < mg.graph.edge_count() && left > 0; ++e)
    if (mg.chain[e] > 1 && std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      w.mu[e] = std::uniform_int_distribution<long>(1, mg.chain[e] - 1)(rng);
      --left;
    }
  for (; left > 0; --left)
    ++w.w[std::uniform_int_distribution<std::size_t>(0, mg.graph.vertex_count() - 1)(rng)];
  return w;
}

}  // namespace testsupport
