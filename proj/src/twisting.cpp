#include "troplift/twisting.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

namespace troplift {

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

// The three operations of a twist, applied to a single edge e at vertex v.
void twist_edge(AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t e, std::size_t v) {
  const long n = mg.chain[e];
  const long s = mg.graph.sigma(e, v);
  if (mod(w.mu[e] + s, n) == 0) ++w.w[mg.graph.other_end(e, v)];
  if (w.mu[e] == 0) --w.w[v];
  w.mu[e] = mod(w.mu[e] + s, n);
}

AdmissibleMultidegree twist_set(AdmissibleMultidegree w, const MetricGraph& mg, const std::vector<bool>& set) {
  for (std::size_t v = 0; v < set.size(); ++v)
    if (set[v])
      for (std::size_t e : mg.graph.incident(v)) twist_edge(w, mg, e, v);
  return w;
}

}  // namespace

AdmissibleMultidegree twist(const AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t v) {
  check_admissible(w, mg);
  AdmissibleMultidegree out = w;
  for (std::size_t e : mg.graph.incident(v)) twist_edge(out, mg, e, v);
  return out;
}

AdmissibleMultidegree negative_twist(const AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t v) {
  check_admissible(w, mg);
  std::vector<bool> others(mg.graph.vertex_count(), true);
  others.at(v) = false;
  return twist_set(w, mg, others);
}

AdmissibleMultidegree partial_twist(const AdmissibleMultidegree& w, const MetricGraph& mg,
                                    const ContractedTree& tree, std::size_t t, std::size_t v) {
  if (!tree.is_multitree()) throw Error("not a multitree");
  check_admissible(w, mg);
  const auto& te = tree.edge(t);
  if (te.a != v && te.b != v) throw Error("vertex is not an end of the contracted edge");
  AdmissibleMultidegree out = w;
  for (std::size_t e : te.fiber) twist_edge(out, mg, e, v);
  return out;
}

std::optional<std::vector<std::size_t>> concentration_order(const AdmissibleMultidegree& w, const MetricGraph& mg,
                                                            std::size_t v) {
  check_admissible(w, mg);
  const std::size_t n = mg.graph.vertex_count();
  if (n > 64) throw Error(Error::Kind::Unsupported, "concentration search supports at most 64 vertices");
  auto full = [n](std::uint64_t mask) { return n == 64 ? mask == ~0ULL : mask == (1ULL << n) - 1; };

  std::unordered_set<std::uint64_t> dead;
  std::vector<std::size_t> order{v};

  // Depth-first over prefixes; the state only depends on the prefix as a set.
  auto search = [&](auto&& self, std::uint64_t mask) -> bool {
    if (full(mask)) return true;
    if (dead.count(mask)) return false;
    // Negative twists at every vertex of the prefix = twists at its complement.
    std::vector<bool> complement(n);
    for (std::size_t u = 0; u < n; ++u) complement[u] = !(mask >> u & 1);
    auto twisted = twist_set(w, mg, complement);
    for (std::size_t u = 0; u < n; ++u) {
      if ((mask >> u & 1) || twisted.w[u] >= 0) continue;
      order.push_back(u);
      if (self(self, mask | 1ULL << u)) return true;
      order.pop_back();
    }
    dead.insert(mask);
    return false;
  };
  if (search(search, 1ULL << v)) return order;
  return std::nullopt;
}

AdmissibleMultidegree reduced_multidegree(const AdmissibleMultidegree& w0, const MetricGraph& mg, std::size_t v) {
  SubdividedGraph sg(mg);
  auto d = to_subdivided(multidegree_to_divisor(w0, mg), sg);
  auto red = from_subdivided(dhar_reduce(sg, d, v).divisor, sg);
  return divisor_to_multidegree(red, mg);
}

long TightTuple::between(const ContractedTree& tree, std::size_t u, std::size_t v) const {
  auto t = tree.between(u, v);
  if (!t) throw Error("vertices are not adjacent in the contracted tree");
  return b.at(*t);
}

long twists_between(const AdmissibleMultidegree& w_from, const AdmissibleMultidegree& w_to, const MetricGraph& mg,
                    const ContractedTree& tree, std::size_t t, std::size_t from, long cap) {
  const auto& te = tree.edge(t);
  const std::size_t to = te.a == from ? te.b : te.a;
  AdmissibleMultidegree fwd = w_from, back = w_from;
  for (long k = 0; k <= cap; ++k) {
    if (fwd == w_to) return k;
    if (back == w_to) return -k;
    fwd = partial_twist(fwd, mg, tree, t, from);
    back = partial_twist(back, mg, tree, t, to);
  }
  throw Error("multidegrees are not related by twists at the contracted edge '" + tree.name(mg.graph, t) + "'");
}

TightTuple tight_tuple(const AdmissibleMultidegree& w0, const MetricGraph& mg) {
  auto tree = contract(mg.graph);
  if (!tree.is_multitree()) throw Error("not a multitree");
  TightTuple out;
  for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v) out.w.push_back(reduced_multidegree(w0, mg, v));
  for (std::size_t t = 0; t < tree.edge_count(); ++t) {
    const auto& te = tree.edge(t);
    out.b.push_back(twists_between(out.w[te.b], out.w[te.a], mg, tree, t, te.b));
    if (out.b.back() < 0)
      throw Error("reduced multidegrees are not tight across '" + tree.name(mg.graph, t) +
                  "' (negative twist count; the divisor class is not effective)");
  }
  return out;
}

bool is_tight(const TightTuple& tuple, const MetricGraph& mg) {
  auto tree = contract(mg.graph);
  if (!tree.is_multitree() || tuple.w.size() != mg.graph.vertex_count() || tuple.b.size() != tree.edge_count())
    return false;
  for (std::size_t v = 0; v < tuple.w.size(); ++v)
    if (!is_concentrated(tuple.w[v], mg, v)) return false;
  for (std::size_t t = 0; t < tree.edge_count(); ++t) {
    const auto& te = tree.edge(t);
    if (tuple.b[t] < 0) return false;
    AdmissibleMultidegree cur = tuple.w[te.b];
    for (long k = 0; k < tuple.b[t]; ++k) cur = partial_twist(cur, mg, tree, t, te.b);
    if (cur != tuple.w[te.a]) return false;
  }
  return true;
}

long degree(const MarkedDivisor& d) {
  long s = 0;
  for (const auto& [p, c] : d) s += c;
  return s;
}

MarkedDivisor difference(const MarkedDivisor& a, const MarkedDivisor& b) {
  MarkedDivisor out = a;
  for (const auto& [p, c] : b)
    if ((out[p] -= c) == 0) out.erase(p);
  return out;
}

MarkedDivisor sum(const MarkedDivisor& a, const MarkedDivisor& b) {
  MarkedDivisor out = a;
  for (const auto& [p, c] : b)
    if ((out[p] += c) == 0) out.erase(p);
  return out;
}

bool is_effective(const MarkedDivisor& d) {
  return std::all_of(d.begin(), d.end(), [](const auto& kv) { return kv.second >= 0; });
}

std::vector<MarkedDivisor> twisting_divisors(const AdmissibleMultidegree& w_v, const MetricGraph& mg,
                                             const ContractedTree& tree, std::size_t t, std::size_t v, long top) {
  check_admissible(w_v, mg);
  const auto& te = tree.edge(t);
  if (te.a != v && te.b != v) throw Error("vertex is not an end of the contracted edge");
  if (top < 0) throw Error("top index must be nonnegative");
  std::vector<MarkedDivisor> seq{MarkedDivisor{}};
  for (long i = 0; i < top; ++i) {
    MarkedDivisor next = seq.back();
    for (std::size_t e : te.fiber) {
      long n = mg.chain[e];
      if (mod(mg.graph.sigma(e, v) * w_v.mu[e], n) == mod(-i, n)) ++next[e];
    }
    seq.push_back(std::move(next));
  }
  return seq;
}

std::vector<long> critical_indices(const std::vector<MarkedDivisor>& seq) {
  std::vector<long> out;
  for (std::size_t j = 0; j + 1 < seq.size(); ++j)
    if (seq[j + 1] != seq[j]) out.push_back(static_cast<long>(j));
  return out;
}

MarkedDivisor relative_twist_divisor(const AdmissibleMultidegree& w, const AdmissibleMultidegree& w_prime,
                                     const MetricGraph& mg, std::size_t v) {
  SubdividedGraph sg(mg);
  auto d1 = to_subdivided(multidegree_to_divisor(w, mg), sg);
  auto d2 = to_subdivided(multidegree_to_divisor(w_prime, mg), sg);
  auto f = linearly_equivalent(sg, d1, d2);
  if (!f) throw Error("multidegrees are not linearly equivalent");
  MarkedDivisor out;
  for (std::size_t e : mg.graph.incident(v))
    if (long s = slope(*f, sg, e, v); s != 0) out[e] = s;
  return out;
}

}  // namespace troplift
