#include "troplift/divisor.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include <omp.h>

namespace troplift {

long AdmissibleMultidegree::degree() const {
  long d = std::accumulate(w.begin(), w.end(), 0L);
  for (long m : mu)
    if (m != 0) ++d;
  return d;
}

void check_admissible(const AdmissibleMultidegree& w, const MetricGraph& mg) {
  if (w.w.size() != mg.graph.vertex_count() || w.mu.size() != mg.graph.edge_count())
    throw Error(Error::Kind::Malformed, "multidegree does not match the graph");
  for (std::size_t e = 0; e < w.mu.size(); ++e)
    if (w.mu[e] < 0 || w.mu[e] >= mg.chain[e])
      throw Error(Error::Kind::Malformed, "residue on edge '" + mg.graph.edge(e).id + "' outside [0, n(e))");
}

long MetricDivisor::degree() const {
  long d = std::accumulate(vertex.begin(), vertex.end(), 0L);
  for (const auto& c : edge) d += c.c;
  return d;
}

bool MetricDivisor::is_integral() const {
  return std::all_of(edge.begin(), edge.end(), [](const EdgeChip& c) { return is_integer(c.t); });
}

bool MetricDivisor::is_edge_reduced() const {
  for (std::size_t i = 0; i < edge.size(); ++i) {
    if (edge[i].c != 1) return false;
    if (i > 0 && edge[i - 1].edge == edge[i].edge) return false;
  }
  return true;
}

void MetricDivisor::add_chip(std::size_t e, const Rational& t, long c) {
  edge.push_back({e, t, c});
  normalize();
}

void MetricDivisor::normalize() {
  std::sort(edge.begin(), edge.end(), [](const EdgeChip& a, const EdgeChip& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.t < b.t;
  });
  std::vector<EdgeChip> merged;
  for (const auto& c : edge) {
    if (!merged.empty() && merged.back().edge == c.edge && merged.back().t == c.t)
      merged.back().c += c.c;
    else
      merged.push_back(c);
  }
  std::erase_if(merged, [](const EdgeChip& c) { return c.c == 0; });
  edge = std::move(merged);
}

void check_divisor(const MetricDivisor& d, const MetricGraph& mg) {
  if (d.vertex.size() != mg.graph.vertex_count())
    throw Error(Error::Kind::Malformed, "divisor does not match the graph");
  for (const auto& c : d.edge) {
    if (c.edge >= mg.graph.edge_count()) throw Error(Error::Kind::Malformed, "divisor refers to an unknown edge");
    if (c.t <= 0 || c.t >= mg.chain[c.edge])
      throw Error(Error::Kind::Malformed,
                  "point on edge '" + mg.graph.edge(c.edge).id + "' is not strictly inside the edge");
  }
}

MetricDivisor multidegree_to_divisor(const AdmissibleMultidegree& w, const MetricGraph& mg) {
  check_admissible(w, mg);
  MetricDivisor d;
  d.vertex = w.w;
  for (std::size_t e = 0; e < w.mu.size(); ++e)
    if (w.mu[e] != 0) d.edge.push_back({e, Rational(w.mu[e]), 1});
  return d;
}

AdmissibleMultidegree divisor_to_multidegree(const MetricDivisor& d, const MetricGraph& mg) {
  check_divisor(d, mg);
  if (!d.is_edge_reduced()) throw Error("not edge-reduced");
  if (!d.is_integral()) throw Error("not integral");
  AdmissibleMultidegree w{d.vertex, std::vector<long>(mg.graph.edge_count(), 0)};
  for (const auto& c : d.edge) w.mu[c.edge] = to_long(c.t);
  return w;
}

long degree(const GraphDivisor& d) { return std::accumulate(d.begin(), d.end(), 0L); }

GraphDivisor to_subdivided(const MetricDivisor& d, const SubdividedGraph& sg) {
  check_divisor(d, sg.metric());
  if (!d.is_integral()) throw Error(Error::Kind::Unsupported, "divisor is not integral; rescale the chain structure");
  GraphDivisor out(sg.vertex_count(), 0);
  std::copy(d.vertex.begin(), d.vertex.end(), out.begin());
  for (const auto& c : d.edge) out[sg.point_on_edge(c.edge, to_long(c.t))] += c.c;
  return out;
}

MetricDivisor from_subdivided(const GraphDivisor& d, const SubdividedGraph& sg) {
  MetricDivisor out(sg.original_vertex_count());
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (d[v] == 0) continue;
    if (auto loc = sg.location(v))
      out.edge.push_back({loc->first, Rational(loc->second), d[v]});
    else
      out.vertex[v] = d[v];
  }
  out.normalize();
  return out;
}

PLFunction PLFunction::operator-(const PLFunction& o) const {
  PLFunction r{values};
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= o.values[i];
  return r;
}

PLFunction PLFunction::operator+(const PLFunction& o) const {
  PLFunction r{values};
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += o.values[i];
  return r;
}

GraphDivisor div(const PLFunction& f, const SubdividedGraph& sg) {
  GraphDivisor out(sg.vertex_count(), 0);
  for (std::size_t u = 0; u < sg.vertex_count(); ++u)
    for (std::size_t nb : sg.neighbours(u)) out[u] += f.values[nb] - f.values[u];
  return out;
}

long slope(const PLFunction& f, const SubdividedGraph& sg, std::size_t e, std::size_t v) {
  return f.values[sg.step_from(e, v)] - f.values[v];
}

namespace {

// Fires the vertex set marked in `fire` k times.
void fire(const SubdividedGraph& sg, const std::vector<bool>& in, long k, GraphDivisor& d, PLFunction& x) {
  for (std::size_t u = 0; u < sg.vertex_count(); ++u) {
    if (!in[u]) continue;
    x.values[u] += k;
    for (std::size_t nb : sg.neighbours(u)) {
      if (in[nb]) continue;
      d[u] -= k;
      d[nb] += k;
    }
  }
}

// Returns the unburnt set after burning from q; `edges_in` counts, for each
// unburnt vertex, the unit edges joining it to the burnt set.
std::vector<bool> burn(const SubdividedGraph& sg, const GraphDivisor& d, std::size_t q,
                       std::vector<long>& edges_in) {
  std::vector<bool> unburnt(sg.vertex_count(), true);
  edges_in.assign(sg.vertex_count(), 0);
  std::deque<std::size_t> queue{q};
  unburnt[q] = false;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t nb : sg.neighbours(u)) {
      if (!unburnt[nb]) continue;
      if (++edges_in[nb] > d[nb]) {
        unburnt[nb] = false;
        queue.push_back(nb);
      }
    }
  }
  return unburnt;
}

std::vector<long> distances(const SubdividedGraph& sg, std::size_t q) {
  std::vector<long> dist(sg.vertex_count(), -1);
  std::deque<std::size_t> queue{q};
  dist[q] = 0;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t nb : sg.neighbours(u))
      if (dist[nb] < 0) {
        dist[nb] = dist[u] + 1;
        queue.push_back(nb);
      }
  }
  return dist;
}

}  // namespace

Reduction dhar_reduce(const SubdividedGraph& sg, const GraphDivisor& input, std::size_t q) {
  const std::size_t n = sg.vertex_count();
  if (input.size() != n) throw Error("divisor does not match the subdivided graph");
  GraphDivisor d = input;
  PLFunction x = PLFunction::zero(sg);

  // Make d effective away from q by firing balls around q, outermost first.
  auto dist = distances(sg, q);
  long radius = *std::max_element(dist.begin(), dist.end());
  for (long k = radius - 1; k >= 0; --k) {
    std::vector<bool> ball(n);
    for (std::size_t u = 0; u < n; ++u) ball[u] = dist[u] <= k;
    long times = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (dist[u] != k + 1 || d[u] >= 0) continue;
      long c = 0;
      for (std::size_t nb : sg.neighbours(u)) c += ball[nb] ? 1 : 0;
      times = std::max(times, (-d[u] + c - 1) / c);
    }
    if (times > 0) fire(sg, ball, times, d, x);
  }

  std::vector<long> edges_in;
  for (;;) {
    auto unburnt = burn(sg, d, q, edges_in);
    long times = -1;
    for (std::size_t u = 0; u < n; ++u)
      if (unburnt[u] && edges_in[u] > 0) {
        long t = d[u] / edges_in[u];
        times = times < 0 ? t : std::min(times, t);
      }
    if (times < 0) break;  // everything burnt
    fire(sg, unburnt, times, d, x);
  }
  return {std::move(d), std::move(x)};
}

bool is_reduced(const SubdividedGraph& sg, const GraphDivisor& d, std::size_t q) {
  for (std::size_t u = 0; u < d.size(); ++u)
    if (u != q && d[u] < 0) return false;
  std::vector<long> edges_in;
  auto unburnt = burn(sg, d, q, edges_in);
  return std::find(unburnt.begin(), unburnt.end(), true) == unburnt.end();
}

GraphDivisor canonical_divisor(const SubdividedGraph& sg) {
  GraphDivisor k(sg.vertex_count());
  for (std::size_t u = 0; u < k.size(); ++u) k[u] = static_cast<long>(sg.valence(u)) - 2;
  return k;
}

std::optional<PLFunction> linearly_equivalent(const SubdividedGraph& sg, const GraphDivisor& d1,
                                              const GraphDivisor& d2) {
  if (degree(d1) != degree(d2)) return std::nullopt;
  auto r1 = dhar_reduce(sg, d1, 0);
  auto r2 = dhar_reduce(sg, d2, 0);
  if (r1.divisor != r2.divisor) return std::nullopt;
  return r1.witness - r2.witness;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<long>& v) const {
    std::size_t h = v.size();
    for (long x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 0x9e3779b9);
    return h;
  }
};

using Memo = std::unordered_map<GraphDivisor, long, VectorHash>;

long rank_memo(const SubdividedGraph& sg, const GraphDivisor& d, Memo& memo) {
  GraphDivisor r = dhar_reduce(sg, d, 0).divisor;
  if (r[0] < 0) return -1;
  if (auto it = memo.find(r); it != memo.end()) return it->second;
  long best = degree(r);
  for (std::size_t v = 0; v < r.size() && best > 0; ++v) {
    --r[v];
    best = std::min(best, rank_memo(sg, r, memo) + 1);
    ++r[v];
  }
  memo.emplace(std::move(r), best);
  return best;
}

void check_rank_input(const SubdividedGraph& sg, const GraphDivisor& d, long max_degree) {
  if (d.size() != sg.vertex_count()) throw Error("divisor does not match the subdivided graph");
  if (degree(d) > max_degree)
    throw Error(Error::Kind::Unsupported, "degree " + std::to_string(degree(d)) + " exceeds the rank degree cap " +
                                              std::to_string(max_degree));
}

}  // namespace

long rank(const SubdividedGraph& sg, const GraphDivisor& d, const RankOptions& opts) {
  check_rank_input(sg, d, opts.max_degree);
  if (degree(d) < 0) return -1;
  GraphDivisor r = dhar_reduce(sg, d, 0).divisor;
  if (r[0] < 0) return -1;
  if (!opts.parallel) {
    Memo memo;
    return rank_memo(sg, r, memo);
  }
  // Parallel over the first chip removed; each thread keeps its own memo so
  // the result does not depend on the schedule.
  const long n = static_cast<long>(r.size());
  const long upper = degree(r);
  long best = upper;
#pragma omp parallel
  {
    Memo memo;
    long local = upper;
#pragma omp for schedule(dynamic)
    for (long v = 0; v < n; ++v) {
      GraphDivisor e = r;
      --e[static_cast<std::size_t>(v)];
      local = std::min(local, rank_memo(sg, e, memo) + 1);
    }
#pragma omp critical
    best = std::min(best, local);
  }
  return best;
}

long rank_reference(const SubdividedGraph& sg, const GraphDivisor& d, long max_degree) {
  check_rank_input(sg, d, max_degree);
  if (degree(d) < 0) return -1;
  const std::size_t n = sg.vertex_count();
  auto effective_class = [&](const GraphDivisor& x) { return dhar_reduce(sg, x, 0).divisor[0] >= 0; };
  for (long k = 0; k <= degree(d) + 1; ++k) {
    // Walk all multisets of size k over the vertices in lexicographic order.
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    for (;;) {
      GraphDivisor x = d;
      for (std::size_t v : pick) --x[v];
      if (!effective_class(x)) return k - 1;
      std::size_t i = pick.size();
      while (i > 0 && pick[i - 1] == n - 1) --i;
      if (i == 0) break;
      std::size_t next = pick[i - 1] + 1;
      for (std::size_t j = i - 1; j < pick.size(); ++j) pick[j] = next;
    }
  }
  return degree(d);
}

long rank(const MetricGraph& mg, const MetricDivisor& d, const RankOptions& opts) {
  SubdividedGraph sg(mg);
  return rank(sg, to_subdivided(d, sg), opts);
}

}  // namespace troplift
