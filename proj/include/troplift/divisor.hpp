#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "troplift/graph.hpp"
#include "troplift/rational.hpp"

namespace troplift {

/// Vertex degrees plus per-edge residues mu(e) in [0, n(e)).
struct AdmissibleMultidegree {
  std::vector<long> w;   // indexed by vertex of G
  std::vector<long> mu;  // indexed by edge of G

  long degree() const;
  friend bool operator==(const AdmissibleMultidegree&, const AdmissibleMultidegree&) = default;
  friend auto operator<=>(const AdmissibleMultidegree&, const AdmissibleMultidegree&) = default;
};

/// Throws unless w has the right shape and every residue lies in [0, n(e)).
void check_admissible(const AdmissibleMultidegree& w, const MetricGraph& mg);

struct EdgeChip {
  std::size_t edge;
  Rational t;  // distance from the tail, strictly inside (0, n(e))
  long c;
  friend bool operator==(const EdgeChip&, const EdgeChip&) = default;
};

/// Divisor on the metric graph: integer coefficients at vertices and at
/// finitely many interior points of edges.
struct MetricDivisor {
  std::vector<long> vertex;
  std::vector<EdgeChip> edge;  // kept sorted by (edge, t), no zero coefficients

  MetricDivisor() = default;
  explicit MetricDivisor(std::size_t vertex_count) : vertex(vertex_count, 0) {}

  long degree() const;
  bool is_integral() const;
  bool is_edge_reduced() const;
  void add_chip(std::size_t e, const Rational& t, long c);
  /// Sorts, merges and drops zeros.
  void normalize();

  friend bool operator==(const MetricDivisor&, const MetricDivisor&) = default;
};

/// Throws on out-of-range points or shape mismatch.
void check_divisor(const MetricDivisor& d, const MetricGraph& mg);

MetricDivisor multidegree_to_divisor(const AdmissibleMultidegree& w, const MetricGraph& mg);
AdmissibleMultidegree divisor_to_multidegree(const MetricDivisor& d, const MetricGraph& mg);

/// Divisor on the vertices of a graph (G or G~), indexed by vertex.
using GraphDivisor = std::vector<long>;

long degree(const GraphDivisor& d);

/// Integral metric divisor as a divisor on V(G~); throws if not integral.
GraphDivisor to_subdivided(const MetricDivisor& d, const SubdividedGraph& sg);
MetricDivisor from_subdivided(const GraphDivisor& d, const SubdividedGraph& sg);

/// Piecewise linear function with integer slopes, given by its values at
/// the vertices of G~ and linear on every unit edge.
struct PLFunction {
  std::vector<long> values;

  static PLFunction zero(const SubdividedGraph& sg) { return {std::vector<long>(sg.vertex_count(), 0)}; }
  PLFunction operator-(const PLFunction& o) const;
  PLFunction operator+(const PLFunction& o) const;
  friend bool operator==(const PLFunction&, const PLFunction&) = default;
};

/// div(f)(u) = sum over unit edges at u of the outgoing slope.
GraphDivisor div(const PLFunction& f, const SubdividedGraph& sg);

/// Outgoing slope of f at the original vertex v along edge e of G.
long slope(const PLFunction& f, const SubdividedGraph& sg, std::size_t e, std::size_t v);

struct Reduction {
  GraphDivisor divisor;  // q-reduced, equal to D + div(witness)
  PLFunction witness;
};

Reduction dhar_reduce(const SubdividedGraph& sg, const GraphDivisor& d, std::size_t q);
bool is_reduced(const SubdividedGraph& sg, const GraphDivisor& d, std::size_t q);

/// K(v) = valence(v) - 2.
GraphDivisor canonical_divisor(const SubdividedGraph& sg);

/// When D1 ~ D2, returns f with D2 = D1 + div(f).
std::optional<PLFunction> linearly_equivalent(const SubdividedGraph& sg, const GraphDivisor& d1,
                                              const GraphDivisor& d2);

struct RankOptions {
  long max_degree = 24;
  bool parallel = true;
};

/// Baker-Norine rank over effective divisors supported on V(G~).
long rank(const SubdividedGraph& sg, const GraphDivisor& d, const RankOptions& opts = {});
/// Serial reference: enumerates every effective E of each degree in turn.
long rank_reference(const SubdividedGraph& sg, const GraphDivisor& d, long max_degree = 24);

long rank(const MetricGraph& mg, const MetricDivisor& d, const RankOptions& opts = {});

}  // namespace troplift
