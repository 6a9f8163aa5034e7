#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "troplift/divisor.hpp"
#include "troplift/graph.hpp"
#include "troplift/p1.hpp"
#include "troplift/twisting.hpp"

namespace troplift {

/// Marked points on the projective line attached to each vertex.
struct Markings {
  std::vector<std::map<std::size_t, Point>> at;      // per vertex: incident edge -> P_e^v
  std::vector<std::map<std::string, Point>> named;   // extra named points per vertex

  /// The k-th incident edge (in edge order) goes to the point k.
  static Markings defaults(const Multigraph& g);

  const Point& point(std::size_t v, std::size_t e) const;
  PointDivisor realize(std::size_t v, const MarkedDivisor& d) const;
  /// Marked points of v in edge order.
  std::vector<Point> marked(std::size_t v) const;
};

/// Throws unless every incident edge is marked and all points on a component are distinct.
void check_markings(const Markings& m, const Multigraph& g);

/// One linear series per component, taken with respect to a tight tuple.
struct PreLimitSeries {
  long r = 0;
  std::vector<FunctionSpace> spaces;  // per vertex: O(D) and a basis of V_v
  TightTuple tuple;
};

/// Shape checks: tight tuple, dim V_v = r + 1, deg L_v = d_v.
void validate_series(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks);

/// Multivanishing sequence of V along D_0 <= D_1 <= ...; the sequence must
/// reach a degree above deg L.
std::vector<long> multivanishing(const FunctionSpace& v, const std::vector<PointDivisor>& seq);

/// Twisting divisors for (t, v) realized on the marked points, extended
/// past index `at_least` until the degree exceeds d_v.
std::vector<MarkedDivisor> extended_twisting_divisors(const PreLimitSeries& s, const MetricGraph& mg,
                                                      const ContractedTree& tree, std::size_t t, std::size_t v,
                                                      long at_least);

struct EdgeVanishing {
  std::size_t tree_edge;
  std::size_t v, v_prime;  // v < v_prime
  long b;
  std::vector<MarkedDivisor> seq_v, seq_v_prime;
  std::vector<long> a_v, a_v_prime;
  std::vector<std::string> failures;  // empty when condition (I) holds here
};

struct ConditionIReport {
  bool ok = true;
  std::vector<EdgeVanishing> edges;
};

ConditionIReport check_condition_I(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks);

/// Largest index i with deg seq[i] == a (the critical index carrying the value).
long index_of_degree(const std::vector<MarkedDivisor>& seq, long a);

using Support = std::vector<std::size_t>;  // sorted coordinate indices
using Pattern = std::set<Support>;

/// Supports I for which U meets the torus orbit of vectors with support exactly I.
/// U is given by spanning vectors in coordinate m-space.
Pattern orbit_pattern(const std::vector<Vector>& u, std::size_t m);

struct GlueingStep {
  std::size_t tree_edge;
  long j;
  long g;
  std::vector<std::size_t> edges;  // increment points, as edges of G
  enum class Status { NoRequirement, Trivial, Matched, Failed } status;
  std::vector<Vector> image_v, image_v_prime;  // images of the two quotients
  std::vector<Pattern> patterns_v, patterns_v_prime;  // achievable by g-dim subspaces
  Pattern witness;                                    // common pattern when matched
  std::vector<Vector> witness_v, witness_v_prime;
};

struct WeakGlueingReport {
  bool ok = true;
  std::vector<GlueingStep> steps;
};

/// Requires condition (I). Throws Unsupported when a subspace search is
/// needed on an increment of more than three points.
WeakGlueingReport check_weak_glueing(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks);

/// Limit linear series on the metrized complex: Gamma-part plus, per
/// component, a divisor and a space of rational functions.
struct MetrizedComplexSeries {
  long r = 0;
  MetricDivisor gamma;
  std::vector<PointDivisor> divisors;
  std::vector<std::vector<RationalFunction>> spaces;
};

void validate_mc(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks);

MetrizedComplexSeries forgetful_map(const PreLimitSeries& s, const AdmissibleMultidegree& w, const MetricGraph& mg,
                                    const Markings& marks, const std::vector<std::size_t>& chosen = {});

/// Requires an integral edge-reduced Gamma-part.
PreLimitSeries inverse_forgetful(const MetrizedComplexSeries& mc, const TightTuple& tuple, const MetricGraph& mg,
                                 const Markings& marks);
PreLimitSeries inverse_forgetful(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks);

/// Rescales the chain structure so the Gamma-part becomes integral.
std::pair<MetricGraph, MetrizedComplexSeries> make_integral(const MetricGraph& mg, const MetrizedComplexSeries& mc);

struct McGlueingResult {
  bool ok;
  long scale;  // chain structure scale factor used
  ConditionIReport condition_I;
  WeakGlueingReport glueing;
};

McGlueingResult check_mc_weak_glueing(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks);

/// Canonical forms used to compare series up to equivalence: reduced
/// Gamma-part, then each space moved so its divisor sits at infinity and
/// written as numerators over a common denominator.
struct NormalForm {
  MetricDivisor gamma;
  std::vector<long> degrees;
  std::vector<Polynomial> denominators;
  std::vector<Matrix> spaces;  // rref of numerator coefficients
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

NormalForm normalize(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks);
NormalForm normalize(const PreLimitSeries& s);

}  // namespace troplift
