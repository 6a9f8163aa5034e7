#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "troplift/divisor.hpp"
#include "troplift/graph.hpp"
#include "troplift/limit_series.hpp"

namespace troplift {

/// Brill-Noether number g + (r+1)(d-r-g).
long expected_rho(long g, long r, long d);

/// Largest d' allowed by the relation condition on parallel edges, or
/// nullopt when no pair of adjacent vertices constrains it. Throws when
/// some pair is joined by more than three edges.
std::optional<long> max_dprime(const MetricGraph& mg);
bool check_condition_II(const MetricGraph& mg, long d_prime);
/// Bound contributed by one fiber of edge lengths (nullopt for a single edge).
std::optional<long> fiber_dprime(const std::vector<long>& lengths);

/// Residues mod the gcd of the fiber lengths are pairwise distinct on every fiber.
bool check_residue_condition(const AdmissibleMultidegree& w, const MetricGraph& mg);
/// Edge-reduced rational D: rescaled to be integral first.
bool check_residue_condition(const MetricDivisor& d, const MetricGraph& mg);

struct ContextFlags {
  bool strongly_bn_general = false;
  std::optional<long> d_prime;
};

struct Verdict {
  enum class Kind { Smoothable, NotSmoothable, Inconclusive } kind = Kind::Inconclusive;
  std::string rule;  // "thm4.3", "thm4.5", "thm4.8", "cor4.10" or empty
  long g = 0, r = 0, d = 0, rho = 0;
  std::optional<long> d_prime;
  std::optional<bool> weak_glueing;  // empty when undecided
  bool condition_I = false;
  bool residues_distinct = false;
  bool dimension_hypotheses = false;
  std::string note;
};

std::string to_string(Verdict::Kind k);

Verdict classify(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks,
                 const ContextFlags& ctx);

/// Vertices of a chain from the end with the smaller index, and the tree
/// edge joining each consecutive pair.
struct ChainOrder {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;  // edges[i] joins vertices[i] and vertices[i+1]
};
ChainOrder chain_order(const ContractedTree& tree);

struct LiftResult {
  std::string route;  // "construction" or "riemann-roch"
  long rank = 0;
  long genus = 0;
  long degree = 0;
  std::optional<PreLimitSeries> series;
  MetricDivisor reduced;  // the divisor actually lifted
};

/// Rank-one construction on a chain of multi-edges; divisors of degree
/// above 2g-2 are settled by Riemann-Roch without a construction.
LiftResult lift_rank_one(const MetricDivisor& d, const MetricGraph& mg, const Markings& marks);

/// The divisor D_j ~ D with D_j - j v0 - (r-j) vm effective, and f with D_j = D + div(f).
std::pair<MetricDivisor, PLFunction> compute_Dj(const MetricDivisor& d, long j, long r, std::size_t v0, std::size_t vm,
                                                const MetricGraph& mg);

/// Construction for vertex avoiding divisors of rank r on chains with at
/// most two edges per pair. The identities the construction relies on are
/// checked and reported as errors when they fail.
LiftResult lift_vertex_avoiding(const MetricDivisor& d, long r, const MetricGraph& mg, const Markings& marks);

struct DispatchPlan {
  std::string route;  // "direct", "dual", "halving", "inconclusive"
  long rank = 0;
  long genus = 0;
  std::optional<MetricDivisor> target;  // the rank <= 1 divisor to lift
  std::string note;
};

DispatchPlan lift_dispatch(const MetricDivisor& d, const MetricGraph& mg);

}  // namespace troplift
