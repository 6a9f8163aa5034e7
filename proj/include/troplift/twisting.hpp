#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "troplift/divisor.hpp"
#include "troplift/graph.hpp"

namespace troplift {

AdmissibleMultidegree twist(const AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t v);
/// Composition of the twists at every vertex other than v.
AdmissibleMultidegree negative_twist(const AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t v);
/// Twist at the pair (t, v), t an edge of the contracted tree and v one of its ends.
AdmissibleMultidegree partial_twist(const AdmissibleMultidegree& w, const MetricGraph& mg,
                                    const ContractedTree& tree, std::size_t t, std::size_t v);

/// An ordering witnessing that w is concentrated on v, if there is one.
std::optional<std::vector<std::size_t>> concentration_order(const AdmissibleMultidegree& w, const MetricGraph& mg,
                                                            std::size_t v);
inline bool is_concentrated(const AdmissibleMultidegree& w, const MetricGraph& mg, std::size_t v) {
  return concentration_order(w, mg, v).has_value();
}

/// The multidegree in the twist class of w0 whose divisor is v-reduced.
AdmissibleMultidegree reduced_multidegree(const AdmissibleMultidegree& w0, const MetricGraph& mg, std::size_t v);

struct TightTuple {
  std::vector<AdmissibleMultidegree> w;  // w[v] concentrated on v
  std::vector<long> b;                   // indexed by contracted-tree edge

  long between(const ContractedTree& tree, std::size_t u, std::size_t v) const;
};

/// (w_v^red)_v with the twist counts b between neighbours. Throws when some
/// count comes out negative, which happens for non-effective classes.
TightTuple tight_tuple(const AdmissibleMultidegree& w0, const MetricGraph& mg);

/// Signed number of twists at (t, from) carrying w_from to w_to (negative
/// counts twist at the other end); throws if w_to is not reached within `cap`.
long twists_between(const AdmissibleMultidegree& w_from, const AdmissibleMultidegree& w_to, const MetricGraph& mg,
                    const ContractedTree& tree, std::size_t t, std::size_t from, long cap = 100000);

bool is_tight(const TightTuple& tuple, const MetricGraph& mg);

/// Formal divisor on the marked points P_e of one component, keyed by edge of G.
using MarkedDivisor = std::map<std::size_t, long>;

long degree(const MarkedDivisor& d);
/// a - b with zero entries dropped.
MarkedDivisor difference(const MarkedDivisor& a, const MarkedDivisor& b);
MarkedDivisor sum(const MarkedDivisor& a, const MarkedDivisor& b);
bool is_effective(const MarkedDivisor& d);

/// D_0, ..., D_top for the pair (t, v).
std::vector<MarkedDivisor> twisting_divisors(const AdmissibleMultidegree& w_v, const MetricGraph& mg,
                                             const ContractedTree& tree, std::size_t t, std::size_t v, long top);

std::vector<long> critical_indices(const std::vector<MarkedDivisor>& seq);

/// D^v_{w,w'}: outgoing slopes at v of any f with D_{w'} = D_w + div(f).
MarkedDivisor relative_twist_divisor(const AdmissibleMultidegree& w, const AdmissibleMultidegree& w_prime,
                                     const MetricGraph& mg, std::size_t v);

}  // namespace troplift
