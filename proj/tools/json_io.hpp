#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "troplift/limit_series.hpp"
#include "troplift/smoothing.hpp"

namespace troplift::io {

using nlohmann::json;

/// Everything a bundle file can carry. Only the graph is mandatory.
struct Bundle {
  MetricGraph mg;
  Markings marks;
  std::vector<std::size_t> flipped;  // edges reversed by --reorient
  json raw;                          // the original document (after reorientation fixes)
};

/// Parses the graph and markings. With reorient, flips edges to the canonical
/// direction and rewrites edge positions; otherwise a graph violating the
/// direction convention is rejected.
Bundle load_bundle(const json& doc, bool reorient, bool require_valid = true);

MetricGraph parse_graph(const json& j, bool reorient, std::vector<std::size_t>* flipped = nullptr);
json graph_json(const MetricGraph& mg);

Markings parse_markings(const json& j, const Multigraph& g);

MetricDivisor parse_divisor(const json& j, const Bundle& b);
json divisor_json(const MetricDivisor& d, const MetricGraph& mg);

AdmissibleMultidegree parse_multidegree(const json& j, const Bundle& b);
json multidegree_json(const AdmissibleMultidegree& w, const MetricGraph& mg);

TightTuple parse_tuple(const json& j, const Bundle& b);
json tuple_json(const TightTuple& t, const MetricGraph& mg);

/// Keys are point literals ("2", "1/3", "inf"), edge ids of marked points
/// on v, or named points of v.
PointDivisor parse_point_divisor(const json& j, const Bundle& b, std::size_t v);
json point_divisor_json(const PointDivisor& d);

/// Keys are edge ids (the marked point P_e).
json marked_divisor_json(const MarkedDivisor& d, const Multigraph& g);

PreLimitSeries parse_series(const json& j, const Bundle& b);
json series_json(const PreLimitSeries& s, const MetricGraph& mg);

MetrizedComplexSeries parse_mc(const json& j, const Bundle& b);
json mc_json(const MetrizedComplexSeries& mc, const MetricGraph& mg);

ContextFlags parse_context(const json& j);

json condition_I_json(const ConditionIReport& r, const MetricGraph& mg);
json glueing_json(const WeakGlueingReport& r, const MetricGraph& mg);
json verdict_json(const Verdict& v);

std::size_t vertex_arg(const std::string& id, const Multigraph& g);
/// Accepts a contracted-tree name "u~v" or the id of any edge lying over it.
std::size_t tree_edge_arg(const std::string& id, const Multigraph& g, const ContractedTree& tree);

/// Indented "key: value" rendering of a JSON document.
std::string render_table(const json& j);

}  // namespace troplift::io
