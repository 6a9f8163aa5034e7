#include "json_io.hpp"

#include <sstream>

namespace troplift::io {

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw Error(Error::Kind::Malformed, msg); }

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) malformed(where + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) malformed(where + ": missing \"" + key + "\"");
  return *it;
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) malformed(where + " must be a string");
  return j.get<std::string>();
}

long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) malformed(where + " must be an integer");
  return j.get<long>();
}

Rational rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      malformed(where + ": " + e.what());
    }
  }
  malformed(where + " must be an exact rational string");
}

std::size_t vertex_of(const std::string& id, const Multigraph& g) {
  auto v = g.find_vertex(id);
  if (!v) malformed("unknown vertex " + id);
  return *v;
}

std::size_t edge_of(const std::string& id, const Multigraph& g) {
  auto e = g.find_edge(id);
  if (!e) malformed("unknown edge " + id);
  return *e;
}

bool is_flipped(const Bundle& b, std::size_t e) {
  return std::find(b.flipped.begin(), b.flipped.end(), e) != b.flipped.end();
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json vectors_json(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vector_json(v));
  return out;
}

json support_json(const Support& s, const std::vector<std::size_t>& edges, const Multigraph& g) {
  json out = json::array();
  for (std::size_t i : s) out.push_back(g.edge(edges[i]).id);
  return out;
}

json pattern_json(const Pattern& p, const std::vector<std::size_t>& edges, const Multigraph& g) {
  json out = json::array();
  for (const auto& s : p) out.push_back(support_json(s, edges, g));
  return out;
}

std::string status_name(GlueingStep::Status s) {
  switch (s) {
    case GlueingStep::Status::NoRequirement: return "no-requirement";
    case GlueingStep::Status::Trivial: return "trivial";
    case GlueingStep::Status::Matched: return "matched";
    case GlueingStep::Status::Failed: return "failed";
  }
  return "failed";
}

std::vector<RationalFunction> parse_basis(const json& j, const std::string& where) {
  if (!j.is_array()) malformed(where + " must be an array of rational functions");
  std::vector<RationalFunction> out;
  for (const auto& f : j) {
    try {
      out.push_back(parse_rational_function(str(f, where)));
    } catch (const Error& e) {
      malformed(where + ": " + e.what());
    }
  }
  return out;
}

json basis_json(const std::vector<RationalFunction>& basis) {
  json out = json::array();
  for (const auto& f : basis) out.push_back(f.to_string());
  return out;
}

void render(std::ostringstream& os, const json& j, int depth) {
  std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  auto flat = [](const json& x) {
    return x.is_primitive() ||
           (x.is_array() && std::all_of(x.begin(), x.end(), [](const json& y) { return y.is_primitive(); }));
  };
  auto inline_form = [&](const json& x) {
    if (x.is_primitive()) return scalar(x);
    std::string s = "[";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + scalar(x[i]);
    return s + "]";
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (flat(v)) {
        os << pad << k << ": " << inline_form(v) << "\n";
      } else {
        os << pad << k << ":\n";
        render(os, v, depth + 1);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (flat(j[i])) {
        os << pad << "- " << inline_form(j[i]) << "\n";
      } else {
        os << pad << "- [" << i << "]\n";
        render(os, j[i], depth + 1);
      }
    }
  } else {
    os << pad << scalar(j) << "\n";
  }
}

}  // namespace

MetricGraph parse_graph(const json& j, bool reorient_edges, std::vector<std::size_t>* flipped) {
  std::vector<std::string> vertices;
  const auto& vs = need(j, "vertices", "graph");
  if (!vs.is_array()) malformed("graph.vertices must be an array");
  for (const auto& v : vs) vertices.push_back(str(v, "vertex id"));
  std::vector<EdgeSpec> specs;
  std::map<std::string, long> lengths;
  const auto& es = need(j, "edges", "graph");
  if (!es.is_array()) malformed("graph.edges must be an array");
  for (const auto& e : es) {
    std::string id = str(need(e, "id", "edge"), "edge id");
    specs.push_back({id, str(need(e, "tail", "edge " + id), "tail"), str(need(e, "head", "edge " + id), "head")});
    long n = e.contains("n") ? integer(e["n"], "edge " + id + " n") : 1;
    if (n < 1) malformed("edge " + id + " must have positive length");
    lengths[id] = n;
  }
  Multigraph g(std::move(vertices), std::move(specs));
  if (reorient_edges) {
    auto [h, f] = reorient(g);
    g = std::move(h);
    if (flipped) *flipped = std::move(f);
  }
  std::vector<long> n;
  for (const auto& e : g.edges()) n.push_back(lengths.at(e.id));
  return MetricGraph(std::move(g), ChainStructure(std::move(n)));
}

json graph_json(const MetricGraph& mg) {
  json out{{"vertices", mg.graph.vertex_ids()}, {"edges", json::array()}};
  for (std::size_t e = 0; e < mg.graph.edge_count(); ++e) {
    const auto& ed = mg.graph.edge(e);
    out["edges"].push_back({{"id", ed.id},
                            {"tail", mg.graph.vertex_id(ed.tail)},
                            {"head", mg.graph.vertex_id(ed.head)},
                            {"n", mg.chain[e]}});
  }
  return out;
}

Markings parse_markings(const json& j, const Multigraph& g) {
  Markings m = Markings::defaults(g);
  if (!j.is_object()) malformed("markings must be an object");
  for (const auto& [vid, points] : j.items()) {
    std::size_t v = vertex_of(vid, g);
    if (!points.is_object()) malformed("markings." + vid + " must be an object");
    for (const auto& [key, p] : points.items()) {
      Point pt;
      try {
        pt = parse_point(str(p, "marked point"));
      } catch (const Error& e) {
        malformed("markings." + vid + "." + key + ": " + e.what());
      }
      auto e = g.find_edge(key);
      if (e && (g.edge(*e).tail == v || g.edge(*e).head == v))
        m.at[v][*e] = pt;
      else
        m.named[v][key] = pt;
    }
  }
  check_markings(m, g);
  return m;
}

Bundle load_bundle(const json& doc, bool reorient_edges, bool require_valid) {
  if (!doc.is_object()) malformed("bundle must be a JSON object");
  Bundle b;
  b.raw = doc;
  const json& gj = doc.contains("graph") ? doc["graph"] : doc;
  b.mg = parse_graph(gj, reorient_edges, &b.flipped);
  if (require_valid) {
    auto report = validate(b.mg.graph);
    if (!report.ok()) {
      std::string msg = "invalid graph:";
      for (const auto& v : report.violations) msg += " " + v + ";";
      malformed(msg);
    }
  }
  b.marks = doc.contains("markings") ? parse_markings(doc["markings"], b.mg.graph) : Markings::defaults(b.mg.graph);
  return b;
}

MetricDivisor parse_divisor(const json& j, const Bundle& b) {
  const auto& g = b.mg.graph;
  if (!j.is_object()) malformed("divisor must be an object");
  MetricDivisor d(g.vertex_count());
  if (j.contains("vertex")) {
    if (!j["vertex"].is_object()) malformed("divisor.vertex must be an object");
    for (const auto& [vid, c] : j["vertex"].items()) d.vertex[vertex_of(vid, g)] += integer(c, "divisor.vertex." + vid);
  }
  if (j.contains("edge")) {
    if (!j["edge"].is_array()) malformed("divisor.edge must be an array");
    for (const auto& chip : j["edge"]) {
      std::size_t e = edge_of(str(need(chip, "edge", "edge chip"), "edge chip id"), g);
      Rational t = rational(need(chip, "t", "edge chip"), "edge chip t");
      if (is_flipped(b, e)) t = Rational(b.mg.chain[e]) - t;
      long c = chip.contains("c") ? integer(chip["c"], "edge chip c") : 1;
      if (t <= 0 || t >= b.mg.chain[e]) malformed("edge chip on " + g.edge(e).id + " must lie strictly inside the edge");
      d.add_chip(e, t, c);
    }
  }
  d.normalize();
  check_divisor(d, b.mg);
  return d;
}

json divisor_json(const MetricDivisor& d, const MetricGraph& mg) {
  json out{{"vertex", json::object()}, {"edge", json::array()}};
  for (std::size_t v = 0; v < d.vertex.size(); ++v)
    if (d.vertex[v] != 0) out["vertex"][mg.graph.vertex_id(v)] = d.vertex[v];
  for (const auto& c : d.edge) out["edge"].push_back({{"edge", mg.graph.edge(c.edge).id}, {"t", to_string(c.t)}, {"c", c.c}});
  return out;
}

AdmissibleMultidegree parse_multidegree(const json& j, const Bundle& b) {
  const auto& g = b.mg.graph;
  if (!j.is_object()) malformed("multidegree must be an object");
  AdmissibleMultidegree w{std::vector<long>(g.vertex_count(), 0), std::vector<long>(g.edge_count(), 0)};
  if (j.contains("w"))
    for (const auto& [vid, c] : j["w"].items()) w.w[vertex_of(vid, g)] = integer(c, "w." + vid);
  if (j.contains("mu"))
    for (const auto& [eid, c] : j["mu"].items()) {
      std::size_t e = edge_of(eid, g);
      long n = b.mg.chain[e];
      long mu = integer(c, "mu." + eid);
      w.mu[e] = is_flipped(b, e) ? (n - mu % n) % n : mu;
    }
  check_admissible(w, b.mg);
  return w;
}

json multidegree_json(const AdmissibleMultidegree& w, const MetricGraph& mg) {
  json out{{"w", json::object()}, {"mu", json::object()}};
  for (std::size_t v = 0; v < w.w.size(); ++v) out["w"][mg.graph.vertex_id(v)] = w.w[v];
  for (std::size_t e = 0; e < w.mu.size(); ++e) out["mu"][mg.graph.edge(e).id] = w.mu[e];
  return out;
}

TightTuple parse_tuple(const json& j, const Bundle& b) {
  if (j.contains("w0")) return tight_tuple(parse_multidegree(j["w0"], b), b.mg);
  const auto& g = b.mg.graph;
  const auto& ws = need(j, "w", "tuple");
  TightTuple t;
  t.w.resize(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& [vid, w] : ws.items()) {
    std::size_t v = vertex_of(vid, g);
    t.w[v] = parse_multidegree(w, b);
    seen[v] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) malformed("tuple has no multidegree for " + g.vertex_id(v));
  auto tree = contract(g);
  t.b.resize(tree.edge_count());
  for (std::size_t k = 0; k < tree.edge_count(); ++k) {
    const auto& te = tree.edge(k);
    std::string name = tree.name(g, k);
    if (j.contains("b") && j["b"].contains(name))
      t.b[k] = integer(j["b"][name], "tuple.b." + name);
    else
      t.b[k] = twists_between(t.w[te.a], t.w[te.b], b.mg, tree, k, te.a);
  }
  return t;
}

json tuple_json(const TightTuple& t, const MetricGraph& mg) {
  json out{{"w", json::object()}, {"b", json::object()}};
  for (std::size_t v = 0; v < t.w.size(); ++v) out["w"][mg.graph.vertex_id(v)] = multidegree_json(t.w[v], mg);
  auto tree = contract(mg.graph);
  for (std::size_t k = 0; k < t.b.size(); ++k) out["b"][tree.name(mg.graph, k)] = t.b[k];
  return out;
}

PointDivisor parse_point_divisor(const json& j, const Bundle& b, std::size_t v) {
  const auto& g = b.mg.graph;
  if (!j.is_object()) malformed("point divisor must be an object");
  PointDivisor d;
  for (const auto& [key, c] : j.items()) {
    Point p;
    auto e = g.find_edge(key);
    const auto& names = b.marks.named.at(v);
    if (e && b.marks.at.at(v).count(*e)) {
      p = b.marks.point(v, *e);
    } else if (auto named = names.find(key); named != names.end()) {
      p = named->second;
    } else {
      try {
        p = parse_point(key);
      } catch (const Error&) {
        malformed("unknown point " + key + " on " + g.vertex_id(v));
      }
    }
    d[p] += integer(c, "multiplicity of " + key);
  }
  std::erase_if(d, [](const auto& kv) { return kv.second == 0; });
  return d;
}

json point_divisor_json(const PointDivisor& d) {
  json out = json::object();
  for (const auto& [p, c] : d) out[to_string(p)] = c;
  return out;
}

json marked_divisor_json(const MarkedDivisor& d, const Multigraph& g) {
  json out = json::object();
  for (const auto& [e, c] : d)
    if (c != 0) out[g.edge(e).id] = c;
  return out;
}

PreLimitSeries parse_series(const json& j, const Bundle& b) {
  const auto& g = b.mg.graph;
  PreLimitSeries s;
  if (j.contains("tuple"))
    s.tuple = parse_tuple(j["tuple"], b);
  else if (j.contains("w0"))
    s.tuple = tight_tuple(parse_multidegree(j["w0"], b), b.mg);
  else
    malformed("series needs a \"tuple\" or \"w0\"");
  const auto& comps = need(j, "components", "series");
  s.spaces.resize(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& [vid, c] : comps.items()) {
    std::size_t v = vertex_of(vid, g);
    PointDivisor d = c.contains("twist_divisor") ? parse_point_divisor(c["twist_divisor"], b, v) : PointDivisor{};
    s.spaces[v] = FunctionSpace(d, parse_basis(need(c, "basis", "component " + vid), "basis of " + vid));
    seen[v] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) malformed("series has no component for " + g.vertex_id(v));
  s.r = j.contains("r") ? integer(j["r"], "series.r") : static_cast<long>(s.spaces[0].dimension()) - 1;
  validate_series(s, b.mg, b.marks);
  return s;
}

json series_json(const PreLimitSeries& s, const MetricGraph& mg) {
  json out{{"r", s.r}, {"tuple", tuple_json(s.tuple, mg)}, {"components", json::object()}};
  for (std::size_t v = 0; v < s.spaces.size(); ++v)
    out["components"][mg.graph.vertex_id(v)] = {{"twist_divisor", point_divisor_json(s.spaces[v].twist())},
                                                {"basis", basis_json(s.spaces[v].basis())}};
  return out;
}

MetrizedComplexSeries parse_mc(const json& j, const Bundle& b) {
  const auto& g = b.mg.graph;
  MetrizedComplexSeries mc;
  mc.gamma = parse_divisor(need(j, "gamma", "mc"), b);
  const auto& comps = need(j, "components", "mc");
  mc.divisors.resize(g.vertex_count());
  mc.spaces.resize(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& [vid, c] : comps.items()) {
    std::size_t v = vertex_of(vid, g);
    mc.divisors[v] = c.contains("divisor") ? parse_point_divisor(c["divisor"], b, v) : PointDivisor{};
    mc.spaces[v] = parse_basis(need(c, "basis", "component " + vid), "basis of " + vid);
    seen[v] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) malformed("mc has no component for " + g.vertex_id(v));
  mc.r = j.contains("r") ? integer(j["r"], "mc.r") : static_cast<long>(mc.spaces[0].size()) - 1;
  validate_mc(mc, b.mg, b.marks);
  return mc;
}

json mc_json(const MetrizedComplexSeries& mc, const MetricGraph& mg) {
  json out{{"r", mc.r}, {"gamma", divisor_json(mc.gamma, mg)}, {"components", json::object()}};
  for (std::size_t v = 0; v < mc.spaces.size(); ++v)
    out["components"][mg.graph.vertex_id(v)] = {{"divisor", point_divisor_json(mc.divisors[v])},
                                                {"basis", basis_json(mc.spaces[v])}};
  return out;
}

ContextFlags parse_context(const json& j) {
  ContextFlags ctx;
  if (j.is_null()) return ctx;
  if (!j.is_object()) malformed("context must be an object");
  if (j.contains("strongly_bn_general")) {
    if (!j["strongly_bn_general"].is_boolean()) malformed("context.strongly_bn_general must be a boolean");
    ctx.strongly_bn_general = j["strongly_bn_general"].get<bool>();
  }
  if (j.contains("d_prime") && !j["d_prime"].is_null()) ctx.d_prime = integer(j["d_prime"], "context.d_prime");
  return ctx;
}

json condition_I_json(const ConditionIReport& r, const MetricGraph& mg) {
  const auto& g = mg.graph;
  auto tree = contract(g);
  json out{{"ok", r.ok}, {"edges", json::array()}};
  for (const auto& ev : r.edges) {
    json sv = json::array(), svp = json::array();
    for (const auto& d : ev.seq_v) sv.push_back(marked_divisor_json(d, g));
    for (const auto& d : ev.seq_v_prime) svp.push_back(marked_divisor_json(d, g));
    out["edges"].push_back({{"edge", tree.name(g, ev.tree_edge)},
                            {"v", g.vertex_id(ev.v)},
                            {"v_prime", g.vertex_id(ev.v_prime)},
                            {"b", ev.b},
                            {"twisting_v", sv},
                            {"twisting_v_prime", svp},
                            {"vanishing_v", ev.a_v},
                            {"vanishing_v_prime", ev.a_v_prime},
                            {"failures", ev.failures}});
  }
  return out;
}

json glueing_json(const WeakGlueingReport& r, const MetricGraph& mg) {
  const auto& g = mg.graph;
  auto tree = contract(g);
  json out{{"ok", r.ok}, {"steps", json::array()}};
  for (const auto& st : r.steps) {
    json points = json::array();
    for (std::size_t e : st.edges) points.push_back(g.edge(e).id);
    json step{{"edge", tree.name(g, st.tree_edge)},
              {"j", st.j},
              {"g", st.g},
              {"points", points},
              {"status", status_name(st.status)},
              {"image_v", vectors_json(st.image_v)},
              {"image_v_prime", vectors_json(st.image_v_prime)}};
    if (!st.patterns_v.empty() || !st.patterns_v_prime.empty()) {
      json pv = json::array(), pvp = json::array();
      for (const auto& p : st.patterns_v) pv.push_back(pattern_json(p, st.edges, g));
      for (const auto& p : st.patterns_v_prime) pvp.push_back(pattern_json(p, st.edges, g));
      step["patterns_v"] = pv;
      step["patterns_v_prime"] = pvp;
    }
    if (st.status == GlueingStep::Status::Matched) {
      step["witness"] = pattern_json(st.witness, st.edges, g);
      step["witness_v"] = vectors_json(st.witness_v);
      step["witness_v_prime"] = vectors_json(st.witness_v_prime);
    }
    out["steps"].push_back(step);
  }
  return out;
}

json verdict_json(const Verdict& v) {
  json detail{{"g", v.g},
              {"r", v.r},
              {"d", v.d},
              {"rho", v.rho},
              {"d_prime", v.d_prime ? json(*v.d_prime) : json(nullptr)},
              {"weak_glueing", v.weak_glueing ? json(*v.weak_glueing) : json(nullptr)},
              {"condition_I", v.condition_I},
              {"residues_distinct", v.residues_distinct},
              {"dimension_hypotheses", v.dimension_hypotheses}};
  if (!v.note.empty()) detail["note"] = v.note;
  return {{"verdict", to_string(v.kind)}, {"rule", v.rule.empty() ? json(nullptr) : json(v.rule)}, {"detail", detail}};
}

std::size_t vertex_arg(const std::string& id, const Multigraph& g) { return vertex_of(id, g); }

std::size_t tree_edge_arg(const std::string& id, const Multigraph& g, const ContractedTree& tree) {
  if (auto e = g.find_edge(id)) return tree.image(*e);
  for (std::size_t t = 0; t < tree.edge_count(); ++t)
    if (tree.name(g, t) == id) return t;
  malformed("unknown edge " + id);
}

std::string render_table(const json& j) {
  std::ostringstream os;
  render(os, j, 0);
  return os.str();
}

}  // namespace troplift::io
