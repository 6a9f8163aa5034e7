#include "commands.hpp"

#include <functional>
#include <map>

namespace troplift::cli {

using namespace troplift::io;

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw Error(Error::Kind::Malformed, msg); }

const json& section(const Bundle& b, const char* key) {
  auto it = b.raw.find(key);
  if (it == b.raw.end()) malformed(std::string("bundle has no \"") + key + "\"");
  return *it;
}

std::size_t vertex_or(const Options& opt, const Multigraph& g, std::size_t fallback) {
  return opt.vertex.empty() ? fallback : vertex_arg(opt.vertex, g);
}

MetricDivisor bundle_divisor(const Bundle& b, const char* key = "divisor") {
  if (b.raw.contains(key)) return parse_divisor(b.raw[key], b);
  if (std::string(key) == "divisor" && b.raw.contains("multidegree"))
    return multidegree_to_divisor(parse_multidegree(b.raw["multidegree"], b), b.mg);
  malformed(std::string("bundle has no \"") + key + "\"");
}

json values_json(const PLFunction& f, const SubdividedGraph& sg) {
  json out = json::object();
  for (std::size_t v = 0; v < sg.vertex_count(); ++v) out[sg.vertex_name(v)] = f.values[v];
  return out;
}

Outcome cmd_validate(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient, false);
  const auto& g = b.mg.graph;
  auto report = validate(g);
  json violations = report.violations;
  json checked = json::array();
  auto attempt = [&](const char* key, const std::function<void()>& f) {
    if (!b.raw.contains(key)) return;
    try {
      f();
      checked.push_back(key);
    } catch (const Error& e) {
      violations.push_back(std::string(key) + ": " + e.what());
    }
  };
  if (report.ok()) {
    attempt("markings", [&] { parse_markings(b.raw["markings"], g); });
    attempt("divisor", [&] { parse_divisor(b.raw["divisor"], b); });
    attempt("other", [&] { parse_divisor(b.raw["other"], b); });
    attempt("multidegree", [&] { parse_multidegree(b.raw["multidegree"], b); });
    attempt("series", [&] { parse_series(b.raw["series"], b); });
    attempt("mc", [&] { parse_mc(b.raw["mc"], b); });
    attempt("context", [&] { parse_context(b.raw["context"]); });
  }
  auto tree = contract(g);
  bool connected_ok = report.ok();
  json out{{"ok", violations.empty()},
           {"violations", violations},
           {"checked", checked},
           {"vertices", g.vertex_count()},
           {"edges", g.edge_count()},
           {"genus", connected_ok ? json(genus(g)) : json(nullptr)},
           {"multitree", tree.is_multitree()},
           {"chain", tree.is_chain()}};
  if (opt.reorient) {
    json flipped = json::array();
    for (std::size_t e : b.flipped) flipped.push_back(g.edge(e).id);
    out["reoriented"] = flipped;
  }
  return {out, violations.empty()};
}

Outcome cmd_reduce(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  SubdividedGraph sg(b.mg);
  std::size_t q = vertex_or(opt, b.mg.graph, 0);
  auto d = bundle_divisor(b);
  auto red = dhar_reduce(sg, to_subdivided(d, sg), q);
  return {{{"vertex", b.mg.graph.vertex_id(q)},
           {"reduced", divisor_json(from_subdivided(red.divisor, sg), b.mg)},
           {"witness", values_json(red.witness, sg)}}};
}

Outcome cmd_rank(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  auto d = bundle_divisor(b);
  long r;
  if (opt.reference) {
    SubdividedGraph sg(b.mg);
    r = rank_reference(sg, to_subdivided(d, sg));
  } else {
    r = rank(b.mg, d);
  }
  return {{{"rank", r}, {"degree", d.degree()}, {"genus", genus(b.mg.graph)}}};
}

Outcome cmd_equiv(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  SubdividedGraph sg(b.mg);
  auto d1 = bundle_divisor(b);
  auto d2 = bundle_divisor(b, "other");
  auto f = linearly_equivalent(sg, to_subdivided(d1, sg), to_subdivided(d2, sg));
  json out{{"equivalent", f.has_value()}};
  if (f) out["witness"] = values_json(*f, sg);
  return {out, f.has_value()};
}

Outcome cmd_twist(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  const auto& g = b.mg.graph;
  if (opt.vertex.empty()) malformed("twist needs --vertex");
  std::size_t v = vertex_arg(opt.vertex, g);
  auto w = parse_multidegree(section(b, "multidegree"), b);
  auto tree = contract(g);
  long times = opt.times.value_or(1);
  if (times < 0) malformed("--times must be nonnegative");
  auto after = w;
  for (long k = 0; k < times; ++k) {
    if (!opt.edge.empty())
      after = partial_twist(after, b.mg, tree, tree_edge_arg(opt.edge, g, tree), v);
    else if (opt.negative)
      after = negative_twist(after, b.mg, v);
    else
      after = twist(after, b.mg, v);
  }
  auto side = [&](const AdmissibleMultidegree& x) {
    return json{{"multidegree", multidegree_json(x, b.mg)}, {"divisor", divisor_json(multidegree_to_divisor(x, b.mg), b.mg)}};
  };
  return {{{"before", side(w)}, {"after", side(after)}}};
}

Outcome cmd_tight(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  const auto& g = b.mg.graph;
  TightTuple t = b.raw.contains("tuple") ? parse_tuple(b.raw["tuple"], b)
                                         : tight_tuple(parse_multidegree(section(b, "multidegree"), b), b.mg);
  bool ok = is_tight(t, b.mg);
  json conc = json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) conc[g.vertex_id(v)] = is_concentrated(t.w[v], b.mg, v);
  return {{{"tight", ok}, {"tuple", tuple_json(t, b.mg)}, {"concentrated", conc}}, ok};
}

Outcome cmd_twistdiv(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  const auto& g = b.mg.graph;
  auto tree = contract(g);
  if (opt.edge.empty() || opt.vertex.empty()) malformed("twistdiv needs --edge and --vertex");
  std::size_t t = tree_edge_arg(opt.edge, g, tree);
  std::size_t v = vertex_arg(opt.vertex, g);
  long top = opt.top.value_or(4);
  auto w = parse_multidegree(section(b, "multidegree"), b);
  auto seq = twisting_divisors(w, b.mg, tree, t, v, top);
  json divs = json::array();
  for (const auto& d : seq) divs.push_back(marked_divisor_json(d, g));
  if (!opt.critical) return {divs};
  return {{{"divisors", divs}, {"critical", critical_indices(seq)}}};
}

Outcome cmd_multivanish(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  auto s = parse_series(section(b, "series"), b);
  auto report = condition_I_json(check_condition_I(s, b.mg, b.marks), b.mg);
  json edges = json::array();
  for (auto e : report["edges"]) {
    if (!opt.edge.empty()) {
      auto tree = contract(b.mg.graph);
      if (e["edge"] != tree.name(b.mg.graph, tree_edge_arg(opt.edge, b.mg.graph, tree))) continue;
    }
    e.erase("failures");
    edges.push_back(e);
  }
  return {{{"edges", edges}}};
}

Outcome cmd_check_prelimit(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  auto s = parse_series(section(b, "series"), b);
  auto report = check_condition_I(s, b.mg, b.marks);
  return {condition_I_json(report, b.mg), report.ok};
}

Outcome cmd_check_glueing(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  if (b.raw.contains("series")) {
    auto s = parse_series(b.raw["series"], b);
    auto ci = check_condition_I(s, b.mg, b.marks);
    if (!ci.ok)
      return {{{"ok", false}, {"condition_I", condition_I_json(ci, b.mg)}, {"note", "condition (I) fails"}}, false};
    auto report = check_weak_glueing(s, b.mg, b.marks);
    return {glueing_json(report, b.mg), report.ok};
  }
  auto mc = parse_mc(section(b, "mc"), b);
  auto res = check_mc_weak_glueing(mc, b.mg, b.marks);
  json out = glueing_json(res.glueing, b.mg);
  out["ok"] = res.ok;
  out["scale"] = res.scale;
  if (!res.condition_I.ok) {
    out["condition_I"] = condition_I_json(res.condition_I, b.mg);
    out["note"] = "condition (I) fails";
  }
  return {out, res.ok};
}

AdmissibleMultidegree chosen_multidegree(const Bundle& b, const PreLimitSeries& s, const Options& opt) {
  if (!opt.vertex.empty()) return s.tuple.w.at(vertex_arg(opt.vertex, b.mg.graph));
  if (b.raw.contains("multidegree")) return parse_multidegree(b.raw["multidegree"], b);
  return s.tuple.w.at(0);
}

Outcome cmd_forgetful(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  const auto& g = b.mg.graph;
  auto s = parse_series(section(b, "series"), b);
  auto w = chosen_multidegree(b, s, opt);
  auto mc = forgetful_map(s, w, b.mg, b.marks);
  json rel = json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    rel[g.vertex_id(v)] = marked_divisor_json(relative_twist_divisor(w, s.tuple.w[v], b.mg, v), g);
  return {{{"multidegree", multidegree_json(w, b.mg)}, {"relative_twist", rel}, {"mc", mc_json(mc, b.mg)}}};
}

Outcome cmd_invert(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  auto mc = parse_mc(section(b, "mc"), b);
  long scale = 1;
  MetricGraph mg = b.mg;
  if (!mc.gamma.is_integral()) {
    auto [mg2, mc2] = make_integral(b.mg, mc);
    scale = mg2.chain[0] / b.mg.chain[0];
    mg = std::move(mg2);
    mc = std::move(mc2);
  }
  auto s = b.raw.contains("tuple") ? inverse_forgetful(mc, parse_tuple(b.raw["tuple"], b), mg, b.marks)
                                   : inverse_forgetful(mc, mg, b.marks);
  json out{{"scale", scale}, {"series", series_json(s, mg)}};
  if (scale != 1) out["graph"] = graph_json(mg);
  return {out};
}

Outcome cmd_classify(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  MetrizedComplexSeries mc;
  if (b.raw.contains("mc")) {
    mc = parse_mc(b.raw["mc"], b);
  } else {
    auto s = parse_series(section(b, "series"), b);
    mc = forgetful_map(s, chosen_multidegree(b, s, opt), b.mg, b.marks);
  }
  auto ctx = parse_context(b.raw.contains("context") ? b.raw["context"] : json(nullptr));
  if (opt.strongly_bn_general) ctx.strongly_bn_general = *opt.strongly_bn_general;
  if (opt.d_prime) ctx.d_prime = opt.d_prime;
  auto v = classify(mc, b.mg, b.marks, ctx);
  return {verdict_json(v), v.kind == Verdict::Kind::Smoothable};
}

Outcome cmd_dprime(const json& doc, const Options& opt) {
  if (!opt.lengths.empty()) {
    auto d = fiber_dprime(opt.lengths);
    return {{{"lengths", opt.lengths}, {"d_prime", d ? json(*d) : json(nullptr)}}};
  }
  Bundle b = load_bundle(doc, opt.reorient);
  const auto& g = b.mg.graph;
  auto tree = contract(g);
  json fibers = json::array();
  for (std::size_t t = 0; t < tree.edge_count(); ++t) {
    std::vector<long> lens;
    for (std::size_t e : tree.edge(t).fiber) lens.push_back(b.mg.chain[e]);
    auto d = fiber_dprime(lens);
    fibers.push_back({{"edge", tree.name(g, t)}, {"lengths", lens}, {"d_prime", d ? json(*d) : json(nullptr)}});
  }
  auto m = max_dprime(b.mg);
  json out{{"d_prime", m ? json(*m) : json(nullptr)}, {"fibers", fibers}};
  bool passed = true;
  if (opt.d_prime) {
    passed = check_condition_II(b.mg, *opt.d_prime);
    out["condition_II"] = passed;
  }
  return {out, passed};
}

Outcome cmd_residues(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  bool ok = b.raw.contains("multidegree") ? check_residue_condition(parse_multidegree(b.raw["multidegree"], b), b.mg)
                                          : check_residue_condition(bundle_divisor(b), b.mg);
  return {{{"distinct", ok}}, ok};
}

Outcome cmd_lift(const json& doc, const Options& opt) {
  Bundle b = load_bundle(doc, opt.reorient);
  auto d = bundle_divisor(b);
  json out = json::object();
  std::string method = opt.method;
  long r = 0;
  if (method == "auto") {
    auto plan = lift_dispatch(d, b.mg);
    json pj{{"route", plan.route}, {"rank", plan.rank}, {"genus", plan.genus}};
    if (plan.target) pj["target"] = divisor_json(*plan.target, b.mg);
    if (!plan.note.empty()) pj["note"] = plan.note;
    out["plan"] = pj;
    if (plan.route != "direct") {
      out["series"] = nullptr;
      return {out, false};
    }
    r = plan.rank;
    method = r == 1 ? "rank-one" : "vertex-avoiding";
  } else {
    r = opt.rank ? *opt.rank : rank(b.mg, d);
  }
  LiftResult res;
  if (method == "rank-one")
    res = lift_rank_one(d, b.mg, b.marks);
  else if (method == "vertex-avoiding")
    res = lift_vertex_avoiding(d, r, b.mg, b.marks);
  else
    malformed("unknown --method " + method + " (auto, rank-one, vertex-avoiding)");
  out["method"] = method;
  out["route"] = res.route;
  out["rank"] = res.rank;
  out["genus"] = res.genus;
  out["degree"] = res.degree;
  out["reduced"] = divisor_json(res.reduced, b.mg);
  bool passed = true;
  if (res.series) {
    auto ci = check_condition_I(*res.series, b.mg, b.marks);
    bool glue = ci.ok && check_weak_glueing(*res.series, b.mg, b.marks).ok;
    out["series"] = series_json(*res.series, b.mg);
    out["checks"] = {{"condition_I", ci.ok}, {"weak_glueing", glue}};
    passed = glue;
  } else {
    out["series"] = nullptr;
  }
  return {out, passed};
}

Outcome cmd_fixtures(const json&, const Options&) {
  json list = json::array();
  bool all = true;
  for (const auto& r : run_fixtures()) {
    list.push_back({{"name", r.name}, {"ok", r.ok}, {"diff", r.diff}});
    all = all && r.ok;
  }
  return {{{"ok", all}, {"fixtures", list}}, all};
}

using Handler = Outcome (*)(const json&, const Options&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"validate", cmd_validate},     {"reduce", cmd_reduce},
      {"rank", cmd_rank},             {"equiv", cmd_equiv},
      {"twist", cmd_twist},           {"tight", cmd_tight},
      {"twistdiv", cmd_twistdiv},     {"multivanish", cmd_multivanish},
      {"check-prelimit", cmd_check_prelimit}, {"check-glueing", cmd_check_glueing},
      {"forgetful", cmd_forgetful},   {"invert", cmd_invert},
      {"classify", cmd_classify},     {"dprime", cmd_dprime},
      {"residues", cmd_residues},     {"lift", cmd_lift},
      {"fixtures", cmd_fixtures}};
  return table;
}

// Fixture data. Expected outputs list only the fields that are compared;
// anything else in the actual output is ignored.

const char* kThreeEdgePair = R"J({
  "graph": {"vertices": ["v", "v1"],
            "edges": [{"id": "e1", "tail": "v", "head": "v1", "n": 4},
                      {"id": "e2", "tail": "v", "head": "v1", "n": 2},
                      {"id": "e3", "tail": "v", "head": "v1", "n": 3}]},
  "multidegree": {"w": {"v": 3, "v1": 0}, "mu": {"e1": 1, "e2": 1, "e3": 0}}
})J";

const char* kTwistExpected = R"J({
  "before": {"multidegree": {"w": {"v": 3, "v1": 0}, "mu": {"e1": 1, "e2": 1, "e3": 0}},
             "divisor": {"vertex": {"v": 3},
                         "edge": [{"edge": "e1", "t": "1", "c": 1}, {"edge": "e2", "t": "1", "c": 1}]}},
  "after": {"multidegree": {"w": {"v": 2, "v1": 1}, "mu": {"e1": 2, "e2": 0, "e3": 1}},
            "divisor": {"vertex": {"v": 2, "v1": 1},
                        "edge": [{"edge": "e1", "t": "2", "c": 1}, {"edge": "e3", "t": "1", "c": 1}]}}
})J";

const char* kTwistdivExpected = R"J({
  "divisors": [{}, {"e3": 1}, {"e2": 1, "e3": 1}, {"e2": 1, "e3": 1}, {"e1": 1, "e2": 2, "e3": 2}],
  "critical": [0, 1, 3]
})J";

const char* kTightExpected = R"J({"tight": true, "tuple": {"b": {"v~v1": 3}}})J";

const char* kTwoEdgePair = R"J({
  "graph": {"vertices": ["v", "v1"],
            "edges": [{"id": "e1", "tail": "v", "head": "v1", "n": 2},
                      {"id": "e2", "tail": "v", "head": "v1", "n": 1}]},
  "markings": {"v": {"e1": "0", "e2": "1", "R": "2"}, "v1": {"e1": "0", "e2": "1"}},
  "multidegree": {"w": {"v": 2, "v1": 0}, "mu": {"e1": 0, "e2": 0}},
  "series": {"r": 1,
             "w0": {"w": {"v": 2, "v1": 0}, "mu": {"e1": 0, "e2": 0}},
             "components": {"v": {"twist_divisor": {"R": 2}, "basis": ["x/(x-2)", "x*(x-1)/(x-2)^2"]},
                            "v1": {"twist_divisor": {"e2": 1}, "basis": ["(x-2)/(x-1)", "1"]}}},
  "mc": {"r": 1,
         "gamma": {"vertex": {"v": 2}},
         "components": {"v": {"divisor": {"R": 2}, "basis": ["x/(x-2)", "x*(x-1)/(x-2)^2"]},
                        "v1": {"divisor": {}, "basis": ["(x-2)/(x-1)", "1"]}}},
  "context": {"strongly_bn_general": true}
})J";

const char* kPrelimitExpected = R"J({
  "ok": true,
  "edges": [{"edge": "v~v1", "b": 1, "vanishing_v": [0, 2], "vanishing_v_prime": [0, 1]}]
})J";

const char* kForgetfulExpected = R"J({
  "relative_twist": {"v": {}, "v1": {"e2": 1}},
  "mc": {"gamma": {"vertex": {"v": 2}, "edge": []}}
})J";

const char* kGlueingExpected = R"J({
  "ok": false,
  "steps": [{"j": 0, "status": "failed"}, {"j": 1, "status": "trivial"}]
})J";

const char* kClassifyExpected = R"J({"verdict": "NotSmoothable", "rule": "thm4.5"})J";

struct FixtureStep {
  const char* command;
  Options opt;
  const char* expected;
};

struct Fixture {
  std::string name;
  const char* bundle;
  std::vector<FixtureStep> steps;
};

std::vector<Fixture> fixtures() {
  Options twist_v;
  twist_v.vertex = "v";
  Options twistdiv;
  twistdiv.vertex = "v";
  twistdiv.edge = "v~v1";
  twistdiv.top = 4;
  twistdiv.critical = true;
  return {{"three-edge-twist", kThreeEdgePair, {{"twist", twist_v, kTwistExpected}}},
          {"three-edge-twisting-divisors", kThreeEdgePair, {{"twistdiv", twistdiv, kTwistdivExpected}, {"tight", {}, kTightExpected}}},
          {"two-edge-glueing-failure",
           kTwoEdgePair,
           {{"check-prelimit", {}, kPrelimitExpected},
            {"forgetful", {}, kForgetfulExpected},
            {"check-glueing", {}, kGlueingExpected},
            {"classify", {}, kClassifyExpected}}}};
}

// Every field of `expected` must be present in `actual` with the same value;
// arrays must have equal length.
void compare(const json& expected, const json& actual, const std::string& path, json& diff) {
  auto mismatch = [&] { diff.push_back({{"path", path.empty() ? "/" : path}, {"expected", expected}, {"actual", actual}}); };
  if (expected.is_object()) {
    if (!actual.is_object()) return mismatch();
    for (const auto& [k, v] : expected.items()) {
      if (!actual.contains(k)) {
        diff.push_back({{"path", path + "/" + k}, {"expected", v}, {"actual", nullptr}});
        continue;
      }
      compare(v, actual[k], path + "/" + k, diff);
    }
  } else if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) return mismatch();
    for (std::size_t i = 0; i < expected.size(); ++i) compare(expected[i], actual[i], path + "/" + std::to_string(i), diff);
  } else if (expected != actual) {
    mismatch();
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate",      "reduce",         "rank",      "equiv",
                                              "twist",         "tight",          "twistdiv",  "multivanish",
                                              "check-prelimit", "check-glueing", "forgetful", "invert",
                                              "classify",      "dprime",         "residues",  "lift",
                                              "fixtures"};
  return names;
}

Outcome run_command(const std::string& cmd, const json& bundle, const Options& opt) {
  auto it = handlers().find(cmd);
  if (it == handlers().end()) malformed("unknown subcommand " + cmd);
  return it->second(bundle, opt);
}

std::vector<FixtureResult> run_fixtures() {
  std::vector<FixtureResult> out;
  for (const auto& f : fixtures()) {
    FixtureResult r{f.name, true, json::array()};
    auto bundle = json::parse(f.bundle);
    for (const auto& step : f.steps) {
      json local = json::array();
      try {
        auto outcome = run_command(step.command, bundle, step.opt);
        compare(json::parse(step.expected), outcome.out, std::string("/") + step.command, local);
      } catch (const std::exception& e) {
        local.push_back({{"path", std::string("/") + step.command}, {"error", e.what()}});
      }
      for (auto& d : local) r.diff.push_back(d);
    }
    r.ok = r.diff.empty();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, json>> fixture_bundles() {
  return {{"three_edge_pair", json::parse(kThreeEdgePair)}, {"two_edge_pair", json::parse(kTwoEdgePair)}};
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace troplift::cli
