#include "troplift/smoothing.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace troplift {

long expected_rho(long g, long r, long d) { return g + (r + 1) * (d - r - g); }

namespace {

// Whether x is a nonnegative integer combination of the generators.
bool in_monoid(long x, const std::vector<long>& gens) {
  std::vector<bool> ok(static_cast<std::size_t>(x) + 1, false);
  ok[0] = true;
  for (long s = 1; s <= x; ++s)
    for (long n : gens)
      if (n <= s && ok[static_cast<std::size_t>(s - n)]) {
        ok[static_cast<std::size_t>(s)] = true;
        break;
      }
  return ok[static_cast<std::size_t>(x)];
}

std::vector<long> fiber_lengths(const ContractedTree::TreeEdge& te, const MetricGraph& mg) {
  std::vector<long> out;
  for (std::size_t e : te.fiber) out.push_back(mg.chain[e]);
  return out;
}

std::vector<Point> fiber_points(const Markings& marks, std::size_t v, const ContractedTree::TreeEdge& te) {
  std::vector<Point> out;
  for (std::size_t e : te.fiber) out.push_back(marks.point(v, e));
  return out;
}

// Points from the constant pool that avoid `blocked`.
std::vector<Point> fresh_points(std::size_t count, const std::set<Point>& blocked) {
  std::vector<Point> out;
  auto pool = seed_pool(count + blocked.size() + 16);
  for (const auto& a : pool) {
    if (out.size() == count) break;
    Point p = Point::at(a);
    if (!blocked.count(p) && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  if (out.size() < count) throw Error("constant pool exhausted");
  return out;
}

std::set<Point> marked_set(const Markings& marks, std::size_t v) {
  auto pts = marks.marked(v);
  std::set<Point> out(pts.begin(), pts.end());
  for (const auto& [name, p] : marks.named.at(v)) out.insert(p);
  return out;
}

PointDivisor poles_of(const PointDivisor& div) {
  PointDivisor out;
  for (const auto& [p, o] : div)
    if (o < 0) out[p] = -o;
  return out;
}

void require_chain(const MetricGraph& mg, const ContractedTree& tree, std::size_t max_fiber) {
  auto rep = validate(mg.graph);
  if (!rep.ok()) throw Error("invalid graph: " + rep.violations.front());
  if (!tree.is_chain()) throw Error("not a chain");
  for (const auto& te : tree.edges())
    if (te.fiber.size() > max_fiber)
      throw Error("hypotheses fail: more than " + std::to_string(max_fiber) + " edges between adjacent vertices");
}

MetricDivisor reduce_at(const MetricDivisor& d, const MetricGraph& mg, std::size_t q) {
  SubdividedGraph sg(mg);
  return from_subdivided(dhar_reduce(sg, to_subdivided(d, sg), q).divisor, sg);
}

}  // namespace

std::optional<long> fiber_dprime(const std::vector<long>& lengths) {
  if (lengths.size() > 3) throw Error("condition (I) violated: more than three parallel edges");
  if (lengths.size() <= 1) return std::nullopt;
  long best = -1;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    std::vector<long> others;
    for (std::size_t i = 0; i < lengths.size(); ++i)
      if (i != j) others.push_back(lengths[i]);
    long x = 1;
    while (!in_monoid(x * lengths[j], others)) ++x;
    long total = 0;
    for (long n : lengths) total += x * lengths[j] / n;
    if (best < 0 || total < best) best = total;
  }
  return best - 1;
}

std::optional<long> max_dprime(const MetricGraph& mg) {
  auto tree = contract(mg.graph);
  std::optional<long> out;
  for (const auto& te : tree.edges())
    if (auto b = fiber_dprime(fiber_lengths(te, mg)); b && (!out || *b < *out)) out = b;
  return out;
}

bool check_condition_II(const MetricGraph& mg, long d_prime) {
  auto m = max_dprime(mg);
  return !m || d_prime <= *m;
}

bool check_residue_condition(const AdmissibleMultidegree& w, const MetricGraph& mg) {
  check_admissible(w, mg);
  auto tree = contract(mg.graph);
  for (const auto& te : tree.edges()) {
    long g = 0;
    for (std::size_t e : te.fiber) g = std::gcd(g, mg.chain[e]);
    std::set<long> seen;
    for (std::size_t e : te.fiber)
      if (!seen.insert(w.mu[e] % g).second) return false;
  }
  return true;
}

bool check_residue_condition(const MetricDivisor& d, const MetricGraph& mg) {
  check_divisor(d, mg);
  if (!d.is_edge_reduced()) throw Error("not edge-reduced");
  Integer l = 1;
  for (const auto& c : d.edge) l = lcm(l, Integer(c.t.get_den()));
  long k = to_long(Rational(l));
  MetricGraph scaled(mg.graph, mg.chain.scaled(k));
  MetricDivisor dk = d;
  for (auto& c : dk.edge) c.t *= k;
  return check_residue_condition(divisor_to_multidegree(dk, scaled), scaled);
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Smoothable: return "Smoothable";
    case Verdict::Kind::NotSmoothable: return "NotSmoothable";
    case Verdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks,
                 const ContextFlags& ctx) {
  validate_mc(mc, mg, marks);
  Verdict v;
  v.g = genus(mg.graph);
  v.r = mc.r;
  v.d = mc.gamma.degree();
  v.rho = expected_rho(v.g, v.r, v.d);

  auto [img, imc] = make_integral(mg, mc);
  auto pre = inverse_forgetful(imc, img, marks);
  v.condition_I = check_condition_I(pre, img, marks).ok;
  if (!v.condition_I) v.note = "preimage fails condition (I); not a limit linear series";
  else {
    try {
      v.weak_glueing = check_weak_glueing(pre, img, marks).ok;
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Unsupported) throw;
      v.note = e.what();
    }
  }

  try {
    v.residues_distinct = mc.gamma.is_edge_reduced() && check_residue_condition(mc.gamma, mg);
  } catch (const Error&) {
    v.residues_distinct = false;
  }

  auto tree = contract(mg.graph);
  bool fibers_ok = true;
  for (const auto& te : tree.edges()) fibers_ok = fibers_ok && te.fiber.size() <= 3;
  if (fibers_ok) {
    v.d_prime = ctx.d_prime ? ctx.d_prime : max_dprime(mg);
    if (!v.d_prime) v.d_prime = v.d;
    v.dimension_hypotheses = tree.is_multitree() && ctx.strongly_bn_general && check_condition_II(mg, *v.d_prime) &&
                             v.d <= *v.d_prime;
  }

  using K = Verdict::Kind;
  if (v.weak_glueing == false) {
    v.kind = K::NotSmoothable;
    v.rule = "thm4.5";
  } else if (v.condition_I && v.dimension_hypotheses && v.weak_glueing == true) {
    v.kind = K::Smoothable;
    v.rule = "thm4.8";
  } else if (v.condition_I && v.dimension_hypotheses && v.rho == 0) {
    v.kind = K::Smoothable;
    v.rule = "cor4.10";
  } else if (v.condition_I && v.residues_distinct && ctx.strongly_bn_general) {
    v.kind = K::Smoothable;
    v.rule = "thm4.3";
  }
  return v;
}

ChainOrder chain_order(const ContractedTree& tree) {
  if (!tree.is_chain()) throw Error("not a chain");
  ChainOrder out;
  const std::size_t n = tree.vertex_count();
  if (n == 0) return out;
  std::size_t start = 0;
  while (start < n && tree.incident(start).size() > 1) ++start;
  out.vertices.push_back(start);
  std::size_t prev_edge = tree.edge_count();
  while (true) {
    std::size_t v = out.vertices.back();
    std::optional<std::size_t> next;
    for (std::size_t t : tree.incident(v))
      if (t != prev_edge) next = t;
    if (!next) break;
    out.edges.push_back(*next);
    out.vertices.push_back(tree.other_end(*next, v));
    prev_edge = *next;
  }
  return out;
}

LiftResult lift_rank_one(const MetricDivisor& d, const MetricGraph& mg, const Markings& marks) {
  check_markings(marks, mg.graph);
  check_divisor(d, mg);
  auto tree = contract(mg.graph);
  require_chain(mg, tree, 3);
  if (!d.is_integral()) throw Error("not integral");
  if (!d.is_edge_reduced()) throw Error("not edge-reduced");

  LiftResult res;
  res.genus = genus(mg.graph);
  res.degree = d.degree();
  res.rank = rank(mg, d);
  res.reduced = d;
  if (res.rank != 1) throw Error("rank != 1 (rank is " + std::to_string(res.rank) + ")");
  const long g = res.genus;
  if (res.degree > 2 * g - 2) {
    res.route = "riemann-roch";
    return res;
  }
  const long d_prime = std::min(2 * g - 2, g + 1);
  if (!check_condition_II(mg, d_prime))
    throw Error("hypotheses fail: condition (II) does not hold at d' = " + std::to_string(d_prime));
  res.route = "construction";

  auto w0 = divisor_to_multidegree(d, mg);
  auto tuple = tight_tuple(w0, mg);
  auto order = chain_order(tree);
  const std::size_t m = order.vertices.size();

  PreLimitSeries s;
  s.r = 1;
  s.tuple = tuple;
  s.spaces.resize(mg.graph.vertex_count());
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = order.vertices[i];
    const long dv = tuple.w[v].w[v];
    std::optional<std::size_t> tp, tn;
    long bp = 0, bn = 0;
    if (i > 0) {
      tp = order.edges[i - 1];
      bp = tuple.between(tree, order.vertices[i - 1], v);
    }
    if (i + 1 < m) {
      tn = order.edges[i];
      bn = tuple.between(tree, v, order.vertices[i + 1]);
    }
    std::vector<Point> prev_pts, next_pts;
    if (tp) prev_pts = fiber_points(marks, v, tree.edge(*tp));
    if (tn) next_pts = fiber_points(marks, v, tree.edge(*tn));

    PointDivisor orders;
    std::vector<Genericity> preds;
    auto prescribe = [&](std::size_t t, long b, long sign) {
      auto dv_seq = twisting_divisors(tuple.w[v], mg, tree, t, v, b);
      for (std::size_t e : tree.edge(t).fiber) {
        auto it = dv_seq.back().find(e);
        orders[marks.point(v, e)] = sign * (it == dv_seq.back().end() ? 0 : it->second);
      }
    };
    auto generic = [&](const std::vector<Point>& pts) {
      if (pts.empty()) return;
      preds.push_back({Genericity::Kind::NoZeroOrPole, pts});
      preds.push_back({Genericity::Kind::DistinctValues, pts});
    };
    if (bp > 0 && bn > 0) {
      prescribe(*tp, bp, -1);
      prescribe(*tn, bn, +1);
    } else {
      if (bp > 0) prescribe(*tp, bp, +1);
      else generic(prev_pts);
      if (bn > 0) prescribe(*tn, bn, +1);
      else generic(next_pts);
    }
    preds.push_back({Genericity::Kind::Nonconstant, {}});
    auto blocked = marked_set(marks, v);
    auto cf = construct_function(orders, preds, {blocked.begin(), blocked.end()});

    PointDivisor line = poles_of(cf.divisor);
    if (degree(line) > dv)
      throw Error("hypotheses fail: component " + mg.graph.vertex_id(v) + " has degree " + std::to_string(dv) +
                  " but the section needs " + std::to_string(degree(line)) + " poles");
    for (const auto& [p, o] : cf.divisor) blocked.insert(p);
    for (const auto& p : fresh_points(static_cast<std::size_t>(dv - degree(line)), blocked)) line[p] += 1;
    s.spaces[v] = FunctionSpace(line, {RationalFunction(Rational(1)), cf.f});
  }
  res.series = std::move(s);
  return res;
}

std::pair<MetricDivisor, PLFunction> compute_Dj(const MetricDivisor& d, long j, long r, std::size_t v0, std::size_t vm,
                                                const MetricGraph& mg) {
  if (j < 0 || j > r) throw Error("index j out of range");
  SubdividedGraph sg(mg);
  auto gd = to_subdivided(d, sg);
  gd[vm] -= r - j;
  auto red = dhar_reduce(sg, gd, v0);
  auto cand = red.divisor;
  cand[vm] += r - j;
  auto rest = cand;
  rest[v0] -= j;
  rest[vm] -= r - j;
  if (std::any_of(rest.begin(), rest.end(), [](long c) { return c < 0; }))
    throw Error("no effective representative for j = " + std::to_string(j));
  return {from_subdivided(cand, sg), red.witness};
}

LiftResult lift_vertex_avoiding(const MetricDivisor& d, long r, const MetricGraph& mg, const Markings& marks) {
  check_markings(marks, mg.graph);
  check_divisor(d, mg);
  auto tree = contract(mg.graph);
  require_chain(mg, tree, 2);
  if (!d.is_integral()) throw Error("not integral (rescale the chain structure first)");
  if (r < 0) throw Error("rank must be nonnegative");

  auto order = chain_order(tree);
  const std::size_t m = order.vertices.size();
  const std::size_t v0 = order.vertices.front(), vm = order.vertices.back();

  LiftResult res;
  res.route = "construction";
  res.genus = genus(mg.graph);
  res.degree = d.degree();
  res.reduced = reduce_at(d, mg, v0);
  if (!res.reduced.is_edge_reduced()) throw Error("reduced divisor is not edge-reduced");
  res.rank = rank(mg, res.reduced);
  if (res.rank != r) throw Error("rank != " + std::to_string(r) + " (rank is " + std::to_string(res.rank) + ")");

  auto w0 = divisor_to_multidegree(res.reduced, mg);
  auto tuple = tight_tuple(w0, mg);
  SubdividedGraph sg(mg);

  std::vector<PLFunction> fs;
  for (long j = 0; j <= r; ++j) fs.push_back(compute_Dj(res.reduced, j, r, v0, vm, mg).second);

  auto fail = [](int k, const std::string& what) {
    throw Error("not vertex avoiding (identity " + std::to_string(k) + " failed): " + what);
  };
  // Per position: incoming divisors D_i^j, outgoing E_i^j, and the indices m_i^j, n_i^j.
  std::vector<std::vector<MarkedDivisor>> din(m), dout(m);
  std::vector<std::vector<long>> mi(m), ni(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = order.vertices[i];
    for (long j = 0; j <= r; ++j) {
      const auto& f = fs[static_cast<std::size_t>(j)];
      if (i > 0) {
        const std::size_t t = order.edges[i - 1];
        const long b = tuple.between(tree, order.vertices[i - 1], v);
        MarkedDivisor dij;
        for (std::size_t e : tree.edge(t).fiber)
          if (long sl = slope(f, sg, e, v); sl != 0) dij[e] = sl;
        auto seq = twisting_divisors(tuple.w[v], mg, tree, t, v, b + 1);
        long found = -1;
        for (long k = b; k >= 0 && found < 0; --k)
          if (difference(seq[static_cast<std::size_t>(b)], seq[static_cast<std::size_t>(k)]) == dij) found = k;
        if (found < 0 || seq[static_cast<std::size_t>(found) + 1] == seq[static_cast<std::size_t>(found)])
          fail(1, "incoming slopes at " + mg.graph.vertex_id(v) + " for j = " + std::to_string(j));
        din[i].push_back(dij);
        mi[i].push_back(found);
      }
      if (i + 1 < m) {
        const std::size_t t = order.edges[i];
        const long b = tuple.between(tree, v, order.vertices[i + 1]);
        MarkedDivisor eij;
        for (std::size_t e : tree.edge(t).fiber)
          if (long sl = slope(f, sg, e, v); sl != 0) eij[e] = -sl;
        auto seq = twisting_divisors(tuple.w[v], mg, tree, t, v, b + 1);
        long found = -1;
        for (long k = b; k >= 0 && found < 0; --k)
          if (seq[static_cast<std::size_t>(k)] == eij) found = k;
        if (found < 0 || seq[static_cast<std::size_t>(found) + 1] == seq[static_cast<std::size_t>(found)])
          fail(2, "outgoing slopes at " + mg.graph.vertex_id(v) + " for j = " + std::to_string(j));
        dout[i].push_back(eij);
        ni[i].push_back(found);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const long b = tuple.between(tree, order.vertices[i], order.vertices[i + 1]);
    for (long j = 0; j <= r; ++j)
      if (ni[i][static_cast<std::size_t>(j)] + mi[i + 1][static_cast<std::size_t>(j)] != b)
        fail(3, "n + m != b between " + mg.graph.vertex_id(order.vertices[i]) + " and " +
                    mg.graph.vertex_id(order.vertices[i + 1]));
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::set<MarkedDivisor> a(din[i].begin(), din[i].end()), b(dout[i].begin(), dout[i].end());
    if ((i > 0 && a.size() != din[i].size()) || (i + 1 < m && b.size() != dout[i].size()))
      fail(4, "slope divisors at " + mg.graph.vertex_id(order.vertices[i]) + " are not distinct");
  }

  PreLimitSeries s;
  s.r = r;
  s.tuple = tuple;
  s.spaces.resize(mg.graph.vertex_count());
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = order.vertices[i];
    const long dv = tuple.w[v].w[v];
    PointDivisor base;
    if (i > 0) {
      const std::size_t t = order.edges[i - 1];
      const long b = tuple.between(tree, order.vertices[i - 1], v);
      base = marks.realize(v, twisting_divisors(tuple.w[v], mg, tree, t, v, b).back());
    }
    const long spare = dv - degree(base);
    if (spare < 0) throw Error("component degree below the incoming twisting divisor");
    auto blocked = marked_set(marks, v);
    auto extra = fresh_points(static_cast<std::size_t>(spare), blocked);
    blocked.insert(extra.begin(), extra.end());

    std::vector<RationalFunction> basis;
    for (long j = 0; j <= r; ++j) {
      PointDivisor orders;
      if (i > 0)
        for (std::size_t e : tree.edge(order.edges[i - 1]).fiber) {
          auto it = din[i][static_cast<std::size_t>(j)].find(e);
          orders[marks.point(v, e)] = it == din[i][static_cast<std::size_t>(j)].end() ? 0 : -it->second;
        }
      if (i + 1 < m)
        for (std::size_t e : tree.edge(order.edges[i]).fiber) {
          auto it = dout[i][static_cast<std::size_t>(j)].find(e);
          orders[marks.point(v, e)] = it == dout[i][static_cast<std::size_t>(j)].end() ? 0 : it->second;
        }
      long need = 0;
      for (const auto& [p, o] : orders) need += o;
      if (need > spare)
        throw Error("component " + mg.graph.vertex_id(v) + " has too few spare points for j = " + std::to_string(j));
      for (long k = 0; k < need; ++k) orders[extra[static_cast<std::size_t>(k)]] = -1;
      basis.push_back(construct_function(orders, {}, {blocked.begin(), blocked.end()}).f);
    }
    PointDivisor line = base;
    for (const auto& p : extra) line[p] += 1;
    s.spaces[v] = FunctionSpace(line, basis);
  }
  res.series = std::move(s);
  return res;
}

DispatchPlan lift_dispatch(const MetricDivisor& d, const MetricGraph& mg) {
  check_divisor(d, mg);
  if (!d.is_integral()) throw Error("not integral");
  DispatchPlan plan;
  plan.genus = genus(mg.graph);
  plan.rank = rank(mg, d);
  if (plan.rank <= 1) {
    plan.route = "direct";
    plan.target = d;
    return plan;
  }
  if (plan.genus > 5) {
    plan.route = "inconclusive";
    plan.note = "rank at least 2 on genus above 5";
    return plan;
  }
  SubdividedGraph sg(mg);
  auto k = canonical_divisor(sg);
  auto gd = to_subdivided(d, sg);
  GraphDivisor kd(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) kd[i] = k[i] - gd[i];
  MetricDivisor dual = from_subdivided(kd, sg);
  if (rank(mg, dual) <= 1) {
    plan.route = "dual";
    plan.target = dual;
    plan.note = "Riemann-Roch reduces to K - D";
    return plan;
  }
  if (plan.genus == 5 && plan.rank == 2 && d.degree() == 4) {
    const std::size_t n = sg.vertex_count();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        GraphDivisor h(n, 0);
        ++h[a];
        ++h[b];
        GraphDivisor twice(n, 0);
        for (std::size_t i = 0; i < n; ++i) twice[i] = 2 * h[i];
        if (!linearly_equivalent(sg, gd, twice)) continue;
        if (rank(sg, h) != 1) continue;
        plan.route = "halving";
        plan.target = from_subdivided(h, sg);
        plan.note = "D ~ 2D' with r(D') = 1";
        return plan;
      }
    plan.route = "inconclusive";
    plan.note = "no half of rank one found";
    return plan;
  }
  plan.route = "inconclusive";
  plan.note = "no reduction to rank one applies";
  return plan;
}

}  // namespace troplift
