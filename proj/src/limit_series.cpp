#include "troplift/limit_series.hpp"

#include <algorithm>
#include <numeric>

namespace troplift {

namespace {

std::string vname(const MetricGraph& mg, std::size_t v) { return mg.graph.vertex_id(v); }

long dim_with_vanishing(const FunctionSpace& v, const PointDivisor& req) {
  return static_cast<long>(v.dimension()) - static_cast<long>(rank(v.vanishing_conditions(req)));
}

std::vector<Point> points_of(const Markings& marks, std::size_t v, const std::vector<std::size_t>& edges) {
  std::vector<Point> out;
  for (std::size_t e : edges) out.push_back(marks.point(v, e));
  return out;
}

// Vectors of the sub-span of U (rows of b) lying in the coordinate subspace of `mask`.
std::vector<Vector> restrict_to(const std::vector<Vector>& b, std::size_t m, unsigned mask) {
  std::vector<Vector> rows;
  for (std::size_t j = 0; j < m; ++j) {
    if (mask >> j & 1U) continue;
    Vector row;
    for (const auto& v : b) row.push_back(v[j]);
    rows.push_back(std::move(row));
  }
  Matrix cond = Matrix::from_rows(rows, b.size());
  std::vector<Vector> out;
  for (const auto& c : kernel(cond)) {
    Vector x(m, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0)
        for (std::size_t j = 0; j < m; ++j) x[j] += c[i] * b[i][j];
    out.push_back(std::move(x));
  }
  return out;
}

Support support_of(const Vector& x) {
  Support s;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0) s.push_back(j);
  return s;
}

unsigned mask_of(const Support& s) {
  unsigned m = 0;
  for (auto j : s) m |= 1U << j;
  return m;
}

// An element of the stratum of U with support exactly `mask`, combining the
// restricted basis with pool constants starting at `offset`.
std::optional<Vector> generic_element(const std::vector<Vector>& b, std::size_t m, unsigned mask, std::size_t offset) {
  auto basis = restrict_to(b, m, mask);
  if (basis.empty()) return std::nullopt;
  auto pool = seed_pool(offset + basis.size() + 64);
  for (std::size_t shift = 0; shift < 64; ++shift) {
    Vector x(m, 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < m; ++j) x[j] += pool[offset + shift + i] * basis[i][j];
    if (mask_of(support_of(x)) == mask) return x;
  }
  return std::nullopt;
}

struct Achievable {
  std::map<Pattern, std::vector<Vector>> by_pattern;  // pattern -> generators of one subspace
};

// Patterns of g-dimensional subspaces of U spanned by generic elements of strata.
Achievable achievable_patterns(const std::vector<Vector>& u, std::size_t m, long g) {
  Achievable out;
  auto b = span_basis(u, m);
  std::vector<Support> strata;
  for (const auto& s : orbit_pattern(b, m)) strata.push_back(s);
  std::vector<std::size_t> pick(static_cast<std::size_t>(g), 0);
  // Multisets of strata, as nondecreasing index sequences.
  while (true) {
    std::vector<Vector> gens;
    bool ok = true;
    for (std::size_t k = 0; k < pick.size() && ok; ++k) {
      auto x = generic_element(b, m, mask_of(strata[pick[k]]), 7 * k);
      if (!x) ok = false;
      else gens.push_back(*x);
    }
    if (ok && rank(Matrix::from_rows(gens, m)) == static_cast<std::size_t>(g)) {
      auto p = orbit_pattern(gens, m);
      out.by_pattern.try_emplace(p, gens);
    }
    std::size_t k = pick.size();
    while (k > 0 && pick[k - 1] + 1 == strata.size()) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t i = k; i < pick.size(); ++i) pick[i] = pick[k - 1];
  }
  return out;
}

}  // namespace

Markings Markings::defaults(const Multigraph& g) {
  Markings m;
  m.at.resize(g.vertex_count());
  m.named.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    long k = 0;
    for (std::size_t e : g.incident(v)) m.at[v][e] = Point::at(k++);
  }
  return m;
}

const Point& Markings::point(std::size_t v, std::size_t e) const {
  auto it = at.at(v).find(e);
  if (it == at.at(v).end()) throw Error("edge has no marked point on this component");
  return it->second;
}

PointDivisor Markings::realize(std::size_t v, const MarkedDivisor& d) const {
  PointDivisor out;
  for (const auto& [e, c] : d)
    if (c != 0) out[point(v, e)] += c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::vector<Point> Markings::marked(std::size_t v) const {
  std::vector<Point> out;
  for (const auto& [e, p] : at.at(v)) out.push_back(p);
  return out;
}

void check_markings(const Markings& m, const Multigraph& g) {
  if (m.at.size() != g.vertex_count()) throw Error("markings do not match the vertex count");
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incident(v);
    if (m.at[v].size() != inc.size()) throw Error("markings of " + g.vertex_id(v) + " do not match its edges");
    std::set<Point> seen;
    for (std::size_t e : inc) {
      auto it = m.at[v].find(e);
      if (it == m.at[v].end()) throw Error("edge " + g.edge(e).id + " is unmarked on " + g.vertex_id(v));
      if (!seen.insert(it->second).second) throw Error("marked points on " + g.vertex_id(v) + " coincide");
    }
    if (v < m.named.size())
      for (const auto& [name, p] : m.named[v])
        if (!seen.insert(p).second) throw Error("named point " + name + " on " + g.vertex_id(v) + " is not distinct");
  }
}

void validate_series(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks) {
  check_markings(marks, mg.graph);
  const std::size_t nv = mg.graph.vertex_count();
  if (s.r < 0) throw Error("rank must be nonnegative");
  if (s.spaces.size() != nv || s.tuple.w.size() != nv) throw Error("series does not match the vertex count");
  if (!is_tight(s.tuple, mg)) throw Error("tuple is not tight");
  for (std::size_t v = 0; v < nv; ++v) {
    if (static_cast<long>(s.spaces[v].dimension()) != s.r + 1)
      throw Error("space on " + vname(mg, v) + " does not have dimension r + 1");
    if (s.spaces[v].line_degree() != s.tuple.w[v].w[v])
      throw Error("line bundle on " + vname(mg, v) + " does not have degree d_v");
  }
}

std::vector<long> multivanishing(const FunctionSpace& v, const std::vector<PointDivisor>& seq) {
  if (seq.empty() || degree(seq.back()) <= v.line_degree())
    throw Error("twisting sequence does not exceed the degree");
  std::vector<long> out;
  long prev_dim = static_cast<long>(v.dimension());
  if (!seq.empty()) prev_dim = dim_with_vanishing(v, seq[0]);
  for (std::size_t i = 0; i + 1 < seq.size() && prev_dim > 0; ++i) {
    if (degree(seq[i + 1]) <= degree(seq[i])) continue;
    long next = dim_with_vanishing(v, seq[i + 1]);
    for (long k = next; k < prev_dim; ++k) out.push_back(degree(seq[i]));
    prev_dim = next;
  }
  return out;
}

std::vector<MarkedDivisor> extended_twisting_divisors(const PreLimitSeries& s, const MetricGraph& mg,
                                                      const ContractedTree& tree, std::size_t t, std::size_t v,
                                                      long at_least) {
  const long d = s.tuple.w.at(v).w.at(v);
  long top = std::max(at_least, 1L);
  while (true) {
    auto seq = twisting_divisors(s.tuple.w[v], mg, tree, t, v, top);
    if (degree(seq.back()) > d) return seq;
    if (top > 1000000) throw Error("twisting divisors do not grow");
    top *= 2;
  }
}

long index_of_degree(const std::vector<MarkedDivisor>& seq, long a) {
  long out = -1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (degree(seq[i]) == a) out = static_cast<long>(i);
  return out;
}

namespace {

std::vector<PointDivisor> realize_all(const Markings& marks, std::size_t v, const std::vector<MarkedDivisor>& seq) {
  std::vector<PointDivisor> out;
  for (const auto& d : seq) out.push_back(marks.realize(v, d));
  return out;
}

void check_direction(const std::vector<MarkedDivisor>& seq, const std::vector<long>& a,
                     const std::vector<MarkedDivisor>& other_seq, const std::vector<long>& other_a, long b, long r,
                     const std::string& from, const std::string& to, std::vector<std::string>& failures) {
  for (long l = 0; l <= r; ++l) {
    long j = index_of_degree(seq, a[static_cast<std::size_t>(l)]);
    std::string where = "a_" + std::to_string(l) + " on " + from;
    if (j < 0 || j > b) {
      failures.push_back(where + " is attained beyond index b");
      continue;
    }
    long need = degree(other_seq[static_cast<std::size_t>(b - j)]);
    long got = other_a[static_cast<std::size_t>(r - l)];
    if (got < need)
      failures.push_back(where + " = " + std::to_string(a[static_cast<std::size_t>(l)]) + " needs a_" +
                         std::to_string(r - l) + " on " + to + " >= " + std::to_string(need) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace

ConditionIReport check_condition_I(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks) {
  validate_series(s, mg, marks);
  auto tree = contract(mg.graph);
  ConditionIReport rep;
  for (std::size_t t = 0; t < tree.edge_count(); ++t) {
    const auto& te = tree.edge(t);
    EdgeVanishing ev;
    ev.tree_edge = t;
    ev.v = te.a;
    ev.v_prime = te.b;
    ev.b = s.tuple.between(tree, te.a, te.b);
    ev.seq_v = extended_twisting_divisors(s, mg, tree, t, te.a, ev.b + 1);
    ev.seq_v_prime = extended_twisting_divisors(s, mg, tree, t, te.b, ev.b + 1);
    ev.a_v = multivanishing(s.spaces[te.a], realize_all(marks, te.a, ev.seq_v));
    ev.a_v_prime = multivanishing(s.spaces[te.b], realize_all(marks, te.b, ev.seq_v_prime));
    check_direction(ev.seq_v, ev.a_v, ev.seq_v_prime, ev.a_v_prime, ev.b, s.r, vname(mg, te.a), vname(mg, te.b),
                    ev.failures);
    check_direction(ev.seq_v_prime, ev.a_v_prime, ev.seq_v, ev.a_v, ev.b, s.r, vname(mg, te.b), vname(mg, te.a),
                    ev.failures);
    if (!ev.failures.empty()) rep.ok = false;
    rep.edges.push_back(std::move(ev));
  }
  return rep;
}

Pattern orbit_pattern(const std::vector<Vector>& u, std::size_t m) {
  if (m > 16) throw Error(Error::Kind::Unsupported, "too many coordinates for an orbit pattern");
  auto b = span_basis(u, m);
  const unsigned full = (1U << m) - 1;
  std::vector<long> dims(full + 1, 0);
  for (unsigned mask = 0; mask <= full; ++mask)
    dims[mask] = b.empty() ? 0 : static_cast<long>(restrict_to(b, m, mask).size());
  Pattern out;
  for (unsigned mask = 1; mask <= full; ++mask) {
    if (dims[mask] == 0) continue;
    bool hit = true;
    for (std::size_t j = 0; j < m && hit; ++j)
      if ((mask >> j & 1U) && dims[mask & ~(1U << j)] == dims[mask]) hit = false;
    if (!hit) continue;
    Support s;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1U) s.push_back(j);
    out.insert(std::move(s));
  }
  return out;
}

WeakGlueingReport check_weak_glueing(const PreLimitSeries& s, const MetricGraph& mg, const Markings& marks) {
  auto cond = check_condition_I(s, mg, marks);
  if (!cond.ok) throw Error("condition (I) does not hold");
  WeakGlueingReport rep;
  for (const auto& ev : cond.edges) {
    const std::size_t v = ev.v, vp = ev.v_prime;
    for (long j : critical_indices(ev.seq_v)) {
      if (j > ev.b) break;
      GlueingStep step;
      step.tree_edge = ev.tree_edge;
      step.j = j;
      const auto& dj = ev.seq_v[static_cast<std::size_t>(j)];
      const auto& dpj = ev.seq_v_prime[static_cast<std::size_t>(ev.b - j)];
      step.g = 0;
      for (long l = 0; l <= s.r; ++l)
        if (ev.a_v[static_cast<std::size_t>(l)] == degree(dj) &&
            ev.a_v_prime[static_cast<std::size_t>(s.r - l)] == degree(dpj))
          ++step.g;
      for (const auto& [e, c] : difference(ev.seq_v[static_cast<std::size_t>(j) + 1], dj)) step.edges.push_back(e);
      const std::size_t m = step.edges.size();

      auto image = [&](std::size_t at, const MarkedDivisor& req) {
        auto pd = marks.realize(at, req);
        auto sub = s.spaces[at].with_vanishing(pd);
        return span_basis(leading_coeff_map(sub, pd, points_of(marks, at, step.edges)).row_vectors(), m);
      };
      step.image_v = image(v, dj);
      step.image_v_prime = image(vp, dpj);

      if (step.g == 0) {
        step.status = GlueingStep::Status::NoRequirement;
      } else if (step.g == static_cast<long>(m)) {
        step.status = GlueingStep::Status::Trivial;
      } else {
        if (m > 3)
          throw Error(Error::Kind::Unsupported, "uncertified regime: increment of " + std::to_string(m) +
                                                    " points at j = " + std::to_string(j));
        auto lhs = achievable_patterns(step.image_v, m, step.g);
        auto rhs = achievable_patterns(step.image_v_prime, m, step.g);
        for (const auto& [p, gens] : lhs.by_pattern) step.patterns_v.push_back(p);
        for (const auto& [p, gens] : rhs.by_pattern) step.patterns_v_prime.push_back(p);
        step.status = GlueingStep::Status::Failed;
        for (const auto& [p, gens] : lhs.by_pattern) {
          auto it = rhs.by_pattern.find(p);
          if (it == rhs.by_pattern.end()) continue;
          step.status = GlueingStep::Status::Matched;
          step.witness = p;
          step.witness_v = gens;
          step.witness_v_prime = it->second;
          break;
        }
        if (step.status == GlueingStep::Status::Failed) rep.ok = false;
      }
      rep.steps.push_back(std::move(step));
    }
  }
  return rep;
}

void validate_mc(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks) {
  check_markings(marks, mg.graph);
  check_divisor(mc.gamma, mg);
  const std::size_t nv = mg.graph.vertex_count();
  if (mc.r < 0) throw Error("rank must be nonnegative");
  if (mc.divisors.size() != nv || mc.spaces.size() != nv) throw Error("series does not match the vertex count");
  for (std::size_t v = 0; v < nv; ++v) {
    if (degree(mc.divisors[v]) != mc.gamma.vertex[v])
      throw Error("degree of the divisor on " + vname(mg, v) + " differs from the Gamma-part at the vertex");
    if (static_cast<long>(mc.spaces[v].size()) != mc.r + 1)
      throw Error("space on " + vname(mg, v) + " does not have dimension r + 1");
    for (const auto& f : mc.spaces[v])
      if (f.is_zero()) throw Error("zero function in the space on " + vname(mg, v));
  }
}

MetrizedComplexSeries forgetful_map(const PreLimitSeries& s, const AdmissibleMultidegree& w, const MetricGraph& mg,
                                    const Markings& marks, const std::vector<std::size_t>& chosen) {
  validate_series(s, mg, marks);
  check_admissible(w, mg);
  const std::size_t nv = mg.graph.vertex_count();
  MetrizedComplexSeries mc;
  mc.r = s.r;
  mc.gamma = multidegree_to_divisor(w, mg);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& space = s.spaces[v];
    auto dv = relative_twist_divisor(w, s.tuple.w[v], mg, v);
    std::optional<RationalFunction> sv;
    PointDivisor zeros;
    std::vector<std::size_t> order;
    if (v < chosen.size()) order.push_back(chosen[v]);
    for (std::size_t i = 0; i < space.dimension(); ++i) order.push_back(i);
    for (std::size_t i : order) {
      if (i >= space.dimension()) throw Error("chosen section index out of range");
      try {
        zeros = div0(space.basis()[i], space.twist());
        sv = space.basis()[i];
        break;
      } catch (const Error& e) {
        if (e.kind() != Error::Kind::Unsupported || (v < chosen.size() && i == chosen[v])) throw;
      }
    }
    if (!sv) throw Error(Error::Kind::Unsupported, "no basis section on " + vname(mg, v) + " splits over Q");
    mc.divisors.push_back(zeros - marks.realize(v, dv));
    std::vector<RationalFunction> h;
    for (const auto& f : space.basis()) h.push_back(f / *sv);
    mc.spaces.push_back(std::move(h));
  }
  return mc;
}

PreLimitSeries inverse_forgetful(const MetrizedComplexSeries& mc, const TightTuple& tuple, const MetricGraph& mg,
                                 const Markings& marks) {
  validate_mc(mc, mg, marks);
  if (!mc.gamma.is_integral()) throw Error("Gamma-part is not integral");
  auto w0 = divisor_to_multidegree(mc.gamma, mg);
  if (tuple.w.size() != mg.graph.vertex_count() || !is_tight(tuple, mg)) throw Error("tuple is not tight");
  PreLimitSeries s;
  s.r = mc.r;
  s.tuple = tuple;
  for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v) {
    auto dv = relative_twist_divisor(w0, tuple.w[v], mg, v);
    s.spaces.emplace_back(mc.divisors[v] + marks.realize(v, dv), mc.spaces[v]);
  }
  validate_series(s, mg, marks);
  return s;
}

PreLimitSeries inverse_forgetful(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks) {
  validate_mc(mc, mg, marks);
  if (!mc.gamma.is_integral()) throw Error("Gamma-part is not integral");
  return inverse_forgetful(mc, tight_tuple(divisor_to_multidegree(mc.gamma, mg), mg), mg, marks);
}

namespace {

long integral_scale(const MetrizedComplexSeries& mc) {
  Integer l = 1;
  for (const auto& c : mc.gamma.edge) l = lcm(l, Integer(c.t.get_den()));
  return to_long(Rational(l));
}

}  // namespace

std::pair<MetricGraph, MetrizedComplexSeries> make_integral(const MetricGraph& mg, const MetrizedComplexSeries& mc) {
  long k = integral_scale(mc);
  MetricGraph out(mg.graph, mg.chain.scaled(k));
  MetrizedComplexSeries scaled = mc;
  for (auto& c : scaled.gamma.edge) c.t *= k;
  return {std::move(out), std::move(scaled)};
}

McGlueingResult check_mc_weak_glueing(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks) {
  validate_mc(mc, mg, marks);
  auto [img, imc] = make_integral(mg, mc);
  McGlueingResult res;
  res.scale = integral_scale(mc);
  auto pre = inverse_forgetful(imc, img, marks);
  res.condition_I = check_condition_I(pre, img, marks);
  if (res.condition_I.ok) res.glueing = check_weak_glueing(pre, img, marks);
  res.ok = res.condition_I.ok && res.glueing.ok;
  return res;
}

namespace {

void push_space(NormalForm& nf, long deg, const std::vector<RationalFunction>& fs, const Polynomial& h,
                const Polynomial& h_den) {
  Polynomial den(Rational(1));
  for (const auto& f : fs) {
    RationalFunction g(f.num() * h, f.den() * h_den);
    den = den * g.den().divmod(gcd(den, g.den())).first;
  }
  std::vector<Polynomial> nums;
  std::size_t width = 1;
  for (const auto& f : fs) {
    RationalFunction g(f.num() * h, f.den() * h_den);
    Polynomial n = g.num() * den.divmod(g.den()).first;
    width = std::max(width, static_cast<std::size_t>(n.degree() + 1));
    nums.push_back(std::move(n));
  }
  std::vector<Vector> rows;
  for (const auto& n : nums) {
    Vector row(width, 0);
    for (std::size_t i = 0; i < n.coeffs().size(); ++i) row[i] = n.coeffs()[i];
    rows.push_back(std::move(row));
  }
  Matrix m = Matrix::from_rows(rows, width);
  m.rref();
  nf.degrees.push_back(deg);
  nf.denominators.push_back(den);
  nf.spaces.push_back(std::move(m));
}

void split_h(const PointDivisor& d, Polynomial& h, Polynomial& h_den) {
  h = Polynomial(Rational(1));
  h_den = Polynomial(Rational(1));
  for (const auto& [p, c] : d) {
    if (p.infinite) continue;
    if (c > 0) h = h * Polynomial::linear_power(p.x, c);
    if (c < 0) h_den = h_den * Polynomial::linear_power(p.x, -c);
  }
}

}  // namespace

NormalForm normalize(const MetrizedComplexSeries& mc, const MetricGraph& mg, const Markings& marks) {
  validate_mc(mc, mg, marks);
  auto [img, imc] = make_integral(mg, mc);
  const long k = integral_scale(mc);
  SubdividedGraph sg(img);
  auto red = dhar_reduce(sg, to_subdivided(imc.gamma, sg), 0);
  NormalForm nf;
  nf.gamma = from_subdivided(red.divisor, sg);
  for (auto& c : nf.gamma.edge) c.t /= k;
  for (std::size_t v = 0; v < mg.graph.vertex_count(); ++v) {
    MarkedDivisor slopes;
    for (std::size_t e : mg.graph.incident(v))
      if (long s = slope(red.witness, sg, e, v); s != 0) slopes[e] = s;
    auto dv = mc.divisors[v] + marks.realize(v, slopes);
    Polynomial h, h_den;
    split_h(dv, h, h_den);
    push_space(nf, degree(dv), mc.spaces[v], h, h_den);
  }
  return nf;
}

NormalForm normalize(const PreLimitSeries& s) {
  NormalForm nf;
  for (const auto& space : s.spaces) {
    Polynomial h, h_den;
    split_h(space.twist(), h, h_den);
    push_space(nf, space.line_degree(), space.basis(), h, h_den);
  }
  return nf;
}

}  // namespace troplift
