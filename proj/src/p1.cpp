#include "troplift/p1.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace troplift {

std::string to_string(const Point& p) { return p.infinite ? "inf" : to_string(p.x); }

Point parse_point(std::string_view text) {
  if (text == "inf" || text == "infinity") return Point::inf();
  return Point::at(parse_rational(text));
}

long degree(const PointDivisor& d) {
  long s = 0;
  for (const auto& [p, c] : d) s += c;
  return s;
}

PointDivisor operator+(const PointDivisor& a, const PointDivisor& b) {
  PointDivisor out = a;
  for (const auto& [p, c] : b)
    if ((out[p] += c) == 0) out.erase(p);
  return out;
}

PointDivisor operator-(const PointDivisor& a, const PointDivisor& b) {
  PointDivisor out = a;
  for (const auto& [p, c] : b)
    if ((out[p] -= c) == 0) out.erase(p);
  return out;
}

bool is_effective(const PointDivisor& d) {
  return std::all_of(d.begin(), d.end(), [](const auto& kv) { return kv.second >= 0; });
}

bool dominates(const PointDivisor& a, const PointDivisor& b) { return is_effective(a - b); }

long ord_at(const RationalFunction& f, const Point& p) {
  if (f.is_zero()) throw Error("order of the zero function");
  if (p.infinite) return f.den().degree() - f.num().degree();
  return f.num().root_multiplicity(p.x) - f.den().root_multiplicity(p.x);
}

Rational value_at(const RationalFunction& f, const Point& p) {
  if (f.is_zero()) return 0;
  long k = ord_at(f, p);
  if (k < 0) throw Error("function has a pole at " + to_string(p));
  if (k > 0) return 0;
  if (p.infinite) return f.num().leading() / f.den().leading();
  return f.num()(p.x) / f.den()(p.x);
}

PointDivisor divisor_of(const RationalFunction& f) {
  if (f.is_zero()) throw Error("divisor of the zero function");
  PointDivisor out;
  Polynomial rest;
  for (const auto& [r, k] : rational_roots(f.num(), &rest)) out[Point::at(r)] += k;
  if (rest.degree() > 0)
    throw Error(Error::Kind::Unsupported, "numerator of " + f.to_string() + " does not split over Q");
  for (const auto& [r, k] : rational_roots(f.den(), &rest)) out[Point::at(r)] -= k;
  if (rest.degree() > 0)
    throw Error(Error::Kind::Unsupported, "denominator of " + f.to_string() + " does not split over Q");
  if (long k = ord_at(f, Point::inf()); k != 0) out[Point::inf()] = k;
  return out;
}

PointDivisor div0(const RationalFunction& s, const PointDivisor& d) {
  auto out = divisor_of(s) + d;
  if (!is_effective(out)) throw Error("not a section");
  return out;
}

FunctionSpace::FunctionSpace(PointDivisor d, std::vector<RationalFunction> basis)
    : d_(std::move(d)), basis_(std::move(basis)), h_(Rational(1)), h_den_(Rational(1)) {
  std::erase_if(d_, [](const auto& kv) { return kv.second == 0; });
  for (const auto& [p, c] : d_) {
    if (p.infinite) continue;
    if (c > 0) h_ = h_ * Polynomial::linear_power(p.x, c);
    if (c < 0) h_den_ = h_den_ * Polynomial::linear_power(p.x, -c);
  }
  for (const auto& s : basis_) {
    if (s.is_zero()) throw Error("zero function in a basis");
    if (!is_section(s)) throw Error("not a section: " + s.to_string());
  }
  if (rank(coordinate_matrix()) != basis_.size()) throw Error("basis is linearly dependent");
}

bool FunctionSpace::is_section(const RationalFunction& s) const {
  if (s.is_zero()) return true;
  RationalFunction p(s.num() * h_, s.den() * h_den_);
  return p.den().degree() == 0 && p.num().degree() <= line_degree();
}

Vector FunctionSpace::coordinates(const RationalFunction& s) const {
  if (!is_section(s)) throw Error("not a section: " + s.to_string());
  long n = line_degree() + 1;
  Vector out(static_cast<std::size_t>(std::max(n, 0L)), 0);
  if (s.is_zero()) return out;
  RationalFunction p(s.num() * h_, s.den() * h_den_);
  for (long i = 0; i <= p.num().degree(); ++i) out[static_cast<std::size_t>(i)] = p.num().coeff(i);
  return out;
}

RationalFunction FunctionSpace::from_coordinates(const Vector& c) const {
  return RationalFunction(Polynomial(c) * h_den_, h_);
}

Matrix FunctionSpace::coordinate_matrix() const {
  std::vector<Vector> rows;
  for (const auto& s : basis_) rows.push_back(coordinates(s));
  return Matrix::from_rows(rows, static_cast<std::size_t>(std::max(line_degree() + 1, 0L)));
}

bool FunctionSpace::contains(const RationalFunction& s) const {
  if (!is_section(s)) return false;
  if (s.is_zero()) return true;
  auto rows = coordinate_matrix().row_vectors();
  rows.push_back(coordinates(s));
  return rank(Matrix::from_rows(rows, static_cast<std::size_t>(line_degree() + 1))) == basis_.size();
}

Rational FunctionSpace::local_coefficient(const Vector& coords, const Point& p, long k) const {
  Polynomial poly(coords);
  if (p.infinite) return poly.coeff(line_degree() - k);
  return poly.shifted(p.x).coeff(k);
}

Matrix FunctionSpace::vanishing_conditions(const PointDivisor& req) const {
  std::vector<Vector> coords;
  for (const auto& s : basis_) coords.push_back(coordinates(s));
  std::vector<Vector> rows;
  for (const auto& [p, m] : req)
    for (long k = 0; k < m; ++k) {
      Vector row;
      for (const auto& c : coords) row.push_back(local_coefficient(c, p, k));
      rows.push_back(std::move(row));
    }
  return Matrix::from_rows(rows, basis_.size());
}

FunctionSpace FunctionSpace::with_vanishing(const PointDivisor& req) const {
  if (!is_effective(req)) throw Error("vanishing requirement must be effective");
  std::vector<Vector> coords;
  for (const auto& s : basis_) coords.push_back(coordinates(s));
  std::vector<RationalFunction> out;
  for (const auto& k : kernel(vanishing_conditions(req))) {
    Vector c(coords.empty() ? 0 : coords[0].size(), 0);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] != 0)
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += k[i] * coords[i][j];
    out.push_back(from_coordinates(c));
  }
  return FunctionSpace(d_, std::move(out));
}

bool FunctionSpace::same_space(const FunctionSpace& o) const {
  if (d_ != o.d_ || dimension() != o.dimension()) return false;
  auto a = coordinate_matrix();
  auto b = o.coordinate_matrix();
  a.rref();
  b.rref();
  return a == b;
}

Matrix leading_coeff_map(const FunctionSpace& v, const PointDivisor& d, const std::vector<Point>& points) {
  Matrix m(v.dimension(), points.size());
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    auto c = v.coordinates(v.basis()[i]);
    for (std::size_t j = 0; j < points.size(); ++j) {
      auto it = d.find(points[j]);
      m(i, j) = v.local_coefficient(c, points[j], it == d.end() ? 0 : it->second);
    }
  }
  return m;
}

std::vector<Rational> seed_pool(std::size_t count) {
  std::vector<Rational> out;
  if (const char* env = std::getenv("TROPLIFT_SEED_POOL")) {
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(parse_rational(item));
  }
  for (long p = 2; out.size() < count; ++p) {
    bool prime = true;
    for (long q = 2; q * q <= p; ++q)
      if (p % q == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(p);
  }
  out.resize(std::max(out.size(), count));
  return out;
}

namespace {

bool holds(const Genericity& g, const RationalFunction& f) {
  switch (g.kind) {
    case Genericity::Kind::Nonconstant:
      return !f.is_constant();
    case Genericity::Kind::NoZeroOrPole:
      return std::all_of(g.points.begin(), g.points.end(), [&](const Point& p) { return ord_at(f, p) == 0; });
    case Genericity::Kind::DistinctValues: {
      std::set<Rational> seen;
      for (const auto& p : g.points) {
        if (ord_at(f, p) < 0) return false;
        if (!seen.insert(value_at(f, p)).second) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

ConstructedFunction construct_function(const PointDivisor& orders, const std::vector<Genericity>& predicates,
                                       const std::vector<Point>& avoid) {
  if (orders.size() > 8) throw Error(Error::Kind::Unsupported, "at most 8 constrained points");
  for (const auto& g : predicates)
    for (const auto& p : g.points) {
      auto it = orders.find(p);
      long o = it == orders.end() ? 0 : it->second;
      if (g.kind == Genericity::Kind::NoZeroOrPole && o != 0) throw Error("unsatisfiable: prescribed order at a point required to be generic");
      if (g.kind == Genericity::Kind::DistinctValues && o < 0) throw Error("unsatisfiable: distinct values required at a pole");
    }

  RationalFunction base(Rational(1));
  long net = 0;
  for (const auto& [p, o] : orders) {
    net += o;
    if (!p.infinite && o != 0) base = base * RationalFunction(Polynomial::x() - Polynomial(p.x)).pow(o);
  }
  // Filler zeros (if net < 0) or poles (if net > 0) keep the total degree zero
  // and, when infinity is listed, its order as prescribed.
  std::set<Point> blocked(avoid.begin(), avoid.end());
  for (const auto& [p, o] : orders) blocked.insert(p);
  for (const auto& g : predicates) blocked.insert(g.points.begin(), g.points.end());

  bool inf_listed = orders.count(Point::inf()) > 0;
  const long forced = std::labs(net);
  const auto pool = seed_pool(forced + 512);
  for (std::size_t attempt = 0; attempt < 200; ++attempt) {
    long pairs = attempt == 0 ? 0 : 1 + static_cast<long>((attempt - 1) % 3);
    std::vector<Point> fresh;
    for (std::size_t i = attempt; fresh.size() < static_cast<std::size_t>(forced + 2 * pairs) && i < pool.size(); ++i) {
      Point p = Point::at(pool[i]);
      if (!blocked.count(p)) fresh.push_back(p);
    }
    RationalFunction f = base;
    PointDivisor div = orders;
    std::size_t k = 0;
    auto put = [&](long o) {
      const Point& p = fresh[k++];
      f = f * RationalFunction(Polynomial::x() - Polynomial(p.x)).pow(o);
      div[p] += o;
    };
    for (long i = 0; i < forced; ++i) put(net > 0 ? -1 : 1);
    for (long i = 0; i < pairs; ++i) {
      put(1);
      put(-1);
    }
    if (!inf_listed && ord_at(f, Point::inf()) != 0) throw Error("internal: order at infinity");
    std::erase_if(div, [](const auto& kv) { return kv.second == 0; });
    if (!std::all_of(predicates.begin(), predicates.end(), [&](const Genericity& g) { return holds(g, f); })) continue;
    for (const auto& [p, o] : orders)
      if (ord_at(f, p) != o) throw Error("internal: constructed function has the wrong order at " + to_string(p));
    return {f, div};
  }
  throw Error("unsatisfiable genericity predicates");
}

}  // namespace troplift
