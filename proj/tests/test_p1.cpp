#include <random>

#include "doctest.h"
#include "troplift/p1.hpp"

using namespace troplift;

namespace {

RationalFunction rf(const char* s) { return parse_rational_function(s); }
Point pt(long a) { return Point::at(a); }

}  // namespace

TEST_CASE("polynomial arithmetic") {
  Polynomial p(std::vector<Rational>{-2, 0, 1});
  auto [q, r] = p.divmod(Polynomial(std::vector<Rational>{-1, 1}));
  CHECK(q == Polynomial(std::vector<Rational>{1, 1}));
  CHECK(r == Polynomial(Rational(-1)));
  CHECK(p.shifted(1) == Polynomial(std::vector<Rational>{-1, 2, 1}));
  CHECK(Polynomial::linear_power(3, 2).root_multiplicity(3) == 2);
  CHECK(gcd(Polynomial::linear_power(1, 2) * Polynomial::linear_power(2, 1), Polynomial::linear_power(1, 1) *
                                                                                Polynomial::linear_power(5, 3)) ==
        Polynomial::linear_power(1, 1));
  Polynomial rest;
  auto roots = rational_roots(Polynomial(std::vector<Rational>{Rational(-1, 2), Rational(3, 2), -1}) *
                                  Polynomial(std::vector<Rational>{2, 0, 1}),
                              &rest);
  CHECK(roots == std::vector<std::pair<Rational, long>>{{Rational(1, 2), 1}, {1, 1}});
  CHECK(rest.degree() == 2);
}

TEST_CASE("parsing and printing rational functions") {
  auto f = rf("(x-2)*(x-3)/(x-1)^2");
  CHECK(f.num() == Polynomial(std::vector<Rational>{6, -5, 1}));
  CHECK(f.den() == Polynomial(std::vector<Rational>{1, -2, 1}));
  CHECK(rf(f.to_string().c_str()) == f);
  CHECK(rf("3/2*x^2-1") == RationalFunction(Polynomial(std::vector<Rational>{-1, 0, Rational(3, 2)})));
  CHECK(rf("2x(x-1)") == rf("2*x^2-2*x"));
  CHECK(rf("x^-1") == RationalFunction(Rational(1)) / rf("x"));
  CHECK(rf("(x^2-1)/(x-1)") == rf("x+1"));
  CHECK(rf("-x") == rf("0-x"));
  CHECK_THROWS_AS(rf("x+"), Error);
  CHECK_THROWS_AS(rf("1/(x-x)"), Error);
  CHECK_THROWS_AS(rf("y"), Error);
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    std::vector<Rational> n, d;
    for (int k = 0; k < 3; ++k) n.push_back(Rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3));
    for (int k = 0; k < 2; ++k) d.push_back(Rational(static_cast<long>(rng() % 5) - 2, 1));
    d.push_back(1);
    RationalFunction g{Polynomial(n), Polynomial(d)};
    CHECK(rf(g.to_string().c_str()) == g);
  }
}

TEST_CASE("orders, divisors and values") {
  auto f = rf("x*(x-1)/(x-2)^2");
  CHECK(ord_at(f, pt(0)) == 1);
  CHECK(ord_at(f, pt(2)) == -2);
  CHECK(ord_at(f, Point::inf()) == 0);
  CHECK(divisor_of(f) == PointDivisor{{pt(0), 1}, {pt(1), 1}, {pt(2), -2}});
  CHECK(degree(divisor_of(rf("(x-5)^3/(x+1)"))) == 0);
  CHECK(divisor_of(rf("x"))[Point::inf()] == -1);
  CHECK(value_at(f, Point::inf()) == 1);
  CHECK(value_at(rf("(x-2)/(x-1)"), pt(3)) == Rational(1, 2));
  CHECK_THROWS_AS(divisor_of(rf("x^2+1")), Error);
  CHECK(parse_point("inf") == Point::inf());
  CHECK(parse_point("-3/4") == Point::at(Rational(-3, 4)));
  CHECK(Point::at(5) < Point::inf());
}

TEST_CASE("div0 on sections") {
  // P = 0, Q = 1, R = 2 on the first component; P' = 0, Q' = 1, R' = 2 on the second.
  CHECK(div0(rf("x/(x-2)"), {{pt(2), 2}}) == PointDivisor{{pt(0), 1}, {pt(2), 1}});
  CHECK(div0(rf("1"), {{pt(4), 3}}) == PointDivisor{{pt(4), 3}});
  CHECK(div0(rf("7"), {{pt(1), 1}}) == PointDivisor{{pt(1), 1}});
  CHECK_THROWS_WITH(div0(rf("1/x"), {}), "not a section");
}

TEST_CASE("function spaces and vanishing") {
  FunctionSpace v({{pt(2), 2}}, {rf("x/(x-2)"), rf("x*(x-1)/(x-2)^2")});
  CHECK(v.dimension() == 2);
  auto sub = v.with_vanishing({{pt(0), 1}, {pt(1), 1}});
  CHECK(sub.dimension() == 1);
  CHECK(sub.contains(rf("x*(x-1)/(x-2)^2")));
  CHECK(v.with_vanishing({}).same_space(v));
  CHECK(v.with_vanishing({{pt(0), 1}}).same_space(v));

  FunctionSpace w({{pt(1), 1}}, {rf("(x-2)/(x-1)"), rf("1")});
  auto wq = w.with_vanishing({{pt(1), 1}});
  CHECK(wq.dimension() == 1);
  CHECK(wq.contains(rf("3")));

  CHECK_THROWS_AS(FunctionSpace({}, {rf("x")}), Error);
  CHECK_THROWS_AS(FunctionSpace({{pt(1), 1}}, {rf("1"), rf("2")}), Error);

  // Full space of O(2 inf) is the quadratics; vanishing at 0 and 1 leaves x(x-1).
  FunctionSpace quad({{Point::inf(), 2}}, {rf("1"), rf("x"), rf("x^2")});
  auto v01 = quad.with_vanishing({{pt(0), 1}, {pt(1), 1}});
  CHECK(v01.dimension() == 1);
  CHECK(v01.contains(rf("x^2-x")));
  CHECK(quad.with_vanishing({{Point::inf(), 1}}).dimension() == 2);
  CHECK(quad.with_vanishing({{Point::inf(), 2}}).contains(rf("5")));
}

TEST_CASE("leading coefficient maps") {
  FunctionSpace v({{pt(2), 2}}, {rf("x/(x-2)"), rf("x*(x-1)/(x-2)^2")});
  auto m = leading_coeff_map(v, {}, {pt(0), pt(1)});
  for (std::size_t i = 0; i < m.rows(); ++i) CHECK(m(i, 0) == 0);
  CHECK(m(0, 1) != 0);

  FunctionSpace w({{pt(1), 1}}, {rf("1")});
  auto m2 = leading_coeff_map(w, {{pt(1), 1}}, {pt(0), pt(1)});
  CHECK(m2(0, 0) != 0);
  CHECK(m2(0, 1) != 0);
}

TEST_CASE("vanishing is monotone and the leading map cuts out the next step") {
  std::mt19937 rng(41);
  const std::vector<Point> pts{pt(0), pt(1), pt(-1), Point::inf()};
  for (int trial = 0; trial < 40; ++trial) {
    long deg = 3 + trial % 3;
    std::vector<RationalFunction> basis;
    for (long i = 0; i <= deg; ++i) basis.push_back(RationalFunction(Polynomial::linear_power(3, i)));
    FunctionSpace full({{Point::inf(), deg}}, basis);
    PointDivisor d;
    for (const auto& p : pts) d[p] = static_cast<long>(rng() % 2);
    std::erase_if(d, [](const auto& kv) { return kv.second == 0; });
    PointDivisor inc;
    for (const auto& p : pts)
      if (rng() % 2) inc[p] = 1;
    auto vd = full.with_vanishing(d);
    auto vnext = full.with_vanishing(d + inc);
    CHECK(vnext.dimension() <= vd.dimension());
    CHECK(vd.dimension() - vnext.dimension() <= static_cast<std::size_t>(degree(inc)));
    for (const auto& s : vnext.basis()) CHECK(vd.contains(s));

    std::vector<Point> inc_pts;
    for (const auto& [p, c] : inc) inc_pts.push_back(p);
    auto lm = leading_coeff_map(vd, d, inc_pts);
    auto ker = kernel(lm.transpose());
    CHECK(ker.size() == vnext.dimension());
    for (const auto& k : ker) {
      RationalFunction s;
      for (std::size_t i = 0; i < k.size(); ++i) s = s + RationalFunction(k[i]) * vd.basis()[i];
      if (!s.is_zero()) CHECK(vnext.contains(s));
    }
  }
}

TEST_CASE("constructing functions with prescribed orders") {
  CHECK(construct_function({}).f == rf("1"));
  auto forced = construct_function({{pt(0), 1}, {pt(1), -1}});
  CHECK(forced.f == rf("x/(x-1)"));
  auto f1 = construct_function({{pt(0), 1}, {pt(1), 1}, {pt(2), -2}});
  CHECK(divisor_of(f1.f) == PointDivisor{{pt(0), 1}, {pt(1), 1}, {pt(2), -2}});

  auto g = construct_function({{pt(0), 2}}, {{Genericity::Kind::DistinctValues, {pt(1), pt(-1)}}});
  CHECK(ord_at(g.f, pt(0)) == 2);
  CHECK(value_at(g.f, pt(1)) != value_at(g.f, pt(-1)));
  CHECK(degree(g.divisor) == 0);
  CHECK(divisor_of(g.f) == g.divisor);

  auto nc = construct_function({}, {{Genericity::Kind::Nonconstant, {}}}, {pt(2)});
  CHECK_FALSE(nc.f.is_constant());
  CHECK(ord_at(nc.f, pt(2)) == 0);

  auto at_inf = construct_function({{Point::inf(), 2}, {pt(0), -1}});
  CHECK(ord_at(at_inf.f, Point::inf()) == 2);
  CHECK(ord_at(at_inf.f, pt(0)) == -1);

  CHECK_THROWS_AS(construct_function({{pt(0), 1}}, {{Genericity::Kind::NoZeroOrPole, {pt(0)}}}), Error);
}
