#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "troplift/linalg.hpp"
#include "troplift/poly.hpp"

namespace troplift {

/// A point of the projective line over Q: a rational number or infinity.
struct Point {
  bool infinite = false;
  Rational x = 0;

  static Point at(const Rational& a) { return {false, a}; }
  static Point inf() { return {true, 0}; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.infinite == b.infinite && (a.infinite || a.x == b.x);
  }
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (a.infinite != b.infinite) return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.infinite || a.x == b.x) return std::strong_ordering::equal;
    return a.x < b.x ? std::strong_ordering::less : std::strong_ordering::greater;
  }
};

std::string to_string(const Point& p);
/// "p/q" or "inf".
Point parse_point(std::string_view text);

using PointDivisor = std::map<Point, long>;

long degree(const PointDivisor& d);
PointDivisor operator+(const PointDivisor& a, const PointDivisor& b);
PointDivisor operator-(const PointDivisor& a, const PointDivisor& b);
bool is_effective(const PointDivisor& d);
/// a >= b coefficientwise.
bool dominates(const PointDivisor& a, const PointDivisor& b);

/// Order of vanishing (negative for poles); throws for the zero function.
long ord_at(const RationalFunction& f, const Point& p);
/// Value at a point where f has no pole.
Rational value_at(const RationalFunction& f, const Point& p);
/// div(f); throws Unsupported when numerator or denominator does not split over Q.
PointDivisor divisor_of(const RationalFunction& f);
/// div(s) + D for s a section of O(D); throws "not a section" otherwise.
PointDivisor div0(const RationalFunction& s, const PointDivisor& d);

/// A subspace V of H^0(P^1, O(D)), given by a basis of rational functions.
///
/// Sections are coordinatized by p = s * h_D with h_D the product of
/// (x - a)^D(a) over finite a; s lies in O(D) exactly when p is a
/// polynomial of degree at most deg D.
class FunctionSpace {
 public:
  FunctionSpace() = default;
  /// Throws if some basis element is not a section of O(D) or the basis is dependent.
  FunctionSpace(PointDivisor d, std::vector<RationalFunction> basis);

  const PointDivisor& twist() const { return d_; }
  const std::vector<RationalFunction>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }
  long line_degree() const { return degree(d_); }

  bool is_section(const RationalFunction& s) const;
  /// Coefficients of p (length deg D + 1); throws if s is not a section.
  Vector coordinates(const RationalFunction& s) const;
  RationalFunction from_coordinates(const Vector& c) const;
  /// Rows are the coordinates of the basis.
  Matrix coordinate_matrix() const;
  bool contains(const RationalFunction& s) const;

  /// V(-D_req): the sections s in V with div0(s) >= D_req.
  FunctionSpace with_vanishing(const PointDivisor& req) const;
  /// Coordinates (on the basis of V) of the linear conditions imposed by D_req.
  Matrix vanishing_conditions(const PointDivisor& req) const;

  /// Taylor coefficient of p at P of order k (at infinity: coefficient of x^(deg D - k)).
  Rational local_coefficient(const Vector& coords, const Point& p, long k) const;

  /// Same span, same twist divisor.
  bool same_space(const FunctionSpace& o) const;

 private:
  PointDivisor d_;
  std::vector<RationalFunction> basis_;
  Polynomial h_;  // h_D numerator/denominator split
  Polynomial h_den_;
};

/// Rows = basis of V, columns = points; entry = leading coefficient of the
/// section at the point, at order D(point).
Matrix leading_coeff_map(const FunctionSpace& v, const PointDivisor& d, const std::vector<Point>& points);

/// Constraints for construct_function beyond the prescribed orders.
struct Genericity {
  enum class Kind { DistinctValues, NoZeroOrPole, Nonconstant };
  Kind kind;
  std::vector<Point> points;
};

struct ConstructedFunction {
  RationalFunction f;
  PointDivisor divisor;  // full divisor, including filler zeros and poles
};

/// A rational function with exactly the given orders at the listed points
/// and satisfying the predicates. Filler zeros and poles go to "generic"
/// points drawn in order from the prime sequence 2, 3, 5, ... (or the pool
/// in TROPLIFT_SEED_POOL), skipping listed and avoided points.
ConstructedFunction construct_function(const PointDivisor& orders, const std::vector<Genericity>& predicates = {},
                                       const std::vector<Point>& avoid = {});

/// The deterministic constant pool.
std::vector<Rational> seed_pool(std::size_t count);

}  // namespace troplift
