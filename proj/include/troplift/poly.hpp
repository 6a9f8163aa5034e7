#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "troplift/rational.hpp"

namespace troplift {

/// Univariate polynomial over Q; coefficients from the constant term up,
/// with no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Rational c);  // NOLINT: constants convert implicitly
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial x() { return Polynomial(std::vector<Rational>{0, 1}); }
  /// (x - a)^k
  static Polynomial linear_power(const Rational& a, long k);

  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(long i) const;
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  Rational operator()(const Rational& at) const;

  /// Coefficients of p(a + t) as a polynomial in t.
  Polynomial shifted(const Rational& a) const;
  /// Multiplicity of a as a root (0 for nonroots; throws on the zero polynomial).
  long root_multiplicity(const Rational& a) const;
  Polynomial monic() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  /// Quotient and remainder.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& o) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

Polynomial gcd(Polynomial a, Polynomial b);

/// Rational roots with multiplicity; the remaining factor has no rational roots.
std::vector<std::pair<Rational, long>> rational_roots(const Polynomial& p, Polynomial* rest = nullptr);

/// num/den with gcd(num, den) = 1 and den monic.
class RationalFunction {
 public:
  RationalFunction() : num_(Rational(0)), den_(Rational(1)) {}
  RationalFunction(Rational c) : num_(std::move(c)), den_(Rational(1)) {}  // NOLINT
  RationalFunction(Polynomial num, Polynomial den = Polynomial(Rational(1)));  // NOLINT

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction pow(long k) const;

  std::string to_string() const;

  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

 private:
  Polynomial num_, den_;
};

/// Parses expressions over x with + - * / ^ (integer exponents), parentheses
/// and integer constants, e.g. "(x-2)*(x-3)/(x-1)^2" or "3/2*x^2-1".
RationalFunction parse_rational_function(std::string_view text);

}  // namespace troplift
