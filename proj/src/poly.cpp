#include "troplift/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace troplift {

Polynomial::Polynomial(Rational c) {
  c.canonicalize();
  if (c != 0) c_.push_back(std::move(c));
}

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::linear_power(const Rational& a, long k) {
  if (k < 0) throw Error("negative exponent");
  Polynomial out(Rational(1));
  Polynomial lin(std::vector<Rational>{-a, 1});
  for (long i = 0; i < k; ++i) out = out * lin;
  return out;
}

Rational Polynomial::coeff(long i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<std::size_t>(i)];
}

Rational Polynomial::operator()(const Rational& at) const {
  Rational v = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * at + *it;
  return v;
}

Polynomial Polynomial::shifted(const Rational& a) const {
  // Horner in the ring Q[t]: p(a + t).
  Polynomial t_plus_a(std::vector<Rational>{a, 1});
  Polynomial out;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) out = out * t_plus_a + Polynomial(*it);
  return out;
}

long Polynomial::root_multiplicity(const Rational& a) const {
  if (is_zero()) throw Error("order of the zero polynomial");
  auto s = shifted(a);
  long k = 0;
  while (s.coeffs()[static_cast<std::size_t>(k)] == 0) ++k;
  return k;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> c = c_;
  Rational l = c.back();
  for (auto& x : c) x /= l;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> c(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<Rational> c = c_;
  for (auto& x : c) x = -x;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> c(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& o) const {
  if (o.is_zero()) throw Error("division by the zero polynomial");
  std::vector<Rational> r = c_;
  std::vector<Rational> q(c_.size() >= o.c_.size() ? c_.size() - o.c_.size() + 1 : 0, 0);
  const std::size_t m = o.c_.size();
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational f = r[k + m - 1] / o.c_.back();
    q[k] = f;
    for (std::size_t j = 0; j < m; ++j) r[k + j] -= f * o.c_[j];
  }
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

namespace {

std::string coeff_text(const Rational& c) { return to_string(c); }

}  // namespace

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (long i = degree(); i >= 0; --i) {
    Rational c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? "-" : "+";
    std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
    if (mono.empty())
      out += coeff_text(a);
    else if (a == 1)
      out += mono;
    else
      out += coeff_text(a) + "*" + mono;
  }
  return out;
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

std::vector<Integer> divisors_of(Integer n) {
  if (n < 0) n = -n;
  std::map<Integer, long> primes;
  Integer m = n;
  for (Integer p = 2; p * p <= m; ++p)
    while (m % p == 0) {
      ++primes[p];
      m /= p;
    }
  if (m > 1) ++primes[m];
  std::vector<Integer> out{1};
  for (const auto& [p, k] : primes) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (long i = 0; i < k; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<Rational, long>> rational_roots(const Polynomial& p, Polynomial* rest) {
  if (p.is_zero()) throw Error("roots of the zero polynomial");
  std::vector<std::pair<Rational, long>> out;
  Polynomial cur = p;
  if (long k = cur.root_multiplicity(0); k > 0) {
    out.push_back({0, k});
    cur = cur.divmod(Polynomial::linear_power(0, k)).first;
  }
  if (cur.degree() > 0) {
    // Clear denominators, then apply the rational root theorem.
    Integer l = 1;
    for (const auto& c : cur.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    Integer a0 = Rational(cur.coeffs().front() * l).get_num();
    Integer an = Rational(cur.coeffs().back() * l).get_num();
    auto ps = divisors_of(a0);
    auto qs = divisors_of(an);
    std::vector<Rational> candidates;
    for (const auto& pp : ps)
      for (const auto& qq : qs) {
        Rational r(pp, qq);
        r.canonicalize();
        candidates.push_back(r);
        candidates.push_back(-r);
      }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& r : candidates) {
      if (cur.degree() <= 0) break;
      if (cur(r) != 0) continue;
      long k = cur.root_multiplicity(r);
      out.push_back({r, k});
      cur = cur.divmod(Polynomial::linear_power(r, k)).first;
    }
  }
  std::sort(out.begin(), out.end());
  if (rest) *rest = cur;
  return out;
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error("zero denominator");
  if (num.is_zero()) {
    num_ = Polynomial();
    den_ = Polynomial(Rational(1));
    return;
  }
  Polynomial g = gcd(num, den);
  num = num.divmod(g).first;
  den = den.divmod(g).first;
  Rational l = den.leading();
  num_ = num * Polynomial(Rational(1 / l));
  den_ = den.monic();
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) throw Error("division by the zero function");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::pow(long k) const {
  RationalFunction base = k < 0 ? RationalFunction(Rational(1)) / *this : *this;
  RationalFunction out(Rational(1));
  for (long i = 0; i < (k < 0 ? -k : k); ++i) out = out * base;
  return out;
}

std::string RationalFunction::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  std::string n = num_.to_string();
  if (num_.degree() >= 1 && n.find_first_of("+-", 1) != std::string::npos) n = "(" + n + ")";
  return n + "/(" + den_.to_string() + ")";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RationalFunction parse() {
    auto f = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw Error(Error::Kind::Malformed, "cannot parse rational function '" + std::string(s_) + "': " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_primary() {
    skip();
    return i_ < s_.size() && (s_[i_] == 'x' || s_[i_] == '(' || std::isdigit(static_cast<unsigned char>(s_[i_])));
  }

  RationalFunction expr() {
    RationalFunction f = term();
    for (;;) {
      if (peek('+')) {
        ++i_;
        f = f + term();
      } else if (peek('-')) {
        ++i_;
        f = f - term();
      } else {
        return f;
      }
    }
  }

  RationalFunction term() {
    RationalFunction f = power();
    for (;;) {
      if (peek('*')) {
        ++i_;
        f = f * power();
      } else if (peek('/')) {
        ++i_;
        auto d = power();
        if (d.is_zero()) fail("division by zero");
        f = f / d;
      } else if (starts_primary()) {
        f = f * power();  // implicit product, e.g. 2x or (x-1)(x-2)
      } else {
        return f;
      }
    }
  }

  RationalFunction power() {
    if (peek('-')) {
      ++i_;
      return RationalFunction(Rational(-1)) * power();
    }
    RationalFunction base = primary();
    if (peek('^')) {
      ++i_;
      skip();
      bool neg = false;
      if (peek('-')) {
        neg = true;
        ++i_;
      }
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) fail("expected an integer exponent");
      long k = std::stol(std::string(s_.substr(start, i_ - start)));
      if (neg && base.is_zero()) fail("division by zero");
      return base.pow(neg ? -k : k);
    }
    return base;
  }

  RationalFunction primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char c = s_[i_];
    if (c == 'x') {
      ++i_;
      return RationalFunction(Polynomial::x());
    }
    if (c == '(') {
      ++i_;
      auto f = expr();
      if (!peek(')')) fail("missing ')'");
      ++i_;
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return RationalFunction(Rational(Integer(std::string(s_.substr(start, i_ - start)), 10)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

RationalFunction parse_rational_function(std::string_view text) { return Parser(text).parse(); }

}  // namespace troplift
