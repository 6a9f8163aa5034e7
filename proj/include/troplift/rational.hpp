#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace troplift {

using Rational = mpq_class;
using Integer = mpz_class;

/// Error raised for malformed input or violated preconditions.
class Error : public std::runtime_error {
 public:
  enum class Kind { Malformed, Precondition, Unsupported };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  explicit Error(const std::string& what) : Error(Kind::Precondition, what) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Parses "p", "p/q" or "-p/q" into a canonical rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Exact conversion; throws if q is not an integer or does not fit a long.
long to_long(const Rational& q);

}  // namespace troplift
