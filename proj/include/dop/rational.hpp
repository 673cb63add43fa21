#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dop {

// Always canonical (lowest terms, positive denominator) once produced by the
// helpers below or by arithmetic.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "n", "n/d" with optional sign and surrounding whitespace.
Rational parse_rational(std::string_view text);

// "n" when the denominator is 1, "n/d" otherwise.
std::string to_string(const Rational& q);

// Canonical n/d; d must be nonzero.
inline Rational ratio(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact conversion of a finite double (dyadic rational).
Rational rational_from_double(double v);

}  // namespace dop
