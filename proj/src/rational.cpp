#include "dop/rational.hpp"

#include <cctype>
#include <cmath>

#include "dop/error.hpp"

namespace dop {

namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = strip(text);
  bool negative = false;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string body = s.substr(pos);
  std::size_t slash = body.find('/');
  std::string num = body.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw parse_error("malformed rational: '" + std::string(text) + "'");
  Integer n(num, 10), d(den, 10);
  if (d == 0) throw parse_error("zero denominator in rational: '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw parameter_error("non-finite value has no rational form");
  Rational q(v);
  q.canonicalize();
  return q;
}

}  // namespace dop
