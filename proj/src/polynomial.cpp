#include "dop/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dop/error.hpp"

namespace dop {

int exponent_degree(const Exponent& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

bool GradedOrder::operator()(const Exponent& a, const Exponent& b) const {
  int da = exponent_degree(a), db = exponent_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1) throw dimension_error("polynomial dimension must be positive");
}

Polynomial::Polynomial(int dim, const Rational& c) : Polynomial(dim) {
  if (c != 0) terms_.emplace(Exponent(dim, 0), c);
}

Polynomial Polynomial::variable(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw dimension_error("variable index out of range");
  Exponent e(dim, 0);
  e[axis] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponent& e, const Rational& c) {
  Polynomial p(static_cast<int>(e.size()));
  for (int v : e)
    if (v < 0) throw dimension_error("negative exponent");
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && exponent_degree(terms_.begin()->first) == 0);
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return kZeroDegree;
  return exponent_degree(terms_.rbegin()->first);
}

Rational Polynomial::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coeff(Exponent(dim_, 0)); }

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != dim_) throw dimension_error("exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_dim(const Polynomial& o) const {
  if (o.dim_ != dim_)
    throw dimension_error("polynomial dimension mismatch: " + std::to_string(dim_) + " vs " +
                          std::to_string(o.dim_));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw dimension_error("negative polynomial power");
  Polynomial result(dim_, Rational(1));
  Polynomial base(*this);
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw dimension_error("derivative axis out of range");
  Polynomial r(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exponent f = e;
    f[axis] -= 1;
    r.add_term(f, c * e[axis]);
  }
  return r;
}

Rational Polynomial::eval(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != dim_) throw dimension_error("evaluation point length mismatch");
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
      t *= pw;
    }
    sum += t;
  }
  return sum;
}

double Polynomial::eval(const double* point) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& sub) const {
  if (static_cast<int>(sub.size()) != dim_) throw dimension_error("substitution length mismatch");
  if (sub.empty()) throw dimension_error("empty substitution");
  int target = sub.front().dim();
  for (const auto& s : sub)
    if (s.dim() != target) throw dimension_error("substitution entries differ in dimension");
  std::vector<std::vector<Polynomial>> powers(dim_);
  Polynomial r(target);
  for (const auto& [e, c] : terms_) {
    Polynomial t(target, c);
    for (int i = 0; i < dim_; ++i) {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(Polynomial(target, Rational(1)));
      while (static_cast<int>(cache.size()) <= e[i]) cache.push_back(cache.back() * sub[i]);
      if (e[i] > 0) t = t * cache[e[i]];
    }
    r += t;
  }
  return r;
}

Polynomial Polynomial::homogeneous_part(int k) const {
  Polynomial r(dim_);
  for (const auto& [e, c] : terms_)
    if (exponent_degree(e) == k) r.terms_.emplace(e, c);
  return r;
}

Polynomial Polynomial::embed(int new_dim, int offset) const {
  if (offset < 0 || offset + dim_ > new_dim) throw dimension_error("embedding out of range");
  Polynomial r(new_dim);
  for (const auto& [e, c] : terms_) {
    Exponent f(new_dim, 0);
    std::copy(e.begin(), e.end(), f.begin() + offset);
    r.terms_.emplace(std::move(f), c);
  }
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  auto names = variable_names(dim_);
  std::ostringstream os;
  // Highest degree first; x before y within a degree.
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](auto a, auto b) { return exponent_degree(a->first) > exponent_degree(b->first); });
  bool first = true;
  for (const auto* term : order) {
    const auto& [e, c] = *term;
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    bool constant = exponent_degree(e) == 0;
    bool printed = false;
    if (constant || mag != 1) {
      os << to_string(mag);
      printed = true;
    }
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      if (printed) os << '*';
      os << names[i];
      if (e[i] > 1) os << '^' << e[i];
      printed = true;
    }
  }
  return os.str();
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim()) throw dimension_error("polynomial dimension mismatch in product");
  Polynomial r(a.dim());
  Exponent e(a.dim());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (int i = 0; i < a.dim(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

Polynomial poly_arith(ArithOp op, const Polynomial& lhs, const Polynomial& rhs) {
  switch (op) {
    case ArithOp::add:
      return lhs + rhs;
    case ArithOp::sub:
      return lhs - rhs;
    case ArithOp::mul:
      return lhs * rhs;
    case ArithOp::scale:
      if (!rhs.is_constant()) throw dimension_error("scale requires a constant right operand");
      return lhs * rhs.constant_term();
  }
  throw dimension_error("unknown arithmetic operation");
}

DivisionResult divide(const Polynomial& dividend, const Polynomial& divisor) {
  if (dividend.dim() != divisor.dim()) throw dimension_error("polynomial dimension mismatch in division");
  if (divisor.is_zero()) throw dimension_error("division by the zero polynomial");
  const int d = dividend.dim();
  const auto& [lead_e, lead_c] = *divisor.terms().rbegin();
  Polynomial q(d), r(d), rest(dividend);
  while (!rest.is_zero()) {
    auto [e, c] = *rest.terms().rbegin();
    bool divisible = true;
    for (int i = 0; i < d; ++i)
      if (e[i] < lead_e[i]) divisible = false;
    if (!divisible) {
      r.add_term(e, c);
      rest.add_term(e, -c);
      continue;
    }
    Exponent f(d);
    for (int i = 0; i < d; ++i) f[i] = e[i] - lead_e[i];
    Rational k = c / lead_c;
    q.add_term(f, k);
    rest -= Polynomial::monomial(f, k) * divisor;
  }
  return {std::move(q), std::move(r)};
}

std::optional<Polynomial> exact_quotient(const Polynomial& dividend, const Polynomial& divisor) {
  auto res = divide(dividend, divisor);
  if (!res.remainder.is_zero()) return std::nullopt;
  return std::move(res.quotient);
}

std::vector<std::string> variable_names(int dim) {
  if (dim <= 3) {
    static const char* base[] = {"x", "y", "z"};
    return std::vector<std::string>(base, base + dim);
  }
  std::vector<std::string> out;
  for (int i = 1; i <= dim; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim, const ParamMap& params)
      : text_(text), dim_(dim), params_(params), names_(variable_names(dim)) {}

  Polynomial run() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("cannot parse polynomial '" + std::string(text_) + "' at offset " +
                      std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        acc = acc * unary();
      } else if (peek('/')) {
        ++pos_;
        Polynomial den = unary();
        if (!den.is_constant() || den.is_zero()) fail("division by a non-constant or zero expression");
        acc *= Rational(1) / den.constant_term();
      } else if (starts_factor()) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer literal");
      int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      return base.pow(k);
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not supported; use num/den");
      Integer v(std::string(text_.substr(start, pos_ - start)), 10);
      return Polynomial(dim_, Rational(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return identifier(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Polynomial identifier(const std::string& name) {
    for (int i = 0; i < dim_; ++i)
      if (names_[i] == name) return Polynomial::variable(dim_, i);
    auto it = params_.find(name);
    if (it != params_.end()) return Polynomial(dim_, it->second);
    // Juxtaposed single-letter variables such as "xy" for d <= 3.
    if (dim_ <= 3) {
      Polynomial p(dim_, Rational(1));
      for (char ch : name) {
        int axis = -1;
        for (int i = 0; i < dim_; ++i)
          if (names_[i].size() == 1 && names_[i][0] == ch) axis = i;
        if (axis < 0) fail("unknown symbol '" + name + "'");
        p = p * Polynomial::variable(dim_, axis);
      }
      return p;
    }
    fail("unknown symbol '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int dim_;
  const ParamMap& params_;
  std::vector<std::string> names_;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, int dim, const ParamMap& params) {
  if (dim < 1) throw dimension_error("polynomial dimension must be positive");
  return Parser(text, dim, params).run();
}

Rational parse_constant(std::string_view text, const ParamMap& params) {
  // Dimension 1 with the variable name shadowed: constants never mention x.
  Polynomial p = parse_polynomial(text, 1, params);
  if (!p.is_constant()) throw parse_error("expression '" + std::string(text) + "' is not constant");
  return p.constant_term();
}

MonomialBasis::MonomialBasis(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
  if (dim < 1) throw dimension_error("basis dimension must be positive");
  if (max_degree < 0) throw dimension_error("basis degree must be non-negative");
  for (int k = 0; k <= max_degree; ++k) {
    starts_.push_back(exps_.size());
    // Degree-k exponents in descending lexicographic order.
    Exponent e(dim, 0);
    e[0] = k;
    for (;;) {
      exps_.push_back(e);
      // Predecessor in lex order among vectors summing to k.
      int i = dim - 2;
      while (i >= 0 && e[i] == 0) --i;
      if (i < 0) break;
      e[i] -= 1;
      int tail = 0;
      for (int j = i + 1; j < dim; ++j) {
        tail += e[j];
        e[j] = 0;
      }
      e[i + 1] = tail + 1;
    }
  }
  starts_.push_back(exps_.size());
  for (std::size_t k = 0; k < exps_.size(); ++k) index_.emplace(exps_[k], k);
}

std::size_t MonomialBasis::index_of(const Exponent& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? exps_.size() : it->second;
}

std::vector<Rational> MonomialBasis::coordinates(const Polynomial& p) const {
  if (p.dim() != dim_) throw dimension_error("basis dimension mismatch");
  std::vector<Rational> out(exps_.size());
  for (const auto& [e, c] : p.terms()) {
    std::size_t k = index_of(e);
    if (k == exps_.size()) throw dimension_error("polynomial exceeds the basis degree");
    out[k] = c;
  }
  return out;
}

Polynomial MonomialBasis::combine(const std::vector<Rational>& coords) const {
  if (coords.size() != exps_.size()) throw dimension_error("coordinate vector length mismatch");
  Polynomial p(dim_);
  for (std::size_t k = 0; k < coords.size(); ++k) p.add_term(exps_[k], coords[k]);
  return p;
}

Integer binomial(int n, int k) {
  Integer r;
  if (k < 0 || k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

NumericPolynomial::NumericPolynomial(const Polynomial& p) : dim_(p.dim()) {
  degree_ = std::max(0, p.total_degree());
  for (const auto& [e, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    exps_.insert(exps_.end(), e.begin(), e.end());
  }
}

double NumericPolynomial::operator()(const double* x) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    const int* e = &exps_[t * dim_];
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) v *= x[i];
    sum += v;
  }
  return sum;
}

double NumericPolynomial::eval_powers(const double* powers, int stride) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    const int* e = &exps_[t * dim_];
    for (int i = 0; i < dim_; ++i) v *= powers[i * stride + e[i]];
    sum += v;
  }
  return sum;
}

void fill_powers(const double* x, int dim, int max_degree, double* powers) {
  const int stride = max_degree + 1;
  for (int i = 0; i < dim; ++i) {
    double* row = powers + i * stride;
    row[0] = 1.0;
    for (int k = 1; k <= max_degree; ++k) row[k] = row[k - 1] * x[i];
  }
}

}  // namespace dop
