#include "dop/boundary.hpp"

#include "dop/error.hpp"

namespace dop {

void BoundarySpec::validate() const {
  if (dim < 1) throw parameter_error("boundary dimension must be positive");
  if (static_cast<int>(witness.size()) != dim) throw parameter_error("witness length must equal the dimension");
  int total = 0;
  for (const auto& f : factors) {
    if (f.dim() != dim) throw parameter_error("boundary factor dimension mismatch");
    if (f.total_degree() < 1) throw parameter_error("boundary factor of degree 0: " + f.str());
    if (f.eval(witness) <= 0)
      throw parameter_error("boundary factor " + f.str() + " is not positive at the interior witness");
    total += f.total_degree();
  }
  if (total > 2 * dim)
    throw parameter_error("boundary degree " + std::to_string(total) + " exceeds 2d = " + std::to_string(2 * dim));
}

Polynomial BoundarySpec::product() const {
  Polynomial p(dim, Rational(1));
  for (const auto& f : factors) p = p * f;
  return p;
}

AdmissibilityLayout admissibility_layout(const BoundarySpec& spec) {
  AdmissibilityLayout l;
  l.dim = spec.dim;
  l.factor_count = spec.factors.size();
  l.quad_size = MonomialBasis(spec.dim, 2).size();
  l.lin_size = MonomialBasis(spec.dim, 1).size();
  return l;
}

namespace {

std::vector<std::pair<int, int>> upper_entries(int d) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out.emplace_back(i, j);
  return out;
}

}  // namespace

RationalMatrix build_admissibility_system(const BoundarySpec& spec) {
  spec.validate();
  const int d = spec.dim;
  const auto layout = admissibility_layout(spec);
  MonomialBasis quad(d, 2), lin(d, 1);
  const auto entries = upper_entries(d);

  // Row blocks: one per (factor, axis), sized by MonomialBasis(d, deg F + 1).
  std::vector<std::size_t> row_offset;
  std::vector<MonomialBasis> row_basis;
  std::size_t rows = 0;
  for (const auto& f : spec.factors) {
    MonomialBasis rb(d, f.total_degree() + 1);
    for (int i = 0; i < d; ++i) {
      row_offset.push_back(rows);
      row_basis.push_back(rb);
      rows += rb.size();
    }
  }
  RationalMatrix m(rows, layout.unknowns());
  auto put = [&](std::size_t block, std::size_t col, const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) m(row_offset[block] + row_basis[block].index_of(e), col) += c;
  };
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    std::vector<Polynomial> grad;
    for (int j = 0; j < d; ++j) grad.push_back(f.derivative(j));
    for (std::size_t en = 0; en < entries.size(); ++en) {
      auto [a, b] = entries[en];
      for (std::size_t q = 0; q < quad.size(); ++q) {
        std::size_t col = en * quad.size() + q;
        Polynomial mono = quad.monomial(q);
        put(k * d + a, col, mono * grad[b]);
        if (a != b) put(k * d + b, col, mono * grad[a]);
      }
    }
    for (int i = 0; i < d; ++i)
      for (std::size_t q = 0; q < lin.size(); ++q) {
        std::size_t col = layout.g_unknowns() + (k * d + i) * lin.size() + q;
        put(k * d + i, col, -(lin.monomial(q) * f));
      }
  }
  return m;
}

std::optional<std::vector<std::vector<Polynomial>>> boundary_s(const CoMetric& g, const BoundarySpec& spec) {
  const int d = spec.dim;
  if (g.dim() != d) throw dimension_error("cometric/boundary dimension mismatch");
  std::vector<std::vector<Polynomial>> out;
  for (const auto& f : spec.factors) {
    std::vector<Polynomial> per_axis;
    for (int i = 0; i < d; ++i) {
      Polynomial num(d);
      for (int j = 0; j < d; ++j) num += g(i, j) * f.derivative(j);
      auto q = exact_quotient(num, f);
      if (!q || q->total_degree() > 1) return std::nullopt;
      per_axis.push_back(std::move(*q));
    }
    out.push_back(std::move(per_axis));
  }
  return out;
}

Polynomial boundary_residual(const CoMetric& g, const Polynomial& factor, int axis, const Polynomial& s) {
  Polynomial r(g.dim());
  for (int j = 0; j < g.dim(); ++j) r += g(axis, j) * factor.derivative(j);
  return r - s * factor;
}

AdmissibilitySolution solve_admissibility(const BoundarySpec& spec) {
  const int d = spec.dim;
  const auto layout = admissibility_layout(spec);
  auto kernel = rational_nullspace(build_admissibility_system(spec));
  AdmissibilitySolution sol;
  if (kernel.empty()) return sol;
  const std::size_t ng = layout.g_unknowns();
  RationalMatrix proj(kernel.size(), ng);
  for (std::size_t r = 0; r < kernel.size(); ++r)
    for (std::size_t c = 0; c < ng; ++c) proj(r, c) = kernel[r][c];
  auto red = rref(proj);
  MonomialBasis quad(d, 2);
  const auto entries = upper_entries(d);
  for (std::size_t r = 0; r < red.pivots.size(); ++r) {
    Integer l = 1, g = 0;
    for (std::size_t c = 0; c < ng; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), red.reduced(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < ng; ++c) {
      Rational v = red.reduced(r, c) * l;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    }
    Rational scale = Rational(l) / Rational(g);
    CoMetric metric(d);
    for (std::size_t en = 0; en < entries.size(); ++en) {
      Polynomial p(d);
      for (std::size_t q = 0; q < quad.size(); ++q) p.add_term(quad[q], red.reduced(r, en * quad.size() + q) * scale);
      metric.set(entries[en].first, entries[en].second, p);
    }
    auto s = boundary_s(metric, spec);
    if (!s) throw inconsistency_error("projected nullspace element fails the boundary equations");
    sol.g_basis.push_back(std::move(metric));
    sol.s_for.push_back(std::move(*s));
  }
  return sol;
}

EllipticityReport check_ellipticity(const CoMetric& g, const std::vector<std::vector<Rational>>& samples) {
  EllipticityReport rep;
  if (samples.empty()) throw parameter_error("ellipticity check needs at least one sample");
  std::vector<Polynomial> minors;
  for (int k = 1; k <= g.dim(); ++k) minors.push_back(g.leading_minor(k));
  for (const auto& pt : samples) {
    ++rep.checked;
    for (const auto& m : minors) {
      if (m.eval(pt) <= 0) {
        rep.first_failure = pt;
        rep.elliptic = false;
        return rep;
      }
    }
  }
  rep.elliptic = true;
  return rep;
}

Box default_box(const BoundarySpec& spec) {
  Box box;
  for (const auto& w : spec.witness) box.emplace_back(w - 1, w + 1);
  return box;
}

std::vector<std::vector<Rational>> interior_grid(const BoundarySpec& spec, const Box& box, int per_axis) {
  const int d = spec.dim;
  if (static_cast<int>(box.size()) != d) throw dimension_error("box dimension mismatch");
  if (per_axis < 1) throw parameter_error("grid needs at least one point per axis");
  std::vector<std::vector<Rational>> out;
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<Rational> pt(d);
    for (int i = 0; i < d; ++i)
      pt[i] = box[i].first + (box[i].second - box[i].first) * ratio(2 * idx[i] + 1, 2 * per_axis);
    bool inside = true;
    for (const auto& f : spec.factors)
      if (f.eval(pt) <= 0) inside = false;
    if (inside) out.push_back(std::move(pt));
    int a = 0;
    while (a < d && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

DivisibilityReport det_divisibility_check(const CoMetric& g, const BoundarySpec& spec) {
  Polynomial det = g.determinant();
  if (det.is_zero()) throw inconsistency_error("det(g) is identically zero: degenerate metric");
  auto res = divide(det, spec.product());
  DivisibilityReport rep;
  rep.divides = res.remainder.is_zero();
  rep.quotient = res.quotient;
  rep.quotient_degree = rep.divides ? res.quotient.total_degree() : -1;
  return rep;
}

}  // namespace dop
