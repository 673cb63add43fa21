#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dop/boundary.hpp"
#include "dop/catalog.hpp"
#include "dop/linsolve.hpp"
#include "dop/polynomial.hpp"

namespace dop {

constexpr std::uint64_t kDefaultSeed = 0xD0F5EEDDull;
// Monte Carlo proposals per chunk; each chunk owns an independent stream.
constexpr std::size_t kChunkSize = 65536;

// splitmix64: state += 0x9E3779B97F4A7C15, then the standard finalizer.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // 53-bit uniform in [0, 1).
  double uniform();
  // Box-Muller, consuming two uniforms per pair.
  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed of chunk c: one splitmix64 step from seed ^ (c * 0xD1B54A32D192ED03).
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

// DOP_THREADS when set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on worker_count() threads. Callers write into
// per-index slots and reduce in index order, which keeps results independent
// of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

enum class SamplerKind {
  tensor_gauss_square,
  polar_gauss_disk,
  duffy_gauss_triangle,
  gauss_jacobi_interval,
  gauss_hermite_line,
  gauss_laguerre_halfline,
  tensor_gauss_hermite_plane,
  mc_rejection,
  // Uniform draws on a sphere or torus pushed through an explicit map; only
  // for models listed in pushforward_maps() at their fixed parameters.
  mc_pushforward,
};

SamplerKind parse_sampler_kind(std::string_view text);
std::string to_string(SamplerKind k);
bool is_gauss(SamplerKind k);
bool is_monte_carlo(SamplerKind k);

struct DomainSampler {
  SamplerKind kind = SamplerKind::mc_rejection;
  int nodes = 32;                   // Gauss nodes per axis
  std::size_t samples = 1000000;    // Monte Carlo proposals
  std::uint64_t seed = kDefaultSeed;
  std::optional<Box> box;           // Monte Carlo only; defaults to the model box
};

// The catalog sampler of the model, upgraded from rejection to pushforward
// when an exact map exists; throws parameter_error when it has none.
DomainSampler default_sampler(const Model& model);

// For Gauss kinds the weight carries the mapping Jacobian and the classical
// weight, and density is 1. For rejection the weight is box volume / N and
// density is the measure density at the point. For pushforward the weight is
// mass / N, density is 1 and box_volume holds the mass.
struct PointSet {
  int dim = 0;
  std::vector<double> coords;
  std::vector<double> weights;
  std::vector<double> density;
  bool monte_carlo = false;
  std::size_t proposals = 0;
  double box_volume = 0.0;

  std::size_t size() const { return weights.size(); }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }
};

// Throws parameter_error when the sampler does not fit the model's boundary and
// measure, or when the Monte Carlo box edge meets the domain.
PointSet sample_domain(const Model& model, const DomainSampler& sampler);

// Throws parameter_error when some box face point lies strictly inside the domain.
void check_box_encloses(const BoundarySpec& boundary, const Box& box, int per_edge = 200);

struct IntegralEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
};

// integral of f rho over the domain.
IntegralEstimate integrate(const std::function<double(const double*)>& f, const Model& model,
                           const DomainSampler& sampler);
IntegralEstimate integrate(const std::function<double(const double*)>& f, const PointSet& points);

// M[k][l] = integral of u_k v_l rho.
Matrix moment_matrix(const PointSet& points, const std::vector<NumericPolynomial>& u,
                     const std::vector<NumericPolynomial>& v);

Matrix gram_matrix(const Model& model, int n, const DomainSampler& sampler);
Matrix gram_matrix(const PointSet& points, int dim, int n);

struct SymmetryDefect {
  double defect = 0.0;
  std::size_t worst_k = 0, worst_l = 0;
};

// max over monomial pairs of |<m_k, L m_l> - <m_l, L m_k>| / max(|.|, |.|, 1).
SymmetryDefect symmetry_defect(const DiffusionOperator& op, const PointSet& points, int n);
SymmetryDefect symmetry_defect(const Model& model, int n, const DomainSampler& sampler);

// CSV with header x,y[,z],weight,density; doubles printed with 17 significant digits.
std::string points_csv(const PointSet& points);
PointSet parse_points_csv(std::string_view text);
std::string matrix_csv(const Matrix& m);
Matrix parse_matrix_csv(std::string_view text);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Weight (1-x)^alpha (1+x)^beta on [-1, 1], Golub-Welsch.
GaussRule gauss_jacobi(int n, double alpha, double beta);
// Weight exp(-x^2 / 2) on the line.
GaussRule gauss_hermite(int n);
// Weight x^alpha exp(-x) on the half line.
GaussRule gauss_laguerre(int n, double alpha);

}  // namespace dop
