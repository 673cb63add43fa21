#pragma once

#include <array>
#include <string>
#include <vector>

#include "dop/catalog.hpp"
#include "dop/polynomial.hpp"
#include "dop/quadrature.hpp"

namespace dop {

// Image (X, Y) of a source point with the ambient carre du champ and
// generator applied to X and Y.
struct AmbientSample {
  double X = 0.0, Y = 0.0;
  double gxx = 0.0, gxy = 0.0, gyy = 0.0;
  double lx = 0.0, ly = 0.0;
  // max |Gamma_S(x^i, x^j) - (delta_ij - x^i x^j)|; 0 for torus sources.
  double sphere_identity = 0.0;
};

// A map from a unit sphere S^{n-1} in R^n or a flat 2-torus onto a catalog
// model at fixed parameters. The uniform measure of the source maps to
// mass * (catalog measure) / (catalog mass), so uniform source draws give an
// exact Monte Carlo sampler for that measure.
class PushforwardMap {
 public:
  enum class Source { sphere, torus };
  // Z = sum exp(i w_k . z) over the A2 weights; ((cos u + cos v) / 2, cos u cos v) with u, v = sqrt2 x, sqrt2 y.
  enum class Torus { deltoid, two_tangents };

  std::string name;
  std::string model;
  ParamMap params;
  Source source = Source::sphere;
  int source_dim = 3;  // ambient R^n for spheres, 2 for tori
  double mass = 0.0;   // integral of the catalog density over the domain

  // Writes source_dim coordinates of a uniform source point.
  void draw(SplitMix64& rng, double* src) const;
  std::array<double, 2> image(const double* src) const;
  AmbientSample ambient(const double* src) const;

  // Sphere maps: X and Y as polynomials on R^n.
  static PushforwardMap sphere(std::string name, std::string model, ParamMap params, double mass, int n,
                               const char* X, const char* Y);
  static PushforwardMap torus(std::string name, std::string model, ParamMap params, double mass, Torus kind);

 private:
  Polynomial X_, Y_;
  NumericPolynomial nX_, nY_;
  Torus torus_ = Torus::deltoid;
};

const std::vector<PushforwardMap>& pushforward_maps();
// Throws parameter_error for an unknown name.
const PushforwardMap& pushforward_map(const std::string& name);
// The map for the model's name and parameters under its catalog measure, or null.
const PushforwardMap* pushforward_for(const Model& model);

}  // namespace dop
