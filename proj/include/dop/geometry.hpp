#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dop/catalog.hpp"
#include "dop/operator.hpp"
#include "dop/quadrature.hpp"

namespace dop {

// Scalar curvature (twice the Gauss curvature) of g_ij = (g^{ij})^{-1} in d = 2.
// Throws dimension_error for d != 2 and numeric_error where det g^{ij} <= 0.
double scalar_curvature_at(const CoMetric& g, const double* point);

// Grid points of the model box with every boundary factor above
// margin * (its value at the witness). The grid is refined until at least
// min_points survive.
std::vector<std::array<double, 2>> interior_samples(const Model& model, std::size_t min_points = 100,
                                                    double margin = 1e-3);

struct CurvatureReport {
  std::string model;
  std::vector<std::array<double, 2>> points;
  std::vector<double> values;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double max_deviation = 0.0;  // max |R - mean|
  bool constant = false;       // max_deviation <= 1e-6 (1 + |mean|)
  double spread() const { return max - min; }
};

CurvatureReport curvature_constancy(const Model& model, std::size_t min_points = 100);

// Header x,y,curvature; 17 significant digits.
std::string curvature_csv(const CurvatureReport& r);

struct PullbackReport {
  std::string map;
  std::string model;
  ParamMap params;
  std::size_t points = 0;
  double scale = 0.0;                 // fitted s with G ~ s * ambient Gamma
  double max_gamma_residual = 0.0;    // max |G - s Gamma_amb| over entries and points
  double max_L_residual = 0.0;        // max |b - s L_amb|
  double max_sphere_identity = 0.0;   // max |Gamma_S(x^i, x^j) - (delta - x^i x^j)|; 0 off the sphere
  bool ok = false;                    // both residuals below 1e-6
};

// Names of pushforward_maps(), each checked against its catalog model.
const std::vector<std::string>& pullback_maps();

// Throws parameter_error for an unknown map.
PullbackReport verify_pullback(const std::string& map, std::size_t points = 1000, std::uint64_t seed = kDefaultSeed);

struct BoundaryPoint {
  std::size_t factor = 0;
  double x = 0.0;
  double y = 0.0;
};

// Zeros of each boundary factor on n scan lines across the model box (half
// vertical, half horizontal), kept where the other factors are >= 0. d = 2 only.
std::vector<BoundaryPoint> boundary_points(const Model& model, std::size_t n);

// Header factor,x,y; 17 significant digits.
std::string boundary_points_csv(const std::vector<BoundaryPoint>& pts);

}  // namespace dop
