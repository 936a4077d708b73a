#pragma once

// Quadrature for the volume form theta ^ (d theta)^n on a star-shaped M = {rho = 0}.
//
// Real tangent vectors of C^(n+1) are stored by their complex components
// v_j = dx_j + i dy_j.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crspectra/cr_frame.hpp"
#include "crspectra/field.hpp"

namespace crs {

enum class RuleType { hopf_product, monte_carlo };

struct QuadratureSettings {
  RuleType type = RuleType::hopf_product;
  int resolution = 32;
  int samples = 20000;
  std::uint64_t seed = 1;
};

std::string to_string(RuleType t);
RuleType rule_type_from_string(const std::string& s);

struct SurfacePoint {
  Point ambient;
  std::vector<double> parameter;
  std::vector<CVec> tangent;  // 2n+1 vectors spanning T M
};

struct QuadratureRule {
  QuadratureSettings settings;
  int n = 1;
  std::vector<SurfacePoint> points;
  std::vector<double> base_weights;  // parameter-space rule weights
  std::vector<double> weights;       // base weight * |theta ^ (d theta)^n (tangent)|
  double max_tangent_residual = 0.0; // max |d rho(V)| / |V|

  std::size_t size() const { return points.size(); }
};

struct RadialResult {
  Point point;
  double t = 0.0;
  double residual = 0.0;
};

/// Root t > 0 of rho(t * direction); `direction` is a unit vector.
RadialResult radial_point(const ScalarField& rho, const CVec& direction);

/// d rho(V) = 2 Re sum rho_j v_j for a jet of order >= 1.
double d_rho(const Jet& rho, const CVec& v);

/// theta ^ (d theta)^n evaluated on 2n+1 real vectors, theta = (i/2)(dbar rho - d rho).
double volume_form(const Jet& rho, std::span<const CVec> vectors);
/// |volume_form|; DegenerateFrame when it is below 1e-14.
double volume_density(const ScalarField& rho, const SurfacePoint& sp);

/// Pfaffian of an even antisymmetric matrix given row-major with dimension `dim`.
double pfaffian(std::span<const double> a, int dim);

QuadratureRule build_quadrature(const ScalarField& rho, const QuadratureSettings& settings);

/// Same points, weights recomputed for another defining function of the same M.
QuadratureRule reweight(const QuadratureRule& rule, const ScalarField& rho);

double pairwise_sum(std::span<const double> v);
Complex pairwise_sum(std::span<const Complex> v);

/// sum_i w_i f(p_i) with fixed-order pairwise summation.
template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using T = decltype(f(rule.points[0]));
  std::vector<T> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) terms[i] = rule.weights[i] * f(rule.points[i]);
  return pairwise_sum(std::span<const T>(terms));
}

double volume(const QuadratureRule& rule);

/// Area of the unit sphere S^(2n+1).
double sphere_area(int n);

}  // namespace crs
