#pragma once

// Upper and lower bounds for the first positive Kohn-Laplacian eigenvalue.

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "crspectra/expr.hpp"
#include "crspectra/field.hpp"
#include "crspectra/quadrature.hpp"

namespace crs {

/// (rho + nu)^N - psi = sum_mu |f_mu|^2 with psi pluriharmonic and f_mu holomorphic.
struct Decomposition {
  double N = 1.0;
  double nu = 1.0;
  Expr psi;                  // empty means psi = 0
  std::vector<Expr> maps;
  ParameterMap params;
};

struct BoundReport {
  std::string kind;  // decomposition_upper | reilly_upper | special_upper | curvature_lower
  bool applicable = true;
  double value = 0.0;
  nlohmann::json diagnostics = nlohmann::json::object();
};

struct BoundOptions {
  double decomposition_tol = 1e-8;
  double identity_tol = 1e-7;
  int identity_points = 20;
  double condition_tol = 1e-10;
  Tolerances frame;
};

using ComplexFunction = std::function<Complex(const Point&)>;

/// Throws InvalidDecomposition with the worst point when a check fails; returns the
/// residual diagnostics otherwise.
nlohmann::json validate_decomposition(const ScalarField& rho, const Decomposition& dec,
                                      std::span<const Point> points, double tol);

BoundReport decomposition_upper_bound(const ScalarField& rho, const Decomposition& dec, const QuadratureRule& rule,
                              const BoundOptions& opt = {});

/// b_mu = box_b conj(f_mu), the test functions behind the upper bound.
std::vector<ComplexFunction> candidate_functions(std::shared_ptr<const ScalarField> rho, const Decomposition& dec,
                                                 const Tolerances& tol = {});

/// rho_F = sum |F_mu|^2 - 1, the pullback of the sphere defining function.
FieldPtr sphere_pullback(const std::vector<Expr>& maps, const ParameterMap& params);

BoundReport reilly_upper_bound(const std::vector<Expr>& maps, const ParameterMap& params, const QuadratureRule& rule,
                               const BoundOptions& opt = {});

/// `j` is a 1-based coordinate index.
BoundReport special_upper_bound(const ScalarField& rho, int j, std::span<const Point> samples,
                                const BoundOptions& opt = {});

BoundReport curvature_lower_bound(const ScalarField& rho, std::span<const Point> samples, bool paneitz_positive,
                              const BoundOptions& opt = {});

/// Every `count`-th share of the rule points, evenly spaced in rule order.
std::vector<Point> sample_points(const QuadratureRule& rule, std::size_t count);

}  // namespace crs
