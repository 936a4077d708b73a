#pragma once

#include <optional>

#include "crspectra/cr_frame.hpp"

namespace crs {

/// Exponent s with J[c rho]^s = c J[rho]^s, used by the volume normalization.
inline double normalization_exponent(int n) { return 1.0 / (n + 2); }

/// Webster Ricci tensor in the chart coframe: -D^rho log J + (n+1) r h.
CMat ricci_tensor(const CRFrame& fr, const Jet& logJ);
/// h^{beta-bar alpha} R_{alpha beta-bar}.
double ricci_trace(const CRFrame& fr, const CMat& ricci);

double webster_scalar(const CRFrame& fr, const Jet& logJ);
double D_functional(const CRFrame& fr, const Jet& logJ);
/// J^(1/(n+2)) D[rho].
double normalized_scalar(const CRFrame& fr, const Jet& logJ);
/// Webster scalar of J^(-1/(n+2)) theta through the conformal change formula.
double conformal_normalized_scalar(const CRFrame& fr, const Jet& logJ);

struct PointInvariants {
  CRFrame frame;
  double J = 0.0;
  double detH = 0.0;
  double r = 0.0;
  double webster = 0.0;
  double D = 0.0;
  double normalized = 0.0;
  double normalized_conformal = 0.0;
  CMat ricci;
};

/// Evaluates every scalar invariant at `point` from a 4-jet of rho.
PointInvariants compute_invariants(const ScalarField& rho, const Point& point, const Tolerances& tol = {},
                                   std::optional<int> chart = std::nullopt);

double normalized_scalar(const ScalarField& rho, const Point& point, const Tolerances& tol = {});

}  // namespace crs
