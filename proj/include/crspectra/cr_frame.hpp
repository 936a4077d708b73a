#pragma once

// Pointwise pseudohermitian data of M = {rho = 0} and the first/second order
// operators built from it.

#include <Eigen/Dense>
#include <optional>

#include "crspectra/field.hpp"
#include "crspectra/jet.hpp"

namespace crs {

using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

inline constexpr double kDegenerateJ = 1e-12;

struct Tolerances {
  double on_surface = 1e-9;
  double degeneracy = 1e-12;
  double normalization = 1e-12;      // d rho (xi) = 1
  double transverse = 1e-10;         // H xi = r dbar rho
  double psi_determinant = 1e-10;    // det psi = J, relative
  double levi_inverse = 1e-10;
  double xi_cross_check = 1e-9;
};

struct CRFrame {
  int n = 0;
  Point point;
  double rho = 0.0;
  CVec grad;       // rho_j
  CMat hessian;    // H[j][k] = rho_{j kbar}
  double J = 0.0;
  double detH = 0.0;
  CMat adjugate;   // H * adjugate = detH * I
  double r = 0.0;
  CVec xi;         // xi^k
  CMat psi;        // psi_{j kbar}
  CMat psi_inv;    // psi_inv[k][j] = psi^{kbar j}
  int chart = 0;   // 0-based distinguished index w
  CMat levi;       // n x n, rows/cols over the coordinates other than `chart`
  CMat levi_inv;

  /// Indices other than the chart, in increasing order.
  std::array<int, kMaxDim - 1> chart_complement() const;
  /// Holomorphic components of the real vector fields T = i(xi - conj xi) and N = (xi + conj xi)/2.
  CVec reeb() const;
  CVec normal() const;
};

/// Builds the frame from a jet of rho of order >= 2. Throws NotOnSurface, DegenerateJ,
/// NotStrictlyPseudoconvex or InternalConsistency when an invariant fails.
CRFrame build_frame(const Jet& rho, const Tolerances& tol = {}, std::optional<int> chart = std::nullopt);
CRFrame build_frame(const ScalarField& rho, const Point& point, const Tolerances& tol = {},
                    std::optional<int> chart = std::nullopt);

/// Jet of J[rho] of order `order`; `rho` must have order >= order + 2.
Jet fefferman_det_jet(const Jet& rho, int order);

/// Fefferman determinant, determinant of H and transverse curvature from a rho jet of order >= 2,
/// without any surface checks.
struct ScalarSet {
  double J;
  double detH;
  double r;
};
ScalarSet fefferman_scalars(const Jet& rho);

// Operators on jets at frame.point.  f must have order >= 2 for second-order operators.
Complex tilde_laplacian(const CRFrame& fr, const Jet& f);
Complex kohn_laplacian(const CRFrame& fr, const Jet& f);
/// Re(xi^k f_k); for real u this is N u.
double normal_derivative(const CRFrame& fr, const Jet& u);
double sub_laplacian(const CRFrame& fr, const Jet& u);
/// Z_gamma-bar f for gamma != chart (length n).
CVec dbar_b(const CRFrame& fr, const Jet& f);
Complex dbar_pairing(const CRFrame& fr, const CVec& zu, const CVec& zv);
Complex dbar_pairing(const CRFrame& fr, const Jet& u, const Jet& v);
/// D^rho_{alpha beta-bar} f in the chart coordinates (n x n).
CMat levi_operator(const CRFrame& fr, const Jet& f);

}  // namespace crs
