#include "crspectra/invariants.hpp"

#include <cmath>

#include "crspectra/error.hpp"

namespace crs {

CMat ricci_tensor(const CRFrame& fr, const Jet& logJ) {
  return -levi_operator(fr, logJ) + static_cast<double>(fr.n + 1) * fr.r * fr.levi;
}

double ricci_trace(const CRFrame& fr, const CMat& ricci) { return (fr.levi_inv * ricci).trace().real(); }

double webster_scalar(const CRFrame& fr, const Jet& logJ) {
  const int n = fr.n;
  return n * (n + 1) * fr.r - n * normal_derivative(fr, logJ) + 0.5 * sub_laplacian(fr, logJ);
}

double D_functional(const CRFrame& fr, const Jet& logJ) {
  const int n = fr.n;
  const double grad2 = dbar_pairing(fr, logJ, logJ).real();
  return n * (n + 1) * fr.r - n * normal_derivative(fr, logJ) - 0.5 * sub_laplacian(fr, logJ) -
         static_cast<double>(n) / (n + 1) * grad2;
}

double normalized_scalar(const CRFrame& fr, const Jet& logJ) {
  return std::pow(fr.J, normalization_exponent(fr.n)) * D_functional(fr, logJ);
}

double conformal_normalized_scalar(const CRFrame& fr, const Jet& logJ) {
  const int n = fr.n;
  const double s = normalization_exponent(n);
  const double grad2 = dbar_pairing(fr, logJ, logJ).real();
  const double value =
      webster_scalar(fr, logJ) - (n + 1) * s * sub_laplacian(fr, logJ) - n * (n + 1) * s * s * grad2;
  return std::pow(fr.J, s) * value;
}

PointInvariants compute_invariants(const ScalarField& rho, const Point& point, const Tolerances& tol,
                                   std::optional<int> chart) {
  const Jet rho4 = rho.jet(point, 4);
  PointInvariants out;
  out.frame = build_frame(rho4.truncated(2), tol, chart);
  const Jet J = fefferman_det_jet(rho4, 2);
  if (!(J.value().real() > tol.degeneracy)) throw Error(Errc::DegenerateJ, "J[rho] is not positive");
  const Jet logJ = log(J);
  const CRFrame& fr = out.frame;
  out.J = fr.J;
  out.detH = fr.detH;
  out.r = fr.r;
  out.webster = webster_scalar(fr, logJ);
  out.D = D_functional(fr, logJ);
  out.normalized = normalized_scalar(fr, logJ);
  out.normalized_conformal = conformal_normalized_scalar(fr, logJ);
  out.ricci = ricci_tensor(fr, logJ);
  return out;
}

double normalized_scalar(const ScalarField& rho, const Point& point, const Tolerances& tol) {
  return compute_invariants(rho, point, tol).normalized;
}

}  // namespace crs
