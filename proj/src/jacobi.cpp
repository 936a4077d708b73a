#include "crspectra/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "crspectra/error.hpp"

namespace crs {

namespace {

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& input, double tol, int max_sweeps) {
  using C = std::complex<double>;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw Error(Errc::InvalidArgument, "Jacobi solver needs a square matrix");
  Eigen::MatrixXcd a = 0.5 * (input + input.adjoint());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);

  HermitianEigen out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    out.off_norm = off;
    if (off <= tol * scale) break;
    out.sweeps = sweep + 1;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const C b = a(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // U = diag(1, e^{-i phi}) followed by the real rotation that zeroes |b|.
        const C phase = b / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const C up_p = c, up_q = -s * std::conj(phase);  // column p of U: (c, -s e^{-i phi})
        const C uq_p = s, uq_q = c * std::conj(phase);   // column q of U: (s,  c e^{-i phi})
        for (Eigen::Index k = 0; k < n; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * up_p + akq * up_q;
          a(k, q) = akp * uq_p + akq * uq_q;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(up_p) * apk + std::conj(up_q) * aqk;
          a(q, k) = std::conj(uq_p) * apk + std::conj(uq_q) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * up_p + vkq * up_q;
          v(k, q) = vkp * uq_p + vkq * uq_q;
        }
      }
    }
  }
  out.off_norm = off_diagonal_norm(a);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace crs
