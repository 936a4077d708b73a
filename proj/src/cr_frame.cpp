#include "crspectra/cr_frame.hpp"

#include <cmath>
#include <sstream>

#include "crspectra/error.hpp"

namespace crs {

namespace {

template <class T>
using Grid = std::vector<std::vector<T>>;

template <class T>
Grid<T> minor_of(const Grid<T>& m, std::size_t col);

template <class T>
T determinant(const Grid<T>& m) {
  const std::size_t size = m.size();
  if (size == 1) return m[0][0];
  if (size == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  T acc = m[0][0] * determinant(minor_of(m, 0));
  for (std::size_t c = 1; c < size; ++c) {
    T term = m[0][c] * determinant(minor_of(m, c));
    if (c % 2 == 1) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return acc;
}

template <class T>
Grid<T> minor_of(const Grid<T>& m, std::size_t col) {
  Grid<T> out(m.size() - 1);
  for (std::size_t r = 1; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (c != col) out[r - 1].push_back(m[r][c]);
    }
  }
  return out;
}

// Explicit cofactor adjugate for sizes up to 3: H * adj = det(H) * I.
CMat adjugate_of(const CMat& h) {
  const auto m = h.rows();
  CMat adj(m, m);
  if (m == 1) {
    adj(0, 0) = 1.0;
  } else if (m == 2) {
    adj << h(1, 1), -h(0, 1), -h(1, 0), h(0, 0);
  } else {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        adj(i, j) = h(r0, c0) * h(r1, c1) - h(r0, c1) * h(r1, c0);
      }
    }
  }
  return adj;
}

Complex det_small(const CMat& h) {
  const auto m = h.rows();
  if (m == 1) return h(0, 0);
  if (m == 2) return h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  return h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) - h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
         h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
}

double min_eigenvalue_hermitian(const CMat& h) {
  if (h.rows() == 1) return h(0, 0).real();
  if (h.rows() == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * std::norm(h(0, 1))));
    return 0.5 * (tr - disc);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) os << ", ";
    os << p[k].real() << (p[k].imag() < 0 ? "-" : "+") << std::abs(p[k].imag()) << "i";
  }
  os << ")";
  return os.str();
}

[[noreturn]] void consistency_failure(const std::string& what, double dev, const Point& p) {
  throw Error(Errc::InternalConsistency, what + " violated by " + fmt(dev) + " at " + describe(p));
}

}  // namespace

std::array<int, kMaxDim - 1> CRFrame::chart_complement() const {
  std::array<int, kMaxDim - 1> out{};
  int k = 0;
  for (int j = 0; j <= n; ++j) {
    if (j != chart) out[k++] = j;
  }
  return out;
}

CVec CRFrame::reeb() const { return Complex(0.0, 1.0) * xi; }

CVec CRFrame::normal() const { return 0.5 * xi; }

Jet fefferman_det_jet(const Jet& rho, int order) {
  if (rho.order() < order + 2) {
    throw Error(Errc::OrderExceeded, "Fefferman determinant of order " + std::to_string(order) +
                                         " needs a defining-function jet of order " + std::to_string(order + 2));
  }
  const int m = rho.dim();
  Grid<Jet> b(m + 1, std::vector<Jet>(m + 1));
  b[0][0] = rho.truncated(order);
  std::vector<Jet> d(m);
  for (int j = 0; j < m; ++j) {
    d[j] = rho.derivative(VarKind::holomorphic, j);
    b[0][j + 1] = rho.derivative(VarKind::antiholomorphic, j).truncated(order);
    b[j + 1][0] = d[j].truncated(order);
  }
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) b[j + 1][k + 1] = d[j].derivative(VarKind::antiholomorphic, k).truncated(order);
  }
  Jet J = -determinant(b);
  return J.make_real();
}

ScalarSet fefferman_scalars(const Jet& rho) {
  const int m = rho.dim();
  CMat h(m, m);
  CVec g(m);
  for (int j = 0; j < m; ++j) {
    g(j) = rho.d(j);
    for (int k = 0; k < m; ++k) h(j, k) = rho.d_dbar(j, k);
  }
  const CMat adj = adjugate_of(h);
  const double detH = det_small(h).real();
  Complex quad = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) quad += std::conj(g(k)) * adj(k, j) * g(j);
  }
  const double J = quad.real() - rho.value().real() * detH;
  return {J, detH, detH / J};
}

CRFrame build_frame(const ScalarField& rho, const Point& point, const Tolerances& tol, std::optional<int> chart) {
  return build_frame(rho.jet(point, 2), tol, chart);
}

CRFrame build_frame(const Jet& rho, const Tolerances& tol, std::optional<int> chart) {
  if (rho.order() < 2) throw Error(Errc::OrderExceeded, "frame construction needs a jet of order >= 2");
  CRFrame fr;
  const int m = rho.dim();
  fr.n = m - 1;
  fr.point = rho.point();
  fr.rho = rho.value().real();
  if (std::abs(fr.rho) > tol.on_surface) {
    throw Error(Errc::NotOnSurface, "|rho| = " + fmt(std::abs(fr.rho)) + " exceeds " + fmt(tol.on_surface) +
                                        " at " + describe(fr.point));
  }

  fr.grad.resize(m);
  fr.hessian.resize(m, m);
  for (int j = 0; j < m; ++j) {
    fr.grad(j) = rho.d(j);
    for (int k = 0; k < m; ++k) fr.hessian(j, k) = rho.d_dbar(j, k);
  }
  const CVec gbar = fr.grad.conjugate();
  fr.adjugate = adjugate_of(fr.hessian);
  fr.detH = det_small(fr.hessian).real();
  fr.J = (gbar.transpose() * fr.adjugate * fr.grad)(0, 0).real() - fr.rho * fr.detH;
  if (!(fr.J > tol.degeneracy)) {
    throw Error(Errc::DegenerateJ, "J[rho] = " + fmt(fr.J) + " is not positive at " + describe(fr.point));
  }
  fr.r = fr.detH / fr.J;

  fr.xi.resize(m);
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j) s += gbar(j) * fr.adjugate(j, k);
    fr.xi(k) = s / fr.J;
  }

  // Off M the pairing is 1 + rho det H / J exactly; the surface residual must not count as inconsistency.
  const double norm_dev = std::abs(fr.grad.dot(fr.xi.conjugate()) - Complex(1.0 + fr.rho * fr.detH / fr.J));
  if (norm_dev > tol.normalization) consistency_failure("d rho(xi) = 1", norm_dev, fr.point);

  double trans_dev = 0.0;
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j) s += fr.hessian(j, k) * fr.xi(j);
    trans_dev = std::max(trans_dev, std::abs(s - fr.r * gbar(k)));
  }
  if (trans_dev > tol.transverse * std::max(1.0, std::abs(fr.r) * gbar.cwiseAbs().maxCoeff())) {
    consistency_failure("H xi = r dbar rho", trans_dev, fr.point);
  }

  fr.psi = fr.hessian + (1.0 - fr.r) * fr.grad * gbar.transpose();
  const double det_psi = det_small(fr.psi).real();
  const double psi_dev = std::abs(det_psi - fr.J) / std::abs(fr.J);
  if (psi_dev > tol.psi_determinant) consistency_failure("det psi = J", psi_dev, fr.point);
  fr.psi_inv = adjugate_of(fr.psi) / det_small(fr.psi);

  double xi_dev = 0.0;
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j) s += fr.psi_inv(k, j) * fr.grad(j);
    xi_dev = std::max(xi_dev, std::abs(s - std::conj(fr.xi(k))));
  }
  if (xi_dev > tol.xi_cross_check * std::max(1.0, fr.xi.cwiseAbs().maxCoeff())) {
    consistency_failure("conj(xi) = psi^{-1} d rho", xi_dev, fr.point);
  }

  if (chart) {
    if (*chart < 0 || *chart >= m) throw Error(Errc::IndexOutOfRange, "chart index out of range");
    if (std::abs(fr.grad(*chart)) <= tol.degeneracy) {
      throw Error(Errc::InvalidArgument, "chart index has vanishing rho derivative");
    }
    fr.chart = *chart;
  } else {
    fr.chart = 0;
    for (int j = 1; j < m; ++j) {
      if (std::abs(fr.grad(j)) > std::abs(fr.grad(fr.chart))) fr.chart = j;
    }
  }

  const int w = fr.chart;
  const auto idx = fr.chart_complement();
  const int n = fr.n;
  const Complex gw = fr.grad(w);
  const Complex gwb = gbar(w);
  const double gw2 = std::norm(gw);
  fr.levi.resize(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int al = idx[a], be = idx[b];
      fr.levi(a, b) = fr.hessian(al, be) - fr.grad(al) * fr.hessian(w, be) / gw -
                      gbar(be) * fr.hessian(al, w) / gwb + fr.hessian(w, w) * fr.grad(al) * gbar(be) / gw2;
    }
  }
  const double lmin = min_eigenvalue_hermitian(fr.levi);
  if (!(lmin > tol.degeneracy)) {
    throw Error(Errc::NotStrictlyPseudoconvex,
                "Levi matrix has eigenvalue " + fmt(lmin) + " at " + describe(fr.point));
  }
  fr.levi_inv = adjugate_of(fr.levi) / det_small(fr.levi);

  double inv_dev = 0.0;
  const CMat prod = fr.levi_inv * fr.levi;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) inv_dev = std::max(inv_dev, std::abs(prod(a, b) - (a == b ? 1.0 : 0.0)));
  }
  double formula_dev = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int be = idx[a], ga = idx[b];
      const Complex expected = fr.psi_inv(be, ga) - std::conj(fr.xi(be)) * fr.xi(ga);
      formula_dev = std::max(formula_dev, std::abs(expected - fr.levi_inv(a, b)));
    }
  }
  const double scale = std::max(1.0, fr.levi_inv.cwiseAbs().maxCoeff());
  if (inv_dev > tol.levi_inverse) consistency_failure("Levi inverse identity", inv_dev, fr.point);
  if (formula_dev > tol.levi_inverse * scale) consistency_failure("Levi inverse formula", formula_dev, fr.point);
  return fr;
}

Complex tilde_laplacian(const CRFrame& fr, const Jet& f) {
  Complex s = 0.0;
  for (int j = 0; j <= fr.n; ++j) {
    for (int k = 0; k <= fr.n; ++k) {
      s += (fr.xi(j) * std::conj(fr.xi(k)) - fr.psi_inv(k, j)) * f.d_dbar(j, k);
    }
  }
  return s;
}

Complex kohn_laplacian(const CRFrame& fr, const Jet& f) {
  Complex first = 0.0;
  for (int k = 0; k <= fr.n; ++k) first += std::conj(fr.xi(k)) * f.dbar(k);
  return tilde_laplacian(fr, f) + static_cast<double>(fr.n) * first;
}

double normal_derivative(const CRFrame& fr, const Jet& u) {
  Complex s = 0.0;
  for (int k = 0; k <= fr.n; ++k) s += fr.xi(k) * u.d(k);
  return s.real();
}

double sub_laplacian(const CRFrame& fr, const Jet& u) {
  if (!u.is_real()) throw Error(Errc::NotRealValued, "sub-Laplacian needs a real-valued function");
  return 2.0 * (tilde_laplacian(fr, u).real() + fr.n * normal_derivative(fr, u));
}

CVec dbar_b(const CRFrame& fr, const Jet& f) {
  const auto idx = fr.chart_complement();
  const int w = fr.chart;
  const Complex gwb = std::conj(fr.grad(w));
  const Complex fw = f.dbar(w);
  CVec out(fr.n);
  for (int g = 0; g < fr.n; ++g) out(g) = f.dbar(idx[g]) - std::conj(fr.grad(idx[g])) / gwb * fw;
  return out;
}

Complex dbar_pairing(const CRFrame& fr, const CVec& zu, const CVec& zv) {
  Complex s = 0.0;
  for (int g = 0; g < fr.n; ++g) {
    for (int sg = 0; sg < fr.n; ++sg) s += fr.levi_inv(g, sg) * zu(g) * std::conj(zv(sg));
  }
  return s;
}

Complex dbar_pairing(const CRFrame& fr, const Jet& u, const Jet& v) {
  return dbar_pairing(fr, dbar_b(fr, u), dbar_b(fr, v));
}

CMat levi_operator(const CRFrame& fr, const Jet& f) {
  const auto idx = fr.chart_complement();
  const int w = fr.chart;
  const Complex gw = fr.grad(w);
  const Complex gwb = std::conj(gw);
  CMat out(fr.n, fr.n);
  for (int a = 0; a < fr.n; ++a) {
    for (int b = 0; b < fr.n; ++b) {
      const int al = idx[a], be = idx[b];
      const Complex ra = fr.grad(al);
      const Complex rbb = std::conj(fr.grad(be));
      out(a, b) = f.d_dbar(al, be) - ra / gw * f.d_dbar(w, be) - rbb / gwb * f.d_dbar(al, w) +
                  ra * rbb / std::norm(gw) * f.d_dbar(w, w);
    }
  }
  return out;
}

}  // namespace crs
