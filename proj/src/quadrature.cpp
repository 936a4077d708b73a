#include "crspectra/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "crspectra/error.hpp"
#include "crspectra/parallel.hpp"

namespace crs {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on (a, b) by Newton iteration on P_m.
GaussLegendre gauss_legendre(int m, double a, double b) {
  GaussLegendre gl;
  gl.nodes.resize(m);
  gl.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Ascending order in (a, b).
    gl.nodes[m - 1 - i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    gl.weights[m - 1 - i] = 0.5 * (b - a) * w;
  }
  return gl;
}

double theta_of(const Jet& rho, const CVec& v) {
  Complex s = 0.0;
  for (int j = 0; j < rho.dim(); ++j) s += rho.d(j) * v(j);
  return s.imag();
}

double dtheta_of(const Jet& rho, const CVec& v, const CVec& w) {
  Complex s = 0.0;
  for (int j = 0; j < rho.dim(); ++j) {
    for (int k = 0; k < rho.dim(); ++k) s += v(j) * rho.d_dbar(j, k) * std::conj(w(k));
  }
  return -2.0 * s.imag();
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct Chart {
  Point d;                 // unit direction
  std::vector<CVec> dd;    // derivatives of d along the parameters
};

// n = 1: (cos e e^{i p1}, sin e e^{i p2});
// n = 2: (cos e1 e^{i p1}, sin e1 cos e2 e^{i p2}, sin e1 sin e2 e^{i p3}).
Chart hopf_chart(int n, std::span<const double> s) {
  Chart c;
  const Complex I(0.0, 1.0);
  if (n == 1) {
    const double e = s[0];
    const Complex a = std::exp(I * s[1]), b = std::exp(I * s[2]);
    c.d = {std::cos(e) * a, std::sin(e) * b};
    CVec v(2);
    v << -std::sin(e) * a, std::cos(e) * b;
    c.dd.push_back(v);
    v << I * std::cos(e) * a, 0.0;
    c.dd.push_back(v);
    v << 0.0, I * std::sin(e) * b;
    c.dd.push_back(v);
    return c;
  }
  const double e1 = s[0], e2 = s[1];
  const Complex a = std::exp(I * s[2]), b = std::exp(I * s[3]), g = std::exp(I * s[4]);
  const double c1 = std::cos(e1), s1 = std::sin(e1), c2 = std::cos(e2), s2 = std::sin(e2);
  c.d = {c1 * a, s1 * c2 * b, s1 * s2 * g};
  CVec v(3);
  v << -s1 * a, c1 * c2 * b, c1 * s2 * g;
  c.dd.push_back(v);
  v << 0.0, -s1 * s2 * b, s1 * c2 * g;
  c.dd.push_back(v);
  v << I * c1 * a, 0.0, 0.0;
  c.dd.push_back(v);
  v << 0.0, I * s1 * c2 * b, 0.0;
  c.dd.push_back(v);
  v << 0.0, 0.0, I * s1 * s2 * g;
  c.dd.push_back(v);
  return c;
}

// Pushes direction derivatives through d -> t(d) d onto M.
SurfacePoint project(const ScalarField& rho, const Point& d, const std::vector<CVec>& dd,
                     std::vector<double> parameter, double* tangent_residual) {
  const int m = static_cast<int>(d.size());
  CVec dv(m);
  for (int j = 0; j < m; ++j) dv(j) = d[j];
  const RadialResult rr = radial_point(rho, dv);
  const Jet jet = rho.jet(rr.point, 1);
  const double radial = d_rho(jet, dv);
  if (std::abs(radial) < 1e-300) throw Error(Errc::NoRootFound, "ray is tangent to M");
  SurfacePoint sp;
  sp.ambient = rr.point;
  sp.parameter = std::move(parameter);
  double worst = 0.0;
  for (const CVec& v : dd) {
    const double ts = -rr.t * d_rho(jet, v) / radial;
    CVec x = ts * dv + rr.t * v;
    sp.tangent.push_back(x);
    worst = std::max(worst, std::abs(d_rho(jet, x)) / std::max(x.norm(), 1e-300));
  }
  *tangent_residual = worst;
  return sp;
}

void finish_weights(const ScalarField& rho, QuadratureRule& rule) {
  rule.weights.resize(rule.size());
  const std::size_t chunks = std::min<std::size_t>(rule.size(), 256);
  parallel_chunks(rule.size(), chunks, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) rule.weights[i] = rule.base_weights[i] * volume_density(rho, rule.points[i]);
  });
}

template <class T>
T pairwise(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise(v.subspan(0, h)) + pairwise(v.subspan(h));
}

}  // namespace

std::string to_string(RuleType t) { return t == RuleType::hopf_product ? "hopf_product" : "monte_carlo"; }

RuleType rule_type_from_string(const std::string& s) {
  if (s == "hopf_product") return RuleType::hopf_product;
  if (s == "monte_carlo") return RuleType::monte_carlo;
  throw Error(Errc::SchemaError, "unknown quadrature type '" + s + "'");
}

double d_rho(const Jet& rho, const CVec& v) {
  Complex s = 0.0;
  for (int j = 0; j < rho.dim(); ++j) s += rho.d(j) * v(j);
  return 2.0 * s.real();
}

RadialResult radial_point(const ScalarField& rho, const CVec& direction) {
  const int m = static_cast<int>(direction.size());
  auto at = [&](double t) {
    Point p(m);
    for (int j = 0; j < m; ++j) p[j] = t * direction(j);
    return p;
  };
  auto eval = [&](double t, double* slope) {
    const Jet j = rho.jet(at(t), 1);
    if (slope) *slope = d_rho(j, direction);
    return j.value().real();
  };
  constexpr double kResidual = 1e-12;

  double t = 1.0;
  for (int it = 0; it < 100; ++it) {
    double slope = 0.0;
    const double g = eval(t, &slope);
    if (std::abs(g) <= kResidual) return {at(t), t, std::abs(g)};
    if (slope == 0.0 || !std::isfinite(slope)) break;
    double next = t - g / slope;
    if (!(next > 0.0)) next = 0.5 * t;
    if (std::abs(next - t) <= 1e-15 * t) {
      t = next;
      break;
    }
    t = next;
  }

  // Fallback: first sign change of a geometric scan, then bisection.
  double lo = 1e-3;
  double glo = eval(lo, nullptr);
  bool bracketed = false;
  double hi = lo;
  while (hi < 1e3) {
    hi = std::min(hi * 1.05, 1e3);
    const double ghi = eval(hi, nullptr);
    if ((glo < 0.0) != (ghi < 0.0) || ghi == 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    glo = ghi;
  }
  if (!bracketed) {
    throw Error(Errc::NoRootFound, "no sign change of rho along the ray in [1e-3, 1e3]");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = eval(mid, nullptr);
    if (std::abs(g) <= kResidual) return {at(mid), mid, std::abs(g)};
    if ((g < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4e-16 * hi) break;
  }
  const double mid = 0.5 * (lo + hi);
  const double g = eval(mid, nullptr);
  if (std::abs(g) > kResidual) {
    throw Error(Errc::NoRootFound, "ray root residual " + std::to_string(std::abs(g)) + " above 1e-12");
  }
  return {at(mid), mid, std::abs(g)};
}

double pfaffian(std::span<const double> a, int dim) {
  if (dim == 0) return 1.0;
  if (dim % 2 != 0) return 0.0;
  auto A = [&](int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; };
  if (dim == 2) return A(0, 1);
  if (dim == 4) return A(0, 1) * A(2, 3) - A(0, 2) * A(1, 3) + A(0, 3) * A(1, 2);
  double s = 0.0;
  std::vector<double> sub(static_cast<std::size_t>(dim - 2) * (dim - 2));
  for (int j = 1; j < dim; ++j) {
    int r = 0;
    for (int p = 1; p < dim; ++p) {
      if (p == j) continue;
      int c = 0;
      for (int q = 1; q < dim; ++q) {
        if (q == j) continue;
        sub[static_cast<std::size_t>(r) * (dim - 2) + c] = A(p, q);
        ++c;
      }
      ++r;
    }
    s += (j % 2 == 1 ? 1.0 : -1.0) * A(0, j) * pfaffian(sub, dim - 2);
  }
  return s;
}

double volume_form(const Jet& rho, std::span<const CVec> vectors) {
  const int k = static_cast<int>(vectors.size());
  const int n = (k - 1) / 2;
  if (k != 2 * n + 1 || rho.dim() != n + 1) {
    throw Error(Errc::InvalidArgument, "volume form needs 2n+1 tangent vectors");
  }
  std::vector<double> theta(k);
  std::vector<double> b(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    theta[i] = theta_of(rho, vectors[i]);
    for (int j = i + 1; j < k; ++j) {
      const double v = dtheta_of(rho, vectors[i], vectors[j]);
      b[static_cast<std::size_t>(i) * k + j] = v;
      b[static_cast<std::size_t>(j) * k + i] = -v;
    }
  }
  const int dim = 2 * n;
  std::vector<double> sub(static_cast<std::size_t>(dim) * dim);
  double total = 0.0;
  for (int skip = 0; skip < k; ++skip) {
    int r = 0;
    for (int p = 0; p < k; ++p) {
      if (p == skip) continue;
      int c = 0;
      for (int q = 0; q < k; ++q) {
        if (q == skip) continue;
        sub[static_cast<std::size_t>(r) * dim + c] = b[static_cast<std::size_t>(p) * k + q];
        ++c;
      }
      ++r;
    }
    total += (skip % 2 == 0 ? 1.0 : -1.0) * theta[skip] * pfaffian(sub, dim);
  }
  return factorial(n) * total;
}

double volume_density(const ScalarField& rho, const SurfacePoint& sp) {
  const double v = std::abs(volume_form(rho.jet(sp.ambient, 2), sp.tangent));
  if (v <= 1e-14) throw Error(Errc::DegenerateFrame, "volume form vanishes on the tangent frame");
  return v;
}

double sphere_area(int n) { return 2.0 * std::pow(kPi, n + 1) / factorial(n); }

QuadratureRule build_quadrature(const ScalarField& rho, const QuadratureSettings& settings) {
  const int n = rho.n();
  QuadratureRule rule;
  rule.settings = settings;
  rule.n = n;

  if (settings.type == RuleType::hopf_product) {
    if (n != 1 && n != 2) throw Error(Errc::InvalidArgument, "hopf_product rule supports n = 1 and n = 2");
    const int R = settings.resolution;
    if (R < 1 || R > 256) throw Error(Errc::InvalidArgument, "hopf_product resolution must lie in [1, 256]");
    const GaussLegendre gl = gauss_legendre(R, 0.0, 0.5 * kPi);
    const int P = 2 * R;
    const double dphi = 2.0 * kPi / P;
    // Parameter tuples (eta..., phi...) in lexicographic order.
    std::vector<std::vector<double>> params;
    std::vector<double> base;
    if (n == 1) {
      for (int a = 0; a < R; ++a) {
        for (int p = 0; p < P; ++p) {
          for (int q = 0; q < P; ++q) {
            params.push_back({gl.nodes[a], p * dphi, q * dphi});
            base.push_back(gl.weights[a] * dphi * dphi);
          }
        }
      }
    } else {
      for (int a = 0; a < R; ++a) {
        for (int b = 0; b < R; ++b) {
          for (int p = 0; p < P; ++p) {
            for (int q = 0; q < P; ++q) {
              for (int s = 0; s < P; ++s) {
                params.push_back({gl.nodes[a], gl.nodes[b], p * dphi, q * dphi, s * dphi});
                base.push_back(gl.weights[a] * gl.weights[b] * dphi * dphi * dphi);
              }
            }
          }
        }
      }
    }
    rule.points.resize(params.size());
    std::vector<double> residual(params.size());
    parallel_chunks(params.size(), std::min<std::size_t>(params.size(), 256),
                    [&](std::size_t, std::size_t b, std::size_t e) {
                      for (std::size_t i = b; i < e; ++i) {
                        const Chart c = hopf_chart(n, params[i]);
                        rule.points[i] = project(rho, c.d, c.dd, params[i], &residual[i]);
                      }
                    });
    rule.base_weights = std::move(base);
    for (double r : residual) rule.max_tangent_residual = std::max(rule.max_tangent_residual, r);
  } else {
    if (settings.samples < 1) throw Error(Errc::InvalidArgument, "monte_carlo needs at least one sample");
    const int m = n + 1;
    std::mt19937_64 rng(settings.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> dirs(settings.samples);
    for (auto& x : dirs) {
      do {
        x.resize(2 * m);
        for (int k = 0; k < 2 * m; ++k) x(k) = gauss(rng);
      } while (x.norm() < 1e-8);
      x.normalize();
    }
    const double w = sphere_area(n) / settings.samples;
    rule.points.resize(dirs.size());
    rule.base_weights.assign(dirs.size(), w);
    std::vector<double> residual(dirs.size());
    parallel_chunks(dirs.size(), std::min<std::size_t>(dirs.size(), 256),
                    [&](std::size_t, std::size_t b, std::size_t e) {
                      for (std::size_t i = b; i < e; ++i) {
                        const Eigen::VectorXd& x = dirs[i];
                        Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
                        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(2 * m, 2 * m);
                        Point d(m);
                        for (int j = 0; j < m; ++j) d[j] = Complex(x(2 * j), x(2 * j + 1));
                        std::vector<CVec> dd;
                        for (int c = 1; c < 2 * m; ++c) {
                          CVec v(m);
                          for (int j = 0; j < m; ++j) v(j) = Complex(Q(2 * j, c), Q(2 * j + 1, c));
                          dd.push_back(v);
                        }
                        std::vector<double> param(x.data(), x.data() + x.size());
                        rule.points[i] = project(rho, d, dd, std::move(param), &residual[i]);
                      }
                    });
    for (double r : residual) rule.max_tangent_residual = std::max(rule.max_tangent_residual, r);
  }
  finish_weights(rho, rule);
  return rule;
}

QuadratureRule reweight(const QuadratureRule& rule, const ScalarField& rho) {
  QuadratureRule out = rule;
  finish_weights(rho, out);
  return out;
}

double pairwise_sum(std::span<const double> v) { return pairwise(v); }

Complex pairwise_sum(std::span<const Complex> v) { return pairwise(v); }

double volume(const QuadratureRule& rule) { return pairwise_sum(std::span<const double>(rule.weights)); }

}  // namespace crs
