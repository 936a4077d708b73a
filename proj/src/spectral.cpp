#include "crspectra/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "crspectra/error.hpp"
#include "crspectra/jacobi.hpp"
#include "crspectra/parallel.hpp"

namespace crs {

namespace {

constexpr std::size_t kChunkPoints = 2048;

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

struct PowerTable {
  std::vector<std::array<Complex, kMaxBasisDegree + 1>> z, zb;

  PowerTable(const Point& p, int degree) : z(p.size()), zb(p.size()) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      z[j][0] = zb[j][0] = 1.0;
      for (int e = 1; e <= degree; ++e) {
        z[j][e] = z[j][e - 1] * p[j];
        zb[j][e] = zb[j][e - 1] * std::conj(p[j]);
      }
    }
  }

  Complex eval(const std::array<int, kMaxDim>& a, const std::array<int, kMaxDim>& b, int m) const {
    Complex v = 1.0;
    for (int j = 0; j < m; ++j) v *= z[j][a[j]] * zb[j][b[j]];
    return v;
  }
};

// Value, conj-derivatives and mixed second derivatives of a monomial.
struct MonomialDerivatives {
  Complex value;
  std::array<Complex, kMaxDim> dbar{};
  std::array<std::array<Complex, kMaxDim>, kMaxDim> ddbar{};
};

MonomialDerivatives differentiate(const Monomial& mono, const PowerTable& pw, int m) {
  MonomialDerivatives d;
  d.value = pw.eval(mono.a, mono.b, m);
  for (int k = 0; k < m; ++k) {
    if (mono.b[k] == 0) continue;
    auto b = mono.b;
    b[k] -= 1;
    d.dbar[k] = static_cast<double>(mono.b[k]) * pw.eval(mono.a, b, m);
    for (int j = 0; j < m; ++j) {
      if (mono.a[j] == 0) continue;
      auto a = mono.a;
      a[j] -= 1;
      d.ddbar[j][k] = static_cast<double>(mono.a[j] * mono.b[k]) * pw.eval(a, b, m);
    }
  }
  return d;
}

}  // namespace

int Monomial::degree() const {
  int s = 0;
  for (int j = 0; j < kMaxDim; ++j) s += a[j] + b[j];
  return s;
}

bool Monomial::holomorphic() const {
  return std::all_of(b.begin(), b.end(), [](int v) { return v == 0; });
}

MonomialBasis::MonomialBasis(int n, int degree) : n_(n), degree_(degree) {
  if (degree < 0 || degree > kMaxBasisDegree) {
    throw Error(Errc::InvalidArgument, "basis degree must lie in [0, " + std::to_string(kMaxBasisDegree) + "]");
  }
  if (n < 1 || n + 1 > kMaxDim) throw Error(Errc::InvalidArgument, "basis dimension out of range");
  const int m = n + 1;
  const int nvars = 2 * m;
  std::vector<int> e(nvars, 0);
  for (int deg = 0; deg <= degree; ++deg) {
    auto emit = [&](auto&& self, int var, int remaining) -> void {
      if (var == nvars - 1) {
        e[var] = remaining;
        Monomial mono;
        for (int j = 0; j < m; ++j) {
          mono.a[j] = e[j];
          mono.b[j] = e[m + j];
        }
        terms_.push_back(mono);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        e[var] = v;
        self(self, var + 1, remaining - v);
      }
    };
    emit(emit, 0, deg);
  }
}

std::size_t MonomialBasis::prefix(int d) const {
  return static_cast<std::size_t>(
      std::count_if(terms_.begin(), terms_.end(), [&](const Monomial& m) { return m.degree() <= d; }));
}

std::size_t MonomialBasis::holomorphic_count(int d) const {
  return static_cast<std::size_t>(std::count_if(
      terms_.begin(), terms_.end(), [&](const Monomial& m) { return m.degree() <= d && m.holomorphic(); }));
}

std::string MonomialBasis::label(std::size_t i) const {
  const Monomial& mono = terms_[i];
  std::string s;
  for (int j = 0; j <= n_; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      const int e = pass == 0 ? mono.a[j] : mono.b[j];
      if (e == 0) continue;
      if (!s.empty()) s += "*";
      s += pass == 0 ? "z" + std::to_string(j + 1) : "conj(z" + std::to_string(j + 1) + ")";
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s.empty() ? "1" : s;
}

SpectralProblem assemble(const ScalarField& rho, const QuadratureRule& rule, const MonomialBasis& basis,
                         const Tolerances& tol) {
  if (basis.n() != rho.n() || rule.n != rho.n()) {
    throw Error(Errc::InvalidArgument, "basis, rule and defining function disagree on n");
  }
  const int n = basis.n();
  const int m = n + 1;
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());
  const std::size_t npts = rule.size();
  const std::size_t chunks = std::max<std::size_t>(1, (npts + kChunkPoints - 1) / kChunkPoints);

  struct Partial {
    Eigen::MatrixXcd G, S, K;
  };
  std::vector<Partial> partial(chunks);

  parallel_chunks(npts, chunks, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    const Eigen::Index np = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXcd phi(np, nb), box(np, nb), wconj(np, nb), x(np * n, nb), wx(np * n, nb);
    for (Eigen::Index i = 0; i < np; ++i) {
      const std::size_t idx = begin + static_cast<std::size_t>(i);
      const SurfacePoint& sp = rule.points[idx];
      const double w = rule.weights[idx];
      const CRFrame fr = build_frame(rho.jet(sp.ambient, 2), tol);
      const PowerTable pw(sp.ambient, basis.degree());

      CMat coef(m, m);
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) coef(j, k) = fr.xi(j) * std::conj(fr.xi(k)) - fr.psi_inv(k, j);
      }
      const auto comp = fr.chart_complement();
      const int wi = fr.chart;
      const Complex gwb = std::conj(fr.grad(wi));
      const CMat chol = Eigen::LLT<CMat>(fr.levi_inv).matrixL();

      for (Eigen::Index u = 0; u < nb; ++u) {
        const MonomialDerivatives d = differentiate(basis[static_cast<std::size_t>(u)], pw, m);
        Complex bx = 0.0;
        for (int j = 0; j < m; ++j) {
          for (int k = 0; k < m; ++k) bx += coef(j, k) * d.ddbar[j][k];
        }
        for (int k = 0; k < m; ++k) bx += static_cast<double>(n) * std::conj(fr.xi(k)) * d.dbar[k];
        phi(i, u) = d.value;
        box(i, u) = bx;
        wconj(i, u) = w * std::conj(d.value);

        std::array<Complex, kMaxDim - 1> zb{};
        for (int g = 0; g < n; ++g) zb[g] = d.dbar[comp[g]] - std::conj(fr.grad(comp[g])) / gwb * d.dbar[wi];
        for (int t = 0; t < n; ++t) {
          Complex s = 0.0;
          for (int g = t; g < n; ++g) s += chol(g, t) * zb[g];
          x(i * n + t, u) = s;
          wx(i * n + t, u) = w * std::conj(s);
        }
      }
    }
    Partial& out = partial[chunk];
    out.G.noalias() = phi.transpose() * wconj;
    out.K.noalias() = box.transpose() * wconj;
    out.S.noalias() = x.transpose() * wx;
  });

  SpectralProblem p;
  p.points = npts;
  p.gram = Eigen::MatrixXcd::Zero(nb, nb);
  p.stiffness = Eigen::MatrixXcd::Zero(nb, nb);
  p.kohn = Eigen::MatrixXcd::Zero(nb, nb);
  for (const Partial& part : partial) {
    if (part.G.size() == 0) continue;
    p.gram += part.G;
    p.stiffness += part.S;
    p.kohn += part.K;
  }
  const double gscale = std::max(max_abs(p.gram), 1e-300);
  const double sscale = std::max(max_abs(p.stiffness), 1e-300);
  p.gram_hermitian_deviation = max_abs(p.gram - p.gram.adjoint()) / gscale;
  p.stiffness_hermitian_deviation = max_abs(p.stiffness - p.stiffness.adjoint()) / sscale;
  p.ibp_deviation = max_abs(p.stiffness - p.kohn);
  p.ibp_scale = max_abs(p.stiffness);
  p.gram = hermitian_part(p.gram);
  p.stiffness = hermitian_part(p.stiffness);
  return p;
}

SpectralProblem leading_block(const SpectralProblem& p, std::size_t count) {
  const auto c = static_cast<Eigen::Index>(count);
  SpectralProblem out = p;
  out.gram = p.gram.topLeftCorner(c, c);
  out.stiffness = p.stiffness.topLeftCorner(c, c);
  out.kohn = p.kohn.topLeftCorner(c, c);
  out.ibp_deviation = max_abs(out.stiffness - out.kohn);
  out.ibp_scale = max_abs(out.stiffness);
  return out;
}

SpectralSolution solve(const SpectralProblem& p, const SolveOptions& opt) {
  const Eigen::Index nb = p.gram.rows();
  SpectralSolution sol;
  if (nb == 0) throw Error(Errc::NoPositiveEigenvalue, "empty basis");

  // Jacobi scaling makes the cutoff independent of monomial magnitudes.
  Eigen::VectorXd scale(nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    const double g = p.gram(i, i).real();
    if (!(g > 0.0)) throw Error(Errc::CholeskyFailure, "Gram matrix has a nonpositive diagonal entry");
    scale(i) = 1.0 / std::sqrt(g);
  }
  const Eigen::MatrixXcd gs = scale.asDiagonal() * p.gram * scale.asDiagonal();
  const Eigen::MatrixXcd ss = scale.asDiagonal() * p.stiffness * scale.asDiagonal();

  Eigen::MatrixXcd reduced;
  if (opt.strategy == GramStrategy::cholesky) {
    Eigen::LLT<Eigen::MatrixXcd> llt(gs);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::CholeskyFailure, "Gram matrix is not positive definite on M; lower the degree or "
                                         "use the truncating Gram strategy");
    }
    const HermitianEigen ge = jacobi_eigen(gs);
    const double lo = ge.values(0), hi = ge.values(nb - 1);
    sol.gram_condition = lo > 0.0 ? hi / lo : INFINITY;
    if (!(sol.gram_condition <= opt.max_condition)) {
      throw Error(Errc::IllConditionedGram,
                  "Gram condition estimate " + std::to_string(sol.gram_condition) + " exceeds the limit");
    }
    const Eigen::MatrixXcd L = llt.matrixL();
    const Eigen::MatrixXcd linv_s = L.triangularView<Eigen::Lower>().solve(ss);
    reduced = L.triangularView<Eigen::Lower>().solve(linv_s.adjoint()).adjoint();
    sol.gram_rank = static_cast<std::size_t>(nb);
  } else {
    const HermitianEigen ge = jacobi_eigen(gs);
    const double top = ge.values(nb - 1);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < nb; ++k) {
      if (ge.values(k) > opt.gram_tol * top) keep.push_back(k);
    }
    if (keep.empty()) throw Error(Errc::NoPositiveEigenvalue, "Gram matrix vanishes");
    Eigen::MatrixXcd x(nb, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      x.col(static_cast<Eigen::Index>(c)) = ge.vectors.col(keep[c]) / std::sqrt(ge.values(keep[c]));
    }
    sol.gram_condition = top / ge.values(keep.front());
    reduced = x.adjoint() * ss * x;
    sol.gram_rank = keep.size();
  }

  const HermitianEigen se = jacobi_eigen(hermitian_part(reduced));
  sol.eigenvalues.assign(se.values.data(), se.values.data() + se.values.size());
  sol.min_eigenvalue = sol.eigenvalues.front();
  const double lmax = std::max(0.0, sol.eigenvalues.back());
  sol.threshold = opt.kernel_tol * std::max(1.0, lmax);
  sol.kernel_dim = 0;
  bool found = false;
  for (double v : sol.eigenvalues) {
    if (v < sol.threshold) {
      ++sol.kernel_dim;
    } else if (!found) {
      sol.lambda1 = v;
      found = true;
    }
  }
  if (!found) throw Error(Errc::NoPositiveEigenvalue, "no Ritz value above the kernel threshold");
  return sol;
}

SpectralReport estimate_lambda1(const ScalarField& rho, int degree, const QuadratureRule& rule,
                                const SolveOptions& opt, const Tolerances& tol) {
  const MonomialBasis basis(rho.n(), degree);
  SpectralReport rep;
  rep.degree = degree;
  rep.problem = assemble(rho, rule, basis, tol);
  rep.solution = solve(rep.problem, opt);
  rep.holomorphic_monomials = basis.holomorphic_count(degree);
  std::optional<double> previous;
  for (int d = 1; d <= degree; ++d) {
    std::optional<double> value;
    try {
      value = d == degree ? rep.solution.lambda1 : solve(leading_block(rep.problem, basis.prefix(d)), opt).lambda1;
    } catch (const Error& e) {
      if (e.code() != Errc::NoPositiveEigenvalue) throw;
    }
    if (value && previous && *value > *previous + 1e-9) rep.monotone = false;
    if (value) previous = value;
    rep.lambda1_by_degree.push_back(value);
  }
  return rep;
}

std::vector<std::pair<double, int>> cluster(const std::vector<double>& values, double tol) {
  std::vector<std::pair<double, int>> out;
  for (double v : values) {
    if (!out.empty() && std::abs(v - out.back().first) <= tol * std::max(1.0, std::abs(v))) {
      auto& [mean, count] = out.back();
      mean = (mean * count + v) / (count + 1);
      ++count;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

}  // namespace crs
