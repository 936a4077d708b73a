#pragma once

// Galerkin approximation of the Kohn Laplacian on restrictions of monomials z^a conj(z)^b.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "crspectra/cr_frame.hpp"
#include "crspectra/quadrature.hpp"

namespace crs {

inline constexpr int kMaxBasisDegree = 6;

struct Monomial {
  std::array<int, kMaxDim> a{};
  std::array<int, kMaxDim> b{};
  int degree() const;
  bool holomorphic() const;
};

class MonomialBasis {
 public:
  /// All z^a conj(z)^b with |a| + |b| <= degree; graded, so lower degrees form prefixes.
  MonomialBasis(int n, int degree);

  int n() const { return n_; }
  int degree() const { return degree_; }
  std::size_t size() const { return terms_.size(); }
  const Monomial& operator[](std::size_t i) const { return terms_[i]; }
  const std::vector<Monomial>& terms() const { return terms_; }
  /// Number of leading terms of total degree <= d.
  std::size_t prefix(int d) const;
  std::size_t holomorphic_count(int d) const;
  std::string label(std::size_t i) const;

 private:
  int n_;
  int degree_;
  std::vector<Monomial> terms_;
};

struct SpectralProblem {
  Eigen::MatrixXcd gram;       // int phi_u conj(phi_v)
  Eigen::MatrixXcd stiffness;  // int <dbar_b phi_u, dbar_b phi_v>
  Eigen::MatrixXcd kohn;       // int (box_b phi_u) conj(phi_v)
  double gram_hermitian_deviation = 0.0;
  double stiffness_hermitian_deviation = 0.0;
  double ibp_deviation = 0.0;  // max |S - S'|
  double ibp_scale = 0.0;      // max |S|
  std::size_t points = 0;
};

/// Assembles the matrices over `rule`; the frames come from `rho`, whose volume form must
/// match the rule weights.
SpectralProblem assemble(const ScalarField& rho, const QuadratureRule& rule, const MonomialBasis& basis,
                         const Tolerances& tol = {});

/// Leading sub-problem on the first `count` basis functions.
SpectralProblem leading_block(const SpectralProblem& p, std::size_t count);

enum class GramStrategy { truncate, cholesky };

struct SolveOptions {
  GramStrategy strategy = GramStrategy::truncate;
  double kernel_tol = 1e-6;
  double gram_tol = 1e-10;        // relative eigenvalue cutoff of the scaled Gram matrix
  double max_condition = 1e12;    // cholesky strategy only
};

struct SpectralSolution {
  std::vector<double> eigenvalues;  // ascending
  std::size_t kernel_dim = 0;
  double lambda1 = 0.0;
  std::size_t gram_rank = 0;
  double gram_condition = 0.0;      // of the retained (or full) scaled Gram matrix
  double min_eigenvalue = 0.0;
  double threshold = 0.0;
};

SpectralSolution solve(const SpectralProblem& p, const SolveOptions& opt = {});

struct SpectralReport {
  int degree = 0;
  SpectralSolution solution;
  SpectralProblem problem;
  std::vector<std::optional<double>> lambda1_by_degree;  // index d - 1 for d = 1..degree
  bool monotone = true;
  std::size_t holomorphic_monomials = 0;
};

SpectralReport estimate_lambda1(const ScalarField& rho, int degree, const QuadratureRule& rule,
                                const SolveOptions& opt = {}, const Tolerances& tol = {});

/// Groups ascending values into (value, multiplicity) clusters of relative width `tol`.
std::vector<std::pair<double, int>> cluster(const std::vector<double>& values, double tol);

}  // namespace crs
