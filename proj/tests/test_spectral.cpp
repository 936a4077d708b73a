#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crspectra/error.hpp"
#include "crspectra/field.hpp"
#include "crspectra/jacobi.hpp"
#include "crspectra/spectral.hpp"

using namespace crs;

namespace {

QuadratureRule hopf(const ScalarField& rho, int resolution) {
  QuadratureSettings s;
  s.resolution = resolution;
  return build_quadrature(rho, s);
}

Errc failure_of(const SpectralProblem& p, const SolveOptions& o) {
  try {
    (void)solve(p, o);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected solve to fail");
  return Errc::InternalConsistency;
}

}  // namespace

TEST_CASE("Jacobi agrees with a reference Hermitian eigensolver") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int size : {1, 2, 5, 12, 30}) {
    Eigen::MatrixXcd a(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) a(i, j) = {g(rng), g(rng)};
    }
    a = (a + a.adjoint()).eval();
    const HermitianEigen mine = jacobi_eigen(a);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(a);
    CHECK((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11);
    const Eigen::MatrixXcd recon = mine.vectors * mine.values.asDiagonal() * mine.vectors.adjoint();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((mine.vectors.adjoint() * mine.vectors - Eigen::MatrixXcd::Identity(size, size)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("Jacobi is bit-reproducible") {
  Eigen::MatrixXcd a(3, 3);
  a << 2, Complex(1, 1), 0.5, Complex(1, -1), 3, Complex(0, 2), 0.5, Complex(0, -2), 1;
  const HermitianEigen x = jacobi_eigen(a), y = jacobi_eigen(a);
  CHECK(x.values == y.values);
  CHECK(x.vectors == y.vectors);
}

TEST_CASE("monomial basis is graded") {
  const MonomialBasis b(1, 3);
  CHECK(b.size() == 35);
  CHECK(b.prefix(0) == 1);
  CHECK(b.prefix(1) == 5);
  CHECK(b.prefix(2) == 15);
  CHECK(b.holomorphic_count(3) == 10);
  CHECK(b.label(0) == "1");
  CHECK_THROWS_AS(MonomialBasis(1, kMaxBasisDegree + 1), Error);
}

TEST_CASE("degree-one sphere matrices") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const QuadratureRule rule = hopf(*rho, 32);
  const MonomialBasis basis(1, 1);
  const SpectralProblem p = assemble(*rho, rule, basis);
  CHECK(p.gram_hermitian_deviation <= 1e-9);
  CHECK(p.stiffness_hermitian_deviation <= 1e-9);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p.stiffness);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-8 * es.eigenvalues().maxCoeff();
  CHECK(rank == 2);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].b[0] == 1) {
      const auto k = static_cast<Eigen::Index>(i);
      CHECK((p.stiffness(k, k) / p.gram(k, k)).real() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(p.ibp_deviation <= 1e-9 * p.ibp_scale);
}

TEST_CASE("constant basis has no positive eigenvalue") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const SpectralProblem p = assemble(*rho, hopf(*rho, 8), MonomialBasis(1, 0));
  CHECK(failure_of(p, {}) == Errc::NoPositiveEigenvalue);
}

TEST_CASE("Cholesky reduction refuses the rank-deficient sphere Gram matrix") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const SpectralProblem p = assemble(*rho, hopf(*rho, 16), MonomialBasis(1, 2));
  SolveOptions o;
  o.strategy = GramStrategy::cholesky;
  const Errc c = failure_of(p, o);
  CHECK((c == Errc::CholeskyFailure || c == Errc::IllConditionedGram));
}

TEST_CASE("Cholesky and truncation agree on a well-posed basis") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const SpectralProblem p = assemble(*rho, hopf(*rho, 16), MonomialBasis(1, 1));
  SolveOptions o;
  o.strategy = GramStrategy::cholesky;
  const SpectralSolution a = solve(p, o), b = solve(p, {});
  CHECK(a.lambda1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.lambda1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.kernel_dim == 3);
}

TEST_CASE("sphere lambda1 is stable across degrees") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const SpectralReport rep = estimate_lambda1(*rho, 4, hopf(*rho, 32));
  CHECK(rep.monotone);
  for (int d = 2; d <= 4; ++d) {
    REQUIRE(rep.lambda1_by_degree[static_cast<std::size_t>(d - 1)].has_value());
    CHECK(*rep.lambda1_by_degree[static_cast<std::size_t>(d - 1)] == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(rep.solution.min_eigenvalue >= -1e-9);
}

TEST_CASE("ellipsoid kernel counts holomorphic monomials") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) + 0.1*re(z1^2) - 1", 1);
  const SpectralReport rep = estimate_lambda1(*rho, 3, hopf(*rho, 24));
  CHECK(rep.solution.kernel_dim == 10);
  CHECK(rep.monotone);
  CHECK(rep.solution.min_eigenvalue >= -1e-9);
}

TEST_CASE("clusters group nearby values") {
  const auto c = cluster({1.0, 1.0 + 1e-9, 2.0, 2.0, 2.0, 3.5}, 1e-6);
  REQUIRE(c.size() == 3);
  CHECK(c[0].second == 2);
  CHECK(c[1].second == 3);
  CHECK(c[2].first == doctest::Approx(3.5));
}
