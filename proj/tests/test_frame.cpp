#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crspectra/cr_frame.hpp"
#include "crspectra/error.hpp"
#include "crspectra/field.hpp"
#include "crspectra/invariants.hpp"

using namespace crs;

namespace {

Point sphere_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Point p(static_cast<std::size_t>(n + 1));
  double s = 0.0;
  for (auto& c : p) {
    c = {g(rng), g(rng)};
    s += std::norm(c);
  }
  for (auto& c : p) c /= std::sqrt(s);
  return p;
}

Errc failure(const ScalarField& rho, const Point& p) {
  try {
    (void)build_frame(rho, p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected build_frame to fail");
  return Errc::InternalConsistency;
}

const char* kQuartic = "-im(z2) + abs2(z1) + kappa*abs2(z1)^2 + gamma*(z1*conj(z1)^3 + z1^3*conj(z1))";

}  // namespace

TEST_CASE("quartic normal form at the origin: gradient and Hessian") {
  const FieldPtr rho = make_field(kQuartic, 1, {{"kappa", 1.0}, {"gamma", 0.0}});
  const CRFrame fr = build_frame(*rho, {0.0, 0.0});
  CHECK(std::abs(fr.grad(1) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(fr.grad(0)) < 1e-15);
  CHECK(std::abs(fr.hessian(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(fr.hessian(0, 1)) + std::abs(fr.hessian(1, 1)) < 1e-15);
  CHECK(fr.J == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(fr.chart == 1);
}

TEST_CASE("frame identities on the sphere and an ellipsoid") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2}) {
    const FieldPtr rho = make_field(n == 1 ? "abs2(z1) + abs2(z2) + 0.1*re(z1^2) - 1"
                                           : "abs2(z1) + abs2(z2) + abs2(z3) + 0.1*re(z1*z3) - 1",
                                    n);
    for (int k = 0; k < 10; ++k) {
      CVec dir(n + 1);
      const Point d = sphere_point(rng, n);
      for (int j = 0; j <= n; ++j) dir(j) = d[static_cast<std::size_t>(j)];
      // Scale onto the surface by a 1-D root solve.
      double lo = 0.5, hi = 2.0;
      Point p = d;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (int j = 0; j <= n; ++j) p[static_cast<std::size_t>(j)] = mid * d[static_cast<std::size_t>(j)];
        (rho->value(p) > 0 ? hi : lo) = mid;
      }
      const CRFrame fr = build_frame(*rho, p);
      CHECK(std::abs(fr.grad.dot(fr.xi.conjugate()) - 1.0) < 1e-12);
      CHECK((fr.levi_inv * fr.levi - CMat::Identity(n, n)).norm() < 1e-12);
      // conj xi^k = sum_j psi_inv(k, j) rho_j
      CHECK((fr.xi.conjugate() - fr.psi_inv * fr.grad).norm() < 1e-12);
    }
  }
}

TEST_CASE("scaling laws of J, det H and r") {
  const Point p{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  for (double c : {0.5, 2.0, 3.0}) {
    const FieldPtr a = make_field("abs2(z1) + abs2(z2) - 1", 1);
    const FieldPtr b = make_field("c*(abs2(z1) + abs2(z2) - 1)", 1, {{"c", c}});
    const CRFrame fa = build_frame(*a, p), fb = build_frame(*b, p);
    CHECK(fb.J == doctest::Approx(std::pow(c, 3) * fa.J).epsilon(1e-12));
    CHECK(fb.detH == doctest::Approx(std::pow(c, 2) * fa.detH).epsilon(1e-12));
    CHECK(fb.r == doctest::Approx(fa.r / c).epsilon(1e-12));
  }
}

TEST_CASE("J jet of the sphere is constant") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const Jet Jj = fefferman_det_jet(rho->jet({Complex(0.6, 0.0), Complex(0.0, 0.8)}, 4), 2);
  CHECK(std::abs(Jj.value() - 1.0) < 1e-12);
  for (int i = 1; i < Jj.layout().size(); ++i) CHECK(std::abs(Jj.coefficients()[i]) < 1e-12);
}

TEST_CASE("operators on sphere monomials") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) - 1", 1);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const Point p = sphere_point(rng, 1);
    const CRFrame fr = build_frame(*rho, p);
    const Jet zb1 = Jet::variable(p, 1, VarKind::antiholomorphic, 2);
    const Jet z1 = Jet::variable(p, 1, VarKind::holomorphic, 2);
    CHECK(std::abs(kohn_laplacian(fr, zb1) - std::conj(p[0])) < 1e-13);
    CHECK(std::abs(kohn_laplacian(fr, z1 * z1)) < 1e-13);
    // z1 * conj(z2) lies in bidegree (1, 1): eigenvalue q(p + n) = 2.
    const Jet m = z1 * Jet::variable(p, 2, VarKind::antiholomorphic, 2);
    CHECK(std::abs(kohn_laplacian(fr, m) - 2.0 * m.value()) < 1e-13);
  }
}

TEST_CASE("Ricci tensor is Hermitian and traces to the Webster scalar") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) + abs2(z3) + 0.2*re(z1^2) + 0.1*abs2(z2)^2 - 1", 2);
  const Point p{Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)};
  const PointInvariants inv = compute_invariants(*rho, p);
  CHECK((inv.ricci - inv.ricci.adjoint()).norm() < 1e-10);
  CHECK(ricci_trace(inv.frame, inv.ricci) == doctest::Approx(inv.webster).epsilon(1e-10));
}

TEST_CASE("failure modes") {
  const FieldPtr sphere = make_field("abs2(z1) + abs2(z2) - 1", 1);
  CHECK(failure(*sphere, {Complex(0.5, 0.0), Complex(0.0, 0.0)}) == Errc::NotOnSurface);
  const FieldPtr flat = make_field("-im(z2)", 1);
  CHECK(failure(*flat, {0.0, 0.0}) == Errc::DegenerateJ);
}

TEST_CASE("normalized field has unit Fefferman determinant on M") {
  const auto rho = make_field("(abs2(z1) + abs2(z2))^2 - 1", 1);
  const NormalizedField hat(rho);
  const Point p{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  CHECK(fefferman_scalars(hat.jet(p, 2)).J == doctest::Approx(1.0).epsilon(1e-12));
}
