#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crspectra/error.hpp"
#include "crspectra/field.hpp"
#include "crspectra/quadrature.hpp"

using namespace crs;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

QuadratureRule hopf(const ScalarField& rho, int resolution) {
  QuadratureSettings s;
  s.resolution = resolution;
  return build_quadrature(rho, s);
}

}  // namespace

TEST_CASE("pfaffian closed forms") {
  const std::vector<double> a2{0, 3, -3, 0};
  CHECK(pfaffian(a2, 2) == doctest::Approx(3.0));
  // Pf = a01 a23 - a02 a13 + a03 a12
  const std::vector<double> a4{0, 1, 2, 3, -1, 0, 4, 5, -2, -4, 0, 6, -3, -5, -6, 0};
  CHECK(pfaffian(a4, 4) == doctest::Approx(1 * 6 - 2 * 5 + 3 * 4));
}

TEST_CASE("sphere volumes") {
  const FieldPtr s3 = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const QuadratureRule r = hopf(*s3, 16);
  CHECK(volume(r) == doctest::Approx(4 * kPi2).epsilon(1e-12));
  CHECK(r.max_tangent_residual < 1e-12);
  CHECK(sphere_area(1) == doctest::Approx(2 * kPi2));

  const FieldPtr twice = make_field("2*(abs2(z1) + abs2(z2) - 1)", 1);
  CHECK(volume(reweight(r, *twice)) == doctest::Approx(16 * kPi2).epsilon(1e-12));
}

TEST_CASE("monte carlo agrees with the product rule") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) + 0.1*re(z1^2) - 1", 1, {});
  QuadratureSettings mc;
  mc.type = RuleType::monte_carlo;
  mc.samples = 20000;
  mc.seed = 3;
  const double v_mc = volume(build_quadrature(*rho, mc));
  const double v_h = volume(hopf(*rho, 24));
  CHECK(std::abs(v_mc - v_h) / v_h < 0.02);

  const FieldPtr s5 = make_field("abs2(z1) + abs2(z2) + abs2(z3) - 1", 2);
  const double v5_h = volume(hopf(*s5, 8));
  const double v5_mc = volume(build_quadrature(*s5, mc));
  CHECK(std::abs(v5_mc - v5_h) / v5_h < 1e-10);
}

TEST_CASE("symmetry kills off-diagonal moments") {
  const FieldPtr s3 = make_field("abs2(z1) + abs2(z2) - 1", 1);
  const QuadratureRule r = hopf(*s3, 16);
  const Complex m = integrate(r, [](const SurfacePoint& sp) { return sp.ambient[0] * std::conj(sp.ambient[1]); });
  CHECK(std::abs(m) < 1e-10);
  const double second = integrate(r, [](const SurfacePoint& sp) { return std::norm(sp.ambient[0]); });
  CHECK(second == doctest::Approx(0.5 * volume(r)).epsilon(1e-12));
}

TEST_CASE("radial projection onto an ellipsoid") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) + 0.1*re(z1^2) - 1", 1);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    CVec d(2);
    d << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    d /= d.norm();
    const RadialResult res = radial_point(*rho, d);
    CHECK(std::abs(res.residual) <= 1e-12);
    CHECK(res.t >= 0.95);
    CHECK(res.t <= 1.06);
  }
}

TEST_CASE("volume form transforms by the determinant of a basis change") {
  const FieldPtr rho = make_field("abs2(z1) + abs2(z2) + 0.1*re(z1^2) - 1", 1);
  const QuadratureRule r = hopf(*rho, 4);
  const SurfacePoint& sp = r.points[7];
  const Jet j = rho->jet(sp.ambient, 2);
  const double base = volume_form(j, sp.tangent);
  const double m[3][3] = {{1.0, 0.5, -0.2}, {0.3, 2.0, 0.1}, {0.0, -0.4, 1.5}};
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  std::vector<CVec> mixed(3, CVec::Zero(2));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) mixed[a] += m[a][b] * sp.tangent[b];
  }
  CHECK(volume_form(j, mixed) == doctest::Approx(det * base).epsilon(1e-10));
}

TEST_CASE("rule type names") {
  CHECK(rule_type_from_string("hopf_product") == RuleType::hopf_product);
  CHECK(to_string(RuleType::monte_carlo) == "monte_carlo");
  CHECK_THROWS_AS(rule_type_from_string("simpson"), Error);
}

TEST_CASE("pairwise summation is order-fixed") {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  const double a = pairwise_sum(std::span<const double>(v));
  const double b = pairwise_sum(std::span<const double>(v));
  CHECK(a == b);
}
