#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crspectra/bounds.hpp"
#include "crspectra/error.hpp"

using namespace crs;

namespace {

QuadratureRule hopf(const ScalarField& rho, int resolution) {
  QuadratureSettings s;
  s.resolution = resolution;
  return build_quadrature(rho, s);
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InternalConsistency;
}

const char* kSphere = "abs2(z1) + abs2(z2) - 1";

}  // namespace

TEST_CASE("upper bound on the sphere is sharp") {
  const FieldPtr rho = make_field(kSphere, 1);
  const QuadratureRule rule = hopf(*rho, 16);
  Decomposition dec;
  dec.maps = {parse("z1", 1), parse("z2", 1)};
  const BoundReport b = decomposition_upper_bound(*rho, dec, rule);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.diagnostics["identities_ok"].get<bool>());
  CHECK(b.diagnostics["candidate_rayleigh_min"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadratic decomposition raises the bound by n(N-1)/nu") {
  const FieldPtr rho = make_field(kSphere, 1);
  Decomposition dec;
  dec.N = 2.0;
  dec.maps = {parse("z1^2", 1), parse("1.4142135623730951*z1*z2", 1), parse("z2^2", 1)};
  const BoundReport b = decomposition_upper_bound(*rho, dec, hopf(*rho, 16));
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.diagnostics["identities_ok"].get<bool>());
}

TEST_CASE("decomposition validation") {
  const FieldPtr rho = make_field(kSphere, 1);
  const QuadratureRule rule = hopf(*rho, 8);
  Decomposition wrong;
  wrong.maps = {parse("z1", 1)};
  CHECK(code_of([&] { (void)decomposition_upper_bound(*rho, wrong, rule); }) == Errc::InvalidDecomposition);
  Decomposition antiholo;
  antiholo.maps = {parse("conj(z1)", 1), parse("z2", 1)};
  CHECK(code_of([&] { (void)decomposition_upper_bound(*rho, antiholo, rule); }) == Errc::InvalidDecomposition);
  Decomposition not_pluri;
  not_pluri.maps = {parse("z1", 1), parse("z2", 1)};
  not_pluri.psi = parse("abs2(z1) - abs2(z1)*1.0001", 1);
  CHECK(code_of([&] { (void)decomposition_upper_bound(*rho, not_pluri, rule); }) == Errc::InvalidDecomposition);
}

TEST_CASE("Reilly-type bound") {
  const FieldPtr rho = make_field(kSphere, 1);
  const QuadratureRule rule = hopf(*rho, 16);
  const BoundReport b = reilly_upper_bound({parse("z1", 1), parse("z2", 1)}, {}, rule);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(code_of([&] { (void)reilly_upper_bound({parse("z1", 1)}, {}, rule); }) == Errc::NotOnSphereImage);
}

TEST_CASE("special condition") {
  const FieldPtr rho = make_field(kSphere, 1);
  const auto pts = sample_points(hopf(*rho, 8), 50);
  const BoundReport b = special_upper_bound(*rho, 2, pts);
  CHECK(b.applicable);
  CHECK(b.value == doctest::Approx(1.0));
  CHECK(code_of([&] { (void)special_upper_bound(*rho, 3, pts); }) == Errc::IndexOutOfRange);
}

TEST_CASE("lower bound applicability and value") {
  const FieldPtr rho = make_field(kSphere, 1);
  const auto pts = sample_points(hopf(*rho, 8), 50);
  CHECK(code_of([&] { (void)curvature_lower_bound(*rho, pts, false); }) == Errc::NotApplicable);
  const BoundReport b = curvature_lower_bound(*rho, pts, true);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.diagnostics["super_pseudoconvex"].get<bool>());
  CHECK(b.diagnostics["discrepancies"].size() == 1);

  const FieldPtr s5 = make_field("abs2(z1) + abs2(z2) + abs2(z3) - 1", 2);
  const BoundReport b5 = curvature_lower_bound(*s5, sample_points(hopf(*s5, 6), 30), false);
  CHECK(b5.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sampling spreads over the rule") {
  const FieldPtr rho = make_field(kSphere, 1);
  const QuadratureRule rule = hopf(*rho, 8);
  CHECK(sample_points(rule, 10).size() == 10);
  CHECK(sample_points(rule, rule.size() + 5).size() == rule.size());
}
