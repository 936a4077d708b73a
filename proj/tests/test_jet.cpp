#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crspectra/error.hpp"
#include "crspectra/jet.hpp"

using namespace crs;

namespace {

Point base() { return {Complex(0.3, -0.2), Complex(-0.1, 0.4)}; }

Jet z(int k, int order = 4) { return Jet::variable(base(), k, VarKind::holomorphic, order); }
Jet zb(int k, int order = 4) { return Jet::variable(base(), k, VarKind::antiholomorphic, order); }

double max_diff(const Jet& a, const Jet& b) {
  double d = 0.0;
  for (int i = 0; i < a.layout().size(); ++i) d = std::max(d, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  return d;
}

}  // namespace

TEST_CASE("layout is graded and indexable") {
  const auto lay = JetLayout::get(2, 4);
  CHECK(lay->size() == 70);
  for (int i = 0; i < lay->size(); ++i) {
    CHECK(lay->index_of(lay->multi_index(i)) == i);
    if (i > 0) CHECK(lay->degree(i) >= lay->degree(i - 1));
  }
  CHECK(lay->index_of(MultiIndex({5, 0}, {0, 0})) == -1);
  CHECK(JetLayout::get(2, 4).get() == lay.get());
}

TEST_CASE("order beyond the cap is rejected") {
  CHECK_THROWS_AS(JetLayout::get(2, kMaxOrder + 1), Error);
}

TEST_CASE("product matches the closed-form monomial") {
  const Jet f = z(1) * z(1) * zb(2);
  const std::array<int, 2> a{2, 0}, b{0, 1};
  CHECK(max_diff(f, monomial_jet(base(), a, b, 4)) < 1e-15);
  CHECK(std::abs(f.d(0) - 2.0 * base()[0] * std::conj(base()[1])) < 1e-15);
}

TEST_CASE("reciprocal, exp and log are inverse operations") {
  const Jet g = 1.5 + z(1) * zb(1) + 0.2 * z(2);
  CHECK(max_diff(g * reciprocal(g), Jet::constant_like(g, 1.0)) < 1e-13);
  CHECK(max_diff(exp(log(g)), g) < 1e-13);
  CHECK(max_diff(pow(g, 3), g * g * g) < 1e-13);
  CHECK(max_diff(pow(g, -2), reciprocal(g * g)) < 1e-13);
}

TEST_CASE("real powers compose") {
  Jet u = 2.0 + z(1) * zb(1) + z(2) * zb(2);
  u.make_real();
  CHECK(max_diff(pow_real(u, 0.5) * pow_real(u, 0.5), u) < 1e-13);
  CHECK(max_diff(pow_real(u, -1.0 / 3.0), reciprocal(pow_real(u, 1.0 / 3.0))) < 1e-13);
}

TEST_CASE("domain errors carry their codes") {
  const Jet zero = Jet::constant(base(), 0.0, 3);
  try {
    (void)reciprocal(zero);
    FAIL("expected DivisionByZeroJet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DivisionByZeroJet);
  }
  Jet neg = -1.0 + z(1) * zb(1);
  neg.make_real();
  try {
    (void)log(neg);
    FAIL("expected LogOfNonpositive");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LogOfNonpositive);
  }
  try {
    (void)pow_real(z(1) + 2.0, 0.5);
    FAIL("expected NotRealValued");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotRealValued);
  }
}

TEST_CASE("conjugation swaps holomorphic and antiholomorphic parts") {
  const Jet f = z(1) * z(1) + Complex(0, 1) * zb(2);
  const Jet g = conj(f);
  const Jet expected = zb(1) * zb(1) - Complex(0, 1) * z(2);
  CHECK(max_diff(g, expected) < 1e-15);
  Jet r = z(1) * zb(1);
  r.make_real();
  CHECK(r.is_real());
  CHECK(max_diff(conj(r), r) < 1e-15);
}

TEST_CASE("derivative jets lower the order") {
  const Jet f = z(1) * z(1) * zb(1) * z(2);
  const Jet df = f.derivative(VarKind::holomorphic, 0);
  CHECK(df.order() == 3);
  const Jet expected = 2.0 * z(1, 3) * zb(1, 3) * z(2, 3);
  CHECK(max_diff(df, expected) < 1e-15);
  CHECK(std::abs(f.partial(MultiIndex({2, 1}, {1, 0})) - 2.0) < 1e-14);
}

TEST_CASE("truncation keeps the low-order prefix") {
  const Jet f = exp(z(1) + zb(2));
  const Jet t = f.truncated(2);
  CHECK(t.order() == 2);
  for (int i = 0; i < t.layout().size(); ++i) CHECK(t.coefficients()[i] == f.coefficients()[i]);
}

TEST_CASE("generic dispatch agrees with the named operations") {
  const Jet a = 1.0 + z(1), b = 2.0 + zb(2);
  const std::array<Jet, 2> ab{a, b};
  CHECK(max_diff(jet_compose(JetOp::mul, ab), a * b) < 1e-15);
  CHECK(max_diff(jet_compose(JetOp::div, ab), a / b) < 1e-14);
  const std::array<Jet, 1> only{a};
  CHECK(max_diff(jet_compose(JetOp::pow_int, only, 3), a * a * a) < 1e-14);
}
