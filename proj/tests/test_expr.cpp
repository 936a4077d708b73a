#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crspectra/error.hpp"
#include "crspectra/expr.hpp"
#include "crspectra/field.hpp"

using namespace crs;

namespace {

Errc code_of(const std::string& text, int n, std::size_t* offset = nullptr) {
  try {
    (void)parse(text, n);
  } catch (const ParseError& e) {
    if (offset) *offset = e.offset();
    return e.code();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for " << text);
  return Errc::SyntaxError;
}

}  // namespace

TEST_CASE("round trip through the printer") {
  const char* inputs[] = {
      "abs2(z1) + abs2(z2) - 1",
      "-im(z2) + abs2(z1) + kappa*abs2(z1)^2 + gamma*(z1*conj(z1)^3 + z1^3*conj(z1))",
      "(abs2(z1) + abs2(z2))^2 - 1",
      "exp(0.5*re(z1^2)) / (2 + abs2(z2)) - pow(1 + abs2(z1), -0.5)",
      "1.5e-3*z1 - -z2^-2",
  };
  for (const char* in : inputs) {
    const Expr e = parse(in, 1);
    const Expr again = parse(print(e), 1);
    CHECK(structurally_equal(e.root(), again.root()));
    CHECK(print(again) == print(e));
  }
}

TEST_CASE("coordinate index beyond n+1 is rejected with an offset") {
  std::size_t offset = 0;
  CHECK(code_of("abs2(z1) + abs2(z3) - 1", 1, &offset) == Errc::IndexOutOfRange);
  CHECK(offset == 16);
  CHECK(code_of("abs2(z0)", 1) == Errc::IndexOutOfRange);
}

TEST_CASE("syntax and identifier errors") {
  CHECK(code_of("z1 +", 1) == Errc::SyntaxError);
  CHECK(code_of("(z1", 1) == Errc::SyntaxError);
  CHECK(code_of("sinh(z1)", 1) == Errc::UnknownIdentifier);
  CHECK(code_of("z1^1.5", 1) == Errc::SyntaxError);
  CHECK(code_of("exp", 1) == Errc::SyntaxError);
}

TEST_CASE("parameters are collected and must be bound") {
  const Expr e = parse("kappa*abs2(z1) + gamma - im(z2)", 1);
  CHECK(e.parameters() == std::set<std::string>{"gamma", "kappa"});
  CHECK_THROWS_AS(ExprField(e, {{"kappa", 1.0}}), Error);
  CHECK_NOTHROW(ExprField(e, {{"kappa", 1.0}, {"gamma", 0.0}}));
}

TEST_CASE("realness recognizes conjugate-symmetric sums") {
  CHECK(is_syntactically_real(parse("abs2(z1) - 1", 1).root()));
  CHECK(is_syntactically_real(parse("z1*conj(z1)^3 + z1^3*conj(z1)", 1).root()));
  CHECK(is_syntactically_real(parse("z1*conj(z2) + z2*conj(z1)", 1).root()));
  CHECK_FALSE(is_syntactically_real(parse("z1*conj(z2) + z1*conj(z1)", 1).root()));
  CHECK_FALSE(is_syntactically_real(parse("z1 + 1", 1).root()));
  try {
    (void)ExprField(parse("z1 - 1", 1), {}).jet({1.0, 0.0}, 2);
    FAIL("expected NotRealValued");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotRealValued);
  }
}

TEST_CASE("holomorphy check") {
  CHECK(check_holomorphic(parse("z1^2 + 3*z1*z2 - exp(z2)", 1)));
  CHECK_FALSE(check_holomorphic(parse("z1 + conj(z2)", 1)));
  CHECK_FALSE(check_holomorphic(parse("re(z1)", 1)));
}

TEST_CASE("direct evaluation agrees with the jet value") {
  const Expr e = parse("exp(0.3*z1) * conj(z2) + log(2 + abs2(z1)) - pow(1 + abs2(z2), 0.25)", 1);
  const Point p{Complex(0.2, 0.1), Complex(-0.4, 0.3)};
  const Complex direct = evaluate(e, {}, p);
  const Complex via_jet = eval_jet(e, {}, p, 2).value();
  CHECK(std::abs(direct - via_jet) < 1e-14);
}

TEST_CASE("point dimension must match") {
  const Expr e = parse("abs2(z1) + abs2(z2) - 1", 1);
  CHECK_THROWS_AS(evaluate(e, {}, Point{1.0}), Error);
}
