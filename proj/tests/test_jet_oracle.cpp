#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/complex128.hpp>
#include <random>

#include "crspectra/expr.hpp"

// Quad-precision finite differences of the expression tree, independent of the jet engine.

using namespace crs;
using Q = boost::multiprecision::float128;
using QC = boost::multiprecision::complex128;

namespace {

QC eval_q(const NodePtr& node, const std::vector<QC>& z) {
  const Node& n = *node;
  switch (n.kind) {
    case NodeKind::variable: return z[static_cast<std::size_t>(n.index - 1)];
    case NodeKind::conj_variable: return conj(z[static_cast<std::size_t>(n.index - 1)]);
    case NodeKind::literal: return QC(Q(n.value.real()), Q(n.value.imag()));
    case NodeKind::parameter: break;
    case NodeKind::add: return eval_q(n.args[0], z) + eval_q(n.args[1], z);
    case NodeKind::sub: return eval_q(n.args[0], z) - eval_q(n.args[1], z);
    case NodeKind::mul: return eval_q(n.args[0], z) * eval_q(n.args[1], z);
    case NodeKind::div: return eval_q(n.args[0], z) / eval_q(n.args[1], z);
    case NodeKind::neg: return -eval_q(n.args[0], z);
    case NodeKind::pow: {
      const QC b = eval_q(n.args[0], z);
      QC out(1);
      for (int k = 0; k < std::abs(n.exponent); ++k) out *= b;
      return n.exponent < 0 ? QC(1) / out : out;
    }
    case NodeKind::call: {
      const QC a = eval_q(n.args[0], z);
      switch (n.func) {
        case Func::conj: return conj(a);
        case Func::re: return QC(a.real());
        case Func::im: return QC(a.imag());
        case Func::log: return log(a);
        case Func::exp: return exp(a);
        case Func::pow: return QC(pow(a.real(), eval_q(n.args[1], z).real()));
      }
    }
  }
  FAIL("unsupported node");
  return QC(0);
}

// Axes 0..2m-1: Re z_1..Re z_m, then Im z_1..Im z_m.
QC fd_partial(const Expr& e, const Point& p, const std::vector<int>& axes, Q h) {
  const int m = static_cast<int>(p.size());
  const int k = static_cast<int>(axes.size());
  QC sum(0);
  for (int s = 0; s < (1 << k); ++s) {
    std::vector<QC> z;
    for (const Complex& c : p) z.emplace_back(Q(c.real()), Q(c.imag()));
    Q sign = 1;
    for (int q = 0; q < k; ++q) {
      const bool minus = (s >> q) & 1;
      if (minus) sign = -sign;
      const Q step = minus ? -h : h;
      const auto var = static_cast<std::size_t>(axes[static_cast<std::size_t>(q)] % m);
      z[var] += axes[static_cast<std::size_t>(q)] >= m ? QC(Q(0), step) : QC(step, Q(0));
    }
    sum += sign * eval_q(e.root(), z);
  }
  return sum / pow(2 * h, k);
}

Complex jet_partial(const Jet& jet, const std::vector<int>& axes, int m) {
  Complex total = 0.0;
  const int k = static_cast<int>(axes.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    MultiIndex mi;
    Complex w = 1.0;
    for (int q = 0; q < k; ++q) {
      const bool anti = (mask >> q) & 1;
      const int axis = axes[static_cast<std::size_t>(q)];
      auto& slot = anti ? mi.beta : mi.alpha;
      ++slot[static_cast<std::size_t>(axis % m)];
      if (axis >= m) w *= anti ? Complex(0, -1) : Complex(0, 1);
    }
    total += w * jet.partial(mi);
  }
  return total;
}

}  // namespace

TEST_CASE("fourth-order partials match quad-precision finite differences") {
  const char* exprs[] = {
      "exp(0.4*z1*conj(z2)) + log(1 + abs2(z1 - 0.3*z2))",
      "pow(2 + abs2(z1)^2 + re(z2^3), -0.75) * conj(z1)",
      "(z1^2*conj(z2) + 0.5*i*z2) / (3 + abs2(z1 + conj(z2)))",
      "-im(z2) + abs2(z1) + 0.7*abs2(z1)^2 + 0.3*(z1*conj(z1)^3 + z1^3*conj(z1))",
      "exp(conj(z1)^2 - z2) * log(2 + re(z1*z2))",
      "abs2(z1)^3 - 2*abs2(z2)*re(z1*conj(z2)^2)",
  };
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::uniform_int_distribution<int> axis(0, 3);
  for (const char* text : exprs) {
    const Expr e = parse(text, 1);
    for (int trial = 0; trial < 4; ++trial) {
      const Point p{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
      const Jet jet = eval_jet(e, {}, p, 4);
      const std::vector<int> axes{axis(rng), axis(rng), axis(rng), axis(rng)};
      const Q h("1e-4");
      const QC fd = (4 * fd_partial(e, p, axes, h / 2) - fd_partial(e, p, axes, h)) / 3;
      const Complex ref(static_cast<double>(fd.real()), static_cast<double>(fd.imag()));
      const Complex got = jet_partial(jet, axes, 2);
      INFO(text);
      CHECK(std::abs(got - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("lower-order partials and the value") {
  const Expr e = parse("exp(0.4*z1*conj(z2)) * pow(1 + abs2(z2), 0.5) - conj(z1)^3", 1);
  const Point p{{0.2, -0.1}, {0.35, 0.25}};
  const Jet jet = eval_jet(e, {}, p, 6);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> axis(0, 3);
  for (int order = 1; order <= 6; ++order) {
    std::vector<int> axes;
    for (int q = 0; q < order; ++q) axes.push_back(axis(rng));
    const Q h("1e-3");
    const QC fd = (4 * fd_partial(e, p, axes, h / 2) - fd_partial(e, p, axes, h)) / 3;
    const Complex ref(static_cast<double>(fd.real()), static_cast<double>(fd.imag()));
    CHECK(std::abs(jet_partial(jet, axes, 2) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
  }
}
