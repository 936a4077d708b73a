#include "crspectra/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

#include "crspectra/bounds.hpp"
#include "crspectra/error.hpp"
#include "crspectra/field.hpp"
#include "crspectra/invariants.hpp"
#include "crspectra/job.hpp"
#include "crspectra/quadrature.hpp"
#include "crspectra/spectral.hpp"

namespace crs {

namespace {

using nlohmann::json;

std::string sphere_text(int n) {
  std::string s;
  for (int j = 1; j <= n + 1; ++j) s += (j > 1 ? " + abs2(z" : "abs2(z") + std::to_string(j) + ")";
  return s + " - 1";
}

Point random_sphere_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Point p(static_cast<std::size_t>(n + 1));
  double norm = 0.0;
  for (Complex& c : p) {
    c = {normal(rng), normal(rng)};
    norm += std::norm(c);
  }
  for (Complex& c : p) c /= std::sqrt(norm);
  return p;
}

CVec to_cvec(const Point& p) {
  CVec v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t j = 0; j < p.size(); ++j) v(static_cast<Eigen::Index>(j)) = p[j];
  return v;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!detail.str().empty()) detail << "; ";
    detail << what;
    if (!cond) {
      ok = false;
      detail << " [FAIL]";
    }
  }
};

QuadratureRule hopf(const ScalarField& rho, int resolution) {
  QuadratureSettings s;
  s.resolution = resolution;
  return build_quadrature(rho, s);
}

// ---------------------------------------------------------------------------------

void sphere_invariants(Check& c) {
  std::mt19937_64 rng(101);
  for (int n : {1, 2}) {
    const FieldPtr rho = make_field(sphere_text(n), n);
    const double target = n * (n + 1.0);
    double er = 0.0, eJ = 0.0, ew = 0.0, eR = 0.0;
    for (int k = 0; k < 100; ++k) {
      const PointInvariants inv = compute_invariants(*rho, random_sphere_point(rng, n));
      er = std::max(er, std::abs(inv.r - 1.0));
      eJ = std::max(eJ, std::abs(inv.J - 1.0));
      ew = std::max(ew, std::abs(inv.webster - target));
      eR = std::max(eR, std::abs(inv.normalized - target));
    }
    const std::string tag = "n=" + std::to_string(n) + " ";
    c.expect(er <= 1e-10 && eJ <= 1e-10, tag + "max|r-1| " + sci(er) + ", max|J-1| " + sci(eJ));
    c.expect(ew <= 1e-9 && eR <= 1e-9, tag + "max|R_theta-n(n+1)| " + sci(ew) + ", max|R_Theta-n(n+1)| " + sci(eR));
  }
}

void quartic_normal_form(Check& c) {
  const Expr e = parse("-im(z2) + abs2(z1) + kappa*abs2(z1)^2 + gamma*(z1*conj(z1)^3 + z1^3*conj(z1))", 1);
  const double cube = std::cbrt(2.0);
  for (const auto& [kappa, gamma] : {std::pair{1.0, 0.0}, {1.0, 0.3}, {-0.5, 0.2}}) {
    const ExprField rho(e, {{"kappa", kappa}, {"gamma", gamma}});
    const PointInvariants inv = compute_invariants(rho, Point{0.0, 0.0});
    const double eJ = std::abs(inv.J - 0.25);
    const double eD = std::abs(inv.D - 4.0 * kappa);
    const double eR = std::abs(inv.normalized - 2.0 * cube * kappa);
    c.expect(eJ <= 1e-10 && eD <= 1e-8 && eR <= 1e-8,
             "kappa=" + sci(kappa) + " gamma=" + sci(gamma) + ": |J-1/4| " + sci(eJ) + ", |D-4k| " + sci(eD) +
                 ", |R_Theta-2^(4/3)k| " + sci(eR));
  }
}

void squared_sphere(Check& c) {
  const std::string text = "(abs2(z1) + abs2(z2))^2 - 1";
  const FieldPtr rho = make_field(text, 1);
  const QuadratureRule rule = hopf(*rho, 32);
  const SpectralReport rep = estimate_lambda1(*rho, 2, rule);
  const double el = std::abs(rep.solution.lambda1 - 0.5);
  c.expect(el <= 1e-6, "lambda1 " + sci(rep.solution.lambda1) + " (|err| " + sci(el) + ")");

  std::mt19937_64 rng(303);
  double eh = 0.0;
  for (int k = 0; k < 50; ++k) {
    eh = std::max(eh, std::abs(compute_invariants(*rho, random_sphere_point(rng, 1)).detH - 8.0));
  }
  c.expect(eh <= 1e-9, "max|detH-8| " + sci(eh));

  const PointInvariants at = compute_invariants(*rho, Point{1.0, 0.0});
  c.expect(std::abs(at.J - 8.0) <= 1e-9 && std::abs(at.r - 1.0) <= 1e-9,
           "computed J " + sci(at.J) + ", r " + sci(at.r));

  json job{{"version", 1},
           {"dimension_n", 1},
           {"defining_function", text},
           {"tasks", json::array({json{{"type", "invariants"},
                                       {"points", json::array({json::array({{1, 0}, {0, 0}})})},
                                       {"reference", {{"J", 4.0}, {"r", 2.0}}}}})}};
  const JobOutcome out = run_job(job);
  std::size_t flagged = 0;
  for (const json& d : out.report["tasks"][0]["result"]["discrepancies"]) {
    const std::string q = d["quantity"];
    if (q == "J" || q == "r") ++flagged;
  }
  c.expect(flagged == 2, "discrepancies flagged against J=4, r=2: " + std::to_string(flagged));
}

void definition_invariance(Check& c) {
  const std::string u = "(abs2(z1) + abs2(z2))";
  const std::vector<std::string> texts = {u + " - 1", "(" + u + "^2 - 1)/2", "(" + u + " - 1)*(1 + (" + u + " - 1)/2)"};
  std::vector<FieldPtr> fields;
  for (const auto& t : texts) fields.push_back(make_field(t, 1));
  std::mt19937_64 rng(404);
  double spread = 0.0;
  for (int k = 0; k < 25; ++k) {
    const Point p = random_sphere_point(rng, 1);
    std::vector<double> vals;
    for (const auto& f : fields) vals.push_back(compute_invariants(*f, p).normalized);
    for (std::size_t a = 0; a < vals.size(); ++a) {
      for (std::size_t b = a + 1; b < vals.size(); ++b) spread = std::max(spread, std::abs(vals[a] - vals[b]));
    }
  }
  c.expect(spread <= 1e-6, "max pairwise |R_Theta difference| " + sci(spread));
}

void sphere_spectrum(Check& c) {
  const int n = 1;
  const FieldPtr rho = make_field(sphere_text(n), n);
  const SpectralReport rep = estimate_lambda1(*rho, 3, hopf(*rho, 32));
  const SpectralSolution& s = rep.solution;

  // q(p+n) on bidegree (p, q) harmonics, multiplicity p + q + 1 when n = 1.
  std::vector<double> expected;
  for (int p = 0; p <= 3; ++p) {
    for (int q = 1; p + q <= 3; ++q) {
      for (int m = 0; m < p + q + 1; ++m) expected.push_back(q * (p + n));
    }
  }
  std::sort(expected.begin(), expected.end());
  std::vector<double> got;
  for (double v : s.eigenvalues) {
    if (v >= s.threshold) got.push_back(v);
  }
  double err = got.size() == expected.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) {
    err = std::max(err, std::abs(got[i] - expected[i]));
  }
  std::string table;
  for (const auto& [v, m] : cluster(got, 1e-6)) table += (table.empty() ? "" : " ") + sci(v) + "x" + std::to_string(m);
  c.expect(s.kernel_dim == 10, "kernel " + std::to_string(s.kernel_dim));
  c.expect(err <= 1e-8, "nonzero " + table + " (" + std::to_string(got.size()) + " of " +
                            std::to_string(expected.size()) + " expected, max err " + sci(err) + ")");
}

void ellipsoid_sandwich(Check& c) {
  const Expr e = parse("abs2(z1) + abs2(z2) + a*re(z1^2) - 1", 1);
  for (double a : {0.0, 0.05, 0.1}) {
    const ParameterMap params{{"a", a}};
    const auto rho = std::make_shared<ExprField>(e, params);
    const QuadratureRule rule = hopf(*rho, 32);

    Decomposition dec;
    dec.psi = parse("a*re(z1^2)", 1);
    dec.maps = {parse("z1", 1), parse("z2", 1)};
    dec.params = params;
    const double upper = decomposition_upper_bound(*rho, dec, rule).value;
    const double lower = curvature_lower_bound(*rho, sample_points(rule, 400), true).value;
    const double lam = estimate_lambda1(*rho, 4, rule).solution.lambda1;

    const auto hat = std::make_shared<NormalizedField>(rho);
    const QuadratureRule coarse = hopf(*rho, 24);
    const double lam_hat = estimate_lambda1(*hat, 4, reweight(coarse, *hat)).solution.lambda1;

    bool ok = lower - 1e-6 <= lam && lam <= upper + 1e-6 && lower - 1e-6 <= lam_hat;
    if (a == 0.0) ok = ok && std::abs(upper - 1.0) <= 1e-6 && std::abs(lower - 1.0) <= 1e-6;
    c.expect(ok, "a=" + sci(a) + ": lower " + sci(lower) + " <= lambda1 " + sci(lam) + " (normalized " +
                     sci(lam_hat) + ") <= upper " + sci(upper));
  }
}

void contact_volume(Check& c) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const FieldPtr sphere = make_field(sphere_text(1), 1);
  const double v1 = volume(hopf(*sphere, 32));
  const FieldPtr squared = make_field("(abs2(z1) + abs2(z2))^2 - 1", 1);
  const double v2 = volume(hopf(*squared, 32));
  c.expect(std::abs(v1 - 4 * pi2) <= 1e-8, "v(S^3) - 4pi^2 = " + sci(v1 - 4 * pi2));
  c.expect(std::abs(v2 - 16 * pi2) <= 1e-7, "v(u^2-1) - 16pi^2 = " + sci(v2 - 16 * pi2));
}

std::string random_polynomial(std::mt19937_64& rng, bool holomorphic) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 3);
  std::string s;
  for (int t = 0; t < 4; ++t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.6f + %.6f*i)", coef(rng), coef(rng));
    std::string term = buf;
    const int a1 = deg(rng), a2 = deg(rng) % (4 - a1);
    if (a1) term += "*z1^" + std::to_string(a1);
    if (a2) term += "*z2^" + std::to_string(a2);
    if (!holomorphic) {
      const int b1 = deg(rng) % 3, b2 = deg(rng) % 2;
      if (b1) term += "*conj(z1)^" + std::to_string(b1);
      if (b2) term += "*conj(z2)^" + std::to_string(b2);
    }
    s += (s.empty() ? "" : " + ") + term;
  }
  return s;
}

void operator_identities(Check& c) {
  const Expr e = parse("abs2(z1) + abs2(z2) + a*re(z1^2) - 1", 1);
  const ExprField rho(e, {{"a", 0.1}});
  const QuadratureRule rule = hopf(rho, 32);
  const MonomialBasis basis(1, 3);
  const SpectralProblem p = assemble(rho, rule, basis);
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  const double scale = p.stiffness.cwiseAbs().maxCoeff();
  double ibp = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t u = pick(rng), v = pick(rng);
    ibp = std::max(ibp, std::abs(p.kohn(u, v) - p.stiffness(u, v)));
  }
  c.expect(ibp <= 1e-7 * scale, "integration by parts max " + sci(ibp) + " (scale " + sci(scale) + ")");

  std::vector<Point> pts;
  for (int k = 0; k < 5; ++k) pts.push_back(radial_point(rho, to_cvec(random_sphere_point(rng, 1))).point);
  double box_holo = 0.0, delta = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Expr f = parse(random_polynomial(rng, true), 1);
    const Expr g = parse("re(" + random_polynomial(rng, false) + ")", 1);
    for (const Point& q : pts) {
      const CRFrame fr = build_frame(rho, q);
      box_holo = std::max(box_holo, std::abs(kohn_laplacian(fr, eval_jet(f, {}, q, 2))));
      const Jet u = eval_jet(g, {}, q, 2);
      delta = std::max(delta, std::abs(sub_laplacian(fr, u) - 2.0 * kohn_laplacian(fr, u).real()));
    }
  }
  c.expect(box_holo <= 1e-12, "max|box_b holomorphic| " + sci(box_holo));
  c.expect(delta <= 1e-10, "max|Delta_b u - 2 Re box_b u| " + sci(delta));
}

void proof_identities(Check& c) {
  const int n = 1;
  const FieldPtr rho = make_field(sphere_text(n), n);
  const std::vector<Expr> maps = {parse("z1^2", n), parse("1.4142135623730951*z1*z2", n), parse("z2^2", n)};
  Decomposition dec;
  dec.N = 2.0;
  dec.maps = maps;
  std::mt19937_64 rng(909);
  std::vector<Point> pts;
  for (int k = 0; k < 20; ++k) pts.push_back(random_sphere_point(rng, n));
  validate_decomposition(*rho, dec, pts, 1e-10);
  // On the unit sphere r = 1, so the right-hand sides are n^2 N (r + N - 1) = 4 and n N = 2.
  const double box_expected = 4.0, dbar_expected = 2.0;
  double eb = 0.0, ed = 0.0;
  for (const Point& p : pts) {
    const CRFrame fr = build_frame(*rho, p);
    double box2 = 0.0, dbar2 = 0.0;
    for (const Expr& f : maps) {
      const Jet g = conj(eval_jet(f, {}, p, 2));
      box2 += std::norm(kohn_laplacian(fr, g));
      dbar2 += dbar_pairing(fr, g, g).real();
    }
    eb = std::max(eb, std::abs(box2 - box_expected) / box_expected);
    ed = std::max(ed, std::abs(dbar2 - dbar_expected) / dbar_expected);
  }
  c.expect(eb <= 1e-7, "sum|box_b conj f|^2 rel err " + sci(eb));
  c.expect(ed <= 1e-7, "sum|dbar_b conj f|^2 rel err " + sci(ed));
}

void special_gate(Check& c) {
  for (int n : {1, 2}) {
    const FieldPtr rho = make_field(sphere_text(n), n);
    std::mt19937_64 rng(1010 + n);
    std::vector<Point> pts;
    for (int k = 0; k < 100; ++k) pts.push_back(random_sphere_point(rng, n));
    const BoundReport b = special_upper_bound(*rho, 1, pts);
    const double lhs = b.diagnostics["condition_max"];
    const double spread = b.diagnostics["r_spread"];
    c.expect(b.applicable && lhs <= 1e-10 && std::abs(b.value - n) <= 1e-10 && spread <= 1e-10,
             "n=" + std::to_string(n) + ": condition " + sci(lhs) + ", bound " + sci(b.value) + ", r spread " +
                 sci(spread));
  }
}

// Extended-precision evaluator used as the finite-difference oracle.
using LComplex = std::complex<long double>;

LComplex eval_ld(const NodePtr& node, const std::vector<LComplex>& z) {
  const Node& nd = *node;
  switch (nd.kind) {
    case NodeKind::variable: return z[static_cast<std::size_t>(nd.index - 1)];
    case NodeKind::conj_variable: return std::conj(z[static_cast<std::size_t>(nd.index - 1)]);
    case NodeKind::literal: return {nd.value.real(), nd.value.imag()};
    case NodeKind::parameter: throw Error(Errc::UnboundParameter, nd.name);
    case NodeKind::add: return eval_ld(nd.args[0], z) + eval_ld(nd.args[1], z);
    case NodeKind::sub: return eval_ld(nd.args[0], z) - eval_ld(nd.args[1], z);
    case NodeKind::mul: return eval_ld(nd.args[0], z) * eval_ld(nd.args[1], z);
    case NodeKind::div: return eval_ld(nd.args[0], z) / eval_ld(nd.args[1], z);
    case NodeKind::neg: return -eval_ld(nd.args[0], z);
    case NodeKind::pow: {
      const LComplex b = eval_ld(nd.args[0], z);
      LComplex out = 1.0L;
      for (int k = 0; k < std::abs(nd.exponent); ++k) out *= b;
      return nd.exponent < 0 ? 1.0L / out : out;
    }
    case NodeKind::call: {
      const LComplex a = eval_ld(nd.args[0], z);
      switch (nd.func) {
        case Func::conj: return std::conj(a);
        case Func::re: return a.real();
        case Func::im: return a.imag();
        case Func::log: return std::log(a);
        case Func::exp: return std::exp(a);
        case Func::pow: return std::pow(a.real(), eval_ld(nd.args[1], z).real());
      }
    }
  }
  return 0.0L;
}

std::string random_composite(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> choice(0, depth <= 0 ? 2 : 10);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  char buf[64];
  switch (choice(rng)) {
    case 0: return "z" + std::to_string(1 + static_cast<int>(rng() % 2));
    case 1: return "conj(z" + std::to_string(1 + static_cast<int>(rng() % 2)) + ")";
    case 2: std::snprintf(buf, sizeof buf, "(%.4f + %.4f*i)", coef(rng), coef(rng)); return buf;
    case 3: return "(" + random_composite(rng, depth - 1) + " + " + random_composite(rng, depth - 1) + ")";
    case 4: return "(" + random_composite(rng, depth - 1) + " - " + random_composite(rng, depth - 1) + ")";
    case 5: return "(" + random_composite(rng, depth - 1) + " * " + random_composite(rng, depth - 1) + ")";
    case 6: return "exp(0.5*" + random_composite(rng, depth - 1) + ")";
    case 7: return "log(1 + abs2(" + random_composite(rng, depth - 1) + "))";
    case 8: return "pow(1 + abs2(" + random_composite(rng, depth - 1) + "), -0.5)";
    case 9: return "(" + random_composite(rng, depth - 1) + ")^3";
    default:
      return random_composite(rng, depth - 1) + " / (2 + abs2(" + random_composite(rng, depth - 1) + "))";
  }
}

void jet_finite_differences(Check& c) {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> coord(-0.6, 0.6);
  std::uniform_int_distribution<int> axis(0, 3);
  double worst = 0.0;
  std::string worst_expr;
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    const std::string text = random_composite(rng, 4);
    const Expr e = parse(text, 1);
    const Point p{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    const Jet jet = eval_jet(e, {}, p, 4);
    for (int t = 0; t < 3; ++t) {
      std::array<int, 4> ax{axis(rng), axis(rng), axis(rng), axis(rng)};
      // Real axes: 0, 1 are Re z1, Re z2; 2, 3 are Im z1, Im z2.
      // d/dx = d + dbar, d/dy = i (d - dbar).
      Complex from_jet = 0.0;
      for (int mask = 0; mask < 16; ++mask) {
        MultiIndex mi;
        Complex weight = 1.0;
        for (int q = 0; q < 4; ++q) {
          const bool anti = (mask >> q) & 1;
          const int var = ax[q] % 2;
          if (anti) ++mi.beta[static_cast<std::size_t>(var)];
          else ++mi.alpha[static_cast<std::size_t>(var)];
          if (ax[q] >= 2) weight *= anti ? Complex(0, -1) : Complex(0, 1);
        }
        from_jet += weight * jet.partial(mi);
      }
      auto stencil = [&](long double h) {
        LComplex sum = 0.0L;
        for (int s = 0; s < 16; ++s) {
          std::vector<LComplex> z{{p[0].real(), p[0].imag()}, {p[1].real(), p[1].imag()}};
          long double sign = 1.0L;
          for (int q = 0; q < 4; ++q) {
            const long double step = ((s >> q) & 1) ? -h : h;
            if ((s >> q) & 1) sign = -sign;
            const auto var = static_cast<std::size_t>(ax[q] % 2);
            z[var] += ax[q] >= 2 ? LComplex(0.0L, step) : LComplex(step, 0.0L);
          }
          sum += sign * eval_ld(e.root(), z);
        }
        const long double d = 2.0L * h;
        return sum / (d * d * d * d);
      };
      const long double h = 0.005L;
      const LComplex fd = (4.0L * stencil(h / 2) - stencil(h)) / 3.0L;
      const Complex fdd(static_cast<double>(fd.real()), static_cast<double>(fd.imag()));
      const double rel = std::abs(from_jet - fdd) / std::max(1.0, std::abs(fdd));
      if (rel > worst) {
        worst = rel;
        worst_expr = text;
      }
      ++checked;
    }
  }
  c.expect(worst <= 1e-5, std::to_string(checked) + " fourth-order partials, max rel err " + sci(worst));
  if (worst > 1e-5) c.detail << " worst: " << worst_expr;
}

void determinism(Check& c) {
  const json job = json::parse(R"j({
    "version": 1,
    "dimension_n": 1,
    "defining_function": "abs2(z1) + abs2(z2) + a*re(z1^2) - 1",
    "params": {"a": 0.05},
    "quadrature": {"type": "monte_carlo", "samples": 6000, "seed": 17},
    "tasks": [
      {"type": "invariants", "samples": 5},
      {"type": "curvature", "samples": 5},
      {"type": "spectrum", "degree": 2},
      {"type": "bound_upper", "decomposition": {"N": 1, "nu": 1, "psi": "a*re(z1^2)", "maps": ["z1", "z2"]}}
    ]
  })j");
  const char* prev = std::getenv("CR_SPECTRA_THREADS");
  const std::string saved = prev ? prev : "";
  const JobOutcome a = run_job(job);
  setenv("CR_SPECTRA_THREADS", "1", 1);
  const JobOutcome b = run_job(job);
  const std::string first = report_text(a), second = report_text(b);
  if (prev) setenv("CR_SPECTRA_THREADS", saved.c_str(), 1);
  else unsetenv("CR_SPECTRA_THREADS");
  c.expect(a.exit_code == 0, "job exit code " + std::to_string(a.exit_code));
  c.expect(first == second, std::to_string(first.size()) + " report bytes, identical across thread counts");
}

struct Entry {
  const char* title;
  void (*run)(Check&);
};

const Entry kEntries[kCriterionCount] = {
    {"round sphere invariants", sphere_invariants},
    {"quartic normal form at the origin", quartic_normal_form},
    {"squared sphere spectrum and determinants", squared_sphere},
    {"defining-function invariance of R_Theta", definition_invariance},
    {"sphere spectrum at degree 3", sphere_spectrum},
    {"ellipsoid bound sandwich", ellipsoid_sandwich},
    {"contact volume", contact_volume},
    {"operator identities", operator_identities},
    {"upper-bound quadratic identities", proof_identities},
    {"special-condition gate on spheres", special_gate},
    {"jet derivatives against finite differences", jet_finite_differences},
    {"report determinism", determinism},
};

}  // namespace

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  if (id < 1 || id > kCriterionCount) {
    r.title = "unknown";
    r.detail = "no such check";
    return r;
  }
  const Entry& e = kEntries[id - 1];
  r.title = e.title;
  const auto start = std::chrono::steady_clock::now();
  Check c;
  try {
    e.run(c);
    r.passed = c.ok;
    r.detail = c.detail.str();
  } catch (const Error& err) {
    r.passed = false;
    r.detail = c.detail.str() + (c.detail.str().empty() ? "" : "; ") + std::string(to_string(err.code())) + ": " +
               err.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_verify_suite(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s %2d  %-44s %6.2fs  ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace crs
