#include "crspectra/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crspectra/error.hpp"
#include "crspectra/invariants.hpp"
#include "crspectra/parallel.hpp"

namespace crs {

namespace {

using nlohmann::json;

json point_json(const Point& p) {
  json a = json::array();
  for (const Complex& c : p) a.push_back({c.real(), c.imag()});
  return a;
}

std::string point_text(const Point& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%.10g%+.10gi", k ? ", " : "", p[k].real(), p[k].imag());
    s += buf;
  }
  return s + ")";
}

double evenly(std::size_t k, std::size_t count, std::size_t total) {
  return static_cast<double>(k) * static_cast<double>(total) / static_cast<double>(count);
}

std::vector<double> transverse_curvatures(const ScalarField& rho, const QuadratureRule& rule, const Tolerances& tol) {
  std::vector<double> r(rule.size());
  parallel_chunks(rule.size(), std::min<std::size_t>(rule.size(), 256), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) r[i] = build_frame(rho.jet(rule.points[i].ambient, 2), tol).r;
  });
  return r;
}

Jet map_jet(const Expr& f, const ParameterMap& params, const Point& p, int order) {
  return eval_jet(f, params, p, order);
}

}  // namespace

std::vector<Point> sample_points(const QuadratureRule& rule, std::size_t count) {
  std::vector<Point> out;
  if (rule.size() == 0) return out;
  count = std::min(count, rule.size());
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(rule.points[static_cast<std::size_t>(evenly(k, count, rule.size()))].ambient);
  }
  return out;
}

json validate_decomposition(const ScalarField& rho, const Decomposition& dec, std::span<const Point> points,
                            double tol) {
  if (!(dec.N >= 1.0)) throw Error(Errc::InvalidDecomposition, "decomposition exponent N must be >= 1");
  if (!(dec.nu > 0.0)) throw Error(Errc::InvalidDecomposition, "decomposition shift nu must be positive");
  if (dec.maps.empty()) throw Error(Errc::InvalidDecomposition, "decomposition has no holomorphic maps");
  for (std::size_t mu = 0; mu < dec.maps.size(); ++mu) {
    if (!check_holomorphic(dec.maps[mu])) {
      throw Error(Errc::InvalidDecomposition, "map " + std::to_string(mu + 1) + " is not holomorphic: " +
                                                  print(dec.maps[mu]));
    }
  }

  double worst_residual = 0.0;
  double worst_pluri = 0.0;
  Point worst_residual_point, worst_pluri_point;
  for (const Point& base : points) {
    for (double scale : {1.0, 0.98, 1.02}) {
      Point p = base;
      for (auto& c : p) c *= scale;
      const double rv = rho.value(p);
      const double shifted = rv + dec.nu;
      if (!(shifted > 0.0)) continue;
      double lhs = std::pow(shifted, dec.N);
      double psi = 0.0;
      if (!dec.psi.empty()) {
        const Jet pj = eval_jet(dec.psi, dec.params, p, 2);
        psi = pj.value().real();
        if (std::abs(pj.value().imag()) > tol) {
          throw Error(Errc::InvalidDecomposition, "psi is not real-valued at " + point_text(p));
        }
        for (int j = 0; j < pj.dim(); ++j) {
          for (int k = 0; k < pj.dim(); ++k) {
            const double v = std::abs(pj.d_dbar(j, k));
            if (v > worst_pluri) {
              worst_pluri = v;
              worst_pluri_point = p;
            }
          }
        }
      }
      double sum = 0.0;
      for (const Expr& f : dec.maps) sum += std::norm(evaluate(f, dec.params, p));
      const double res = std::abs(lhs - psi - sum) / std::max(1.0, std::abs(lhs));
      if (res > worst_residual) {
        worst_residual = res;
        worst_residual_point = p;
      }
    }
  }
  if (worst_residual > tol) {
    throw Error(Errc::InvalidDecomposition, "decomposition residual " + std::to_string(worst_residual) +
                                                " exceeds tolerance at " + point_text(worst_residual_point));
  }
  if (worst_pluri > tol) {
    throw Error(Errc::InvalidDecomposition, "psi is not pluriharmonic: |psi_{j kbar}| = " +
                                                std::to_string(worst_pluri) + " at " + point_text(worst_pluri_point));
  }
  return json{{"max_residual", worst_residual},
              {"max_pluriharmonic_defect", worst_pluri},
              {"validation_points", points.size() * 3}};
}

BoundReport decomposition_upper_bound(const ScalarField& rho, const Decomposition& dec, const QuadratureRule& rule,
                              const BoundOptions& opt) {
  const int n = rho.n();
  BoundReport rep;
  rep.kind = "decomposition_upper";
  const std::vector<Point> checks = sample_points(rule, static_cast<std::size_t>(opt.identity_points));
  rep.diagnostics["decomposition"] = validate_decomposition(rho, dec, checks, opt.decomposition_tol);

  const std::vector<double> r = transverse_curvatures(rho, rule, opt.frame);
  const double v = volume(rule);
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) terms[i] = rule.weights[i] * r[i];
  const double integral = pairwise_sum(std::span<const double>(terms));
  rep.value = n * integral / v + n * (dec.N - 1.0) / dec.nu;

  // Pointwise identities for sum |box_b conj f|^2 and sum |dbar_b conj f|^2.
  const double N = dec.N, nu = dec.nu;
  double worst_box = 0.0, worst_dbar = 0.0;
  json samples = json::array();
  for (const Point& p : checks) {
    const CRFrame fr = build_frame(rho.jet(p, 2), opt.frame);
    double box2 = 0.0, dbar2 = 0.0;
    for (const Expr& f : dec.maps) {
      const Jet g = conj(map_jet(f, dec.params, p, 2));
      box2 += std::norm(kohn_laplacian(fr, g));
      dbar2 += dbar_pairing(fr, g, g).real();
    }
    const double box_expected = n * n * N * std::pow(nu, N - 2.0) * (nu * fr.r + N - 1.0);
    const double dbar_expected = n * N * std::pow(nu, N - 1.0);
    const double eb = std::abs(box2 - box_expected) / std::max(1e-300, std::abs(box_expected));
    const double ed = std::abs(dbar2 - dbar_expected) / std::max(1e-300, std::abs(dbar_expected));
    worst_box = std::max(worst_box, eb);
    worst_dbar = std::max(worst_dbar, ed);
    samples.push_back({{"point", point_json(p)}, {"box_sum", box2}, {"box_expected", box_expected},
                       {"dbar_sum", dbar2}, {"dbar_expected", dbar_expected}});
  }

  // Rayleigh quotients of the candidate functions over the whole rule.
  std::vector<std::vector<double>> box_terms(dec.maps.size(), std::vector<double>(rule.size()));
  std::vector<std::vector<double>> dbar_terms(dec.maps.size(), std::vector<double>(rule.size()));
  parallel_chunks(rule.size(), std::min<std::size_t>(rule.size(), 256), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Point& p = rule.points[i].ambient;
      const CRFrame fr = build_frame(rho.jet(p, 2), opt.frame);
      for (std::size_t mu = 0; mu < dec.maps.size(); ++mu) {
        const Jet g = conj(map_jet(dec.maps[mu], dec.params, p, 2));
        box_terms[mu][i] = rule.weights[i] * std::norm(kohn_laplacian(fr, g));
        dbar_terms[mu][i] = rule.weights[i] * dbar_pairing(fr, g, g).real();
      }
    }
  });
  double rayleigh = std::numeric_limits<double>::infinity();
  json ratios = json::array();
  for (std::size_t mu = 0; mu < dec.maps.size(); ++mu) {
    const double num = pairwise_sum(std::span<const double>(box_terms[mu]));
    const double den = pairwise_sum(std::span<const double>(dbar_terms[mu]));
    if (den > 1e-14 * v) {
      rayleigh = std::min(rayleigh, num / den);
      ratios.push_back(num / den);
    } else {
      ratios.push_back(nullptr);
    }
  }

  const auto [rmin, rmax] = std::minmax_element(r.begin(), r.end());
  rep.diagnostics["volume"] = v;
  rep.diagnostics["mean_r"] = integral / v;
  rep.diagnostics["min_r"] = *rmin;
  rep.diagnostics["max_r"] = *rmax;
  rep.diagnostics["N"] = N;
  rep.diagnostics["nu"] = nu;
  rep.diagnostics["box_identity_max_rel_error"] = worst_box;
  rep.diagnostics["dbar_identity_max_rel_error"] = worst_dbar;
  rep.diagnostics["identities_ok"] = worst_box <= opt.identity_tol && worst_dbar <= opt.identity_tol;
  rep.diagnostics["identity_samples"] = samples;
  rep.diagnostics["candidate_rayleigh_quotients"] = ratios;
  rep.diagnostics["candidate_rayleigh_min"] = std::isfinite(rayleigh) ? json(rayleigh) : json(nullptr);
  return rep;
}

std::vector<ComplexFunction> candidate_functions(std::shared_ptr<const ScalarField> rho, const Decomposition& dec,
                                                 const Tolerances& tol) {
  std::vector<ComplexFunction> out;
  for (const Expr& f : dec.maps) {
    out.push_back([rho, f, params = dec.params, tol](const Point& p) {
      const CRFrame fr = build_frame(rho->jet(p, 2), tol);
      return kohn_laplacian(fr, conj(eval_jet(f, params, p, 2)));
    });
  }
  return out;
}

FieldPtr sphere_pullback(const std::vector<Expr>& maps, const ParameterMap& params) {
  if (maps.empty()) throw Error(Errc::InvalidArgument, "no maps given");
  NodePtr sum;
  for (const Expr& f : maps) {
    NodePtr term = make_binary(NodeKind::mul, f.root(), make_conj(f.root()));
    sum = sum ? make_binary(NodeKind::add, sum, term) : term;
  }
  sum = make_binary(NodeKind::sub, sum, make_literal(1.0));
  return std::make_shared<ExprField>(Expr(sum, maps.front().n()), params);
}

BoundReport reilly_upper_bound(const std::vector<Expr>& maps, const ParameterMap& params, const QuadratureRule& rule,
                               const BoundOptions& opt) {
  for (std::size_t mu = 0; mu < maps.size(); ++mu) {
    if (!check_holomorphic(maps[mu])) {
      throw Error(Errc::InvalidDecomposition, "map " + std::to_string(mu + 1) + " is not holomorphic");
    }
  }
  const FieldPtr rho_f = sphere_pullback(maps, params);
  double worst = 0.0;
  Point worst_point;
  for (const SurfacePoint& sp : rule.points) {
    const double v = std::abs(rho_f->value(sp.ambient));
    if (v > worst) {
      worst = v;
      worst_point = sp.ambient;
    }
  }
  if (worst > opt.decomposition_tol) {
    throw Error(Errc::NotOnSphereImage, "sum |F|^2 - 1 = " + std::to_string(worst) + " at " + point_text(worst_point) +
                                            "; F does not map M into the unit sphere");
  }
  const QuadratureRule pulled = reweight(rule, *rho_f);
  Decomposition dec;
  dec.maps = maps;
  dec.params = params;
  BoundReport rep = decomposition_upper_bound(*rho_f, dec, pulled, opt);
  rep.kind = "reilly_upper";
  rep.diagnostics["max_pullback_residual"] = worst;
  rep.diagnostics["pullback_defining_function"] =
      print(static_cast<const ExprField&>(*rho_f).expr());
  return rep;
}

BoundReport special_upper_bound(const ScalarField& rho, int j, std::span<const Point> samples,
                                const BoundOptions& opt) {
  const int n = rho.n();
  if (j < 1 || j > n + 1) throw Error(Errc::IndexOutOfRange, "coordinate index j outside [1, n+1]");
  if (samples.empty()) throw Error(Errc::InvalidArgument, "no sample points");
  BoundReport rep;
  rep.kind = "special_upper";
  double max_lhs = -std::numeric_limits<double>::infinity();
  double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
  Point worst;
  for (const Point& p : samples) {
    const Jet rho3 = rho.jet(p, 3);
    const CRFrame fr = build_frame(rho3.truncated(2), opt.frame);
    if (fr.r < -opt.frame.degeneracy) {
      throw Error(Errc::NegativeTransverseCurvature,
                  "transverse curvature r = " + std::to_string(fr.r) + " < 0 at " + point_text(p));
    }
    const Jet rj = rho3.derivative(VarKind::holomorphic, j - 1);
    const Complex t = tilde_laplacian(fr, rj);
    const double lhs = (n * fr.r * std::conj(rj.value()) * t).real() + std::norm(t);
    if (lhs > max_lhs) {
      max_lhs = lhs;
      worst = p;
    }
    rmin = std::min(rmin, fr.r);
    rmax = std::max(rmax, fr.r);
  }
  const bool ok = max_lhs <= opt.condition_tol;
  rep.applicable = ok;
  rep.value = ok ? n * rmax : std::numeric_limits<double>::quiet_NaN();
  rep.diagnostics["condition_max"] = max_lhs;
  rep.diagnostics["condition_ok"] = ok;
  rep.diagnostics["condition_worst_point"] = point_json(worst);
  rep.diagnostics["min_r"] = rmin;
  rep.diagnostics["max_r"] = rmax;
  rep.diagnostics["r_spread"] = rmax - rmin;
  rep.diagnostics["samples"] = samples.size();
  rep.diagnostics["j"] = j;
  return rep;
}

BoundReport curvature_lower_bound(const ScalarField& rho, std::span<const Point> samples, bool paneitz_positive,
                              const BoundOptions& opt) {
  const int n = rho.n();
  if (n == 1 && !paneitz_positive) {
    throw Error(Errc::NotApplicable,
                "the lower bound for n = 1 requires the paneitz_positive assertion (positive CR Paneitz operator)");
  }
  if (samples.empty()) throw Error(Errc::InvalidArgument, "no sample points");
  std::vector<PointInvariants> inv(samples.size());
  parallel_chunks(samples.size(), std::min<std::size_t>(samples.size(), 64), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) inv[i] = compute_invariants(rho, samples[i], opt.frame);
  });
  double min_R = std::numeric_limits<double>::infinity(), max_R = -min_R;
  double min_D = min_R, min_conf = min_R, max_conf = -min_R, min_literal = min_R;
  for (const PointInvariants& p : inv) {
    min_R = std::min(min_R, p.normalized);
    max_R = std::max(max_R, p.normalized);
    min_D = std::min(min_D, p.D);
    min_conf = std::min(min_conf, p.normalized_conformal);
    max_conf = std::max(max_conf, p.normalized_conformal);
    min_literal = std::min(min_literal, std::pow(p.J, 1.0 / (n + 1)) * p.D);
  }
  BoundReport rep;
  rep.kind = "curvature_lower";
  rep.value = min_R / (n + 1);
  const bool super = min_D > 0.0;
  rep.diagnostics["min_R_Theta"] = min_R;
  rep.diagnostics["max_R_Theta"] = max_R;
  rep.diagnostics["min_D"] = min_D;
  rep.diagnostics["super_pseudoconvex"] = super;
  rep.diagnostics["samples"] = samples.size();
  rep.diagnostics["paneitz_positive_asserted"] = paneitz_positive;
  rep.diagnostics["conformal_route_value"] = min_conf / (n + 1);
  rep.diagnostics["conformal_route_min_R_Theta"] = min_conf;
  rep.diagnostics["conformal_route_max_R_Theta"] = max_conf;
  if (!super) rep.diagnostics["warning"] = "min D <= 0: NotSuperPseudoconvex, the bound is vacuous";
  const double literal = n * min_literal;
  rep.diagnostics["discrepancies"] = json::array(
      {json{{"quantity", "lower_bound_constant"},
            {"computed", rep.value},
            {"reference", literal},
            {"note", "value = min R_Theta / (n+1); reference uses n * min J^(1/(n+1)) D, which is not sharp on "
                     "the round sphere"}}});
  return rep;
}

}  // namespace crs
