#include "crspectra/job.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "crspectra/bounds.hpp"
#include "crspectra/field.hpp"
#include "crspectra/invariants.hpp"
#include "crspectra/quadrature.hpp"
#include "crspectra/report.hpp"
#include "crspectra/spectral.hpp"

namespace crs {

namespace {

using nlohmann::json;

const std::set<std::string> kTaskTypes = {"invariants",  "curvature",   "bound_upper", "bound_reilly",
                                          "bound_special", "bound_lower", "spectrum",    "invariance_check"};

[[noreturn]] void schema(const std::string& msg) { throw Error(Errc::SchemaError, msg); }

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) schema(where + ": unknown field '" + it.key() + "'");
  }
}

void require_int(const json& obj, const char* key, const std::string& where, long lo, long hi) {
  if (!obj.contains(key)) return;
  const json& v = obj[key];
  if (!v.is_number_integer() || v.get<long>() < lo || v.get<long>() > hi) {
    schema(where + ": '" + key + "' must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void require_number(const json& obj, const char* key, const std::string& where) {
  if (obj.contains(key) && !obj[key].is_number()) schema(where + ": '" + key + "' must be a number");
}

void require_string(const json& obj, const char* key, const std::string& where) {
  if (obj.contains(key) && !obj[key].is_string()) schema(where + ": '" + key + "' must be a string");
}

void require_string_list(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj[key];
  if (!v.is_array() || v.empty()) schema(where + ": '" + key + "' must be a nonempty array of strings");
  for (const json& s : v) {
    if (!s.is_string()) schema(where + ": '" + key + "' must contain only strings");
  }
}

void require_point_list(const json& obj, const char* key, const std::string& where, int n) {
  if (!obj.contains(key)) return;
  const json& v = obj[key];
  if (!v.is_array() || v.empty()) schema(where + ": '" + key + "' must be a nonempty array of points");
  for (const json& p : v) {
    if (!p.is_array() || static_cast<int>(p.size()) != n + 1) {
      schema(where + ": each point must list " + std::to_string(n + 1) + " [re, im] pairs");
    }
    for (const json& c : p) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        schema(where + ": coordinates must be [re, im] number pairs");
      }
    }
  }
}

Point to_point(const json& p) {
  Point out;
  for (const json& c : p) out.emplace_back(c[0].get<double>(), c[1].get<double>());
  return out;
}

json point_json(const Point& p) {
  json a = json::array();
  for (const Complex& c : p) a.push_back({c.real(), c.imag()});
  return a;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json matrix_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Context {
  json job;
  int n = 1;
  ParameterMap params;
  FieldPtr rho;
  QuadratureSettings quad;
  std::unique_ptr<QuadratureRule> rule;
  std::vector<InvariantRow> csv_rows;
  bool want_csv = false;

  const QuadratureRule& quadrature() {
    if (!rule) rule = std::make_unique<QuadratureRule>(build_quadrature(*rho, quad));
    return *rule;
  }

  json quadrature_json() {
    const QuadratureRule& q = quadrature();
    json j{{"type", to_string(q.settings.type)},
           {"points", q.size()},
           {"volume", volume(q)},
           {"max_tangent_residual", q.max_tangent_residual}};
    if (q.settings.type == RuleType::hopf_product) {
      j["resolution"] = q.settings.resolution;
    } else {
      j["samples"] = q.settings.samples;
      j["seed"] = q.settings.seed;
    }
    return j;
  }

  std::vector<Point> points_for(const json& task, std::size_t default_samples) {
    std::vector<Point> out;
    if (task.contains("points")) {
      for (const json& p : task["points"]) out.push_back(to_point(p));
    }
    if (task.contains("directions")) {
      for (const json& d : task["directions"]) {
        const Point p = to_point(d);
        CVec v(static_cast<Eigen::Index>(p.size()));
        for (std::size_t j = 0; j < p.size(); ++j) v(static_cast<Eigen::Index>(j)) = p[j];
        const double norm = v.norm();
        if (!(norm > 0.0)) throw Error(Errc::InvalidArgument, "direction must be nonzero");
        out.push_back(radial_point(*rho, v / norm).point);
      }
    }
    if (task.contains("samples") || out.empty()) {
      const std::size_t count = task.contains("samples") ? task["samples"].get<std::size_t>() : default_samples;
      for (Point& p : sample_points(quadrature(), count)) out.push_back(std::move(p));
    }
    return out;
  }
};

void compare_reference(const json& task, const std::string& quantity, double computed, const Point& p,
                       json& discrepancies) {
  if (!task.contains("reference") || !task["reference"].contains(quantity)) return;
  const double ref = task["reference"][quantity].get<double>();
  const double tol = task.value("tolerance", 1e-9);
  if (std::abs(computed - ref) > tol * std::max(1.0, std::abs(ref))) {
    discrepancies.push_back(
        {{"quantity", quantity}, {"computed", computed}, {"reference", ref}, {"point", point_json(p)}});
  }
}

json run_invariants(Context& ctx, const json& task, bool curvature) {
  const std::vector<Point> pts = ctx.points_for(task, 20);
  json rows = json::array();
  json discrepancies = json::array();
  double rmin = INFINITY, rmax = -INFINITY, Jmin = INFINITY, Jmax = -INFINITY, hmin = INFINITY, hmax = -INFINITY;
  double Rmin = INFINITY, Rmax = -INFINITY, Dmin = INFINITY;
  for (const Point& p : pts) {
    const PointInvariants inv = compute_invariants(*ctx.rho, p);
    json row{{"point", point_json(p)}};
    if (!curvature) {
      row["r"] = inv.r;
      row["J"] = inv.J;
      row["detH"] = inv.detH;
      row["chart"] = inv.frame.chart + 1;
      row["xi"] = vector_json(inv.frame.xi);
      row["levi"] = matrix_json(inv.frame.levi);
      for (const auto& [q, v] : {std::pair{"r", inv.r}, {"J", inv.J}, {"detH", inv.detH}}) {
        compare_reference(task, q, v, p, discrepancies);
      }
    } else {
      row["R_theta"] = inv.webster;
      row["D"] = inv.D;
      row["R_Theta"] = inv.normalized;
      row["R_Theta_conformal"] = inv.normalized_conformal;
      row["ricci"] = matrix_json(inv.ricci);
      row["ricci_trace"] = ricci_trace(inv.frame, inv.ricci);
      row["chart"] = inv.frame.chart + 1;
      for (const auto& [q, v] :
           {std::pair{"R_theta", inv.webster}, {"D", inv.D}, {"R_Theta", inv.normalized}, {"J", inv.J}}) {
        compare_reference(task, q, v, p, discrepancies);
      }
    }
    rows.push_back(row);
    rmin = std::min(rmin, inv.r);
    rmax = std::max(rmax, inv.r);
    Jmin = std::min(Jmin, inv.J);
    Jmax = std::max(Jmax, inv.J);
    hmin = std::min(hmin, inv.detH);
    hmax = std::max(hmax, inv.detH);
    Rmin = std::min(Rmin, inv.normalized);
    Rmax = std::max(Rmax, inv.normalized);
    Dmin = std::min(Dmin, inv.D);
    if (ctx.want_csv) {
      ctx.csv_rows.push_back({p, inv.r, inv.J, inv.detH, inv.webster, inv.D, inv.normalized});
    }
  }
  json out{{"points", rows}, {"discrepancies", discrepancies}};
  if (!curvature) {
    out["summary"] = {{"min_r", rmin}, {"max_r", rmax}, {"min_J", Jmin},
                      {"max_J", Jmax}, {"min_detH", hmin}, {"max_detH", hmax}};
  } else {
    out["summary"] = {{"min_R_Theta", Rmin}, {"max_R_Theta", Rmax}, {"min_D", Dmin}, {"super_pseudoconvex", Dmin > 0.0}};
  }
  return out;
}

json bound_json(const BoundReport& b) {
  json out{{"kind", b.kind}, {"applicable", b.applicable}, {"diagnostics", b.diagnostics}};
  out["value"] = b.applicable ? json(b.value) : json(nullptr);
  return out;
}

std::vector<Expr> parse_list(const json& list, int n) {
  std::vector<Expr> out;
  for (const json& s : list) out.push_back(parse(s.get<std::string>(), n));
  return out;
}

json run_bound(Context& ctx, const json& task, const std::string& type) {
  BoundOptions opt;
  if (type == "bound_upper") {
    if (!task.contains("decomposition")) throw Error(Errc::SchemaError, "bound_upper needs a decomposition block");
    const json& d = task["decomposition"];
    Decomposition dec;
    dec.N = d.value("N", 1.0);
    dec.nu = d.value("nu", 1.0);
    if (d.contains("psi")) dec.psi = parse(d["psi"].get<std::string>(), ctx.n);
    dec.maps = parse_list(d["maps"], ctx.n);
    dec.params = ctx.params;
    json out = bound_json(decomposition_upper_bound(*ctx.rho, dec, ctx.quadrature(), opt));
    out["quadrature"] = ctx.quadrature_json();
    return out;
  }
  if (type == "bound_reilly") {
    if (!task.contains("F_maps")) throw Error(Errc::SchemaError, "bound_reilly needs F_maps");
    json out = bound_json(reilly_upper_bound(parse_list(task["F_maps"], ctx.n), ctx.params, ctx.quadrature(), opt));
    out["quadrature"] = ctx.quadrature_json();
    return out;
  }
  if (type == "bound_special") {
    const std::vector<Point> pts = ctx.points_for(task, 200);
    return bound_json(special_upper_bound(*ctx.rho, task.value("j", 1), pts, opt));
  }
  const std::vector<Point> pts = ctx.points_for(task, 200);
  return bound_json(curvature_lower_bound(*ctx.rho, pts, task.value("paneitz_positive", false), opt));
}

json run_spectrum(Context& ctx, const json& task) {
  const int degree = task.value("degree", 3);
  const std::string structure = task.value("structure", std::string("theta"));
  SolveOptions opt;
  opt.kernel_tol = task.value("kernel_tol", opt.kernel_tol);
  opt.gram_tol = task.value("gram_tol", opt.gram_tol);
  const std::string strategy = task.value("gram_strategy", std::string("truncate"));
  opt.strategy = strategy == "cholesky" ? GramStrategy::cholesky : GramStrategy::truncate;

  const QuadratureRule& base = ctx.quadrature();
  SpectralReport rep;
  if (structure == "normalized") {
    const NormalizedField hat(ctx.rho);
    rep = estimate_lambda1(hat, degree, reweight(base, hat), opt);
  } else {
    rep = estimate_lambda1(*ctx.rho, degree, base, opt);
  }
  const SpectralSolution& s = rep.solution;
  json clusters = json::array();
  for (const auto& [v, mult] : cluster(s.eigenvalues, 1e-6)) clusters.push_back({{"value", v}, {"multiplicity", mult}});
  json by_degree = json::array();
  for (const auto& v : rep.lambda1_by_degree) by_degree.push_back(v ? json(*v) : json(nullptr));
  json out{{"degree", degree},
           {"structure", structure},
           {"gram_strategy", strategy},
           {"basis_size", rep.problem.gram.rows()},
           {"eigenvalues", s.eigenvalues},
           {"clusters", clusters},
           {"kernel_dim", s.kernel_dim},
           {"holomorphic_monomials", rep.holomorphic_monomials},
           {"lambda1", s.lambda1},
           {"lambda1_by_degree", by_degree},
           {"monotone", rep.monotone},
           {"gram_rank", s.gram_rank},
           {"gram_condition", s.gram_condition},
           {"gram_hermitian_deviation", rep.problem.gram_hermitian_deviation},
           {"stiffness_hermitian_deviation", rep.problem.stiffness_hermitian_deviation},
           {"ibp_deviation", rep.problem.ibp_deviation},
           {"ibp_scale", rep.problem.ibp_scale},
           {"min_eigenvalue", s.min_eigenvalue},
           {"kernel_threshold", s.threshold},
           {"quadrature", ctx.quadrature_json()}};
  json discrepancies = json::array();
  compare_reference(task, "lambda1", s.lambda1, Point{}, discrepancies);
  for (auto& d : discrepancies) d.erase("point");
  out["discrepancies"] = discrepancies;
  return out;
}

json run_invariance(Context& ctx, const json& task) {
  if (!task.contains("alternatives")) throw Error(Errc::SchemaError, "invariance_check needs alternatives");
  std::vector<FieldPtr> fields{ctx.rho};
  std::vector<std::string> labels{print(parse(ctx.job["defining_function"].get<std::string>(), ctx.n))};
  for (const json& s : task["alternatives"]) {
    fields.push_back(std::make_shared<ExprField>(parse(s.get<std::string>(), ctx.n), ctx.params));
    labels.push_back(s.get<std::string>());
  }
  const double tol = task.value("tolerance", 1e-6);
  const std::vector<Point> pts = ctx.points_for(task, 25);
  double worst = 0.0, worst_conf = 0.0;
  json rows = json::array();
  for (const Point& p : pts) {
    json vals = json::array(), conf = json::array();
    double lo = INFINITY, hi = -INFINITY, clo = INFINITY, chi = -INFINITY;
    for (const FieldPtr& f : fields) {
      const PointInvariants inv = compute_invariants(*f, p);
      vals.push_back(inv.normalized);
      conf.push_back(inv.normalized_conformal);
      lo = std::min(lo, inv.normalized);
      hi = std::max(hi, inv.normalized);
      clo = std::min(clo, inv.normalized_conformal);
      chi = std::max(chi, inv.normalized_conformal);
    }
    worst = std::max(worst, hi - lo);
    worst_conf = std::max(worst_conf, chi - clo);
    rows.push_back({{"point", point_json(p)}, {"R_Theta", vals}, {"R_Theta_conformal", conf}});
  }
  return json{{"defining_functions", labels},   {"points", rows},
              {"max_spread", worst},            {"max_spread_conformal", worst_conf},
              {"tolerance", tol},               {"invariant", worst <= tol},
              {"invariant_conformal", worst_conf <= tol}};
}

std::string task_label(const json& task, std::size_t index) {
  return task.value("name", task["type"].get<std::string>() + "#" + std::to_string(index + 1));
}

std::string headline(const std::string& type, const json& result) {
  if (type == "invariants") {
    const json& s = result["summary"];
    return "r in [" + fmt(s["min_r"]) + ", " + fmt(s["max_r"]) + "], J in [" + fmt(s["min_J"]) + ", " +
           fmt(s["max_J"]) + "]";
  }
  if (type == "curvature") {
    const json& s = result["summary"];
    return "R_Theta in [" + fmt(s["min_R_Theta"]) + ", " + fmt(s["max_R_Theta"]) + "]";
  }
  if (type == "spectrum") {
    return "lambda1 = " + fmt(result["lambda1"]) + ", kernel " + std::to_string(result["kernel_dim"].get<int>());
  }
  if (type == "invariance_check") return "spread " + fmt(result["max_spread"]);
  if (result.contains("value") && result["value"].is_number()) return "bound = " + fmt(result["value"]);
  return "not applicable";
}

}  // namespace

int exit_code_for(Errc code) { return is_validation_error(code) ? 2 : 3; }

json parse_job_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::SchemaError, "job file is not valid JSON at line " + std::to_string(line) + ", column " +
                                       std::to_string(col) + " (byte " + std::to_string(e.byte) + ")");
  }
}

json load_job_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::SchemaError, "cannot open job file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_job_text(buf.str());
}

void apply_overrides(json& job, const JobOverrides& o) {
  if (!job.is_object()) job = json::object();
  if (o.n) job["dimension_n"] = *o.n;
  if (o.rho) job["defining_function"] = *o.rho;
  for (const auto& [k, v] : o.params) job["params"][k] = v;
  if (!job.contains("quadrature")) job["quadrature"] = json::object();
  if (o.resolution) job["quadrature"]["resolution"] = *o.resolution;
  if (o.samples) job["quadrature"]["samples"] = *o.samples;
  if (o.seed) job["quadrature"]["seed"] = *o.seed;
  if (o.quadrature_type) job["quadrature"]["type"] = *o.quadrature_type;
  if (o.output) job["output"] = *o.output;
  if (o.csv) job["csv"] = *o.csv;
  if (o.degree && job.contains("tasks") && job["tasks"].is_array()) {
    for (json& t : job["tasks"]) {
      if (t.is_object() && t.value("type", "") == "spectrum") t["degree"] = *o.degree;
    }
  }
}

void validate_job(const json& job) {
  if (!job.is_object()) schema("job must be a JSON object");
  require_keys(job, {"version", "dimension_n", "defining_function", "params", "quadrature", "tasks", "output", "csv"},
               "job");
  require_int(job, "version", "job", kJobVersion, kJobVersion);
  if (!job.contains("dimension_n")) schema("job: missing 'dimension_n'");
  require_int(job, "dimension_n", "job", 1, 2);
  if (!job.contains("defining_function") || !job["defining_function"].is_string()) {
    schema("job: 'defining_function' must be a string");
  }
  require_string(job, "output", "job");
  require_string(job, "csv", "job");
  const int n = job["dimension_n"].get<int>();
  if (job.contains("params")) {
    if (!job["params"].is_object()) schema("job: 'params' must be an object of numbers");
    for (auto it = job["params"].begin(); it != job["params"].end(); ++it) {
      if (!it.value().is_number()) schema("job: parameter '" + it.key() + "' must be a number");
    }
  }
  if (job.contains("quadrature")) {
    const json& q = job["quadrature"];
    if (!q.is_object()) schema("quadrature: must be an object");
    require_keys(q, {"type", "resolution", "samples", "seed"}, "quadrature");
    require_string(q, "type", "quadrature");
    if (q.contains("type") && q["type"] != "hopf_product" && q["type"] != "monte_carlo") {
      schema("quadrature: 'type' must be \"hopf_product\" or \"monte_carlo\"");
    }
    require_int(q, "resolution", "quadrature", 1, 256);
    require_int(q, "samples", "quadrature", 1, 10000000);
    if (q.contains("seed") && !q["seed"].is_number_unsigned()) schema("quadrature: 'seed' must be a nonnegative integer");
  }
  if (!job.contains("tasks") || !job["tasks"].is_array() || job["tasks"].empty()) {
    schema("job: 'tasks' must be a nonempty array");
  }
  const std::set<std::string> common = {"type", "name", "points", "directions", "samples", "reference", "tolerance"};
  for (std::size_t i = 0; i < job["tasks"].size(); ++i) {
    const json& t = job["tasks"][i];
    const std::string where = "tasks[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("type") || !t["type"].is_string()) schema(where + ": missing 'type'");
    const std::string type = t["type"];
    if (!kTaskTypes.count(type)) schema(where + ": unknown task type '" + type + "'");
    std::set<std::string> allowed = common;
    if (type == "bound_upper") allowed.insert("decomposition");
    if (type == "bound_reilly") allowed.insert("F_maps");
    if (type == "bound_special") allowed.insert("j");
    if (type == "bound_lower") allowed.insert("paneitz_positive");
    if (type == "spectrum") allowed.insert({"degree", "structure", "gram_strategy", "kernel_tol", "gram_tol"});
    if (type == "invariance_check") allowed.insert("alternatives");
    require_keys(t, allowed, where);
    require_string(t, "name", where);
    require_point_list(t, "points", where, n);
    require_point_list(t, "directions", where, n);
    require_int(t, "samples", where, 1, 1000000);
    require_number(t, "tolerance", where);
    if (t.contains("reference")) {
      if (!t["reference"].is_object()) schema(where + ": 'reference' must be an object of numbers");
      for (auto it = t["reference"].begin(); it != t["reference"].end(); ++it) {
        if (!it.value().is_number()) schema(where + ": reference '" + it.key() + "' must be a number");
      }
    }
    require_int(t, "j", where, 1, n + 1);
    if (t.contains("paneitz_positive") && !t["paneitz_positive"].is_boolean()) {
      schema(where + ": 'paneitz_positive' must be a boolean");
    }
    require_int(t, "degree", where, 0, kMaxBasisDegree);
    if (t.contains("structure") && t["structure"] != "theta" && t["structure"] != "normalized") {
      schema(where + ": 'structure' must be \"theta\" or \"normalized\"");
    }
    if (t.contains("gram_strategy") && t["gram_strategy"] != "truncate" && t["gram_strategy"] != "cholesky") {
      schema(where + ": 'gram_strategy' must be \"truncate\" or \"cholesky\"");
    }
    require_number(t, "kernel_tol", where);
    require_number(t, "gram_tol", where);
    require_string_list(t, "F_maps", where);
    require_string_list(t, "alternatives", where);
    if (type == "bound_upper") {
      if (!t.contains("decomposition") || !t["decomposition"].is_object()) {
        schema(where + ": 'decomposition' must be an object");
      }
      const json& d = t["decomposition"];
      require_keys(d, {"N", "nu", "psi", "maps"}, where + ".decomposition");
      require_number(d, "N", where + ".decomposition");
      require_number(d, "nu", where + ".decomposition");
      require_string(d, "psi", where + ".decomposition");
      if (!d.contains("maps")) schema(where + ".decomposition: missing 'maps'");
      require_string_list(d, "maps", where + ".decomposition");
    }
    if (type == "bound_reilly" && !t.contains("F_maps")) schema(where + ": missing 'F_maps'");
    if (type == "invariance_check" && !t.contains("alternatives")) schema(where + ": missing 'alternatives'");
  }
}

JobOutcome run_job(const json& job) {
  JobOutcome outcome;
  json& rep = outcome.report;
  rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rep["job"] = job;
  rep["tasks"] = json::array();
  std::ostringstream summary;

  auto record_error = [&](json& target, const Error& e) {
    json err{{"code", std::string(to_string(e.code()))},
             {"message", e.what()},
             {"kind", is_validation_error(e.code()) ? "validation" : "numerical"}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["offset"] = pe->offset();
    target["status"] = "error";
    target["error"] = err;
    if (exit_code_for(e.code()) == 2) {
      outcome.exit_code = 2;
    } else if (outcome.exit_code == 0) {
      outcome.exit_code = 3;
    }
  };

  Context ctx;
  try {
    validate_job(job);
    ctx.job = job;
    ctx.n = job["dimension_n"].get<int>();
    if (job.contains("params")) {
      for (auto it = job["params"].begin(); it != job["params"].end(); ++it) ctx.params[it.key()] = it.value();
    }
    ctx.rho = std::make_shared<ExprField>(parse(job["defining_function"].get<std::string>(), ctx.n), ctx.params);
    if (job.contains("quadrature")) {
      const json& q = job["quadrature"];
      ctx.quad.type = rule_type_from_string(q.value("type", std::string("hopf_product")));
      ctx.quad.resolution = q.value("resolution", ctx.quad.resolution);
      ctx.quad.samples = q.value("samples", ctx.quad.samples);
      ctx.quad.seed = q.value("seed", ctx.quad.seed);
    }
    ctx.want_csv = job.contains("csv");
  } catch (const Error& e) {
    json target;
    record_error(target, e);
    rep["status"] = "error";
    rep["error"] = target["error"];
    rep["exit_code"] = outcome.exit_code;
    outcome.summary = std::string("job rejected: ") + e.what() + "\n";
    return outcome;
  }

  json discrepancy_index = json::array();
  summary << "task                      status   result\n";
  for (std::size_t i = 0; i < job["tasks"].size(); ++i) {
    const json& task = job["tasks"][i];
    const std::string type = task["type"];
    json entry{{"type", type}, {"name", task_label(task, i)}};
    try {
      json result;
      if (type == "invariants" || type == "curvature") {
        result = run_invariants(ctx, task, type == "curvature");
      } else if (type == "spectrum") {
        result = run_spectrum(ctx, task);
      } else if (type == "invariance_check") {
        result = run_invariance(ctx, task);
      } else {
        result = run_bound(ctx, task, type);
      }
      entry["status"] = "ok";
      entry["result"] = result;
      const json* disc = nullptr;
      if (result.contains("discrepancies")) disc = &result["discrepancies"];
      if (result.contains("diagnostics") && result["diagnostics"].contains("discrepancies")) {
        disc = &result["diagnostics"]["discrepancies"];
      }
      if (disc && !disc->empty()) discrepancy_index.push_back({{"task", entry["name"]}, {"count", disc->size()}});
      summary << entry["name"].get<std::string>();
      summary << std::string(std::max<int>(1, 26 - static_cast<int>(entry["name"].get<std::string>().size())), ' ');
      summary << "ok       " << headline(type, result);
      if (disc && !disc->empty()) summary << "  [" << disc->size() << " discrepancies]";
      summary << "\n";
    } catch (const Error& e) {
      record_error(entry, e);
      summary << entry["name"].get<std::string>();
      summary << std::string(std::max<int>(1, 26 - static_cast<int>(entry["name"].get<std::string>().size())), ' ');
      summary << "error    " << e.what() << "\n";
    } catch (const json::exception& e) {
      record_error(entry, Error(Errc::SchemaError, e.what()));
      summary << entry["name"].get<std::string>() << "  error    SchemaError: " << e.what() << "\n";
    }
    rep["tasks"].push_back(entry);
  }
  rep["discrepancy_index"] = discrepancy_index;
  rep["status"] = outcome.exit_code == 0 ? "ok" : "error";
  rep["exit_code"] = outcome.exit_code;
  if (ctx.want_csv) outcome.csv = invariants_csv(ctx.csv_rows, ctx.n);
  outcome.summary = summary.str();
  return outcome;
}

std::string report_text(const JobOutcome& outcome) { return canonical_json(outcome.report); }

}  // namespace crs
