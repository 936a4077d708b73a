#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crspectra/error.hpp"
#include "crspectra/job.hpp"
#include "crspectra/report.hpp"
#include "crspectra/verify.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::optional<int> n;
  std::optional<std::string> rho;
  std::vector<std::string> params;
  std::optional<int> resolution;
  std::optional<int> samples_quad;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> quad_type;
  std::optional<std::string> output;
  std::optional<std::string> csv;
  std::optional<int> degree;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--n", f.n, "CR dimension n (hypersurface in C^(n+1))")->check(CLI::Range(1, 2));
  app->add_option("--rho", f.rho, "defining function expression");
  app->add_option("--param", f.params, "parameter binding name=value (repeatable)");
  app->add_option("--resolution", f.resolution, "hopf_product nodes per angle");
  app->add_option("--quad-samples", f.samples_quad, "monte_carlo sample count");
  app->add_option("--seed", f.seed, "monte_carlo seed");
  app->add_option("--quad-type", f.quad_type, "hopf_product or monte_carlo");
  app->add_option("--output,-o", f.output, "write the JSON report here instead of stdout");
  app->add_option("--csv", f.csv, "write per-point invariants as CSV");
}

crs::JobOverrides overrides(const CommonFlags& f) {
  crs::JobOverrides o;
  o.n = f.n;
  o.rho = f.rho;
  for (const std::string& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw crs::Error(crs::Errc::InvalidArgument, "--param expects name=value, got '" + kv + "'");
    }
    try {
      std::size_t used = 0;
      const std::string value = kv.substr(eq + 1);
      o.params[kv.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw crs::Error(crs::Errc::InvalidArgument, "--param value is not a number in '" + kv + "'");
    }
  }
  o.resolution = f.resolution;
  o.samples = f.samples_quad;
  o.seed = f.seed;
  o.quadrature_type = f.quad_type;
  o.output = f.output;
  o.csv = f.csv;
  o.degree = f.degree;
  return o;
}

// "x1,y1,x2,y2,..." -> [[x1,y1],[x2,y2],...]
json parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw crs::Error(crs::Errc::InvalidArgument, "bad coordinate '" + item + "' in --point");
    }
  }
  if (v.empty() || v.size() % 2) {
    throw crs::Error(crs::Errc::InvalidArgument, "--point needs re,im pairs: '" + text + "'");
  }
  json p = json::array();
  for (std::size_t k = 0; k < v.size(); k += 2) p.push_back({v[k], v[k + 1]});
  return p;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int execute(json job, const CommonFlags& flags) {
  crs::apply_overrides(job, overrides(flags));
  const crs::JobOutcome outcome = crs::run_job(job);
  std::cerr << outcome.summary;
  const std::string text = crs::report_text(outcome);
  if (job.contains("output") && job["output"].is_string()) {
    if (!write_file(job["output"].get<std::string>(), text)) {
      std::cerr << "error: cannot write " << job["output"].get<std::string>() << "\n";
      return 2;
    }
  } else {
    std::cout << text;
  }
  if (job.contains("csv") && job["csv"].is_string() && !outcome.csv.empty()) {
    if (!write_file(job["csv"].get<std::string>(), outcome.csv)) {
      std::cerr << "error: cannot write " << job["csv"].get<std::string>() << "\n";
      return 2;
    }
  }
  return outcome.exit_code;
}

json base_job() {
  return json{{"version", crs::kJobVersion}, {"dimension_n", 1}, {"tasks", json::array()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudohermitian invariants and Kohn Laplacian spectra of real hypersurfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(crs::kToolName) + " " + crs::kToolVersion);

  CommonFlags flags;

  std::string job_path;
  auto* run = app.add_subcommand("run", "run a job file");
  run->add_option("job", job_path, "job JSON file")->required();
  add_common(run, flags);
  run->add_option("--degree", flags.degree, "override the degree of every spectrum task");

  std::vector<std::string> points;
  std::optional<int> point_samples;
  auto add_points = [&](CLI::App* sub) {
    sub->add_option("--point", points, "point as re,im,re,im,... (repeatable)");
    sub->add_option("--samples", point_samples, "number of rule points to sample");
  };

  auto* inv = app.add_subcommand("invariants", "r, J, det H and the frame at points");
  add_common(inv, flags);
  add_points(inv);
  auto* curv = app.add_subcommand("curvature", "Webster curvature, D and R_Theta at points");
  add_common(curv, flags);
  add_points(curv);

  auto* bounds = app.add_subcommand("bounds", "eigenvalue bounds");
  bounds->require_subcommand(1);
  double dec_N = 1.0, dec_nu = 1.0;
  std::optional<std::string> dec_psi;
  std::vector<std::string> maps;
  int j_index = 1;
  bool paneitz = false;
  auto* upper = bounds->add_subcommand("upper", "upper bound from a sum-of-squares decomposition");
  add_common(upper, flags);
  upper->add_option("--N", dec_N, "decomposition exponent");
  upper->add_option("--nu", dec_nu, "decomposition shift");
  upper->add_option("--psi", dec_psi, "pluriharmonic term");
  upper->add_option("--map", maps, "holomorphic map (repeatable)")->required();
  auto* reilly = bounds->add_subcommand("reilly", "upper bound from maps into the unit sphere");
  add_common(reilly, flags);
  reilly->add_option("--map", maps, "component F_mu (repeatable)")->required();
  auto* special = bounds->add_subcommand("special", "bound under the coordinate condition");
  add_common(special, flags);
  add_points(special);
  special->add_option("--j", j_index, "1-based coordinate index");
  auto* lower = bounds->add_subcommand("lower", "lower bound from the normalized scalar curvature");
  add_common(lower, flags);
  add_points(lower);
  lower->add_flag("--paneitz-positive", paneitz, "assert a nonnegative CR Paneitz operator (n = 1)");

  auto* spectrum = app.add_subcommand("spectrum", "Galerkin eigenvalues of the Kohn Laplacian");
  add_common(spectrum, flags);
  std::string structure = "theta", strategy = "truncate";
  spectrum->add_option("--degree", flags.degree, "basis degree");
  spectrum->add_option("--structure", structure, "theta or normalized");
  spectrum->add_option("--gram-strategy", strategy, "truncate or cholesky");

  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run the built-in verification suite");
  verify->add_option("--only", only, "run only these checks (1-12)");

  CLI11_PARSE(app, argc, argv);

  auto with_points = [&](json task) {
    if (!points.empty()) {
      task["points"] = json::array();
      for (const auto& p : points) task["points"].push_back(parse_point(p));
    }
    if (point_samples) task["samples"] = *point_samples;
    return task;
  };

  try {
    if (*run) return execute(crs::load_job_file(job_path), flags);
    if (*verify) {
      bool all = true;
      auto print = [&](const crs::CriterionResult& r) {
        std::cout << crs::format_result(r) << std::endl;
        all = all && r.passed;
      };
      if (only.empty()) {
        crs::run_verify_suite(print);
      } else {
        for (int id : only) print(crs::run_criterion(id));
      }
      return all ? 0 : 1;
    }
    json job = base_job();
    if (*inv || *curv) {
      job["tasks"].push_back(with_points({{"type", *inv ? "invariants" : "curvature"}}));
    } else if (*spectrum) {
      job["tasks"].push_back({{"type", "spectrum"}, {"structure", structure}, {"gram_strategy", strategy}});
    } else if (*upper) {
      json dec{{"N", dec_N}, {"nu", dec_nu}, {"maps", maps}};
      if (dec_psi) dec["psi"] = *dec_psi;
      job["tasks"].push_back({{"type", "bound_upper"}, {"decomposition", dec}});
    } else if (*reilly) {
      job["tasks"].push_back({{"type", "bound_reilly"}, {"F_maps", maps}});
    } else if (*special) {
      job["tasks"].push_back(with_points({{"type", "bound_special"}, {"j", j_index}}));
    } else if (*lower) {
      job["tasks"].push_back(with_points({{"type", "bound_lower"}, {"paneitz_positive", paneitz}}));
    }
    if (!flags.rho) {
      std::cerr << "error: --rho is required\n";
      return 2;
    }
    return execute(job, flags);
  } catch (const crs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return crs::exit_code_for(e.code());
  }
}
