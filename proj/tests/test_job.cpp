#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crspectra/error.hpp"
#include "crspectra/job.hpp"
#include "crspectra/report.hpp"

using namespace crs;
using nlohmann::json;

namespace {

json sphere_job() {
  return json::parse(R"j({
    "version": 1,
    "dimension_n": 1,
    "defining_function": "abs2(z1) + abs2(z2) - 1",
    "quadrature": {"type": "hopf_product", "resolution": 24},
    "tasks": [
      {"type": "invariants", "points": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]},
      {"type": "spectrum", "degree": 2}
    ]
  })j");
}

Errc schema_code(const json& job) {
  try {
    validate_job(job);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a schema error");
  return Errc::InternalConsistency;
}

}  // namespace

TEST_CASE("sphere job reports r, J and lambda1") {
  const JobOutcome out = run_job(sphere_job());
  CHECK(out.exit_code == 0);
  const json& inv = out.report["tasks"][0]["result"];
  for (const json& row : inv["points"]) {
    CHECK(row["r"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row["J"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(out.report["tasks"][1]["result"]["lambda1"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.report["tool"]["name"] == "crspectra");
  CHECK(out.summary.find("lambda1") != std::string::npos);
}

TEST_CASE("quartic normal form curvature at the origin") {
  json job = json::parse(R"j({
    "version": 1, "dimension_n": 1,
    "defining_function": "-im(z2) + abs2(z1) + kappa*abs2(z1)^2 + gamma*(z1*conj(z1)^3 + z1^3*conj(z1))",
    "params": {"kappa": 1.0, "gamma": 0.3},
    "tasks": [{"type": "curvature", "points": [[[0, 0], [0, 0]]]}]
  })j");
  const JobOutcome out = run_job(job);
  CHECK(out.exit_code == 0);
  const double R = out.report["tasks"][0]["result"]["points"][0]["R_Theta"];
  CHECK(R == doctest::Approx(std::pow(2.0, 4.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("out-of-range coordinate gives exit 2 with an offset") {
  json job = sphere_job();
  job["defining_function"] = "abs2(z1) + abs2(z3) - 1";
  const JobOutcome out = run_job(job);
  CHECK(out.exit_code == 2);
  CHECK(out.report["error"]["code"] == "IndexOutOfRange");
  CHECK(out.report["error"]["offset"].get<int>() == 16);
  CHECK(out.report["error"]["message"].get<std::string>().find("offset 16") != std::string::npos);
}

TEST_CASE("schema validation") {
  json a = sphere_job();
  a["unexpected"] = 1;
  CHECK(schema_code(a) == Errc::SchemaError);
  json b = sphere_job();
  b["dimension_n"] = 3;
  CHECK(schema_code(b) == Errc::SchemaError);
  json c = sphere_job();
  c["tasks"][0]["type"] = "everything";
  CHECK(schema_code(c) == Errc::SchemaError);
  json d = sphere_job();
  d["tasks"][0]["points"] = json::parse("[[[1, 0]]]");
  CHECK(schema_code(d) == Errc::SchemaError);
  json e = sphere_job();
  e["tasks"][1]["degree"] = 9;
  CHECK(schema_code(e) == Errc::SchemaError);
  json f = sphere_job();
  f["tasks"].push_back({{"type", "bound_upper"}});
  CHECK(schema_code(f) == Errc::SchemaError);
}

TEST_CASE("JSON syntax errors report line and column") {
  try {
    (void)parse_job_text("{\n  \"version\": 1,\n  \"tasks\": [,]\n}");
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("task failures are isolated and set the exit code") {
  json job = sphere_job();
  job["tasks"] = json::parse(R"([
    {"type": "spectrum", "degree": 0},
    {"type": "invariants", "points": [[[0.5, 0], [0, 0]]]},
    {"type": "invariants", "points": [[[1, 0], [0, 0]]]}
  ])");
  const JobOutcome out = run_job(job);
  CHECK(out.report["tasks"][0]["error"]["code"] == "NoPositiveEigenvalue");
  CHECK(out.report["tasks"][0]["error"]["kind"] == "numerical");
  CHECK(out.report["tasks"][1]["error"]["code"] == "NotOnSurface");
  CHECK(out.report["tasks"][2]["status"] == "ok");
  CHECK(out.exit_code == 2);

  json numeric = sphere_job();
  numeric["tasks"] = json::parse(R"([{"type": "spectrum", "degree": 0}])");
  CHECK(run_job(numeric).exit_code == 3);
}

TEST_CASE("reference values produce discrepancy records") {
  json job = sphere_job();
  job["defining_function"] = "(abs2(z1) + abs2(z2))^2 - 1";
  job["tasks"] = json::parse(R"([{"type": "invariants", "points": [[[1, 0], [0, 0]]],
                                   "reference": {"J": 4, "r": 2, "detH": 8}}])");
  const JobOutcome out = run_job(job);
  const json& d = out.report["tasks"][0]["result"]["discrepancies"];
  REQUIRE(d.size() == 2);
  for (const json& item : d) {
    if (item["quantity"] == "J") CHECK(item["computed"].get<double>() == doctest::Approx(8.0));
    if (item["quantity"] == "r") CHECK(item["computed"].get<double>() == doctest::Approx(1.0));
  }
  CHECK(out.report["discrepancy_index"].size() == 1);
}

TEST_CASE("overrides rewrite the job") {
  json job = sphere_job();
  JobOverrides o;
  o.degree = 1;
  o.resolution = 8;
  o.params["a"] = 0.5;
  apply_overrides(job, o);
  CHECK(job["tasks"][1]["degree"] == 1);
  CHECK(job["quadrature"]["resolution"] == 8);
  CHECK(job["params"]["a"].get<double>() == 0.5);
}

TEST_CASE("canonical JSON") {
  const json v = {{"b", 0.1}, {"a", {1, 2}}, {"c", NAN}, {"d", "x"}};
  const std::string text = canonical_json(v);
  CHECK(text == "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 0.10000000000000001,\n  \"c\": null,\n  \"d\": \"x\"\n}\n");
}

TEST_CASE("CSV table and determinism") {
  json job = sphere_job();
  job["csv"] = "points.csv";
  const JobOutcome a = run_job(job), b = run_job(job);
  CHECK(report_text(a) == report_text(b));
  CHECK(a.csv.rfind("z1_re,z1_im,z2_re,z2_im,r,J,detH,R_theta,D,R_Theta\n", 0) == 0);
  CHECK(std::count(a.csv.begin(), a.csv.end(), '\n') == 3);
}
