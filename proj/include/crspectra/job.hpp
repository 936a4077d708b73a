#pragma once

// Job files: a JSON description of a hypersurface and the computations to run on it.
//
// {
//   "version": 1,
//   "dimension_n": 1,
//   "defining_function": "abs2(z1) + abs2(z2) - 1",
//   "params": {"kappa": 1.0},
//   "quadrature": {"type": "hopf_product", "resolution": 32, "samples": 20000, "seed": 1},
//   "tasks": [{"type": "invariants", "points": [[[1, 0], [0, 0]]]}, {"type": "spectrum", "degree": 3}],
//   "output": "report.json",
//   "csv": "points.csv"
// }
//
// Points are arrays of n+1 [re, im] pairs.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>

#include "crspectra/error.hpp"
#include "crspectra/expr.hpp"

namespace crs {

inline constexpr int kJobVersion = 1;

struct JobOverrides {
  std::optional<int> n;
  std::optional<std::string> rho;
  ParameterMap params;
  std::optional<int> degree;
  std::optional<int> resolution;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> quadrature_type;
  std::optional<std::string> output;
  std::optional<std::string> csv;
};

/// Reads and parses a job file; syntax errors become SchemaError with line and column.
nlohmann::json load_job_file(const std::string& path);
nlohmann::json parse_job_text(const std::string& text);

void apply_overrides(nlohmann::json& job, const JobOverrides& overrides);

/// Throws SchemaError describing the first offending field.
void validate_job(const nlohmann::json& job);

struct JobOutcome {
  nlohmann::json report;
  int exit_code = 0;
  std::string summary;  // human-readable table
  std::string csv;      // empty unless the job asks for a CSV table
};

/// Runs every task in order. Task failures are recorded in the report and do not stop
/// later tasks. Exit code: 2 if any input/validation error occurred, else 3 if any
/// numerical failure occurred, else 0.
JobOutcome run_job(const nlohmann::json& job);

int exit_code_for(Errc code);

/// Canonical report text for an outcome.
std::string report_text(const JobOutcome& outcome);

}  // namespace crs
