#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "crspectra/jet.hpp"

namespace crs {

inline constexpr const char* kToolName = "crspectra";
inline constexpr const char* kToolVersion = "1.0.0";

/// Deterministic JSON text: object keys sorted, numbers printed with 17 significant
/// digits, non-finite numbers as null, two-space indentation, trailing newline.
std::string canonical_json(const nlohmann::json& value);

/// Number formatting shared by the JSON and CSV writers.
std::string format_double(double v);

struct InvariantRow {
  Point point;
  double r = 0.0;
  double J = 0.0;
  double detH = 0.0;
  double R_theta = 0.0;
  double D = 0.0;
  double R_Theta = 0.0;
};

/// Columns: z1_re, z1_im, ..., r, J, detH, R_theta, D, R_Theta.
std::string invariants_csv(const std::vector<InvariantRow>& rows, int n);

}  // namespace crs
