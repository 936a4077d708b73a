#include "crspectra/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace crs {

namespace {

void write_string(std::string& out, const std::string& s) {
  // nlohmann's dump escapes strings with the JSON rules we want.
  out += nlohmann::json(s).dump();
}

void write(std::string& out, const nlohmann::json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      std::map<std::string, const nlohmann::json*> sorted;
      for (auto it = v.begin(); it != v.end(); ++it) sorted[it.key()] = &it.value();
      out += "{\n";
      bool first = true;
      for (const auto& [key, val] : sorted) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write_string(out, key);
        out += ": ";
        write(out, *val, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(out, v[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: out += format_double(v.get<double>()); return;
    case nlohmann::json::value_t::string: write_string(out, v.get<std::string>()); return;
    default: out += v.dump(); return;
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  write(out, value, 0);
  out += "\n";
  return out;
}

std::string invariants_csv(const std::vector<InvariantRow>& rows, int n) {
  std::string out;
  for (int j = 1; j <= n + 1; ++j) out += "z" + std::to_string(j) + "_re,z" + std::to_string(j) + "_im,";
  out += "r,J,detH,R_theta,D,R_Theta\n";
  for (const InvariantRow& row : rows) {
    for (const Complex& c : row.point) out += format_double(c.real()) + "," + format_double(c.imag()) + ",";
    out += format_double(row.r) + "," + format_double(row.J) + "," + format_double(row.detH) + "," +
           format_double(row.R_theta) + "," + format_double(row.D) + "," + format_double(row.R_Theta) + "\n";
  }
  return out;
}

}  // namespace crs
