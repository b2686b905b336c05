#include "bv/report.hpp"

#include <cstdio>

namespace bv {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

std::string params_compact(const BoundReport& r) {
  std::string out;
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i) out += ';';
    out += r.params[i].first;
    out += '=';
    out += format_double(r.params[i].second);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string reports_to_json(std::span<const BoundReport> reports, const ReportOptions& options) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const BoundReport& r = reports[i];
    out += "  {\"name\": \"" + json_escape(r.name) + "\", \"params\": {";
    for (std::size_t j = 0; j < r.params.size(); ++j) {
      if (j) out += ", ";
      out += "\"" + json_escape(r.params[j].first) + "\": " + format_double(r.params[j].second);
    }
    out += "}, \"lhs\": " + format_double(r.lhs);
    out += ", \"rhs\": " + format_double(r.rhs);
    out += ", \"ratio\": " + format_double(r.ratio());
    out += std::string(", \"pass\": ") + (r.pass ? "true" : "false");
    std::string notes = r.notes;
    if (r.informational) notes = notes.empty() ? "informational" : "informational; " + notes;
    out += ", \"notes\": \"" + json_escape(notes) + "\"";
    out += ", \"wall_time\": " + format_double(options.include_wall_time ? r.wall_time : 0.0);
    out += "}";
    if (i + 1 < reports.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

std::string reports_to_csv(std::span<const BoundReport> reports, const ReportOptions& options) {
  std::string out = "name,params,lhs,rhs,ratio,pass,notes,wall_time\n";
  for (const BoundReport& r : reports) {
    std::string notes = r.notes;
    if (r.informational) notes = notes.empty() ? "informational" : "informational; " + notes;
    out += csv_escape(r.name);
    out += ',' + csv_escape(params_compact(r));
    out += ',' + format_double(r.lhs);
    out += ',' + format_double(r.rhs);
    out += ',' + format_double(r.ratio());
    out += r.pass ? ",true" : ",false";
    out += ',' + csv_escape(notes);
    out += ',' + format_double(options.include_wall_time ? r.wall_time : 0.0);
    out += '\n';
  }
  return out;
}

std::string constants_to_json(const ExplicitConstants& c) {
  const auto note = [&](const std::string& key) -> std::string {
    for (const auto& [k, v] : c.provenance)
      if (k == key) return v;
    return {};
  };
  const auto entry = [&](const std::string& key, double value) {
    return "  \"" + key + "\": {\"value\": " + format_double(value) + ", \"provenance\": \"" +
           json_escape(note(key)) + "\"}";
  };
  std::string out = "{\n";
  out += entry("A0", c.A0) + ",\n";
  out += "  \"A0_argmax\": " + std::to_string(c.A0_argmax) + ",\n";
  out += "  \"A0_scan_limit\": " + std::to_string(c.A0_scan_limit) + ",\n";
  out += "  \"E0\": {\"lower\": " + format_double(c.E0_lower) +
         ", \"upper\": " + format_double(c.E0_upper) +
         ", \"prime_limit\": " + std::to_string(c.E0_prime_limit) + ", \"provenance\": \"" +
         json_escape(note("E0")) + "\"},\n";
  out += entry("c0", c.c0) + ",\n";
  out += entry("c1", c.c1) + ",\n";
  out += entry("c2", c.c2) + ",\n";
  out += entry("c3", c.c3) + ",\n";
  out += std::string("  \"c3_overridden\": ") + (c.c3_overridden ? "true" : "false") + ",\n";
  out += entry("c4", c.c4) + ",\n";
  out += entry("L", c.L) + ",\n";
  out += entry("C", c.C) + "\n";
  out += "}\n";
  return out;
}

}  // namespace bv
