#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bv/bounds.hpp"

namespace bv {

// One inequality check.  pass is always lhs <= rhs; informational rows keep
// the flag but are excluded from exit-code gating and marked in notes.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;  // insertion-ordered
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool informational = false;
  std::string notes;
  double wall_time = 0.0;  // seconds

  double ratio() const { return rhs != 0.0 ? lhs / rhs : 0.0; }

  static BoundReport make(std::string name,
                          std::vector<std::pair<std::string, double>> params, double lhs,
                          double rhs, std::string notes = {}, bool informational = false) {
    BoundReport r;
    r.name = std::move(name);
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.pass = lhs <= rhs;
    r.informational = informational;
    r.notes = std::move(notes);
    return r;
  }
};

struct ReportOptions {
  // Timings vary run to run; they are zeroed in file output unless asked for,
  // keeping repeated runs byte-identical.
  bool include_wall_time = false;
};

// All floating-point output uses 12 significant digits so diffs are stable
// and meaningful.
std::string format_double(double value);

std::string reports_to_json(std::span<const BoundReport> reports,
                            const ReportOptions& options = {});
std::string reports_to_csv(std::span<const BoundReport> reports,
                           const ReportOptions& options = {});

std::string constants_to_json(const ExplicitConstants& consts);

}  // namespace bv
