#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace confgeom {

struct AcceptanceRow {
  int id = 0;
  std::string group;  // ptolemy, qh, uniformity, properties
  std::string name;
  double measured = 0.0;
  std::string expected;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Comma-separated groups or row ids; empty runs everything.
  std::string only;
  /// Multiplies every tolerance; below 1 is stricter.
  double tol_scale = 1.0;
};

/// Runs the acceptance table in order, calling on_row after each row.
std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opt,
                                          const std::function<void(const AcceptanceRow&)>& on_row = {});

std::string format_row(const AcceptanceRow& row);
nlohmann::json to_json(const std::vector<AcceptanceRow>& rows, bool meta);
std::string acceptance_csv(const std::vector<AcceptanceRow>& rows);

}  // namespace confgeom
