#pragma once

// The acceptance suite: one row per criterion, each with a pass/fail
// verdict, a short human-readable detail and a machine-readable record.

#include <functional>
#include <string>
#include <vector>

#include "detphase/io.hpp"

namespace detphase {

struct AcceptanceRow {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  /// Deterministic measurements (counts, errors, verdicts).
  Json record;
  /// Wall-clock seconds; kept out of `record` so reports are reproducible.
  double seconds = 0.0;
  /// Runtime budget in seconds, 0 when the criterion has none.
  double budget = 0.0;
};

struct AcceptanceOptions {
  int jobs = 1;
  /// Criterion ids to run; empty means all.
  std::vector<int> only;
};

/// Number of criteria in the suite.
inline constexpr int kAcceptanceCriteria = 10;

/// Runs the selected criteria in id order.  `progress` (optional) is called
/// after each row completes.
std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& options = {},
                                          const std::function<void(const AcceptanceRow&)>& progress = {});

/// "[PASS]  3  circle sign theorem  (detail)".
std::string format_row(const AcceptanceRow& row);

/// {criteria: [...], passed, failed}; timings excluded.
Json acceptance_summary(const std::vector<AcceptanceRow>& rows);

}  // namespace detphase
