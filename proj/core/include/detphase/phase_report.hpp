#pragma once

#include <string>

#include "detphase/spectrum.hpp"

namespace detphase {

enum class ReportMethod { galerkin, monodromy, exact };

const char* to_string(ReportMethod method) noexcept;

/// Outcome of checking a determinant-sign prediction against a computed
/// imaginary-axis census.  agreement == (computed_sign == topological_prediction).
struct PhaseReport {
  std::string label;
  AxisCount axis_count;
  int computed_sign = 1;
  int topological_prediction = 1;
  bool agreement = false;
  ReportMethod method = ReportMethod::galerkin;
  int cutoff = 0;
  int steps = 0;
  double axis_tolerance = kAxisTolerance;
  double pairing_tolerance = kPairingTolerance;
  /// Eigenvalues that entered the census.
  int counted_eigenvalues = 0;
  double min_abs_eigenvalue = 0.0;
  double symmetry_defect = 0.0;
};

/// Fills computed_sign and agreement from the census and prediction.
inline void finalize(PhaseReport& report) {
  report.computed_sign = (report.axis_count.m_plus % 2 == 0) ? 1 : -1;
  report.agreement = report.computed_sign == report.topological_prediction;
}

}  // namespace detphase
