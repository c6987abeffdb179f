#pragma once

// Serialization: spectra (JSON / CSV), reports, sweep traces, Hodge
// summaries, and the operator spec document.

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "detphase/circle.hpp"
#include "detphase/hodge.hpp"
#include "detphase/phase_report.hpp"
#include "detphase/spectrum.hpp"

namespace detphase {

using Json = nlohmann::json;

/// %.16e: 17 significant digits.
std::string format_double(double v);

/// [{re, im, mult}, ...] in storage order.
Json spectrum_to_json(const Spectrum& s);
/// Inverse of spectrum_to_json; throws ErrorKind::parse on malformed input.
Spectrum spectrum_from_json(const Json& j, SpectrumSource source = SpectrumSource::synthetic);
/// Header "re,im,mult" followed by one row per entry.
std::string spectrum_to_csv(const Spectrum& s);

Json axis_count_to_json(const AxisCount& a);
Json report_to_json(const PhaseReport& r);

/// Header "a,m_plus,m_minus,min_abs,near_axis"; near_axis lists
/// "re:im" pairs separated by ';'.
std::string sweep_to_csv(const SweepResult& s);
Json sweep_summary_json(const SweepResult& s);

/// Dimensions, Betti numbers and gap.
Json complex_summary_json(const TorusFourierComplex& c);

enum class OperatorType { scalar, dirac, derham };

/// {type, beta, m, nu, a, winding, fourier: [[j, re, im], ...], form}.
/// For "scalar", a is the coefficient of D_a; for "dirac", a is the
/// deformation (default 1) and form is "tilde" (default) or "original";
/// for "derham", winding and fourier describe the angle ψ.
struct OperatorSpec {
  OperatorType type = OperatorType::dirac;
  double beta = 1.0;
  double m = 1.0;
  int nu = 0;
  double a = 1.0;
  int winding = 0;
  std::map<int, cplx> fourier;
  DiracForm form = DiracForm::tilde;

  PhaseFunction phase() const;
  ScalarCircleOperator scalar() const;
  CircleDiracSpec dirac() const;
  SphereBundleSection1D section() const;
};

/// Parses a spec document.  Errors are ErrorKind::parse with a
/// "line L, column C" prefix for syntax errors and the field name for
/// schema errors.
OperatorSpec parse_operator_spec(std::string_view text);
Json operator_spec_to_json(const OperatorSpec& spec);

const char* to_string(OperatorType type) noexcept;

}  // namespace detphase
