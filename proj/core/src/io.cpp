#include "detphase/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "detphase/errors.hpp"

namespace detphase {

const char* to_string(ReportMethod method) noexcept {
  switch (method) {
    case ReportMethod::galerkin:
      return "galerkin";
    case ReportMethod::monodromy:
      return "monodromy";
    case ReportMethod::exact:
      return "exact";
  }
  return "unknown";
}

const char* to_string(OperatorType type) noexcept {
  switch (type) {
    case OperatorType::scalar:
      return "scalar";
    case OperatorType::dirac:
      return "dirac";
    case OperatorType::derham:
      return "derham";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Json spectrum_to_json(const Spectrum& s) {
  Json out = Json::array();
  for (const auto& e : s.eigenvalues())
    out.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"mult", e.multiplicity}});
  return out;
}

Spectrum spectrum_from_json(const Json& j, SpectrumSource source) {
  if (!j.is_array()) throw Error(ErrorKind::parse, "spectrum: expected a JSON array");
  std::vector<Eigenvalue> ev;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string where = "spectrum[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("re") || !e.contains("im"))
      throw Error(ErrorKind::parse, where + ": expected {re, im, mult}");
    if (!e["re"].is_number() || !e["im"].is_number())
      throw Error(ErrorKind::parse, where + ": re and im must be numbers");
    int mult = 1;
    if (e.contains("mult")) {
      if (!e["mult"].is_number_integer() || e["mult"].get<int>() < 1)
        throw Error(ErrorKind::parse, where + ".mult: expected a positive integer");
      mult = e["mult"].get<int>();
    }
    ev.push_back({cplx(e["re"].get<double>(), e["im"].get<double>()), mult});
  }
  return Spectrum::from_eigenvalues(ev, source);
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "re,im,mult\n";
  for (const auto& e : s.eigenvalues())
    os << format_double(e.value.real()) << ',' << format_double(e.value.imag()) << ',' << e.multiplicity
       << '\n';
  return os.str();
}

Json axis_count_to_json(const AxisCount& a) {
  return {{"m_plus", a.m_plus},
          {"m_minus", a.m_minus},
          {"axis_tolerance", a.axis_tolerance},
          {"ambiguous", a.ambiguous}};
}

Json report_to_json(const PhaseReport& r) {
  Json j = {{"label", r.label},
            {"axis_count", axis_count_to_json(r.axis_count)},
            {"computed_sign", r.computed_sign},
            {"topological_prediction", r.topological_prediction},
            {"agreement", r.agreement},
            {"method", to_string(r.method)},
            {"cutoff", r.cutoff},
            {"steps", r.steps},
            {"axis_tolerance", r.axis_tolerance},
            {"pairing_tolerance", r.pairing_tolerance},
            {"counted_eigenvalues", r.counted_eigenvalues},
            {"min_abs_eigenvalue", r.min_abs_eigenvalue},
            {"symmetry_defect", std::isfinite(r.symmetry_defect) ? Json(r.symmetry_defect) : Json(nullptr)}};
  if (r.axis_count.ambiguous > 0)
    j["warning"] = "eigenvalues close to the axis tolerance; classification is fragile";
  return j;
}

std::string sweep_to_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "a,m_plus,m_minus,min_abs,near_axis\n";
  for (const auto& row : s.rows) {
    os << format_double(row.a) << ',' << row.axis.m_plus << ',' << row.axis.m_minus << ','
       << format_double(row.min_abs) << ',';
    for (std::size_t i = 0; i < row.near_axis.size(); ++i) {
      if (i) os << ';';
      os << format_double(row.near_axis[i].real()) << ':' << format_double(row.near_axis[i].imag());
    }
    os << '\n';
  }
  return os.str();
}

Json sweep_summary_json(const SweepResult& s) {
  Json j = {{"rows", s.rows.size()},
            {"lower_bound", s.lower_bound},
            {"parity_constant", s.parity_constant},
            {"bound_respected", s.bound_respected}};
  if (!s.rows.empty()) j["m_plus_parity"] = s.rows.front().axis.m_plus % 2;
  if (s.counterexample) {
    const SweepRow& row = s.rows[*s.counterexample];
    j["counterexample"] = {{"a", row.a}, {"m_plus", row.axis.m_plus}, {"m_minus", row.axis.m_minus}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json complex_summary_json(const TorusFourierComplex& c) {
  const std::vector<int> betti = betti_numbers(c);
  Json forms = Json::array();
  for (int deg = 0; deg <= c.dimension(); ++deg) {
    int count = 0;
    for (int f = 0; f < c.form_count(); ++f)
      if (c.degree_of_form(f) == deg) ++count;
    forms.push_back(count);
  }
  return {{"dimension", c.dimension()},   {"cutoff", c.cutoff()},
          {"size", c.size()},             {"modes", c.mode_count()},
          {"forms_per_degree", forms},    {"betti", betti},
          {"spectral_gap", spectral_gap(c)}};
}

// ---------------------------------------------------------------------------

PhaseFunction OperatorSpec::phase() const { return PhaseFunction(beta, winding, fourier); }

ScalarCircleOperator OperatorSpec::scalar() const { return ScalarCircleOperator{a, beta}; }

CircleDiracSpec OperatorSpec::dirac() const {
  CircleDiracSpec s{phase(), m, nu, a, form};
  s.validate();
  return s;
}

SphereBundleSection1D OperatorSpec::section() const { return SphereBundleSection1D{phase()}; }

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_field(const Json& j, const char* name, double fallback, bool required) {
  if (!j.contains(name)) {
    if (required) throw Error(ErrorKind::parse, std::string("field '") + name + "': required");
    return fallback;
  }
  if (!j[name].is_number()) throw Error(ErrorKind::parse, std::string("field '") + name + "': expected a number");
  const double v = j[name].get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::parse, std::string("field '") + name + "': not finite");
  return v;
}

int integer_field(const Json& j, const char* name, int fallback) {
  if (!j.contains(name)) return fallback;
  if (!j[name].is_number_integer())
    throw Error(ErrorKind::parse, std::string("field '") + name + "': expected an integer");
  return j[name].get<int>();
}

}  // namespace

OperatorSpec parse_operator_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorKind::parse, line_column(text, byte) + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse, "spec: expected a JSON object");

  OperatorSpec s;
  if (!j.contains("type") || !j["type"].is_string())
    throw Error(ErrorKind::parse, "field 'type': expected \"scalar\", \"dirac\" or \"derham\"");
  const std::string type = j["type"].get<std::string>();
  if (type == "scalar")
    s.type = OperatorType::scalar;
  else if (type == "dirac")
    s.type = OperatorType::dirac;
  else if (type == "derham")
    s.type = OperatorType::derham;
  else
    throw Error(ErrorKind::parse, "field 'type': unknown operator type \"" + type + "\"");

  s.beta = number_field(j, "beta", 1.0, false);
  if (!(s.beta > 0.0)) throw Error(ErrorKind::parse, "field 'beta': must be positive");
  const bool needs_mass = s.type != OperatorType::scalar;
  s.m = number_field(j, "m", 1.0, needs_mass);
  if (needs_mass && !(s.m > 0.0)) throw Error(ErrorKind::parse, "field 'm': must be positive");
  s.nu = integer_field(j, "nu", 0);
  if (s.nu != 0 && s.nu != 1) throw Error(ErrorKind::parse, "field 'nu': must be 0 or 1");
  s.a = number_field(j, "a", 1.0, s.type == OperatorType::scalar);
  if (s.type == OperatorType::dirac && !(s.a >= 0.0 && s.a <= 1.0))
    throw Error(ErrorKind::parse, "field 'a': deformation must lie in [0, 1]");
  s.winding = integer_field(j, "winding", 0);

  if (j.contains("fourier")) {
    const Json& f = j["fourier"];
    if (!f.is_array()) throw Error(ErrorKind::parse, "field 'fourier': expected [[j, re, im], ...]");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string where = "field 'fourier[" + std::to_string(i) + "]'";
      const Json& e = f[i];
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() ||
          !e[2].is_number())
        throw Error(ErrorKind::parse, where + ": expected [j, re, im] with integer j");
      const int h = e[0].get<int>();
      if (s.fourier.count(h)) throw Error(ErrorKind::parse, where + ": duplicate harmonic");
      s.fourier[h] = cplx(e[1].get<double>(), e[2].get<double>());
    }
  }
  if (j.contains("form")) {
    if (!j["form"].is_string()) throw Error(ErrorKind::parse, "field 'form': expected a string");
    const std::string form = j["form"].get<std::string>();
    if (form == "tilde")
      s.form = DiracForm::tilde;
    else if (form == "original")
      s.form = DiracForm::original;
    else
      throw Error(ErrorKind::parse, "field 'form': expected \"tilde\" or \"original\"");
  }
  try {
    (void)s.phase();
  } catch (const Error& e) {
    throw Error(ErrorKind::parse, std::string("field 'fourier': ") + e.what());
  }
  return s;
}

Json operator_spec_to_json(const OperatorSpec& spec) {
  Json fourier = Json::array();
  for (const auto& [h, c] : spec.fourier) fourier.push_back({h, c.real(), c.imag()});
  return {{"type", to_string(spec.type)},
          {"beta", spec.beta},
          {"m", spec.m},
          {"nu", spec.nu},
          {"a", spec.a},
          {"winding", spec.winding},
          {"fourier", fourier},
          {"form", spec.form == DiracForm::tilde ? "tilde" : "original"}};
}

}  // namespace detphase
