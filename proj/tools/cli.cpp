#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "detphase/acceptance.hpp"
#include "detphase/circle.hpp"
#include "detphase/errors.hpp"
#include "detphase/hodge.hpp"
#include "detphase/io.hpp"

namespace detphase::cli {

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::det_sign: return "det-sign";
    case Command::winding: return "winding";
    case Command::sweep: return "sweep";
    case Command::hodge: return "hodge";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_inline(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

OperatorSpec load_spec(const RunConfig& config) {
  if (config.spec.empty()) throw Error(ErrorKind::parse, "--spec is required for this command");
  if (looks_inline(config.spec)) return parse_operator_spec(config.spec);
  try {
    return parse_operator_spec(read_file(config.spec));
  } catch (const Error& e) {
    throw Error(e.kind(), config.spec + ": " + e.what());
  }
}

std::vector<double> load_samples(const std::string& text) {
  std::string body = text;
  if (text.find(',') == std::string::npos && std::filesystem::exists(text)) body = read_file(text);
  for (char& c : body)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(body);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(ErrorKind::parse, "samples: '" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

// Writes `content` to out/<name> when an output directory is configured.
// Returns true if written.
bool write_artifact(const RunConfig& config, const std::string& name, const std::string& content) {
  if (config.out.empty()) return false;
  std::filesystem::create_directories(config.out);
  const std::filesystem::path path = std::filesystem::path(config.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::parse, "cannot write '" + path.string() + "'");
  f << content;
  return true;
}

void emit(const RunConfig& config, std::ostream& out, const std::string& name, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  write_artifact(config, name, text);
  out << text;
}

void failure_record(std::ostream& err, const RunConfig& config, const std::string& invariant, const Json& inputs) {
  err << Json{{"failure", invariant}, {"command", command_name(config.command)}, {"inputs", inputs}}.dump()
      << "\n";
}

CensusTolerances tolerances(const RunConfig& c) { return {c.axis_tolerance, c.pairing_tolerance}; }

int run_spectrum(const RunConfig& config, std::ostream& out) {
  const OperatorSpec op = load_spec(config);
  Spectrum s;
  switch (op.type) {
    case OperatorType::scalar:
      s = op.scalar().exact_spectrum(-config.cutoff, config.cutoff);
      break;
    case OperatorType::dirac: {
      const CircleDiracSpec spec = op.dirac();
      s = spectrum_galerkin(galerkin_matrix(spec, config.cutoff), config.cutoff)
              .within_radius(trusted_radius(op.beta, config.cutoff));
      break;
    }
    case OperatorType::derham:
      s = spectrum_galerkin(derham_galerkin_matrix(op.section(), op.m, config.cutoff), config.cutoff)
              .within_radius(trusted_radius(op.beta, config.cutoff));
      break;
  }
  const std::string csv = spectrum_to_csv(s);
  if (write_artifact(config, "spectrum.csv", csv)) {
    write_artifact(config, "spectrum.json", spectrum_to_json(s).dump(2) + "\n");
    out << Json{{"spec", operator_spec_to_json(op)},
                {"source", to_string(s.source())},
                {"cutoff", config.cutoff},
                {"entries", s.size()},
                {"total_multiplicity", s.total_multiplicity()}}
               .dump(2)
        << "\n";
  } else {
    out << csv;
  }
  return kPass;
}

int run_det_sign(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const OperatorSpec op = load_spec(config);
  Json report;
  bool ok = true;
  switch (op.type) {
    case OperatorType::scalar: {
      const ScalarCircleOperator s = op.scalar();
      const double det = s.calibrated_determinant(config.steps);
      const double exact = s.exact_determinant();
      const int sign = det < 0.0 ? -1 : 1;
      ok = sign == s.predicted_sign() && (exact < 0.0 ? -1 : 1) == sign;
      report = {{"label", "scalar"},
                {"sign", sign},
                {"predicted_sign", s.predicted_sign()},
                {"calibrated_det", det},
                {"exact_det", exact},
                {"relative_det", s.relative_determinant(config.steps)},
                {"abs_error", std::abs(det - exact)},
                {"steps", config.steps},
                {"agreement", ok}};
      break;
    }
    case OperatorType::dirac: {
      const PhaseReport r = verify_circle_theorem(op.dirac(), config.cutoff, tolerances(config));
      ok = r.agreement;
      report = report_to_json(r);
      break;
    }
    case OperatorType::derham: {
      const PhaseReport r = derham_dirac_circle(op.section(), op.m, config.cutoff, tolerances(config));
      ok = r.agreement;
      report = report_to_json(r);
      report["degree"] = op.section().degree();
      break;
    }
  }
  emit(config, out, "report.json", report);
  if (!ok) failure_record(err, config, "sign agreement", operator_spec_to_json(op));
  return ok ? kPass : kAssertion;
}

int run_winding(const RunConfig& config, std::ostream& out) {
  int k = 0;
  Json report;
  if (!config.samples.empty()) {
    const std::vector<double> s = load_samples(config.samples);
    k = winding_number(s, config.beta);
    report = {{"winding", k}, {"samples", s.size()}, {"beta", config.beta}};
  } else {
    const OperatorSpec op = load_spec(config);
    const PhaseFunction phi = op.phase();
    k = winding_number(phi.samples(kPhaseGrid + 1), phi.beta());
    report = {{"winding", k}, {"declared_winding", op.winding}, {"samples", kPhaseGrid + 1}, {"beta", op.beta}};
  }
  emit(config, out, "winding.json", report);
  return kPass;
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const OperatorSpec op = load_spec(config);
  if (op.type != OperatorType::dirac) throw Error(ErrorKind::parse, "sweep needs a \"dirac\" spec");
  const CircleDiracSpec spec = op.dirac();
  const SweepResult s = sweep_deformation(spec, config.sweep_steps, config.cutoff, tolerances(config), config.jobs);
  const std::string csv = sweep_to_csv(s);
  Json summary = sweep_summary_json(s);
  summary["spec"] = operator_spec_to_json(op);
  summary["cutoff"] = config.cutoff;
  if (write_artifact(config, "sweep.csv", csv))
    emit(config, out, "sweep.json", summary);
  else
    out << csv;
  const bool ok = s.parity_constant && s.bound_respected;
  if (!ok)
    failure_record(err, config, !s.parity_constant ? "m_plus parity constant" : "eigenvalue lower bound",
                   summary);
  return ok ? kPass : kAssertion;
}

int run_hodge(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const int K = config.cutoff;
  const TorusFourierComplex c = build_complex(config.dimension, K);
  Json report;
  bool ok = true;
  if (config.hodge_op == "summary") {
    report = complex_summary_json(c);
  } else {
    PhaseReport r;
    if (config.hodge_op == "da")
      r = spectrum_da(c, config.a, config.axis_tolerance);
    else if (config.hodge_op == "graded")
      r = spectrum_graded(c, GradedCoefficients{config.coeffs}, config.axis_tolerance);
    else if (config.hodge_op == "dgamma")
      r = spectrum_dgamma(c, config.axis_tolerance);
    else
      throw Error(ErrorKind::parse, "--op must be summary, da, graded or dgamma");
    ok = r.agreement;
    report = report_to_json(r);
    report["dimension"] = config.dimension;
  }
  emit(config, out, "hodge.json", report);
  if (!ok)
    failure_record(err, config, "sign agreement",
                   {{"dimension", config.dimension}, {"cutoff", K}, {"op", config.hodge_op}});
  return ok ? kPass : kAssertion;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  AcceptanceOptions options;
  options.jobs = config.jobs;
  options.only = config.only;
  const auto rows = run_acceptance(options, [&](const AcceptanceRow& row) { out << format_row(row) << std::endl; });
  const Json summary = acceptance_summary(rows);
  write_artifact(config, "acceptance.json", summary.dump(2) + "\n");
  out << summary["passed"].get<int>() << "/" << rows.size() << " criteria passed\n";
  for (const auto& row : rows)
    if (!row.passed) failure_record(err, config, "acceptance criterion " + std::to_string(row.id), row.record);
  return summary["all_passed"].get<bool>() ? kPass : kAssertion;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  CLI::App app{"Spectra and determinant-sign checks for finite operator models"};
  app.require_subcommand(1);
  RunConfig config;

  auto common = [&config](CLI::App* sub) {
    sub->add_option("--spec", config.spec, "Operator spec: path to a JSON file or inline JSON");
    sub->add_option("--cutoff", config.cutoff, "Galerkin cutoff N (Fourier cutoff K for hodge)")
        ->check(CLI::Range(1, kMaxCutoff));
    sub->add_option("--steps", config.steps, "RK4 steps per period")->check(CLI::Range(64, 1 << 22));
    sub->add_option("--axis-tol", config.axis_tolerance, "Imaginary-axis tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--pairing-tol", config.pairing_tolerance, "Mirror-pairing tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", config.out, "Directory for artifacts");
    sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::Range(1, 256));
  };

  struct Sub {
    const char* name;
    const char* help;
    Command command;
  };
  const Sub subs[] = {
      {"spectrum", "Compute a spectrum (CSV)", Command::spectrum},
      {"det-sign", "Determinant sign against its prediction", Command::det_sign},
      {"winding", "Winding number of sampled or specified phases", Command::winding},
      {"sweep", "Deformation sweep a in [0, 1]", Command::sweep},
      {"hodge", "Torus Hodge models", Command::hodge},
      {"verify", "Run the acceptance suite", Command::verify},
  };
  std::vector<CLI::App*> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    apps.push_back(sub);
  }
  apps[2]->add_option("--samples", config.samples, "Comma-separated samples or a file of samples");
  apps[2]->add_option("--beta", config.beta, "Period of the samples")->check(CLI::PositiveNumber);
  apps[3]->add_option("--sweep-steps", config.sweep_steps, "Number of a-intervals")->check(CLI::Range(1, 100000));
  apps[4]->add_option("--dim", config.dimension, "Torus dimension (1 or 3)")->check(CLI::IsMember({1, 3}));
  apps[4]->add_option("--op", config.hodge_op, "summary | da | graded | dgamma")
      ->check(CLI::IsMember({"summary", "da", "graded", "dgamma"}));
  apps[4]->add_option("--a", config.a, "Coefficient for da");
  apps[4]->add_option("--coeffs", config.coeffs, "Graded coefficients a_0..a_N")->delimiter(',');
  apps[5]->add_option("--only", config.only, "Criterion ids to run")->delimiter(',');

  bool hodge_cutoff_given = false;
  try {
    app.parse(argc, argv);
    hodge_cutoff_given = apps[4]->count("--cutoff") > 0;
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err) == 0 ? kPass : kUsage;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < apps.size(); ++i)
    if (apps[i]->parsed()) config.command = subs[i].command;
  if (config.command == Command::hodge && !hodge_cutoff_given) config.cutoff = 1;
  exit_code = kPass;
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::spectrum: return run_spectrum(config, out);
      case Command::det_sign: return run_det_sign(config, out, err);
      case Command::winding: return run_winding(config, out);
      case Command::sweep: return run_sweep(config, out, err);
      case Command::hodge: return run_hodge(config, out, err);
      case Command::verify: return run_verify(config, out, err);
    }
  } catch (const Error& e) {
    err << Json{{"error", to_string(e.kind())}, {"command", command_name(config.command)}, {"message", e.what()}}
               .dump()
        << "\n";
    return is_numerical(e.kind()) ? kNumerical : kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << Json{{"error", "io"}, {"command", command_name(config.command)}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace detphase::cli
