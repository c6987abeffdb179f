#include "detphase/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "detphase/errors.hpp"

namespace detphase {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

PhaseFunction sine_phase(int k, double amplitude) {
  const double amps[] = {amplitude};
  return PhaseFunction::with_sines(1.0, k, amps);
}

CircleDiracSpec sign_theorem_spec(int k, int nu) {
  CircleDiracSpec spec;
  spec.phase = sine_phase(k, 0.4);
  spec.mass = spec.phase.max_abs_derivative() + 3.0;
  spec.nu = nu;
  spec.deformation = 1.0;
  spec.form = DiracForm::tilde;
  return spec;
}

constexpr int kCircleCutoff = 64;

// 1 -------------------------------------------------------------------------
void scalar_determinant(AcceptanceRow& row) {
  row.name = "scalar determinant e^{-a beta} - 1";
  row.budget = 5.0;
  const double as[] = {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
  const double betas[] = {1.0, kTwoPi};
  double worst = 0.0;
  bool signs = true;
  Json cases = Json::array();
  for (double beta : betas)
    for (double a : as) {
      const ScalarCircleOperator op{a, beta};
      const double det = op.calibrated_determinant();
      const double exact = op.exact_determinant();
      const double err = std::abs(det - exact);
      worst = std::max(worst, err);
      const bool sign_ok = (a > 0.0) ? det < 0.0 : det > 0.0;
      const bool census_ok = (det < 0.0 ? -1 : 1) == op.predicted_sign();
      signs = signs && sign_ok && census_ok;
      cases.push_back({{"a", a}, {"beta", beta}, {"det", det}, {"exact", exact}, {"abs_error", err}});
    }
  row.passed = worst <= 1e-8 && signs;
  row.detail = "max |det - exact| = " + fmt("%.3e", worst) + (signs ? ", signs ok" : ", SIGN MISMATCH");
  row.record = {{"max_abs_error", worst}, {"signs_ok", signs}, {"cases", cases}};
}

// 2 + 4 ---------------------------------------------------------------------
struct SymmetryLog {
  int checked = 0;
  int failed = 0;
  double worst_defect = 0.0;

  void add(const Spectrum& s) {
    ++checked;
    if (!is_symmetric_spectrum(s, 1e-8)) ++failed;
    worst_defect = std::max(worst_defect, symmetry_defect(s) / (1.0 + s.scale()));
  }
};

void exact_spectrum_crosscheck(AcceptanceRow& row, SymmetryLog& symmetry) {
  row.name = "Galerkin D~0 vs exact spectrum";
  row.budget = 30.0;
  const double m = 5.0, beta = 1.0;
  double worst = 0.0;
  bool counts = true;
  Json cases = Json::array();
  for (int k = -2; k <= 2; ++k)
    for (int nu = 0; nu <= 1; ++nu) {
      CircleDiracSpec spec{PhaseFunction(beta, k), m, nu, 0.0, DiracForm::tilde};
      const Spectrum full = spectrum_galerkin(galerkin_matrix(spec, kCircleCutoff), kCircleCutoff);
      symmetry.add(full);
      const double radius = trusted_radius(beta, kCircleCutoff);
      const Spectrum g = full.within_radius(radius);
      const Spectrum exact =
          exact_spectrum_tilde0(m, beta, k, nu, -kCircleCutoff - 3, kCircleCutoff + 3).within_radius(radius);
      const double d1 = match_distance(g.expanded(), exact.expanded(), 1.0);
      const double d2 = match_distance(exact.expanded(), g.expanded(), 1.0);
      const bool same = g.total_multiplicity() == exact.total_multiplicity();
      counts = counts && same;
      worst = std::max({worst, d1, d2});
      cases.push_back({{"k", k}, {"nu", nu}, {"trusted", g.total_multiplicity()},
                       {"exact", exact.total_multiplicity()}, {"max_distance", std::max(d1, d2)}});
    }
  row.passed = worst <= 1e-8 && counts;
  row.detail = "10 cases, N=64, max distance " + fmt("%.3e", worst) + (counts ? "" : ", COUNT MISMATCH");
  row.record = {{"max_distance", worst}, {"counts_match", counts}, {"cases", cases}};
}

// 3 -------------------------------------------------------------------------
void circle_sign_theorem(AcceptanceRow& row, SymmetryLog& symmetry) {
  row.name = "circle sign theorem -(-1)^{k+nu}";
  row.budget = 120.0;
  bool all = true;
  Json cases = Json::array();
  std::ostringstream signs;
  for (int k = -2; k <= 2; ++k)
    for (int nu = 0; nu <= 1; ++nu) {
      const CircleDiracSpec spec = sign_theorem_spec(k, nu);
      symmetry.add(spectrum_galerkin(galerkin_matrix(spec, kCircleCutoff), kCircleCutoff));
      const PhaseReport r = verify_circle_theorem(spec, kCircleCutoff, {1e-6, kPairingTolerance});
      all = all && r.agreement;
      signs << (r.computed_sign > 0 ? '+' : '-');
      Json rec = report_to_json(r);
      rec["k"] = k;
      rec["nu"] = nu;
      rec["m"] = spec.mass;
      cases.push_back(rec);
    }
  row.passed = all;
  row.detail = "10 cases, signs " + signs.str() + (all ? ", all agree" : ", DISAGREEMENT");
  row.record = {{"all_agree", all}, {"cases", cases}};
}

void symmetry_row(AcceptanceRow& row, const SymmetryLog& symmetry) {
  row.name = "spectrum symmetry lambda -> -conj(lambda)";
  row.passed = symmetry.checked == 20 && symmetry.failed == 0;
  row.detail = std::to_string(symmetry.checked - symmetry.failed) + "/" + std::to_string(symmetry.checked) +
               " symmetric, max relative defect " + fmt("%.3e", symmetry.worst_defect);
  row.record = {{"checked", symmetry.checked}, {"failed", symmetry.failed},
                {"max_relative_defect", symmetry.worst_defect}};
}

// 5 -------------------------------------------------------------------------
void stability_sweep(AcceptanceRow& row, int jobs) {
  row.name = "stability sweep over a in [0, 1]";
  row.budget = 120.0;
  bool all = true;
  Json cases = Json::array();
  double slack = std::numeric_limits<double>::infinity();
  for (int k : {-2, 2})
    for (int nu = 0; nu <= 1; ++nu) {
      const CircleDiracSpec spec = sign_theorem_spec(k, nu);
      const SweepResult s = sweep_deformation(spec, 20, kCircleCutoff, {1e-6, kPairingTolerance}, jobs);
      all = all && s.parity_constant && s.bound_respected;
      double min_abs = std::numeric_limits<double>::infinity();
      for (const auto& r : s.rows) min_abs = std::min(min_abs, r.min_abs);
      slack = std::min(slack, min_abs - s.lower_bound);
      Json rec = sweep_summary_json(s);
      rec["k"] = k;
      rec["nu"] = nu;
      rec["min_abs"] = min_abs;
      cases.push_back(rec);
    }
  row.passed = all;
  row.detail = "|k|=2, 21 values of a, 4 cases, min(min|lambda| - bound) = " + fmt("%.4f", slack);
  row.record = {{"all_pass", all}, {"min_slack", slack}, {"cases", cases}};
}

// 6 -------------------------------------------------------------------------
void method_agreement(AcceptanceRow& row, int jobs) {
  row.name = "Galerkin vs monodromy roots";
  struct Case {
    int k;
    int nu;
    DiracForm form;
  };
  const Case specs[] = {{0, 0, DiracForm::tilde}, {1, 1, DiracForm::tilde}, {1, 0, DiracForm::original}};
  RootSearchOptions options;
  options.counting.steps = 1024;
  options.counting.jobs = jobs;
  options.refine.steps = kDefaultSteps;
  options.density = 32.0;
  bool all = true;
  double worst = 0.0;
  Json cases = Json::array();
  for (const Case& c : specs) {
    CircleDiracSpec spec = sign_theorem_spec(c.k, c.nu);
    spec.form = c.form;
    const MethodAgreement a = compare_galerkin_monodromy(spec, kCircleCutoff, 10, options);
    const bool ok = a.max_distance <= 1e-6 && a.contour_count == a.galerkin_count &&
                    a.roots_found == a.contour_count;
    all = all && ok;
    worst = std::max(worst, a.max_distance);
    cases.push_back({{"k", c.k},
                     {"nu", c.nu},
                     {"form", c.form == DiracForm::tilde ? "tilde" : "original"},
                     {"m", spec.mass},
                     {"region", {a.region.re_min, a.region.re_max, a.region.im_min, a.region.im_max}},
                     {"galerkin_count", a.galerkin_count},
                     {"contour_count", a.contour_count},
                     {"roots_found", a.roots_found},
                     {"max_distance", a.max_distance}});
  }
  row.passed = all;
  row.detail = "3 specs, 10 smallest, max distance " + fmt("%.3e", worst) + (all ? ", counts agree" : ", FAILED");
  row.record = {{"all_pass", all}, {"max_distance", worst}, {"cases", cases}};
}

// 7 -------------------------------------------------------------------------
void hodge_signs(AcceptanceRow& row) {
  row.name = "Hodge torus signs";
  row.budget = 30.0;
  const TorusFourierComplex t3 = build_complex(3, 1);
  const TorusFourierComplex t1 = build_complex(1, 1);
  const std::vector<int> betti = betti_numbers(t3);
  const PhaseReport da = spectrum_da(t3, 0.5);
  const PhaseReport g1 = spectrum_graded(t3, {{0.3, 0.3, -0.3, -0.3}});
  const PhaseReport g2 = spectrum_graded(t3, {{-0.3, 0.3, -0.3, -0.3}});
  const PhaseReport dg3 = spectrum_dgamma(t3);
  const PhaseReport dg1 = spectrum_dgamma(t1);
  auto hit = [](const PhaseReport& r, int m_plus, int sign) {
    return r.axis_count.m_plus == m_plus && r.computed_sign == sign && r.agreement;
  };
  const bool ok = betti == std::vector<int>{1, 3, 3, 1} && hit(da, 8, 1) && hit(g1, 4, 1) && hit(g2, 3, -1) &&
                  hit(dg3, 4, 1) && dg1.computed_sign == -1 && dg1.agreement;
  row.passed = ok;
  std::ostringstream d;
  d << "betti (" << betti[0] << "," << betti[1] << "," << betti[2] << "," << betti[3] << "), m+ "
    << da.axis_count.m_plus << "/" << g1.axis_count.m_plus << "/" << g2.axis_count.m_plus << "/"
    << dg3.axis_count.m_plus << ", T1 D_Gamma sign " << dg1.computed_sign;
  row.detail = d.str();
  row.record = {{"betti_T3", betti},
                {"da_0.5", report_to_json(da)},
                {"graded_plus", report_to_json(g1)},
                {"graded_minus", report_to_json(g2)},
                {"dgamma_T3", report_to_json(dg3)},
                {"dgamma_T1", report_to_json(dg1)}};
}

// 8 -------------------------------------------------------------------------
void degree_theorem(AcceptanceRow& row) {
  row.name = "degree theorem (-1)^{deg n} at N=1";
  row.budget = 60.0;
  bool all = true;
  Json cases = Json::array();
  std::ostringstream signs;
  for (int deg : {-1, 0, 1, 2}) {
    const SphereBundleSection1D n{sine_phase(deg, 0.3)};
    const double m = n.gradient_bound() + 3.0;
    const PhaseReport r = derham_dirac_circle(n, m, kCircleCutoff, {1e-6, kPairingTolerance});
    const bool ok = r.agreement && r.computed_sign == (deg % 2 == 0 ? 1 : -1);
    all = all && ok;
    signs << (r.computed_sign > 0 ? '+' : '-');
    Json rec = report_to_json(r);
    rec["degree"] = deg;
    rec["m"] = m;
    cases.push_back(rec);
  }
  row.passed = all;
  row.detail = "deg -1..2, signs " + signs.str();
  row.record = {{"all_agree", all}, {"cases", cases}};
}

// 9 -------------------------------------------------------------------------
void formal_manipulation(AcceptanceRow& row) {
  row.name = "naive product vs theorem sign";
  const cplx v[] = {cplx(0.0, 1.0), cplx(0.0, -1.0)};
  const Spectrum s = Spectrum::from_values(v);
  const NaiveComparison c = naive_vs_theorem(s, symmetric_agmon_angle(s));
  const bool det_one = std::abs(c.finite_det - cplx(1.0, 0.0)) <= 1e-12;
  row.passed = det_one && c.theorem_sign == -1 && c.discrepant;
  row.detail = "finite det " + fmt("%.6f", c.finite_det.real()) + fmt("%+.1ei", c.finite_det.imag()) +
               ", theorem sign " + std::to_string(c.theorem_sign) +
               (c.discrepant ? ", discrepant" : ", not discrepant");
  row.record = {{"finite_det", {c.finite_det.real(), c.finite_det.imag()}},
                {"theorem_sign", c.theorem_sign},
                {"discrepant", c.discrepant}};
}

// 10 ------------------------------------------------------------------------
void angle_invariance(AcceptanceRow& row) {
  row.name = "determinant invariance across Agmon angles";
  const cplx v[] = {{1.0, 0.0},  {2.0, 1.0},   {0.5, 2.0},  {0.0, 3.0},   {-3.0, 1.0},  {-1.5, 0.0},
                    {-1.0, -1.0}, {-0.5, -2.0}, {0.0, -2.5}, {1.0, -1.0}, {2.0, -0.5}, {4.0, 0.0}};
  const Spectrum s = Spectrum::from_values(v);
  const AgmonAngle base = make_agmon_angle(s, 2.4);
  const cplx ref = finite_zeta_det(s, base);
  double worst = 0.0;
  Json angles = Json::array();
  for (int j = 0; j < 5; ++j) {
    const double theta = base.window_lo + (base.window_hi - base.window_lo) * (j + 1) / 6.0;
    const cplx det = finite_zeta_det(s, make_agmon_angle(s, theta));
    worst = std::max(worst, std::abs(det - ref) / std::abs(ref));
    angles.push_back(theta);
  }
  row.passed = s.total_multiplicity() == 12 && worst <= 1e-12;
  row.detail = "12 eigenvalues, 5 angles, max relative deviation " + fmt("%.3e", worst);
  row.record = {{"angles", angles}, {"det", {ref.real(), ref.imag()}}, {"max_relative_deviation", worst}};
}

}  // namespace

std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& options,
                                          const std::function<void(const AcceptanceRow&)>& progress) {
  auto selected = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  SymmetryLog symmetry;
  std::vector<AcceptanceRow> rows;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) {
    // Criterion 4 inspects the spectra produced by 2 and 3.
    const bool needed_for_symmetry = selected(4) && (id == 2 || id == 3);
    if (!selected(id) && !needed_for_symmetry) continue;
    AcceptanceRow row;
    row.id = id;
    const auto start = Clock::now();
    try {
      switch (id) {
        case 1: scalar_determinant(row); break;
        case 2: exact_spectrum_crosscheck(row, symmetry); break;
        case 3: circle_sign_theorem(row, symmetry); break;
        case 4: symmetry_row(row, symmetry); break;
        case 5: stability_sweep(row, options.jobs); break;
        case 6: method_agreement(row, options.jobs); break;
        case 7: hodge_signs(row); break;
        case 8: degree_theorem(row); break;
        case 9: formal_manipulation(row); break;
        case 10: angle_invariance(row); break;
      }
    } catch (const Error& e) {
      row.passed = false;
      row.detail = std::string(to_string(e.kind())) + " error: " + e.what();
      row.record = {{"error", to_string(e.kind())}, {"message", e.what()}};
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (row.budget > 0.0 && row.seconds >= row.budget) {
      row.passed = false;
      row.detail += ", over runtime budget";
    }
    if (!selected(id)) continue;
    if (progress) progress(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_row(const AcceptanceRow& row) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d  ", row.passed ? "PASS" : "FAIL", row.id);
  std::string out = head + row.name + "  (" + row.detail + "; " + fmt("%.2f s", row.seconds);
  if (row.budget > 0.0) out += fmt(" of %.0f s", row.budget);
  return out + ")";
}

Json acceptance_summary(const std::vector<AcceptanceRow>& rows) {
  Json criteria = Json::array();
  int passed = 0;
  for (const auto& row : rows) {
    if (row.passed) ++passed;
    criteria.push_back({{"id", row.id}, {"name", row.name}, {"passed", row.passed}, {"record", row.record}});
  }
  return {{"criteria", criteria},
          {"passed", passed},
          {"failed", static_cast<int>(rows.size()) - passed},
          {"all_passed", passed == static_cast<int>(rows.size())}};
}

}  // namespace detphase
