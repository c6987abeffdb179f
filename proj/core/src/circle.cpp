#include "detphase/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detphase/eigensolve.hpp"
#include "detphase/errors.hpp"
#include "detphase/parallel.hpp"

namespace detphase {

int CircleDiracSpec::boundary_phase() const {
  return form == DiracForm::tilde ? nu + phase.winding() : nu;
}

void CircleDiracSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::domain, "mass must be positive");
  if (nu != 0 && nu != 1) throw Error(ErrorKind::domain, "boundary parity ν must be 0 or 1");
  if (!(deformation >= 0.0 && deformation <= 1.0))
    throw Error(ErrorKind::domain, "deformation parameter must lie in [0, 1]");
}

std::vector<double> galerkin_frequencies(double beta, int boundary_phase, int cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::domain, "cutoff must be positive");
  std::vector<double> out;
  const int w = boundary_phase;
  for (int n = -cutoff - std::abs(w); n <= cutoff + std::abs(w); ++n)
    if (std::abs(2 * n + w) <= 2 * cutoff) out.push_back(kPi / beta * (2 * n + w));
  return out;
}

double trusted_radius(double beta, int cutoff) { return kPi * cutoff / beta; }

namespace {

// Mode indices n with |2n + w| <= 2N.
std::vector<int> window_modes(int boundary_phase, int cutoff) {
  std::vector<int> out;
  for (int n = -cutoff - std::abs(boundary_phase); n <= cutoff + std::abs(boundary_phase); ++n)
    if (std::abs(2 * n + boundary_phase) <= 2 * cutoff) out.push_back(n);
  return out;
}

Eigen::MatrixXcd tilde_matrix(const CircleDiracSpec& spec, int cutoff) {
  const PhaseFunction& phi = spec.phase;
  if (cutoff < phi.bandwidth())
    throw Error(ErrorKind::bandwidth, "cutoff is smaller than the phase bandwidth");
  const int w = spec.boundary_phase();
  const std::vector<int> modes = window_modes(w, cutoff);
  const auto size = static_cast<Eigen::Index>(2 * modes.size());
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(size, size);
  const double half_a = 0.5 * spec.deformation;
  const cplx im(0.0, spec.mass);
  for (std::size_t p = 0; p < modes.size(); ++p) {
    const auto rp = static_cast<Eigen::Index>(2 * p);
    const double omega = kPi / phi.beta() * (2 * modes[p] + w);
    T(rp, rp) += -omega;
    T(rp + 1, rp + 1) += -omega;
    T(rp, rp + 1) = im;
    T(rp + 1, rp) = im;
    if (half_a == 0.0) continue;
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const int h = modes[p] - modes[q];
      if (std::abs(h) > phi.bandwidth()) continue;
      const cplx f = phi.derivative_coefficient(h);
      const auto cq = static_cast<Eigen::Index>(2 * q);
      T(rp, cq) += -half_a * f;
      T(rp + 1, cq + 1) += half_a * f;
    }
  }
  return T;
}

Eigen::MatrixXcd original_matrix(const CircleDiracSpec& spec, int cutoff) {
  const PhaseFunction& phi = spec.phase;
  if (cutoff < phi.bandwidth())
    throw Error(ErrorKind::bandwidth, "cutoff is smaller than the phase bandwidth");
  const int w = spec.boundary_phase();
  const std::vector<int> modes = window_modes(w, cutoff);
  const int span = static_cast<int>(modes.size());
  const std::vector<cplx> g = exp_i_phase_coefficients(phi, span);
  auto ghat = [&](int h) { return g[static_cast<std::size_t>(h + span)]; };
  const auto size = static_cast<Eigen::Index>(2 * modes.size());
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(size, size);
  const cplx im(0.0, spec.mass);
  for (std::size_t p = 0; p < modes.size(); ++p) {
    const auto rp = static_cast<Eigen::Index>(2 * p);
    const double omega = kPi / phi.beta() * (2 * modes[p] + w);
    T(rp, rp) = -omega;
    T(rp + 1, rp + 1) = -omega;
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const int h = modes[p] - modes[q];
      const auto cq = static_cast<Eigen::Index>(2 * q);
      T(rp, cq + 1) = im * ghat(h);                 // e^{iφ}
      T(rp + 1, cq) = im * std::conj(ghat(-h));     // e^{−iφ}
    }
  }
  return T;
}

}  // namespace

Eigen::MatrixXcd galerkin_matrix(const CircleDiracSpec& spec, int cutoff) {
  spec.validate();
  if (cutoff < 1) throw Error(ErrorKind::domain, "cutoff must be positive");
  return spec.form == DiracForm::tilde ? tilde_matrix(spec, cutoff) : original_matrix(spec, cutoff);
}

Spectrum spectrum_galerkin(const Eigen::MatrixXcd& matrix, std::optional<int> cutoff) {
  return dense_spectrum(matrix, SpectrumSource::galerkin, cutoff);
}

Spectrum exact_spectrum_tilde0(double m, double beta, int k, int nu, int n_min, int n_max) {
  if (n_max < n_min) throw Error(ErrorKind::domain, "empty mode window");
  std::vector<cplx> v;
  for (int n = n_min; n <= n_max; ++n) {
    const double re = kPi / beta * (2 * n - k - nu);
    v.emplace_back(re, m);
    v.emplace_back(re, -m);
  }
  return Spectrum::from_values(v, SpectrumSource::exact_formula, n_max);
}

double invertibility_margin(const CircleDiracSpec& spec) {
  return spec.mass - spec.phase.max_abs_derivative();
}

double eigenvalue_lower_bound(const CircleDiracSpec& spec) {
  const double margin = invertibility_margin(spec);
  return margin > 0.0 ? std::sqrt(spec.mass * margin) : 0.0;
}

int circle_sign_prediction(int k, int nu) { return ((k + nu) % 2 == 0) ? -1 : 1; }

namespace {

double min_modulus(const Spectrum& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : s.eigenvalues()) best = std::min(best, std::abs(e.value));
  return best;
}

}  // namespace

PhaseReport verify_circle_theorem(const CircleDiracSpec& spec, int cutoff,
                                  const CensusTolerances& tolerances) {
  spec.validate();
  if (invertibility_margin(spec) <= 0.0)
    throw Error(ErrorKind::precondition, "m <= max|φ̇|: invertibility is not guaranteed");
  const double radius = trusted_radius(spec.phase.beta(), cutoff);
  if (radius <= spec.mass)
    throw Error(ErrorKind::precondition, "trusted window does not cover |Im λ| <= m; raise the cutoff");

  const Spectrum s = spectrum_galerkin(galerkin_matrix(spec, cutoff), cutoff);
  PhaseReport report;
  report.label = spec.form == DiracForm::tilde ? "circle-dirac-tilde" : "circle-dirac";
  report.method = ReportMethod::galerkin;
  report.cutoff = cutoff;
  report.axis_tolerance = tolerances.axis;
  report.pairing_tolerance = tolerances.pairing;
  report.symmetry_defect = symmetry_defect(s);
  if (!is_symmetric_spectrum(s, tolerances.pairing))
    throw Error(ErrorKind::model, "Galerkin spectrum is not symmetric under λ ↦ −conj(λ)");
  const Spectrum trusted = s.within_radius(radius);
  report.axis_count = count_imaginary_axis(trusted, tolerances.axis);
  report.counted_eigenvalues = trusted.total_multiplicity();
  report.min_abs_eigenvalue = min_modulus(s);
  report.topological_prediction = circle_sign_prediction(spec.phase.winding(), spec.nu);
  finalize(report);
  return report;
}

SweepResult sweep_deformation(const CircleDiracSpec& spec, int steps, int cutoff,
                              const CensusTolerances& tolerances, int jobs) {
  spec.validate();
  if (steps < 1) throw Error(ErrorKind::domain, "sweep needs at least one step");
  if (invertibility_margin(spec) <= 0.0)
    throw Error(ErrorKind::precondition, "m <= max|φ̇|: the family is not known to stay invertible");
  const double radius = trusted_radius(spec.phase.beta(), cutoff);
  const double spacing = kPi / spec.phase.beta();

  SweepResult result;
  result.lower_bound = eigenvalue_lower_bound(spec);
  result.rows.resize(static_cast<std::size_t>(steps) + 1);
  parallel_for(result.rows.size(), jobs, [&](std::size_t i) {
    CircleDiracSpec member = spec;
    member.form = DiracForm::tilde;
    member.deformation = static_cast<double>(i) / steps;
    const Spectrum s = spectrum_galerkin(galerkin_matrix(member, cutoff), cutoff);
    if (!is_symmetric_spectrum(s, tolerances.pairing))
      throw Error(ErrorKind::model, "sweep member spectrum is not symmetric");
    const Spectrum trusted = s.within_radius(radius);
    SweepRow& row = result.rows[i];
    row.a = member.deformation;
    row.axis = count_imaginary_axis(trusted, tolerances.axis);
    row.min_abs = min_modulus(s);
    for (const auto& e : trusted.eigenvalues())
      if (std::abs(e.value.real()) <= spacing)
        for (int r = 0; r < e.multiplicity; ++r) row.near_axis.push_back(e.value);
  });
  const int parity = result.rows.front().axis.m_plus % 2;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.rows[i].axis.m_plus % 2 != parity && !result.counterexample) {
      result.parity_constant = false;
      result.counterexample = i;
    }
    if (result.rows[i].min_abs < result.lower_bound - 1e-6) result.bound_respected = false;
  }
  return result;
}

double match_distance(std::span<const cplx> reference, std::span<const cplx> candidates,
                      double unmatched) {
  std::vector<cplx> ref(reference.begin(), reference.end());
  std::stable_sort(ref.begin(), ref.end(), [](cplx a, cplx b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  std::vector<bool> used(candidates.size(), false);
  double worst = 0.0;
  for (cplx r : ref) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = candidates.size();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(candidates[j] - r);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j == candidates.size() || best > unmatched)
      throw Error(ErrorKind::model, "eigenvalue without a counterpart in the compared spectrum");
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

double isospectrality_check(const CircleDiracSpec& spec, int cutoff) {
  CircleDiracSpec tilde = spec;
  tilde.form = DiracForm::tilde;
  tilde.deformation = 1.0;
  CircleDiracSpec original = spec;
  original.form = DiracForm::original;
  const double radius = trusted_radius(spec.phase.beta(), cutoff);
  const Spectrum st = spectrum_galerkin(galerkin_matrix(tilde, cutoff), cutoff).within_radius(radius);
  const Spectrum so = spectrum_galerkin(galerkin_matrix(original, cutoff), cutoff);
  const std::vector<cplx> a = st.expanded(), b = so.expanded();
  return match_distance(a, b, 1e-3 * (1.0 + radius));
}

// ---------------------------------------------------------------------------

MonodromySystem monodromy_system(const CircleDiracSpec& spec) {
  spec.validate();
  const cplx i(0.0, 1.0);
  const double m = spec.mass;
  auto slope = [i](double) -> Matrix2c { return (-i * Matrix2c::Identity()).eval(); };
  if (spec.form == DiracForm::tilde) {
    const PhaseFunction phi = spec.phase;
    const double a = spec.deformation;
    auto base = [phi, a, m, i](double t) -> Matrix2c {
      const double half = 0.5 * a * phi.derivative(t);
      Matrix2c b;
      b << -half, i * m, i * m, half;
      return i * b;
    };
    return MonodromySystem(2, base, slope, phi.beta(), spec.boundary_phase());
  }
  const PhaseFunction phi = spec.phase;
  auto base = [phi, m, i](double t) -> Matrix2c {
    const cplx e = std::polar(1.0, phi.value(t));
    Matrix2c b;
    b << 0.0, i * m * e, i * m * std::conj(e), 0.0;
    return i * b;
  };
  return MonodromySystem(2, base, slope, phi.beta(), spec.boundary_phase());
}

MethodAgreement compare_galerkin_monodromy(const CircleDiracSpec& spec, int cutoff, std::size_t count,
                                           const RootSearchOptions& options) {
  const Spectrum s = spectrum_galerkin(galerkin_matrix(spec, cutoff), cutoff);
  MethodAgreement out;
  out.galerkin_smallest = s.smallest(count);
  double reach = 0.0;
  for (cplx z : out.galerkin_smallest) reach = std::max(reach, std::abs(z.real()));

  // Vertical edges placed in a gap of the Galerkin real parts.
  std::vector<double> re;
  for (const auto& e : s.eigenvalues()) re.push_back(std::abs(e.value.real()));
  double edge = reach + 0.3;
  for (int tries = 0; tries < 1000; ++tries, edge += 0.1) {
    const bool clear = std::none_of(re.begin(), re.end(), [&](double r) { return std::abs(r - edge) < 0.2; });
    if (clear) break;
  }
  const double top = spec.mass + 1.0 + 0.0123 * std::sqrt(2.0);
  out.region = SearchRegion{-edge, edge, -top, top, options.density};
  if (std::hypot(edge, top) >= trusted_radius(spec.phase.beta(), cutoff))
    throw Error(ErrorKind::precondition, "comparison rectangle exceeds the trusted Galerkin window");

  for (const auto& e : s.eigenvalues())
    if (out.region.contains(e.value)) out.galerkin_count += e.multiplicity;

  const MonodromySystem system = monodromy_system(spec);
  out.contour_count = count_roots(system, out.region, options.counting);
  const Spectrum roots = find_roots(system, out.region, options);
  out.roots_found = roots.total_multiplicity();
  const std::vector<cplx> found = roots.expanded();
  out.max_distance = match_distance(out.galerkin_smallest, found, 1e-2);
  return out;
}

// ---------------------------------------------------------------------------

MonodromySystem ScalarCircleOperator::monodromy_system() const {
  const double coeff = a;
  auto base = [coeff](double) -> Matrix2c {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = coeff;
    return m;
  };
  auto slope = [](double) -> Matrix2c {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = cplx(0.0, 1.0);
    return m;
  };
  return MonodromySystem(1, base, slope, beta, 0.0);
}

Spectrum ScalarCircleOperator::exact_spectrum(int n_min, int n_max) const {
  if (n_max < n_min) throw Error(ErrorKind::domain, "empty mode window");
  std::vector<cplx> v;
  for (int n = n_min; n <= n_max; ++n) v.emplace_back(kTwoPi * n / beta, a);
  return Spectrum::from_values(v, SpectrumSource::exact_formula, n_max);
}

double ScalarCircleOperator::calibrated_determinant(int steps) const {
  const cplx m = monodromy(monodromy_system(), 0.0, steps)(0, 0);
  return (1.0 / m - 1.0).real();
}

double ScalarCircleOperator::relative_determinant(int steps) const {
  const cplx m = monodromy(monodromy_system(), 0.0, steps)(0, 0);
  return (1.0 - m).real();
}

double ScalarCircleOperator::exact_determinant() const { return std::exp(-a * beta) - 1.0; }

int ScalarCircleOperator::predicted_sign() const {
  if (a == 0.0) throw Error(ErrorKind::non_invertible, "D_0 has the eigenvalue 0");
  return a > 0.0 ? -1 : 1;
}

}  // namespace detphase
