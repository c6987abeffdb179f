#include <algorithm>
#include <cmath>
#include <limits>

#include "detphase/circle.hpp"
#include "detphase/eigensolve.hpp"
#include "detphase/errors.hpp"

namespace detphase {

double SphereBundleSection1D::n0(double t) const { return std::cos(angle.value(t)); }

double SphereBundleSection1D::n1(double t) const { return std::sin(angle.value(t)); }

int SphereBundleSection1D::degree() const {
  const std::vector<double> s = angle.samples(kPhaseGrid + 1);
  return winding_number(s, angle.beta());
}

double SphereBundleSection1D::gradient_bound() const {
  double best = 0.0;
  for (int i = 0; i < kPhaseGrid; ++i) {
    const double t = angle.beta() * i / kPhaseGrid;
    const double p = angle.value(t);
    best = std::max(best, std::abs(angle.derivative(t)) * (std::abs(std::cos(p)) + std::abs(std::sin(p))));
  }
  return best;
}

Eigen::MatrixXcd derham_galerkin_matrix(const SphereBundleSection1D& section, double m, int cutoff) {
  if (!(m > 0.0)) throw Error(ErrorKind::domain, "mass must be positive");
  if (cutoff < 1) throw Error(ErrorKind::domain, "cutoff must be positive");
  const int span = 2 * cutoff;
  const std::vector<cplx> e = exp_i_phase_coefficients(section.angle, span);
  auto ehat = [&](int h) { return e[static_cast<std::size_t>(h + span)]; };
  auto cos_hat = [&](int h) { return 0.5 * (ehat(h) + std::conj(ehat(-h))); };
  auto sin_hat = [&](int h) { return (ehat(h) - std::conj(ehat(-h))) / cplx(0.0, 2.0); };

  const int modes = 2 * cutoff + 1;
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * modes, 2 * modes);
  for (int p = 0; p < modes; ++p) {
    for (int q = 0; q < modes; ++q) {
      const int h = p - q;
      const cplx c = cos_hat(h), s = sin_hat(h);
      T(2 * p, 2 * q) = i * m * c;
      T(2 * p + 1, 2 * q + 1) = i * m * c;
      T(2 * p, 2 * q + 1) = m * s;
      T(2 * p + 1, 2 * q) = m * s;
    }
    const double omega = kTwoPi * (p - cutoff) / section.beta();
    T(2 * p, 2 * p + 1) += -i * omega;
    T(2 * p + 1, 2 * p) += i * omega;
  }
  return T;
}

Eigen::MatrixXcd derham_grading(int cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::domain, "cutoff must be positive");
  const int size = 2 * (2 * cutoff + 1);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r < size; ++r) G(r, r) = (r % 2 == 0) ? 1.0 : -1.0;
  return G;
}

MonodromySystem derham_monodromy_system(const SphereBundleSection1D& section, double m) {
  if (!(m > 0.0)) throw Error(ErrorKind::domain, "mass must be positive");
  const PhaseFunction psi = section.angle;
  const cplx i(0.0, 1.0);
  auto base = [psi, m, i](double t) -> Matrix2c {
    const double p = psi.value(t);
    const double c = std::cos(p), s = std::sin(p);
    Matrix2c b;
    b << -m * s, -i * m * c, i * m * c, m * s;
    return b;
  };
  auto slope = [](double) -> Matrix2c {
    Matrix2c b;
    b << 0.0, 1.0, -1.0, 0.0;
    return b;
  };
  return MonodromySystem(2, base, slope, psi.beta(), 0.0);
}

PhaseReport derham_dirac_circle(const SphereBundleSection1D& section, double m, int cutoff,
                                const CensusTolerances& tolerances) {
  if (!(m > section.gradient_bound()))
    throw Error(ErrorKind::precondition, "m <= max|ψ̇|(|cos ψ| + |sin ψ|): invertibility is not guaranteed");
  const double radius = trusted_radius(section.beta(), cutoff);
  if (radius <= m)
    throw Error(ErrorKind::precondition, "trusted window does not cover |Im λ| <= m; raise the cutoff");

  const Spectrum s = spectrum_galerkin(derham_galerkin_matrix(section, m, cutoff), cutoff);
  PhaseReport report;
  report.label = "derham-dirac-circle";
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
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ev : s.eigenvalues()) best = std::min(best, std::abs(ev.value));
  report.min_abs_eigenvalue = best;
  report.topological_prediction = (section.degree() % 2 == 0) ? 1 : -1;
  finalize(report);
  return report;
}

}  // namespace detphase
