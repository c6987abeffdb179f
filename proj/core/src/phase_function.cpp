#include <cmath>
#include <cstdlib>

#include "detphase/circle.hpp"
#include "detphase/errors.hpp"

namespace detphase {

PhaseFunction::PhaseFunction(double beta, int winding, const std::map<int, cplx>& coefficients)
    : beta_(beta), winding_(winding) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw Error(ErrorKind::domain, "β must be positive");
  for (const auto& [j, c] : coefficients) bandwidth_ = std::max(bandwidth_, std::abs(j));
  coeffs_.assign(2 * static_cast<std::size_t>(bandwidth_) + 1, cplx(0.0, 0.0));
  std::vector<bool> given(coeffs_.size(), false);
  for (const auto& [j, c] : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::domain, "non-finite Fourier coefficient");
    coeffs_[static_cast<std::size_t>(j + bandwidth_)] = c;
    given[static_cast<std::size_t>(j + bandwidth_)] = true;
  }
  for (int j = 0; j <= bandwidth_; ++j) {
    const auto pos = static_cast<std::size_t>(bandwidth_ + j);
    const auto neg = static_cast<std::size_t>(bandwidth_ - j);
    if (j == 0) {
      if (std::abs(coeffs_[pos].imag()) > 1e-14 * (1.0 + std::abs(coeffs_[pos])))
        throw Error(ErrorKind::domain, "c_0 of a real phase must be real");
      coeffs_[pos] = coeffs_[pos].real();
      continue;
    }
    if (given[pos] && given[neg]) {
      if (std::abs(coeffs_[neg] - std::conj(coeffs_[pos])) > 1e-12 * (1.0 + std::abs(coeffs_[pos])))
        throw Error(ErrorKind::domain, "Fourier coefficients must satisfy c_{-j} = conj(c_j)");
    } else if (given[pos]) {
      coeffs_[neg] = std::conj(coeffs_[pos]);
    } else if (given[neg]) {
      coeffs_[pos] = std::conj(coeffs_[neg]);
    }
  }
}

PhaseFunction PhaseFunction::with_sines(double beta, int winding, std::span<const double> sine_amplitudes) {
  // r sin x = (r/2i) e^{ix} − (r/2i) e^{−ix}
  std::map<int, cplx> c;
  for (std::size_t i = 0; i < sine_amplitudes.size(); ++i) {
    if (sine_amplitudes[i] == 0.0) continue;
    c[static_cast<int>(i) + 1] = cplx(0.0, -0.5 * sine_amplitudes[i]);
  }
  return PhaseFunction(beta, winding, c);
}

cplx PhaseFunction::coefficient(int j) const {
  if (std::abs(j) > bandwidth_) return 0.0;
  return coeffs_[static_cast<std::size_t>(j + bandwidth_)];
}

double PhaseFunction::value(double t) const {
  double v = kTwoPi * winding_ * t / beta_;
  for (int j = -bandwidth_; j <= bandwidth_; ++j)
    v += (coefficient(j) * std::polar(1.0, kTwoPi * j * t / beta_)).real();
  return v;
}

double PhaseFunction::derivative(double t) const {
  double v = kTwoPi * winding_ / beta_;
  for (int j = -bandwidth_; j <= bandwidth_; ++j)
    v += (cplx(0.0, kTwoPi * j / beta_) * coefficient(j) * std::polar(1.0, kTwoPi * j * t / beta_)).real();
  return v;
}

cplx PhaseFunction::derivative_coefficient(int h) const {
  if (h == 0) return kTwoPi * winding_ / beta_;
  return cplx(0.0, kTwoPi * h / beta_) * coefficient(h);
}

double PhaseFunction::max_abs_derivative() const {
  double best = 0.0;
  for (int i = 0; i < kPhaseGrid; ++i)
    best = std::max(best, std::abs(derivative(beta_ * i / kPhaseGrid)));
  return best;
}

std::vector<double> PhaseFunction::samples(int count) const {
  if (count < 2) throw Error(ErrorKind::domain, "need at least two samples");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = value(beta_ * i / (count - 1));
  return out;
}

std::vector<cplx> exp_i_phase_coefficients(const PhaseFunction& phase, int max_harmonic) {
  const int L = kPhaseGrid;
  if (max_harmonic + std::abs(phase.winding()) >= L / 2)
    throw Error(ErrorKind::bandwidth, "requested harmonics exceed the phase grid resolution");
  std::vector<cplx> periodic(L);
  for (int j = 0; j < L; ++j) {
    const double t = phase.beta() * j / L;
    const double p = phase.value(t) - kTwoPi * phase.winding() * t / phase.beta();
    periodic[static_cast<std::size_t>(j)] = std::polar(1.0, p);
  }
  std::vector<cplx> roots(L);
  for (int j = 0; j < L; ++j) roots[static_cast<std::size_t>(j)] = std::polar(1.0, -kTwoPi * j / L);

  std::vector<cplx> out(2 * static_cast<std::size_t>(max_harmonic) + 1);
  for (int h = -max_harmonic; h <= max_harmonic; ++h) {
    const int shifted = h - phase.winding();
    const int s = ((shifted % L) + L) % L;
    cplx sum = 0.0;
    for (int j = 0; j < L; ++j)
      sum += periodic[static_cast<std::size_t>(j)] *
             roots[static_cast<std::size_t>((static_cast<long long>(s) * j) % L)];
    out[static_cast<std::size_t>(h + max_harmonic)] = sum / static_cast<double>(L);
  }
  return out;
}

int winding_number(std::span<const double> phi_samples, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::domain, "β must be positive");
  if (phi_samples.size() < 2) throw Error(ErrorKind::domain, "need at least two samples");
  double total = 0.0;
  for (std::size_t i = 1; i < phi_samples.size(); ++i) {
    const double inc = std::remainder(phi_samples[i] - phi_samples[i - 1], kTwoPi);
    if (kPi - std::abs(inc) <= 1e-9)
      throw Error(ErrorKind::undersampled, "phase increment of π between samples is ambiguous");
    total += inc;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace detphase
