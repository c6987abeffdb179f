#include "detphase/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detphase/errors.hpp"

namespace detphase {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::cut_collision: return "cut_collision";
    case ErrorKind::non_invertible: return "non_invertible";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::integration: return "integration";
    case ErrorKind::contour: return "contour_collision";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::bandwidth: return "bandwidth";
    case ErrorKind::undersampled: return "undersampled";
    case ErrorKind::model: return "model";
    case ErrorKind::regime: return "regime";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

const char* to_string(SpectrumSource source) noexcept {
  switch (source) {
    case SpectrumSource::exact_formula: return "exact-formula";
    case SpectrumSource::galerkin: return "galerkin";
    case SpectrumSource::monodromy: return "monodromy";
    case SpectrumSource::hodge_model: return "hodge-model";
    case SpectrumSource::synthetic: return "synthetic";
  }
  return "unknown";
}

namespace {

bool im_re_less(cplx a, cplx b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

struct Cluster {
  cplx sum;
  int count = 0;
  cplx centre() const { return sum / static_cast<double>(count); }
};

}  // namespace

Spectrum Spectrum::from_eigenvalues(std::span<const Eigenvalue> eigenvalues, SpectrumSource source,
                                    std::optional<int> truncation, double merge_tolerance) {
  double scale = 0.0;
  for (const auto& e : eigenvalues) {
    if (e.multiplicity < 1) throw Error(ErrorKind::domain, "eigenvalue multiplicity must be >= 1");
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()))
      throw Error(ErrorKind::domain, "non-finite eigenvalue");
    scale = std::max(scale, std::abs(e.value));
  }
  const double tol = merge_tolerance * (1.0 + scale);

  std::vector<Eigenvalue> sorted(eigenvalues.begin(), eigenvalues.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Eigenvalue& a, const Eigenvalue& b) { return im_re_less(a.value, b.value); });

  // Greedy clustering in (Im, Re) order; clusters are re-merged until their
  // centres are separated by more than tol.
  std::vector<Cluster> clusters;
  for (const auto& e : sorted) {
    bool placed = false;
    for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
      if (e.value.imag() - it->centre().imag() > tol) break;
      if (std::abs(it->centre() - e.value) <= tol) {
        it->sum += e.value * static_cast<double>(e.multiplicity);
        it->count += e.multiplicity;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({e.value * static_cast<double>(e.multiplicity), e.multiplicity});
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < clusters.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (std::abs(clusters[i].centre() - clusters[j].centre()) <= tol) {
          clusters[i].sum += clusters[j].sum;
          clusters[i].count += clusters[j].count;
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          break;
        }
      }
    }
  }

  Spectrum s;
  s.source_ = source;
  s.truncation_ = truncation;
  s.entries_.reserve(clusters.size());
  for (const auto& c : clusters) s.entries_.push_back({c.centre(), c.count});
  std::stable_sort(s.entries_.begin(), s.entries_.end(),
                   [](const Eigenvalue& a, const Eigenvalue& b) { return im_re_less(a.value, b.value); });
  for (const auto& e : s.entries_) s.scale_ = std::max(s.scale_, std::abs(e.value));
  return s;
}

Spectrum Spectrum::from_values(std::span<const cplx> values, SpectrumSource source,
                               std::optional<int> truncation, double merge_tolerance) {
  std::vector<Eigenvalue> e;
  e.reserve(values.size());
  for (cplx v : values) e.push_back({v, 1});
  return from_eigenvalues(e, source, truncation, merge_tolerance);
}

int Spectrum::total_multiplicity() const noexcept {
  int total = 0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

std::vector<cplx> Spectrum::expanded() const {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(total_multiplicity()));
  for (const auto& e : entries_)
    for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.value);
  return out;
}

Spectrum Spectrum::within_radius(double radius) const {
  Spectrum s;
  s.source_ = source_;
  s.truncation_ = truncation_;
  for (const auto& e : entries_) {
    if (std::abs(e.value) <= radius) {
      s.entries_.push_back(e);
      s.scale_ = std::max(s.scale_, std::abs(e.value));
    }
  }
  return s;
}

std::vector<cplx> Spectrum::smallest(std::size_t count) const {
  std::vector<cplx> all = expanded();
  std::stable_sort(all.begin(), all.end(), [](cplx a, cplx b) {
    const double da = std::abs(a), db = std::abs(b);
    if (da != db) return da < db;
    return im_re_less(a, b);
  });
  if (all.size() > count) all.resize(count);
  return all;
}

// ---------------------------------------------------------------------------

namespace {

// Signed distance from `angle` to `theta` on the circle, in (−π, π].
double angular_offset(double angle, double theta) {
  double d = std::remainder(angle - theta, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kTwoPi))
    throw Error(ErrorKind::domain, "spectral cut angle must lie in (0, 2π)");
}

}  // namespace

cplx log_branch(cplx lambda, double theta) {
  check_theta(theta);
  if (lambda == cplx(0.0, 0.0)) throw Error(ErrorKind::domain, "logarithm of zero");
  double arg = std::arg(lambda);
  if (std::abs(angular_offset(arg, theta)) <= 8.0 * std::numeric_limits<double>::epsilon() * kTwoPi)
    throw Error(ErrorKind::cut_collision, "eigenvalue lies on the spectral cut");
  while (arg >= theta) arg -= kTwoPi;
  while (arg <= theta - kTwoPi) arg += kTwoPi;
  return {std::log(std::abs(lambda)), arg};
}

AgmonAngle make_agmon_angle(const Spectrum& s, double theta) {
  check_theta(theta);
  // The window never reaches the positive real axis, where the branch
  // would change.
  double below = theta, above = kTwoPi - theta;
  for (const auto& e : s.eigenvalues()) {
    if (e.value == cplx(0.0, 0.0)) throw Error(ErrorKind::non_invertible, "zero eigenvalue");
    const double d = angular_offset(std::arg(e.value), theta);
    if (std::abs(d) <= 8.0 * std::numeric_limits<double>::epsilon() * kTwoPi)
      throw Error(ErrorKind::cut_collision, "eigenvalue lies on the spectral cut");
    if (d > 0) above = std::min(above, d);
    else below = std::min(below, -d);
  }
  return {theta, theta - 0.5 * below, theta + 0.5 * above};
}

AgmonAngle symmetric_agmon_angle(const Spectrum& s, double axis_tolerance) {
  // Candidate arguments in (π/2, π]; lower-half eigenvalues in (−π/2, 0]
  // enter through α + π.
  double first = kPi;
  for (const auto& e : s.eigenvalues()) {
    const cplx v = e.value;
    if (std::abs(v.real()) <= axis_tolerance * (1.0 + std::abs(v))) continue;
    const double a = std::arg(v);
    if (a > 0.5 * kPi) first = std::min(first, a);
    else if (a > -0.5 * kPi && a <= 0.0) first = std::min(first, a + kPi);
  }
  return make_agmon_angle(s, 0.5 * (0.5 * kPi + first));
}

// ---------------------------------------------------------------------------

namespace {

// Greedy nearest-neighbour matching of every value to an unused mirror
// image; returns the largest matched distance.
double greedy_mirror_defect(const std::vector<cplx>& values, double give_up) {
  std::vector<bool> used(values.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const cplx target = -std::conj(values[i]);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = values.size();
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(values[j] - target);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j == values.size() || best > give_up) return std::numeric_limits<double>::infinity();
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

bool is_symmetric_spectrum(const Spectrum& s, double tol) {
  if (s.empty()) return true;
  const double limit = tol * (1.0 + s.scale());
  return greedy_mirror_defect(s.expanded(), limit) <= limit;
}

double symmetry_defect(const Spectrum& s) {
  return greedy_mirror_defect(s.expanded(), std::numeric_limits<double>::infinity());
}

AxisCount count_imaginary_axis(const Spectrum& s, double axis_tolerance) {
  if (!(axis_tolerance > 0.0)) throw Error(ErrorKind::domain, "axis tolerance must be positive");
  AxisCount count;
  count.axis_tolerance = axis_tolerance;
  for (const auto& e : s.eigenvalues()) {
    const cplx v = e.value;
    const double r = std::abs(v);
    if (r <= axis_tolerance) throw Error(ErrorKind::non_invertible, "eigenvalue at the origin");
    const double off = std::abs(v.real()) / (1.0 + r);
    if (off <= axis_tolerance) {
      if (v.imag() > 0) count.m_plus += e.multiplicity;
      else count.m_minus += e.multiplicity;
    } else if (off <= 1000.0 * axis_tolerance) {
      count.ambiguous += e.multiplicity;
    }
  }
  return count;
}

int predicted_sign(const Spectrum& s, double axis_tolerance, double pairing_tolerance) {
  if (!is_symmetric_spectrum(s, pairing_tolerance))
    throw Error(ErrorKind::precondition, "spectrum is not symmetric under λ ↦ −conj(λ)");
  const AxisCount c = count_imaginary_axis(s, axis_tolerance);
  return (c.m_plus % 2 == 0) ? 1 : -1;
}

cplx finite_zeta(const Spectrum& s, const AgmonAngle& angle, cplx z) {
  cplx sum = 0.0;
  for (const auto& e : s.eigenvalues())
    sum += static_cast<double>(e.multiplicity) * std::exp(-z * log_branch(e.value, angle.theta));
  return sum;
}

cplx finite_zeta_derivative_at_zero(const Spectrum& s, const AgmonAngle& angle) {
  cplx sum = 0.0;
  for (const auto& e : s.eigenvalues())
    sum -= static_cast<double>(e.multiplicity) * log_branch(e.value, angle.theta);
  return sum;
}

cplx finite_zeta_det(const Spectrum& s, const AgmonAngle& angle) {
  return std::exp(-finite_zeta_derivative_at_zero(s, angle));
}

NaiveComparison naive_vs_theorem(const Spectrum& s, const AgmonAngle& angle, double axis_tolerance) {
  NaiveComparison out;
  out.theorem_sign = predicted_sign(s, axis_tolerance);
  out.axis = count_imaginary_axis(s, axis_tolerance);
  out.finite_det = finite_zeta_det(s, angle);
  const double magnitude = std::abs(out.finite_det);
  const bool real = std::abs(out.finite_det.imag()) <= 1e-10 * magnitude;
  const int finite_sign = out.finite_det.real() >= 0 ? 1 : -1;
  out.discrepant = !real || finite_sign != out.theorem_sign;
  return out;
}

}  // namespace detphase
