#pragma once

// Bookkeeping for finite complex spectra: branches of the logarithm,
// reflection symmetry across the imaginary axis, counting of eigenvalues on
// the imaginary axis and finite zeta-regularized determinants.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace detphase {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Eigenvalues closer than this (relative to 1 + scale) are one eigenvalue.
inline constexpr double kMergeTolerance = 1e-8;
/// Default |Re λ| / (1 + |λ|) threshold for "on the imaginary axis".
inline constexpr double kAxisTolerance = 1e-6;
/// Default mirror-pairing tolerance for symmetry checks.
inline constexpr double kPairingTolerance = 1e-8;

struct Eigenvalue {
  cplx value;
  int multiplicity = 1;
};

enum class SpectrumSource { exact_formula, galerkin, monodromy, hodge_model, synthetic };

const char* to_string(SpectrumSource source) noexcept;

/// A finite multiset of complex eigenvalues.  Entries are kept sorted by
/// (Im, Re); values closer than kMergeTolerance·(1 + scale) are merged into
/// one entry whose multiplicity is the sum.
class Spectrum {
 public:
  Spectrum() = default;

  static Spectrum from_values(std::span<const cplx> values,
                              SpectrumSource source = SpectrumSource::synthetic,
                              std::optional<int> truncation = std::nullopt,
                              double merge_tolerance = kMergeTolerance);
  static Spectrum from_eigenvalues(std::span<const Eigenvalue> eigenvalues,
                                   SpectrumSource source = SpectrumSource::synthetic,
                                   std::optional<int> truncation = std::nullopt,
                                   double merge_tolerance = kMergeTolerance);

  const std::vector<Eigenvalue>& eigenvalues() const noexcept { return entries_; }
  SpectrumSource source() const noexcept { return source_; }
  std::optional<int> truncation() const noexcept { return truncation_; }
  /// max |λ| over the entries (0 for the empty spectrum).
  double scale() const noexcept { return scale_; }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  int total_multiplicity() const noexcept;

  /// Values repeated according to multiplicity, in storage order.
  std::vector<cplx> expanded() const;

  /// Entries with |λ| <= radius, keeping provenance.
  Spectrum within_radius(double radius) const;

  /// The `count` entries (counted with multiplicity) of smallest modulus,
  /// ties broken by (Im, Re).
  std::vector<cplx> smallest(std::size_t count) const;

 private:
  std::vector<Eigenvalue> entries_;
  SpectrumSource source_ = SpectrumSource::synthetic;
  std::optional<int> truncation_;
  double scale_ = 0.0;
};

/// A spectral cut direction together with a closed angular window around it
/// that contains no eigenvalue arguments.
struct AgmonAngle {
  double theta = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  bool contains(double angle) const noexcept { return window_lo <= angle && angle <= window_hi; }
};

/// Builds an Agmon angle at theta ∈ (0, 2π) for s; the window is half the
/// angular distance to the nearest eigenvalue argument on either side.
/// Throws ErrorKind::cut_collision if an eigenvalue lies on the ray R_θ.
AgmonAngle make_agmon_angle(const Spectrum& s, double theta);

/// An Agmon angle θ ∈ (π/2, π) such that no eigenvalues lie in the sectors
/// (π/2, θ] and (−π/2, θ − π]; the cut sits midway between π/2 and the first
/// eigenvalue argument past it.
AgmonAngle symmetric_agmon_angle(const Spectrum& s, double axis_tolerance = kAxisTolerance);

/// log|λ| + i·arg λ with arg ∈ (θ − 2π, θ): the branch of the logarithm on
/// ℂ∖R_θ which is real on the positive real axis.
cplx log_branch(cplx lambda, double theta);

/// Invariance of the multiset under λ ↦ −conj(λ), matching multiplicities,
/// within tol·(1 + scale).  The empty spectrum is symmetric.
bool is_symmetric_spectrum(const Spectrum& s, double tol = kPairingTolerance);

/// Largest distance between an eigenvalue's mirror image and its matched
/// partner under the greedy mirror matching; infinity if a mirror is missing.
double symmetry_defect(const Spectrum& s);

struct AxisCount {
  int m_plus = 0;
  int m_minus = 0;
  double axis_tolerance = kAxisTolerance;
  /// Eigenvalues just outside the axis tolerance (within 1000×); a nonzero
  /// count means the classification is fragile and is reported as a warning.
  int ambiguous = 0;
};

/// m_plus / m_minus: multiplicities of eigenvalues with
/// |Re λ| <= axis_tolerance·(1 + |λ|) and Im λ > 0 / Im λ < 0.
/// Throws ErrorKind::non_invertible if |λ| <= axis_tolerance for some entry.
AxisCount count_imaginary_axis(const Spectrum& s, double axis_tolerance = kAxisTolerance);

/// (−1)^{m_plus} for a spectrum symmetric under λ ↦ −conj(λ).  The empty
/// spectrum has sign +1.  Throws ErrorKind::precondition if s is not
/// symmetric within pairing_tolerance.
int predicted_sign(const Spectrum& s, double axis_tolerance = kAxisTolerance,
                   double pairing_tolerance = kPairingTolerance);

/// ζ_θ(z) = Σ m_k exp(−z·log_θ λ_k) for a finite spectrum.
cplx finite_zeta(const Spectrum& s, const AgmonAngle& angle, cplx z);

/// ζ'_θ(0) = −Σ m_k log_θ λ_k.
cplx finite_zeta_derivative_at_zero(const Spectrum& s, const AgmonAngle& angle);

/// exp(−ζ'_θ(0)) = exp(Σ m_k log_θ λ_k), summed in storage order.
cplx finite_zeta_det(const Spectrum& s, const AgmonAngle& angle);

struct NaiveComparison {
  cplx finite_det;
  int theorem_sign = 1;
  AxisCount axis;
  /// True when finite_det is non-real or its sign differs from theorem_sign.
  bool discrepant = false;
};

/// Contrasts the finite eigenvalue product, whose phase is
/// e^{iπ(m_+ − m_−)/2}, with the sign (−1)^{m_+} of the regularized
/// determinant of an operator with the same axis census.
NaiveComparison naive_vs_theorem(const Spectrum& s, const AgmonAngle& angle,
                                 double axis_tolerance = kAxisTolerance);

}  // namespace detphase
