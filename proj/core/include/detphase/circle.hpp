#pragma once

// Operators on the circle [0, β]/~ :
//   * the scalar operator D_a = −i d/dt + ia,
//   * the Dirac-type operator D = i d/dt + im n̂ with n = e^{iφ}, its gauge
//     transform D̃ = U_φ⁻¹ D U_φ and the deformation D̃_a, a ∈ [0, 1],
//   * the deformed DeRham–Dirac operator d + d* + mΦ(n) on 0- and 1-forms.
// Each has an exponential-basis Galerkin truncation and a monodromy
// formulation; both feed the imaginary-axis census behind the sign checks.

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "detphase/ode.hpp"
#include "detphase/phase_report.hpp"
#include "detphase/spectrum.hpp"

namespace detphase {

/// Grid used for max|φ̇| and Fourier transforms of e^{iφ}.
inline constexpr int kPhaseGrid = 4096;

/// φ(t) = 2πk t/β + Σ_{|j|<=J} c_j e^{2πijt/β} with c_{−j} = conj(c_j), so
/// φ(t + β) = φ(t) + 2πk holds by construction.
class PhaseFunction {
 public:
  PhaseFunction() = default;
  /// `coefficients` maps j to c_j.  Entries for negative j are optional;
  /// missing ones are filled in as conj(c_{−j}), present ones must agree.
  PhaseFunction(double beta, int winding, const std::map<int, cplx>& coefficients = {});

  /// 2πk t/β + Σ_j r_j sin(2πjt/β), the common real-sine form.
  static PhaseFunction with_sines(double beta, int winding, std::span<const double> sine_amplitudes);

  double beta() const noexcept { return beta_; }
  int winding() const noexcept { return winding_; }
  int bandwidth() const noexcept { return bandwidth_; }
  /// c_j for j in [−J, J] (zero outside).
  cplx coefficient(int j) const;

  double value(double t) const;
  double derivative(double t) const;
  /// Fourier coefficient of φ̇ at harmonic h: 2πk/β for h = 0 plus 2πih/β·c_h.
  cplx derivative_coefficient(int h) const;
  /// max |φ̇| on a kPhaseGrid-point grid.
  double max_abs_derivative() const;
  /// value(t_i) for t_i = iβ/(count − 1), i = 0..count−1 (endpoint included).
  std::vector<double> samples(int count) const;

 private:
  double beta_ = 1.0;
  int winding_ = 0;
  int bandwidth_ = 0;
  std::vector<cplx> coeffs_;  // index j + J
};

/// Harmonic h coefficients of e^{iφ} (normalised: f(t) = Σ ĝ_h e^{2πiht/β}),
/// for h in [−H, H], from a kPhaseGrid-point DFT of the periodic part.
std::vector<cplx> exp_i_phase_coefficients(const PhaseFunction& phase, int max_harmonic);

/// Winding number of sampled angles over one period.  Samples may be
/// wrapped; each increment is taken as its principal value.  Throws
/// ErrorKind::undersampled if an increment is within 1e−9 of ±π (ambiguous).
int winding_number(std::span<const double> phi_samples, double beta);

enum class DiracForm { original, tilde };

struct CircleDiracSpec {
  PhaseFunction phase;
  double mass = 1.0;
  int nu = 0;
  /// a ∈ [0, 1]; used by the tilde form only.
  double deformation = 1.0;
  DiracForm form = DiracForm::tilde;

  /// w in ξ(β) = e^{iπw} ξ(0): ν + k for the tilde form, ν for the original.
  int boundary_phase() const;
  void validate() const;
};

/// Frequencies ω_n = (π/β)(2n + w) with |2n + w| <= 2N, in increasing n.
std::vector<double> galerkin_frequencies(double beta, int boundary_phase, int cutoff);

/// Radius of the trusted spectral window: half the cutoff frequency 2πN/β.
double trusted_radius(double beta, int cutoff);

/// Galerkin matrix in the basis e^{iω_n t} ⊗ {e₁, e₂}, interleaved so the
/// unknown (mode n, component r) sits at index 2n + r.
Eigen::MatrixXcd galerkin_matrix(const CircleDiracSpec& spec, int cutoff);

/// All eigenvalues of a truncated operator matrix, tagged galerkin.
Spectrum spectrum_galerkin(const Eigen::MatrixXcd& matrix, std::optional<int> cutoff = std::nullopt);

/// λ±_n = ±im + (π/β)(2n − k − ν) for n in [n_min, n_max].
Spectrum exact_spectrum_tilde0(double m, double beta, int k, int nu, int n_min, int n_max);

/// m − max|φ̇|.  When positive every eigenvalue satisfies
/// |λ| >= sqrt(m(m − max|φ̇|)).
double invertibility_margin(const CircleDiracSpec& spec);
/// sqrt(m·margin) for a positive margin, otherwise 0 (no guarantee).
double eigenvalue_lower_bound(const CircleDiracSpec& spec);

/// −(−1)^{k+ν}.
int circle_sign_prediction(int k, int nu);

struct CensusTolerances {
  double axis = kAxisTolerance;
  double pairing = kPairingTolerance;
};

/// Galerkin spectrum, symmetry check, census on the trusted window and the
/// comparison (−1)^{m_+} against −(−1)^{k+ν}.  Throws
/// ErrorKind::precondition for a non-positive margin or a trusted window
/// smaller than m, ErrorKind::model if the spectrum is not symmetric.
PhaseReport verify_circle_theorem(const CircleDiracSpec& spec, int cutoff,
                                  const CensusTolerances& tolerances = {});

struct SweepRow {
  double a = 0.0;
  AxisCount axis;
  double min_abs = 0.0;
  /// Trusted eigenvalues with |Re λ| <= π/β, i.e. within one mode spacing.
  std::vector<cplx> near_axis;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double lower_bound = 0.0;
  bool parity_constant = true;
  bool bound_respected = true;
  /// First row whose m_plus parity differs from row 0.
  std::optional<std::size_t> counterexample;
};

/// D̃_a for a = 0, 1/steps, …, 1 (spec.deformation is ignored).
SweepResult sweep_deformation(const CircleDiracSpec& spec, int steps, int cutoff,
                              const CensusTolerances& tolerances = {}, int jobs = 1);

/// Greedy nearest-neighbour matching of `reference` into `candidates` with
/// multiplicity; ties in processing order follow (Im, Re).
/// Returns the largest matched distance; throws ErrorKind::model if some
/// reference value has no candidate within `unmatched`.
double match_distance(std::span<const cplx> reference, std::span<const cplx> candidates,
                      double unmatched);

/// Max distance from each trusted (|λ| <= trusted_radius) tilde (a = 1)
/// eigenvalue to the nearest original-form Galerkin eigenvalue.
double isospectrality_check(const CircleDiracSpec& spec, int cutoff);

// --- monodromy formulations -------------------------------------------------

/// ξ' = (iB(t) − iλ)ξ for D̃_a or D, with the matching boundary phase.
MonodromySystem monodromy_system(const CircleDiracSpec& spec);

struct MethodAgreement {
  SearchRegion region;
  int galerkin_count = 0;
  int contour_count = 0;
  int roots_found = 0;
  double max_distance = 0.0;
  std::vector<cplx> galerkin_smallest;
};

/// Compares the `count` smallest-|λ| Galerkin eigenvalues with monodromy
/// roots found by subdivision in a rectangle enclosing them, and the
/// contour count in that rectangle with the Galerkin count.
MethodAgreement compare_galerkin_monodromy(const CircleDiracSpec& spec, int cutoff, std::size_t count,
                                           const RootSearchOptions& options = {});

// --- scalar operator ----------------------------------------------------------

struct ScalarCircleOperator {
  double a = 0.0;
  double beta = 1.0;

  /// ξ' = (a + iλ)ξ, periodic.
  MonodromySystem monodromy_system() const;
  /// ia + 2πn/β for n in [n_min, n_max].
  Spectrum exact_spectrum(int n_min, int n_max) const;
  /// det(M(0)⁻¹ − I): the monodromy determinant normalised so that it
  /// reproduces e^{−aβ} − 1.
  double calibrated_determinant(int steps = kDefaultSteps) const;
  /// det(I − M(0)), uncalibrated.
  double relative_determinant(int steps = kDefaultSteps) const;
  double exact_determinant() const;
  /// Census sign: −1 for a > 0 (the eigenvalue ia), +1 for a < 0.
  int predicted_sign() const;
};

// --- DeRham–Dirac on the circle -----------------------------------------------

/// n = (cos ψ, sin ψ·∂_t): a section of the unit sphere bundle in ℝ ⊕ TS¹.
struct SphereBundleSection1D {
  PhaseFunction angle;

  double beta() const noexcept { return angle.beta(); }
  double n0(double t) const;
  double n1(double t) const;
  /// Winding of ψ, computed from samples.
  int degree() const;
  /// max(|∇n̄| + |∇n₀|) = max |ψ̇|(|cos ψ| + |sin ψ|) on the phase grid.
  double gradient_bound() const;
};

/// d + d* + m(i n₀ + c_R(n̄)) in the basis e^{2πint/β} ⊗ {1, dt},
/// interleaved as (mode n, degree r) -> 2n + r.
Eigen::MatrixXcd derham_galerkin_matrix(const SphereBundleSection1D& section, double m, int cutoff);

/// Grading (−1)^{degree} on the interleaved basis.
Eigen::MatrixXcd derham_grading(int cutoff);

/// ξ' = A(t, λ)ξ for (f, g) with (f, g·dt) ↦ Dξ = λξ.
MonodromySystem derham_monodromy_system(const SphereBundleSection1D& section, double m);

/// Census sign of D_{mn} against (−1)^{deg n}.
PhaseReport derham_dirac_circle(const SphereBundleSection1D& section, double m, int cutoff,
                                const CensusTolerances& tolerances = {});

}  // namespace detphase
