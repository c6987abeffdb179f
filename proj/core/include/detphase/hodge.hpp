#pragma once

// Finite Fourier model of the complexified de Rham complex on the flat
// unit-lattice torus T^N (N = 1 or 3): modes e^{i k·x} with max|k_c| <= K,
// tensored with the constant forms dx^I.

#include <Eigen/Dense>
#include <vector>

#include "detphase/phase_report.hpp"
#include "detphase/spectrum.hpp"

namespace detphase {

class TorusFourierComplex {
 public:
  /// Basis vector (I, k) sits at form_index(I)·mode_count + mode_index(k);
  /// forms are ordered by degree and then lexicographically, modes
  /// lexicographically in (k_0, …, k_{N−1}).
  TorusFourierComplex(int dimension, int cutoff);

  int dimension() const noexcept { return dimension_; }
  int cutoff() const noexcept { return cutoff_; }
  Eigen::Index size() const noexcept { return d_.rows(); }
  int mode_count() const noexcept { return modes_; }
  int form_count() const noexcept { return static_cast<int>(forms_.size()); }
  /// Multi-index (sorted coordinate list) of form f.
  const std::vector<int>& form(int f) const { return forms_[static_cast<std::size_t>(f)]; }
  int degree_of_form(int f) const { return static_cast<int>(forms_[static_cast<std::size_t>(f)].size()); }
  /// Form degree of basis vector `index`.
  int degree_of(Eigen::Index index) const;
  /// Frequency vector of mode `mode`.
  std::vector<int> mode(int mode) const;

  const Eigen::MatrixXcd& d() const noexcept { return d_; }
  Eigen::MatrixXcd d_adjoint() const { return d_.adjoint(); }
  const Eigen::MatrixXcd& star() const noexcept { return star_; }
  const Eigen::MatrixXcd& gamma() const noexcept { return gamma_; }
  /// (−1)^{degree}.
  Eigen::MatrixXcd grading() const;
  /// d + d*.
  Eigen::MatrixXcd dirac() const;
  /// Diagonal operator ω ↦ coeffs[j]·ω on j-forms.
  Eigen::MatrixXcd degree_operator(const std::vector<double>& coeffs) const;

 private:
  int dimension_;
  int cutoff_;
  int modes_;
  std::vector<std::vector<int>> forms_;
  Eigen::MatrixXcd d_;
  Eigen::MatrixXcd star_;
  Eigen::MatrixXcd gamma_;
};

/// Throws ErrorKind::domain unless N ∈ {1, 3} and K >= 1.
TorusFourierComplex build_complex(int dimension, int cutoff);

/// dim ker(d + d*) on j-forms, j = 0..N.
std::vector<int> betti_numbers(const TorusFourierComplex& c);

/// Smallest nonzero |eigenvalue| of d + d*.
double spectral_gap(const TorusFourierComplex& c);

/// a_j for j = 0..N; every a_j must be nonzero with |a_j| < 1 (the d + d*
/// gap), else ErrorKind::regime.
struct GradedCoefficients {
  std::vector<double> a;

  void validate(int dimension) const;
};

/// d + d* + ia, 0 < |a| < 1.  Prediction +1.
PhaseReport spectrum_da(const TorusFourierComplex& c, double a,
                        double axis_tolerance = kAxisTolerance);

/// d + d* + iA.  Prediction (−1)^{Σ_{a_j > 0} β_j}.
PhaseReport spectrum_graded(const TorusFourierComplex& c, const GradedCoefficients& coeffs,
                            double axis_tolerance = kAxisTolerance);

/// d + d* + iΓ.  Prediction (−1)^{½ Σ β_j}.
PhaseReport spectrum_dgamma(const TorusFourierComplex& c, double axis_tolerance = kAxisTolerance);

/// Eigenvalues of the model operator used by the three reports above.
Spectrum hodge_spectrum(const Eigen::MatrixXcd& op);

}  // namespace detphase
