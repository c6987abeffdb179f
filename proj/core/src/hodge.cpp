#include "detphase/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detphase/eigensolve.hpp"
#include "detphase/errors.hpp"

namespace detphase {

namespace {

constexpr double kRankThreshold = 1e-8;

std::vector<std::vector<int>> ordered_forms(int n) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= n; ++deg) {
    std::vector<std::vector<int>> level;
    for (int mask = 0; mask < (1 << n); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != deg) continue;
      std::vector<int> idx;
      for (int c = 0; c < n; ++c)
        if (mask & (1 << c)) idx.push_back(c);
      level.push_back(idx);
    }
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// Sign of the permutation that sorts `seq`.
int permutation_sign(const std::vector<int>& seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

int find_form(const std::vector<std::vector<int>>& forms, const std::vector<int>& idx) {
  const auto it = std::find(forms.begin(), forms.end(), idx);
  return static_cast<int>(it - forms.begin());
}

}  // namespace

TorusFourierComplex::TorusFourierComplex(int dimension, int cutoff)
    : dimension_(dimension), cutoff_(cutoff) {
  if (dimension != 1 && dimension != 3) throw Error(ErrorKind::domain, "torus dimension must be 1 or 3");
  if (cutoff < 1) throw Error(ErrorKind::domain, "cutoff must be positive");
  modes_ = 1;
  for (int c = 0; c < dimension; ++c) modes_ *= 2 * cutoff + 1;
  forms_ = ordered_forms(dimension);
  const Eigen::Index size = static_cast<Eigen::Index>(forms_.size()) * modes_;
  if (size > kMaxDenseDimension) throw Error(ErrorKind::domain, "torus model exceeds the dense size limit");

  d_ = Eigen::MatrixXcd::Zero(size, size);
  star_ = Eigen::MatrixXcd::Zero(size, size);
  gamma_ = Eigen::MatrixXcd::Zero(size, size);
  const cplx i(0.0, 1.0);

  for (int f = 0; f < form_count(); ++f) {
    const std::vector<int>& I = forms_[static_cast<std::size_t>(f)];
    for (int c = 0; c < dimension; ++c) {
      if (std::find(I.begin(), I.end(), c) != I.end()) continue;
      // dx^c ∧ dx^I = (−1)^{#{i ∈ I : i < c}} dx^{I ∪ {c}}
      const auto before = std::count_if(I.begin(), I.end(), [c](int v) { return v < c; });
      const double sign = before % 2 == 0 ? 1.0 : -1.0;
      std::vector<int> J = I;
      J.insert(std::upper_bound(J.begin(), J.end(), c), c);
      const int g = find_form(forms_, J);
      for (int k = 0; k < modes_; ++k) {
        const int kc = mode(k)[static_cast<std::size_t>(c)];
        d_(static_cast<Eigen::Index>(g) * modes_ + k, static_cast<Eigen::Index>(f) * modes_ + k) +=
            i * static_cast<double>(kc) * sign;
      }
    }

    // ★dx^I = ε(I, I^c) dx^{I^c}
    std::vector<int> complement;
    for (int c = 0; c < dimension; ++c)
      if (std::find(I.begin(), I.end(), c) == I.end()) complement.push_back(c);
    std::vector<int> joined = I;
    joined.insert(joined.end(), complement.begin(), complement.end());
    const double eps = permutation_sign(joined);
    const int g = find_form(forms_, complement);

    // Γ = i^{l+1} (−1)^{j(j+1)/2} ★ on j-forms, N = 2l + 1
    const int l = (dimension - 1) / 2;
    const int j = static_cast<int>(I.size());
    cplx phase = 1.0;
    for (int r = 0; r < l + 1; ++r) phase *= i;
    if ((j * (j + 1) / 2) % 2 != 0) phase = -phase;

    for (int k = 0; k < modes_; ++k) {
      const Eigen::Index row = static_cast<Eigen::Index>(g) * modes_ + k;
      const Eigen::Index col = static_cast<Eigen::Index>(f) * modes_ + k;
      star_(row, col) = eps;
      gamma_(row, col) = phase * eps;
    }
  }
}

int TorusFourierComplex::degree_of(Eigen::Index index) const {
  return degree_of_form(static_cast<int>(index / modes_));
}

std::vector<int> TorusFourierComplex::mode(int mode) const {
  std::vector<int> k(static_cast<std::size_t>(dimension_));
  const int side = 2 * cutoff_ + 1;
  for (int c = dimension_ - 1; c >= 0; --c) {
    k[static_cast<std::size_t>(c)] = mode % side - cutoff_;
    mode /= side;
  }
  return k;
}

Eigen::MatrixXcd TorusFourierComplex::grading() const {
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(size(), size());
  for (Eigen::Index r = 0; r < size(); ++r) G(r, r) = degree_of(r) % 2 == 0 ? 1.0 : -1.0;
  return G;
}

Eigen::MatrixXcd TorusFourierComplex::dirac() const { return d_ + d_.adjoint(); }

Eigen::MatrixXcd TorusFourierComplex::degree_operator(const std::vector<double>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != dimension_ + 1)
    throw Error(ErrorKind::domain, "need one coefficient per form degree");
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size(), size());
  for (Eigen::Index r = 0; r < size(); ++r) A(r, r) = coeffs[static_cast<std::size_t>(degree_of(r))];
  return A;
}

TorusFourierComplex build_complex(int dimension, int cutoff) { return TorusFourierComplex(dimension, cutoff); }

std::vector<int> betti_numbers(const TorusFourierComplex& c) {
  const Eigen::MatrixXcd D = c.dirac();
  std::vector<int> out;
  for (int deg = 0; deg <= c.dimension(); ++deg) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index r = 0; r < c.size(); ++r)
      if (c.degree_of(r) == deg) cols.push_back(r);
    Eigen::MatrixXcd block(D.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) block.col(static_cast<Eigen::Index>(j)) = D.col(cols[j]);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(block);
    int rank = 0;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j)
      if (svd.singularValues()(j) > kRankThreshold) ++rank;
    out.push_back(static_cast<int>(cols.size()) - rank);
  }
  return out;
}

double spectral_gap(const TorusFourierComplex& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.dirac(), Eigen::EigenvaluesOnly);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const double v = std::abs(es.eigenvalues()(j));
    if (v > kRankThreshold) gap = std::min(gap, v);
  }
  return gap;
}

void GradedCoefficients::validate(int dimension) const {
  if (static_cast<int>(a.size()) != dimension + 1)
    throw Error(ErrorKind::domain, "need one coefficient a_j per form degree j = 0..N");
  for (double v : a) {
    if (v == 0.0 || !std::isfinite(v)) throw Error(ErrorKind::domain, "graded coefficients must be nonzero");
    if (std::abs(v) >= 1.0) throw Error(ErrorKind::regime, "|a_j| >= 1 lies outside the verified regime");
  }
}

Spectrum hodge_spectrum(const Eigen::MatrixXcd& op) {
  return dense_spectrum(op, SpectrumSource::hodge_model, std::nullopt);
}

namespace {

PhaseReport census(const std::string& label, const TorusFourierComplex& c, const Eigen::MatrixXcd& op,
                   int prediction, double axis_tolerance) {
  const Spectrum s = hodge_spectrum(op);
  PhaseReport report;
  report.label = label;
  report.method = ReportMethod::galerkin;
  report.cutoff = c.cutoff();
  report.axis_tolerance = axis_tolerance;
  report.symmetry_defect = symmetry_defect(s);
  if (!is_symmetric_spectrum(s, report.pairing_tolerance))
    throw Error(ErrorKind::model, "model spectrum is not symmetric under λ ↦ −conj(λ)");
  report.axis_count = count_imaginary_axis(s, axis_tolerance);
  report.counted_eigenvalues = s.total_multiplicity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : s.eigenvalues()) best = std::min(best, std::abs(e.value));
  report.min_abs_eigenvalue = best;
  report.topological_prediction = prediction;
  finalize(report);
  return report;
}

}  // namespace

PhaseReport spectrum_da(const TorusFourierComplex& c, double a, double axis_tolerance) {
  if (a == 0.0 || !std::isfinite(a)) throw Error(ErrorKind::domain, "a must be nonzero");
  if (std::abs(a) >= 1.0) throw Error(ErrorKind::regime, "|a| >= 1 lies outside the verified regime");
  const Eigen::MatrixXcd op =
      c.dirac() + cplx(0.0, a) * Eigen::MatrixXcd::Identity(c.size(), c.size());
  return census("hodge-da", c, op, 1, axis_tolerance);
}

PhaseReport spectrum_graded(const TorusFourierComplex& c, const GradedCoefficients& coeffs,
                            double axis_tolerance) {
  coeffs.validate(c.dimension());
  const std::vector<int> betti = betti_numbers(c);
  int exponent = 0;
  for (std::size_t j = 0; j < betti.size(); ++j)
    if (coeffs.a[j] > 0.0) exponent += betti[j];
  const Eigen::MatrixXcd op = c.dirac() + cplx(0.0, 1.0) * c.degree_operator(coeffs.a);
  return census("hodge-graded", c, op, exponent % 2 == 0 ? 1 : -1, axis_tolerance);
}

PhaseReport spectrum_dgamma(const TorusFourierComplex& c, double axis_tolerance) {
  const std::vector<int> betti = betti_numbers(c);
  const int half = std::accumulate(betti.begin(), betti.end(), 0) / 2;
  const Eigen::MatrixXcd op = c.dirac() + cplx(0.0, 1.0) * c.gamma();
  return census("hodge-dgamma", c, op, half % 2 == 0 ? 1 : -1, axis_tolerance);
}

}  // namespace detphase
