#include <doctest.h>

#include <cmath>
#include <vector>

#include "detphase/circle.hpp"
#include "detphase/errors.hpp"
#include "support.hpp"

using namespace detphase;
using testing::greedy_distance;

namespace {

const cplx I(0.0, 1.0);

PhaseFunction sines(int k, std::initializer_list<double> amps, double beta = 1.0) {
  const std::vector<double> a(amps);
  return PhaseFunction::with_sines(beta, k, a);
}

CircleDiracSpec tilde(PhaseFunction phi, double m, int nu, double a = 1.0) {
  return CircleDiracSpec{std::move(phi), m, nu, a, DiracForm::tilde};
}

template <typename F>
ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::parse;
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

// --- phase functions and winding ------------------------------------------

TEST_CASE("winding_number examples") {
  const double beta = 1.0;
  std::vector<double> lin, flat, neg;
  for (int i = 0; i <= 400; ++i) {
    const double t = beta * i / 400;
    lin.push_back(kTwoPi * t / beta);
    flat.push_back(0.7);
    neg.push_back(-4.0 * kPi * t / beta + 0.3 * std::sin(kTwoPi * t / beta));
  }
  CHECK(winding_number(lin, beta) == 1);
  CHECK(winding_number(flat, beta) == 0);
  CHECK(winding_number(neg, beta) == -2);
}

TEST_CASE("winding_number accepts wrapped samples and rejects ambiguous ones") {
  std::vector<double> wrapped;
  for (int i = 0; i <= 200; ++i) wrapped.push_back(std::remainder(3.0 * kTwoPi * i / 200.0, kTwoPi));
  CHECK(winding_number(wrapped, 1.0) == 3);
  const std::vector<double> coarse = {0.0, kPi, kTwoPi};
  CHECK(kind_of([&] { winding_number(coarse, 1.0); }) == ErrorKind::undersampled);
}

TEST_CASE("property: winding is invariant under zero-mean periodic perturbations") {
  for (int trial = 0; trial < 50; ++trial) {
    const int k = static_cast<int>(testing::uniform(-4, 5));
    std::map<int, cplx> c;
    for (int j = 1; j <= 3; ++j) c[j] = cplx(testing::uniform(-0.3, 0.3), testing::uniform(-0.3, 0.3));
    const PhaseFunction phi(2.0, k, c);
    CHECK(winding_number(phi.samples(kPhaseGrid + 1), 2.0) == k);
    CHECK(winding_number(PhaseFunction(2.0, k).samples(kPhaseGrid + 1), 2.0) == k);
  }
}

TEST_CASE("PhaseFunction bookkeeping") {
  const PhaseFunction phi(2.0, 3, {{1, cplx(0.1, -0.2)}, {2, cplx(0.0, 0.05)}});
  CHECK(phi.coefficient(-1) == std::conj(phi.coefficient(1)));
  CHECK(phi.bandwidth() == 2);
  for (double t : {0.0, 0.3, 1.1}) {
    CHECK(phi.value(t + 2.0) - phi.value(t) == doctest::Approx(3 * kTwoPi).epsilon(1e-12));
    const double h = 1e-6;
    CHECK(phi.derivative(t) == doctest::Approx((phi.value(t + h) - phi.value(t - h)) / (2 * h)).epsilon(1e-7));
  }
  CHECK(kind_of([] { PhaseFunction(1.0, 0, {{0, cplx(0.0, 1.0)}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { PhaseFunction(1.0, 0, {{1, 1.0}, {-1, 2.0}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { PhaseFunction(0.0, 0); }) == ErrorKind::domain);
}

TEST_CASE("exp_i_phase_coefficients against Jacobi-Anger") {
  // e^{i r sin x} = Σ J_n(r) e^{inx}; with winding k the series shifts by k.
  const double r = 0.9;
  for (int k : {0, 2, -1}) {
    const std::vector<cplx> g = exp_i_phase_coefficients(sines(k, {r}), 8);
    for (int h = -8; h <= 8; ++h) {
      const int n = h - k;
      const double jn = (n >= 0 ? 1 : (n % 2 ? -1 : 1)) * std::cyl_bessel_j(std::abs(n), r);
      CHECK(std::abs(g[static_cast<std::size_t>(h + 8)] - jn) < 1e-14);
    }
  }
}

// --- Galerkin matrices ---------------------------------------------------------

TEST_CASE("galerkin_matrix: a = 0 is block diagonal") {
  const CircleDiracSpec spec = tilde(sines(1, {0.4}), 3.0, 1, 0.0);
  const int N = 6;
  const Eigen::MatrixXcd T = galerkin_matrix(spec, N);
  const std::vector<double> omega = galerkin_frequencies(1.0, spec.boundary_phase(), N);
  REQUIRE(T.rows() == static_cast<Eigen::Index>(2 * omega.size()));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(T.rows(), T.cols());
  for (std::size_t p = 0; p < omega.size(); ++p) {
    const auto r = static_cast<Eigen::Index>(2 * p);
    expected(r, r) = expected(r + 1, r + 1) = -omega[p];
    expected(r, r + 1) = expected(r + 1, r) = 3.0 * I;
  }
  CHECK((T - expected).norm() == 0.0);
}

TEST_CASE("galerkin_matrix: frequency window is symmetric") {
  for (int w : {-3, -2, 0, 1, 4}) {
    const std::vector<double> omega = galerkin_frequencies(1.0, w, 5);
    for (std::size_t i = 0; i < omega.size(); ++i)
      CHECK(omega[i] == doctest::Approx(-omega[omega.size() - 1 - i]));
    CHECK(std::abs(omega.back()) <= kPi * 10 + 1e-12);
  }
}

TEST_CASE("galerkin_matrix: constant phase velocity has closed-form blocks") {
  const int k = 1;
  const double m = 7.0, c = kTwoPi * k;
  const CircleDiracSpec spec = tilde(PhaseFunction(1.0, k), m, 0);
  const int N = 8;
  const Spectrum s = spectrum_galerkin(galerkin_matrix(spec, N), N);
  std::vector<cplx> expected;
  const cplx root = std::sqrt(cplx(c * c / 4 - m * m, 0.0));
  for (double omega : galerkin_frequencies(1.0, spec.boundary_phase(), N)) {
    expected.push_back(-omega + root);
    expected.push_back(-omega - root);
  }
  CHECK(greedy_distance(s.expanded(), expected) < 1e-10);
  CHECK(greedy_distance(expected, s.expanded()) < 1e-10);
}

TEST_CASE("galerkin_matrix: original equals tilde when the phase vanishes") {
  CircleDiracSpec o{PhaseFunction(1.0, 0), 2.0, 0, 1.0, DiracForm::original};
  CircleDiracSpec t = o;
  t.form = DiracForm::tilde;
  CHECK((galerkin_matrix(o, 5) - galerkin_matrix(t, 5)).norm() < 1e-14);
}

TEST_CASE("galerkin_matrix: cutoff below the bandwidth") {
  const CircleDiracSpec spec = tilde(sines(0, {0.1, 0.0, 0.0, 0.1}), 3.0, 0);
  CHECK(kind_of([&] { galerkin_matrix(spec, 3); }) == ErrorKind::bandwidth);
  CHECK(galerkin_matrix(spec, 4).rows() > 0);
}

TEST_CASE("spectrum_galerkin examples") {
  const int N = 32;
  const CircleDiracSpec d0 = tilde(PhaseFunction(1.0, 0), 5.0, 1, 0.0);
  const Spectrum s = spectrum_galerkin(galerkin_matrix(d0, N), N);
  CHECK(s.source() == SpectrumSource::galerkin);
  CHECK(s.truncation() == N);
  const Spectrum trusted = s.within_radius(trusted_radius(1.0, N));
  const Spectrum exact = exact_spectrum_tilde0(5.0, 1.0, 0, 1, -N, N + 1).within_radius(trusted_radius(1.0, N));
  CHECK(trusted.total_multiplicity() == exact.total_multiplicity());
  CHECK(greedy_distance(trusted.expanded(), exact.expanded()) < 1e-10);

  Eigen::MatrixXcd one(1, 1);
  one(0, 0) = cplx(0.25, -3.0);
  const Spectrum z = spectrum_galerkin(one);
  REQUIRE(z.size() == 1);
  CHECK(z.eigenvalues()[0].value == cplx(0.25, -3.0));
}

TEST_CASE("exact_spectrum_tilde0 examples") {
  const Spectrum s = exact_spectrum_tilde0(5.0, 1.0, 1, 1, -3, 3);
  CHECK(count_imaginary_axis(s).m_plus == 1);
  bool has = false;
  for (const auto& e : s.eigenvalues()) has = has || std::abs(e.value - 5.0 * I) < 1e-14;
  CHECK(has);
  const Spectrum odd = exact_spectrum_tilde0(5.0, 1.0, 0, 1, -3, 3);
  CHECK(count_imaginary_axis(odd).m_plus == 0);
  CHECK(count_imaginary_axis(odd).m_minus == 0);
  const Spectrum unit = exact_spectrum_tilde0(1.0, kTwoPi, 0, 0, 0, 0);
  REQUIRE(unit.size() == 2);
  CHECK(std::abs(unit.eigenvalues()[0].value + I) < 1e-15);
  CHECK(std::abs(unit.eigenvalues()[1].value - I) < 1e-15);
}

TEST_CASE("invertibility_margin examples") {
  const CircleDiracSpec a = tilde(PhaseFunction(1.0, 1), 7.0, 0);
  CHECK(invertibility_margin(a) == doctest::Approx(7.0 - kTwoPi).epsilon(1e-12));
  CHECK(eigenvalue_lower_bound(a) == doctest::Approx(std::sqrt(7.0 * (7.0 - kTwoPi))).epsilon(1e-12));
  CHECK(eigenvalue_lower_bound(a) == doctest::Approx(2.2402).epsilon(1e-4));
  CHECK(invertibility_margin(tilde(PhaseFunction(1.0, 0), 1.0, 0)) == doctest::Approx(1.0));
  const CircleDiracSpec c = tilde(PhaseFunction(1.0, 1), 6.0, 0);
  CHECK(invertibility_margin(c) < 0.0);
  CHECK(eigenvalue_lower_bound(c) == 0.0);
  CHECK(kind_of([&] { verify_circle_theorem(c, 16); }) == ErrorKind::precondition);
}

TEST_CASE("circle_sign_prediction examples") {
  CHECK(circle_sign_prediction(0, 0) == -1);
  CHECK(circle_sign_prediction(1, 0) == 1);
  CHECK(circle_sign_prediction(1, 1) == -1);
  CHECK(circle_sign_prediction(-3, 0) == 1);
}

// --- sign theorem ------------------------------------------------------------------

TEST_CASE("verify_circle_theorem examples") {
  const PhaseReport r1 = verify_circle_theorem(tilde(sines(1, {0.4}), kTwoPi + 0.8 + 3.0, 1), 32);
  CHECK(r1.agreement);
  CHECK(r1.computed_sign == -1);
  CHECK(r1.topological_prediction == -1);
  CHECK(r1.axis_count.ambiguous == 0);

  const PhaseReport r2 = verify_circle_theorem(tilde(sines(0, {0.4}), 5.0, 1), 32);
  CHECK(r2.agreement);
  CHECK(r2.computed_sign == 1);

  for (int k = -2; k <= 2; ++k)
    for (int nu = 0; nu <= 1; ++nu) {
      const CircleDiracSpec spec = tilde(PhaseFunction(1.0, k), 2.0 * kPi * std::abs(k) + 1.5, nu, 0.0);
      const PhaseReport r = verify_circle_theorem(spec, 32);
      const Spectrum exact = exact_spectrum_tilde0(spec.mass, 1.0, k, nu, -40, 40 + k + nu);
      CHECK(r.computed_sign == predicted_sign(exact));
    }
}

TEST_CASE("verify_circle_theorem needs a trusted window above m") {
  CHECK(kind_of([] { verify_circle_theorem(tilde(PhaseFunction(1.0, 0), 5.0, 0), 1); }) ==
        ErrorKind::precondition);
}

TEST_CASE("the original form obeys the same sign law") {
  for (int k = -1; k <= 2; ++k)
    for (int nu = 0; nu <= 1; ++nu) {
      CircleDiracSpec spec = tilde(sines(k, {0.3}), 0.0, nu);
      spec.mass = spec.phase.max_abs_derivative() + 2.0;
      spec.form = DiracForm::original;
      const PhaseReport r = verify_circle_theorem(spec, 48);
      CHECK(r.agreement);
    }
}

// --- invariants ----------------------------------------------------------------------

TEST_CASE("property: conjugation symmetry of tilde matrices") {
  for (int k : {-2, 0, 1})
    for (int nu : {0, 1})
      for (double a : {0.0, 0.37, 1.0}) {
        CircleDiracSpec spec = tilde(sines(k, {0.4, -0.2}), 0.0, nu, a);
        spec.mass = spec.phase.max_abs_derivative() + 1.0;
        const Eigen::MatrixXcd T = galerkin_matrix(spec, 12);
        const std::vector<cplx> s = eigenvalues(T);
        const std::vector<cplx> mirror = eigenvalues(-T.conjugate());
        double scale = 0.0;
        for (cplx z : s) scale = std::max(scale, std::abs(z));
        CHECK(greedy_distance(s, mirror) <= 1e-8 * scale);
        CHECK(is_symmetric_spectrum(Spectrum::from_values(s), 1e-8));
      }
}

TEST_CASE("property: |Im λ| <= m and the invertibility bound") {
  for (int k : {-2, -1, 0, 1, 2})
    for (int nu : {0, 1}) {
      CircleDiracSpec spec = tilde(sines(k, {0.4}), 0.0, nu);
      spec.mass = spec.phase.max_abs_derivative() + 0.5 + 0.3 * (k + 2);
      const Spectrum s = spectrum_galerkin(galerkin_matrix(spec, 24), 24);
      const double bound = eigenvalue_lower_bound(spec);
      for (const auto& e : s.eigenvalues()) {
        CHECK(std::abs(e.value.imag()) <= spec.mass + 1e-9);
        CHECK(std::abs(e.value) >= bound - 1e-6);
      }
    }
}

TEST_CASE("property: cutoff convergence on the trusted window") {
  CircleDiracSpec spec = tilde(sines(1, {0.4}), 0.0, 0);
  spec.mass = spec.phase.max_abs_derivative() + 3.0;
  for (int N : {16, 32}) {
    const double radius = trusted_radius(1.0, N);
    const Spectrum coarse = spectrum_galerkin(galerkin_matrix(spec, N), N).within_radius(radius);
    const Spectrum fine = spectrum_galerkin(galerkin_matrix(spec, 2 * N), 2 * N);
    // every trusted coarse eigenvalue persists at 2N
    CHECK(greedy_distance(coarse.expanded(), fine.expanded()) < 1e-8 * (1.0 + coarse.scale()));
    CHECK(count_imaginary_axis(coarse).m_plus % 2 ==
          count_imaginary_axis(fine.within_radius(trusted_radius(1.0, 2 * N))).m_plus % 2);
  }
}

// --- sweeps and isospectrality ----------------------------------------------------

TEST_CASE("sweep_deformation examples") {
  CircleDiracSpec spec = tilde(sines(1, {0.4}), 0.0, 1);
  spec.mass = spec.phase.max_abs_derivative() + 3.0;
  const SweepResult s = sweep_deformation(spec, 10, 32);
  REQUIRE(s.rows.size() == 11);
  CHECK(s.parity_constant);
  CHECK(s.bound_respected);
  CHECK(s.rows.front().axis.m_plus % 2 == 1);
  CHECK_FALSE(s.counterexample.has_value());
  for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i].a > s.rows[i - 1].a);

  // constant φ̇: eigenvalues −ω ± sqrt(a²c²/4 − m²) move continuously
  const CircleDiracSpec pure = tilde(PhaseFunction(1.0, 1), 8.0, 1);
  const SweepResult p = sweep_deformation(pure, 8, 32);
  CHECK(p.parity_constant);
  for (const auto& row : p.rows) {
    const double c = kTwoPi * row.a;
    const double expected = std::sqrt(64.0 - c * c / 4);
    double closest = 1e300;
    for (cplx z : row.near_axis) closest = std::min(closest, std::abs(z.imag() - expected));
    CHECK(closest < 1e-9);
  }

  // φ ≡ 0: the family does not depend on a
  const SweepResult flat = sweep_deformation(tilde(PhaseFunction(1.0, 0), 2.0, 0), 4, 16);
  CHECK(flat.parity_constant);
  for (const auto& row : flat.rows) CHECK(row.axis.m_plus == flat.rows.front().axis.m_plus);
}

TEST_CASE("sweep results are independent of the number of jobs") {
  CircleDiracSpec spec = tilde(sines(2, {0.4}), 0.0, 0);
  spec.mass = spec.phase.max_abs_derivative() + 3.0;
  const SweepResult a = sweep_deformation(spec, 6, 24, {}, 1);
  const SweepResult b = sweep_deformation(spec, 6, 24, {}, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].axis.m_plus == b.rows[i].axis.m_plus);
    CHECK(a.rows[i].min_abs == b.rows[i].min_abs);
  }
}

TEST_CASE("isospectrality_check examples") {
  CHECK(isospectrality_check(tilde(PhaseFunction(1.0, 0), 3.0, 0), 16) < 1e-12);
  CHECK(isospectrality_check(tilde(PhaseFunction(1.0, 1), 7.0, 0), 32) < 1e-6);
  CircleDiracSpec wavy = tilde(sines(1, {0.4}), 0.0, 1);
  wavy.mass = wavy.phase.max_abs_derivative() + 2.0;
  CHECK(isospectrality_check(wavy, 48) < 1e-6);
}

TEST_CASE("match_distance reports unmatched values") {
  const std::vector<cplx> a = {1.0, 2.0}, b = {1.0, 2.5};
  CHECK(match_distance(a, b, 1.0) == doctest::Approx(0.5));
  CHECK(kind_of([&] { match_distance(a, b, 0.1); }) == ErrorKind::model);
}

TEST_CASE("Galerkin and monodromy agree on the lowest eigenvalues") {
  CircleDiracSpec spec = tilde(sines(0, {0.4}), 0.0, 0);
  spec.mass = spec.phase.max_abs_derivative() + 1.0;
  RootSearchOptions options;
  options.counting.steps = 512;
  options.density = 16.0;
  const MethodAgreement m = compare_galerkin_monodromy(spec, 32, 6, options);
  CHECK(m.max_distance < 1e-6);
  CHECK(m.contour_count == m.galerkin_count);
  CHECK(m.roots_found == m.contour_count);
}

// --- scalar operator --------------------------------------------------------------------

TEST_CASE("scalar operator determinant and sign") {
  for (double beta : {1.0, kTwoPi})
    for (double a : {-1.0, -0.25, 0.5}) {
      const ScalarCircleOperator op{a, beta};
      CHECK(std::abs(op.calibrated_determinant() - (std::exp(-a * beta) - 1.0)) < 1e-8);
      CHECK(std::abs(op.relative_determinant() - (1.0 - std::exp(a * beta))) < 1e-8 * std::exp(std::abs(a) * beta));
      CHECK(op.predicted_sign() == (a > 0 ? -1 : 1));
      const Spectrum s = op.exact_spectrum(-3, 3);
      CHECK(count_imaginary_axis(s).m_plus == (a > 0 ? 1 : 0));
    }
  CHECK(kind_of([] { ScalarCircleOperator{0.0, 1.0}.predicted_sign(); }) == ErrorKind::non_invertible);
}

// --- DeRham–Dirac at N = 1 --------------------------------------------------------------

TEST_CASE("derham_dirac_circle examples") {
  const SphereBundleSection1D up{PhaseFunction(1.0, 0)};
  const PhaseReport r = derham_dirac_circle(up, 1.5, 16);
  CHECK(r.axis_count.m_plus == 2);
  CHECK(r.computed_sign == 1);
  CHECK(r.agreement);
  const Spectrum s = spectrum_galerkin(derham_galerkin_matrix(up, 1.5, 16), 16);
  bool found = false;
  for (const auto& e : s.eigenvalues())
    if (std::abs(e.value - 1.5 * I) < 1e-12) found = e.multiplicity == 2;
  CHECK(found);

  const SphereBundleSection1D turn{PhaseFunction(1.0, 1)};
  const PhaseReport t = derham_dirac_circle(turn, turn.gradient_bound() + 3.0, 32);
  CHECK(turn.degree() == 1);
  CHECK(t.computed_sign == -1);
  CHECK(t.agreement);

  const SphereBundleSection1D down{PhaseFunction(1.0, 0, {{0, kPi}})};
  const PhaseReport d = derham_dirac_circle(down, 2.0, 16);
  CHECK(down.degree() == 0);
  CHECK(d.axis_count.m_plus == 0);
  CHECK(d.axis_count.m_minus == 2);
  CHECK(d.computed_sign == 1);
  CHECK(d.agreement);
}

TEST_CASE("derham model: grading anticonjugation and component identity") {
  const SphereBundleSection1D n{sines(1, {0.3})};
  for (double t : {0.0, 0.21, 0.77}) CHECK(n.n0(t) * n.n0(t) + n.n1(t) * n.n1(t) == doctest::Approx(1.0));
  const int N = 10;
  const Eigen::MatrixXcd T = derham_galerkin_matrix(n, 4.0, N);
  const Eigen::MatrixXcd G = derham_grading(N);
  CHECK((G * T * G + T.adjoint()).norm() < 1e-12);
}

TEST_CASE("derham model: Galerkin eigenvalues are monodromy roots") {
  const SphereBundleSection1D n{sines(1, {0.3})};
  const double m = n.gradient_bound() + 1.0;
  const Spectrum s = spectrum_galerkin(derham_galerkin_matrix(n, m, 32), 32);
  const MonodromyIntegrator integ(derham_monodromy_system(n, m), 2048);
  for (cplx z : s.smallest(6)) {
    const cplx root = refine_root(integ, z + cplx(1e-3, -1e-3), 1e-12);
    CHECK(std::abs(root - z) < 1e-6);
  }
  // det M = 1 since tr A = 0
  CHECK(std::abs(integ.liouville_determinant(cplx(0.3, 0.4)) - 1.0) < 1e-12);
  CHECK(std::abs(integ.monodromy(cplx(0.3, 0.4)).determinant() - 1.0) < 1e-5);
}

TEST_CASE("derham_dirac_circle preconditions") {
  const SphereBundleSection1D turn{PhaseFunction(1.0, 1)};
  CHECK(kind_of([&] { derham_dirac_circle(turn, 1.0, 32); }) == ErrorKind::precondition);
}
