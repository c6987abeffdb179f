#include <doctest.h>

#include <cmath>

#include "detphase/circle.hpp"
#include "detphase/errors.hpp"
#include "detphase/ode.hpp"
#include "support.hpp"

using namespace detphase;

namespace {

const cplx I(0.0, 1.0);

MonodromySystem constant_system(const Matrix2c& base, const Matrix2c& slope, double beta, double w) {
  return MonodromySystem(2, [base](double) { return base; }, [slope](double) { return slope; }, beta, w);
}

MonodromySystem scalar(double a, double beta) { return ScalarCircleOperator{a, beta}.monodromy_system(); }

// D̃₀ generator: ξ' = (iB − iλ)ξ with B = [[0, im], [im, 0]].
MonodromySystem tilde0(double m, double beta, double w) {
  Matrix2c b;
  b << 0.0, I * m, I * m, 0.0;
  return constant_system(I * b, -I * Matrix2c::Identity(), beta, w);
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

}  // namespace

TEST_CASE("monodromy examples") {
  const Eigen::MatrixXcd m = monodromy(scalar(0.5, 1.0), 0.0);
  REQUIRE(m.rows() == 1);
  CHECK(std::abs(m(0, 0) - std::exp(0.5)) < 1e-12);

  const Eigen::MatrixXcd id = monodromy(constant_system(Matrix2c::Zero(), Matrix2c::Zero(), 1.0, 0.0), 0.0);
  CHECK((id - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);

  const MonodromySystem t0 = tilde0(2.0, 1.0, 0.0);
  const Eigen::MatrixXcd mt = monodromy(t0, 0.0);
  CHECK((mt - testing::expm(t0.base(0.0), 1.0)).norm() < 1e-10);
}

TEST_CASE("char_value examples") {
  const MonodromySystem s = scalar(0.5, 1.0);
  CHECK(std::abs(char_value(s, 0.5 * I + kTwoPi)) < 1e-10);
  CHECK(std::abs(char_value(s, 0.0) - (std::exp(0.5) - 1.0)) < 1e-12);
  const MonodromySystem zero = constant_system(Matrix2c::Zero(), Matrix2c::Zero(), 1.0, 1.0);
  CHECK(std::abs(char_value(zero, cplx(0.3, -2.0)) - 4.0) < 1e-14);
}

TEST_CASE("monodromy rejects bad input") {
  CHECK(kind_of([] { monodromy(scalar(0.5, 1.0), 0.0, 32); }) == ErrorKind::precondition);
  const MonodromySystem nan_sys(
      1, [](double) { return Matrix2c::Constant(std::nan("")); }, [](double) { return Matrix2c::Zero(); }, 1.0,
      0.0);
  CHECK(kind_of([&] { monodromy(nan_sys, 0.0); }) == ErrorKind::integration);
  CHECK(kind_of([] { MonodromySystem(3, [](double) { return Matrix2c::Zero(); },
                                     [](double) { return Matrix2c::Zero(); }, 1.0, 0.0); }) ==
        ErrorKind::precondition);
}

TEST_CASE("property: RK4 error drops at least 8x per step halving") {
  Matrix2c a;
  a << cplx(0.4, 1.0), cplx(-2.0, 0.5), cplx(1.5, 0.0), cplx(-0.3, -2.0);
  const Matrix2c s = 0.5 * I * Matrix2c::Identity();
  const MonodromySystem sys = constant_system(a, s, 1.3, 0.0);
  const cplx lambda(0.7, -0.4);
  const Matrix2c exact = testing::expm(a + lambda * s, 1.3);
  double previous = 0.0;
  for (int steps : {64, 128, 256, 512}) {
    const double err = (monodromy(sys, lambda, steps) - exact).norm();
    if (previous > 0.0) CHECK(previous / err >= 8.0);
    previous = err;
  }
}

TEST_CASE("property: Liouville identity for a time-dependent system") {
  // tr A(t, λ) = 0.5 + 0.2i + cos 2πt + 2iλ, so ∫₀¹ tr A = 0.5 + 0.2i + 2iλ.
  const MonodromySystem sys(
      2,
      [](double t) {
        Matrix2c b;
        b << 0.3 + std::cos(kTwoPi * t), 1.0 + 0.5 * std::sin(kTwoPi * t), -1.0, cplx(0.2, 0.2);
        return b;
      },
      [](double t) {
        Matrix2c b;
        b << I, 0.3 * t, 0.0, I;
        return b;
      },
      1.0, 0.0);
  const MonodromyIntegrator integ(sys, 2048);
  for (cplx lambda : {cplx(0.0, 0.0), cplx(1.0, -0.5), cplx(-3.0, 2.0)}) {
    const cplx exact = std::exp(cplx(0.5, 0.2) + 2.0 * I * lambda);
    CHECK(std::abs(integ.monodromy(lambda).determinant() - exact) < 1e-10 * std::abs(exact));
    CHECK(std::abs(integ.liouville_determinant(lambda) - exact) < 1e-12 * std::abs(exact));
  }
}

TEST_CASE("char_value via the Liouville determinant matches the direct determinant") {
  const MonodromySystem sys = tilde0(3.0, 1.0, 1.0);
  const MonodromyIntegrator integ(sys, 2048);
  for (cplx lambda : {cplx(0.3, 0.2), cplx(-1.0, 2.5), cplx(2.0, -1.0)}) {
    const Eigen::MatrixXcd m = integ.monodromy(lambda);
    const cplx direct = (m - sys.boundary_multiplier() * Eigen::MatrixXcd::Identity(2, 2)).determinant();
    CHECK(std::abs(integ.char_value(lambda) - direct) < 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("count_roots examples") {
  const MonodromySystem s = scalar(0.5, 1.0);
  CHECK(count_roots(s, {-1.0, 1.0, -1.0, 1.0}) == 1);
  CHECK(count_roots(s, {2.0, 4.0, -1.0, 1.0}) == 0);
  CHECK(count_roots(s, {-7.0, 7.0, -1.0, 1.0}) == 3);
}

TEST_CASE("count_roots shifts a colliding contour once") {
  const MonodromySystem s = scalar(0.5, 1.0);
  const int n = count_roots(s, {-1.0, 1.0, 0.5, 1.0});
  CHECK((n == 0 || n == 1));
  CHECK(kind_of([&] { count_roots(s, {1.0, -1.0, 0.0, 1.0}); }) == ErrorKind::precondition);
}

TEST_CASE("refine_root examples") {
  const MonodromySystem s = scalar(0.5, 1.0);
  CHECK(std::abs(refine_root(s, 0.4 * I, 1e-13) - 0.5 * I) < 1e-10);
  CHECK(kind_of([&] { refine_root(s, 6.0 * I, 1e-12); }) == ErrorKind::convergence);
  const MonodromySystem t0 = tilde0(2.0, 1.0, 0.0);
  // exact spectrum ±im + (π/β)(2n − k − ν), n = 0
  CHECK(std::abs(refine_root(t0, cplx(0.1, 1.9), 1e-12) - 2.0 * I) < 1e-8);
}

TEST_CASE("property: count_roots equals the number of refined roots") {
  const MonodromySystem s = scalar(0.5, 1.0);
  const SearchRegion r{-13.0, 13.5, -1.0, 1.5, 64.0};
  const Spectrum roots = find_roots(s, r);
  CHECK(roots.total_multiplicity() == count_roots(s, r));
  CHECK(roots.total_multiplicity() == 5);
  const Spectrum exact = ScalarCircleOperator{0.5, 1.0}.exact_spectrum(-2, 2);
  CHECK(testing::greedy_distance(exact.expanded(), roots.expanded()) < 1e-10);
}

TEST_CASE("property: roots of a conjugation-symmetric system come in mirror pairs") {
  CircleDiracSpec spec;
  const double amps[] = {0.4};
  spec.phase = PhaseFunction::with_sines(1.0, 1, amps);
  spec.mass = spec.phase.max_abs_derivative() + 1.0;
  spec.nu = 0;
  RootSearchOptions options;
  options.counting.steps = 1024;
  const SearchRegion r{-7.1, 7.1, -spec.mass - 1.1, spec.mass + 1.1, 32.0};
  const Spectrum roots = find_roots(monodromy_system(spec), r, options);
  CHECK(roots.total_multiplicity() > 0);
  CHECK(is_symmetric_spectrum(roots, 1e-8));
}

TEST_CASE("count_roots is independent of the number of jobs") {
  const MonodromySystem s = tilde0(2.0, 1.0, 1.0);
  ContourOptions one, four;
  four.jobs = 4;
  const SearchRegion r{-5.3, 5.1, -3.0, 3.2, 32.0};
  CHECK(count_roots(s, r, one) == count_roots(s, r, four));
  CHECK(count_roots(s, r, one) == 4);
}
