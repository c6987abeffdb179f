#pragma once

// Periodic first-order linear systems ξ' = A(t, λ) ξ on [0, β], their
// monodromy matrices, the characteristic function det(M(λ) − e^{iπw} I)
// of the boundary-value eigenproblem ξ(β) = e^{iπw} ξ(0), and
// argument-principle root counting and Newton refinement in the λ-plane.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "detphase/spectrum.hpp"

namespace detphase {

using Matrix2c = Eigen::Matrix2cd;

inline constexpr int kDefaultSteps = 4096;
inline constexpr int kMinSteps = 64;
inline constexpr double kDefaultContourDensity = 256.0;

/// A(t, λ) = base(t) + λ·slope(t), dimension 1 or 2.  For dimension 1
/// only the (0, 0) entries of the returned matrices are used.
class MonodromySystem {
 public:
  using Coefficient = std::function<Matrix2c(double)>;

  MonodromySystem(int dimension, Coefficient base, Coefficient slope, double period,
                  double boundary_phase);

  int dimension() const noexcept { return dimension_; }
  double period() const noexcept { return period_; }
  /// w in ξ(β) = e^{iπw} ξ(0).
  double boundary_phase() const noexcept { return boundary_phase_; }
  cplx boundary_multiplier() const;

  Matrix2c base(double t) const { return base_(t); }
  Matrix2c slope(double t) const { return slope_(t); }
  Matrix2c coefficient(double t, cplx lambda) const { return base_(t) + lambda * slope_(t); }

 private:
  int dimension_;
  Coefficient base_;
  Coefficient slope_;
  double period_;
  double boundary_phase_;
};

/// Fixed-step classical RK4 for the fundamental matrix with the
/// coefficient tabulated once at the 2·steps + 1 stage nodes, so repeated
/// evaluations at many λ cost only matrix arithmetic.
class MonodromyIntegrator {
 public:
  MonodromyIntegrator(const MonodromySystem& system, int steps = kDefaultSteps);

  const MonodromySystem& system() const noexcept { return system_; }
  int steps() const noexcept { return steps_; }

  /// M(λ): value at t = β of the fundamental solution with M = I at t = 0.
  Eigen::MatrixXcd monodromy(cplx lambda) const;
  /// exp(∫₀^β tr A(t, λ) dt) by Simpson's rule on the stage nodes.
  cplx liouville_determinant(cplx lambda) const;
  /// det(M(λ) − e^{iπw} I).  For 2×2 systems this is evaluated as
  /// det M − c·tr M + c² with det M from the Liouville formula, which
  /// stays accurate when M has one exponentially large eigenvalue.
  cplx char_value(cplx lambda) const;

 private:
  template <int Dim>
  Eigen::Matrix<cplx, Dim, Dim> integrate(cplx lambda) const;

  MonodromySystem system_;
  int steps_;
  std::vector<Matrix2c> base_nodes_;
  std::vector<Matrix2c> slope_nodes_;
  cplx trace_base_integral_;
  cplx trace_slope_integral_;
};

Eigen::MatrixXcd monodromy(const MonodromySystem& system, cplx lambda, int steps = kDefaultSteps);
cplx char_value(const MonodromySystem& system, cplx lambda, int steps = kDefaultSteps);

struct SearchRegion {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
  /// Contour samples per unit length.
  double density = kDefaultContourDensity;

  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  bool contains(cplx z, double slack = 0.0) const noexcept {
    return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
           z.imag() <= im_max + slack;
  }
};

struct ContourOptions {
  int steps = kDefaultSteps;
  int jobs = 1;
  /// Density doublings allowed when a phase increment exceeds π/2.
  int max_refinements = 4;
  int min_samples_per_edge = 16;
  /// Relative minimum-modulus threshold for contour collisions.
  double collision_threshold = 1e-8;
};

/// Winding number of char_value around the rectangle boundary, i.e. the
/// number of eigenvalues inside counted with multiplicity.  On a contour
/// collision the rectangle is shifted once by a small irrational offset;
/// a second collision throws ErrorKind::contour.
int count_roots(const MonodromySystem& system, const SearchRegion& region,
                const ContourOptions& options = {});
int count_roots(const MonodromyIntegrator& integrator, const SearchRegion& region,
                const ContourOptions& options = {});

struct RefineOptions {
  int steps = kDefaultSteps;
  int max_iterations = 60;
  /// Newton iterates must stay within this distance of the seed.
  double basin_radius = 1.0;
};

/// Newton iteration on char_value with a central-difference derivative
/// (step 1e−6·(1 + |λ|)); stops once |Δλ| <= tol·(1 + |λ|).
/// Throws ErrorKind::convergence when the iterate leaves the basin or the
/// iteration budget is exhausted.
cplx refine_root(const MonodromySystem& system, cplx seed, double tol,
                 const RefineOptions& options = {});
cplx refine_root(const MonodromyIntegrator& integrator, cplx seed, double tol,
                 const RefineOptions& options = {});

struct RootSearchOptions {
  ContourOptions counting{};
  RefineOptions refine{};
  double tolerance = 1e-12;
  /// Contour density for rectangles constructed by callers of the search.
  double density = kDefaultContourDensity;
  /// Rectangles with both sides below this are treated as one cluster.
  double min_size = 1e-6;
};

/// All roots inside the region, located by recursive bisection with
/// count_roots and finished by refine_root.
Spectrum find_roots(const MonodromySystem& system, const SearchRegion& region,
                    const RootSearchOptions& options = {});

}  // namespace detphase
