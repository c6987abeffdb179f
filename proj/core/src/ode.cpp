#include "detphase/ode.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "detphase/errors.hpp"
#include "detphase/parallel.hpp"

namespace detphase {

MonodromySystem::MonodromySystem(int dimension, Coefficient base, Coefficient slope, double period,
                                 double boundary_phase)
    : dimension_(dimension),
      base_(std::move(base)),
      slope_(std::move(slope)),
      period_(period),
      boundary_phase_(boundary_phase) {
  if (dimension_ != 1 && dimension_ != 2)
    throw Error(ErrorKind::precondition, "monodromy systems have dimension 1 or 2");
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw Error(ErrorKind::precondition, "period must be positive");
  if (!base_ || !slope_) throw Error(ErrorKind::precondition, "coefficient functions must be set");
}

cplx MonodromySystem::boundary_multiplier() const {
  return std::polar(1.0, kPi * boundary_phase_);
}

// ---------------------------------------------------------------------------

MonodromyIntegrator::MonodromyIntegrator(const MonodromySystem& system, int steps)
    : system_(system), steps_(steps) {
  if (steps_ < kMinSteps) throw Error(ErrorKind::precondition, "monodromy needs at least 64 steps");
  const std::size_t nodes = 2 * static_cast<std::size_t>(steps_) + 1;
  const double half = 0.5 * system_.period() / steps_;
  base_nodes_.resize(nodes);
  slope_nodes_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = half * static_cast<double>(i);
    base_nodes_[i] = system_.base(t);
    slope_nodes_[i] = system_.slope(t);
    if (system_.dimension() == 1) {
      const cplx b = base_nodes_[i](0, 0), s = slope_nodes_[i](0, 0);
      base_nodes_[i].setZero();
      slope_nodes_[i].setZero();
      base_nodes_[i](0, 0) = b;
      slope_nodes_[i](0, 0) = s;
    }
    if (!base_nodes_[i].allFinite() || !slope_nodes_[i].allFinite())
      throw Error(ErrorKind::integration, "non-finite coefficient value");
  }
  // Composite Simpson on [t_j, t_j + h] with the midpoint node.
  const double h = system_.period() / steps_;
  trace_base_integral_ = 0.0;
  trace_slope_integral_ = 0.0;
  for (int j = 0; j < steps_; ++j) {
    const std::size_t i = 2 * static_cast<std::size_t>(j);
    trace_base_integral_ += h / 6.0 *
        (base_nodes_[i].trace() + 4.0 * base_nodes_[i + 1].trace() + base_nodes_[i + 2].trace());
    trace_slope_integral_ += h / 6.0 *
        (slope_nodes_[i].trace() + 4.0 * slope_nodes_[i + 1].trace() + slope_nodes_[i + 2].trace());
  }
}

template <int Dim>
Eigen::Matrix<cplx, Dim, Dim> MonodromyIntegrator::integrate(cplx lambda) const {
  using Mat = Eigen::Matrix<cplx, Dim, Dim>;
  const double h = system_.period() / steps_;
  auto node = [&](std::size_t i) -> Mat {
    return (base_nodes_[i] + lambda * slope_nodes_[i]).template topLeftCorner<Dim, Dim>();
  };
  Mat y = Mat::Identity();
  Mat a0 = node(0);
  for (int j = 0; j < steps_; ++j) {
    const std::size_t i = 2 * static_cast<std::size_t>(j);
    const Mat am = node(i + 1);
    const Mat a1 = node(i + 2);
    const Mat k1 = a0 * y;
    const Mat k2 = am * (y + (0.5 * h) * k1);
    const Mat k3 = am * (y + (0.5 * h) * k2);
    const Mat k4 = a1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    a0 = a1;
  }
  if (!y.allFinite()) throw Error(ErrorKind::integration, "monodromy integration overflowed");
  return y;
}

Eigen::MatrixXcd MonodromyIntegrator::monodromy(cplx lambda) const {
  if (system_.dimension() == 1) return integrate<1>(lambda);
  return integrate<2>(lambda);
}

cplx MonodromyIntegrator::liouville_determinant(cplx lambda) const {
  return std::exp(trace_base_integral_ + lambda * trace_slope_integral_);
}

cplx MonodromyIntegrator::char_value(cplx lambda) const {
  const cplx c = system_.boundary_multiplier();
  if (system_.dimension() == 1) return integrate<1>(lambda)(0, 0) - c;
  const Matrix2c m = integrate<2>(lambda);
  return liouville_determinant(lambda) - c * m.trace() + c * c;
}

Eigen::MatrixXcd monodromy(const MonodromySystem& system, cplx lambda, int steps) {
  return MonodromyIntegrator(system, steps).monodromy(lambda);
}

cplx char_value(const MonodromySystem& system, cplx lambda, int steps) {
  return MonodromyIntegrator(system, steps).char_value(lambda);
}

// ---------------------------------------------------------------------------

namespace {

enum class ContourOutcome { ok, collision };

struct ContourResult {
  ContourOutcome outcome = ContourOutcome::ok;
  int winding = 0;
};

std::vector<cplx> contour_points(const SearchRegion& r, double density, int min_per_edge) {
  const cplx corners[4] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                           {r.re_min, r.im_max}};
  std::vector<cplx> pts;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[(e + 1) % 4];
    const double len = std::abs(b - a);
    const int n = std::max(min_per_edge, static_cast<int>(std::ceil(len * density)));
    for (int i = 0; i < n; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / n));
  }
  return pts;
}

ContourResult wind_once(const MonodromyIntegrator& integrator, const SearchRegion& region,
                        const ContourOptions& options) {
  for (int level = 0; level <= options.max_refinements; ++level) {
    const double density = region.density * std::ldexp(1.0, level);
    const std::vector<cplx> pts = contour_points(region, density, options.min_samples_per_edge);
    std::vector<cplx> f(pts.size());
    parallel_for(pts.size(), options.jobs, [&](std::size_t i) { f[i] = integrator.char_value(pts[i]); });

    const std::size_t n = f.size();
    constexpr std::size_t kWindow = 8;
    for (std::size_t i = 0; i < n; ++i) {
      double local = 0.0;
      for (std::size_t d = 1; d <= kWindow; ++d)
        local = std::max({local, std::abs(f[(i + d) % n]), std::abs(f[(i + n - d) % n])});
      if (std::abs(f[i]) <= options.collision_threshold * (1.0 + local))
        return {ContourOutcome::collision, 0};
    }
    double total = 0.0;
    bool resolved = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double inc = std::arg(f[(i + 1) % n] / f[i]);
      if (std::abs(inc) > 0.5 * kPi) {
        resolved = false;
        break;
      }
      total += inc;
    }
    if (resolved) return {ContourOutcome::ok, static_cast<int>(std::lround(total / kTwoPi))};
  }
  throw Error(ErrorKind::undersampled,
              "argument-principle contour still undersampled after refinement");
}

}  // namespace

int count_roots(const MonodromyIntegrator& integrator, const SearchRegion& region,
                const ContourOptions& options) {
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max))
    throw Error(ErrorKind::precondition, "search rectangle must have positive extent");
  if (!(region.density > 0.0)) throw Error(ErrorKind::precondition, "contour density must be positive");
  ContourResult r = wind_once(integrator, region, options);
  if (r.outcome == ContourOutcome::ok) return r.winding;

  const double shift = (std::sqrt(2.0) - 1.0) * 1e-3 * std::max(region.width(), region.height());
  SearchRegion moved = region;
  moved.re_min += shift;
  moved.re_max += shift;
  moved.im_min += shift * 0.5 * std::sqrt(3.0);
  moved.im_max += shift * 0.5 * std::sqrt(3.0);
  r = wind_once(integrator, moved, options);
  if (r.outcome == ContourOutcome::ok) return r.winding;
  throw Error(ErrorKind::contour, "search contour passes too close to an eigenvalue");
}

int count_roots(const MonodromySystem& system, const SearchRegion& region,
                const ContourOptions& options) {
  return count_roots(MonodromyIntegrator(system, options.steps), region, options);
}

cplx refine_root(const MonodromyIntegrator& integrator, cplx seed, double tol,
                 const RefineOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorKind::precondition, "tolerance must be positive");
  cplx lambda = seed;
  for (int it = 0; it < options.max_iterations; ++it) {
    const cplx f = integrator.char_value(lambda);
    if (f == cplx(0.0, 0.0)) return lambda;
    const double h = 1e-6 * (1.0 + std::abs(lambda));
    const cplx df = (integrator.char_value(lambda + h) - integrator.char_value(lambda - h)) / (2.0 * h);
    if (!std::isfinite(std::abs(df)) || df == cplx(0.0, 0.0))
      throw Error(ErrorKind::convergence, "Newton derivative vanished");
    const cplx step = f / df;
    lambda -= step;
    if (!std::isfinite(std::abs(lambda)) || std::abs(lambda - seed) > options.basin_radius)
      throw Error(ErrorKind::convergence, "Newton iterate left the basin around the seed");
    if (std::abs(step) <= tol * (1.0 + std::abs(lambda))) return lambda;
  }
  throw Error(ErrorKind::convergence, "Newton iteration did not converge");
}

cplx refine_root(const MonodromySystem& system, cplx seed, double tol, const RefineOptions& options) {
  return refine_root(MonodromyIntegrator(system, options.steps), seed, tol, options);
}

// ---------------------------------------------------------------------------

namespace {

struct RootSearch {
  const MonodromyIntegrator& counter;
  const MonodromyIntegrator& refiner;
  const RootSearchOptions& options;
  std::vector<Eigenvalue> roots;

  void process(const SearchRegion& region, int n) {
    if (n <= 0) return;
    const cplx centre{0.5 * (region.re_min + region.re_max), 0.5 * (region.im_min + region.im_max)};
    if (n == 1) {
      RefineOptions refine = options.refine;
      refine.basin_radius = std::hypot(region.width(), region.height());
      try {
        const cplx root = refine_root(refiner, centre, options.tolerance, refine);
        if (region.contains(root, 1e-9 * (1.0 + std::abs(root)))) {
          roots.push_back({root, 1});
          return;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::convergence) throw;
      }
    }
    if (region.width() < options.min_size && region.height() < options.min_size) {
      roots.push_back({centre, n});
      return;
    }
    // Off-centre splits keep the cut away from roots on symmetry lines.
    for (double fraction : {0.5 + 0.0371 * std::sqrt(2.0), 0.5 - 0.0493 * std::sqrt(3.0)}) {
      SearchRegion a = region, b = region;
      if (region.width() >= region.height()) {
        const double cut = region.re_min + fraction * region.width();
        a.re_max = cut;
        b.re_min = cut;
      } else {
        const double cut = region.im_min + fraction * region.height();
        a.im_max = cut;
        b.im_min = cut;
      }
      int na = 0, nb = 0;
      try {
        na = count_roots(counter, a, options.counting);
        nb = count_roots(counter, b, options.counting);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::contour) throw;
        continue;
      }
      if (na + nb != n) continue;
      process(a, na);
      process(b, nb);
      return;
    }
    throw Error(ErrorKind::contour, "root subdivision could not split a rectangle consistently");
  }
};

}  // namespace

Spectrum find_roots(const MonodromySystem& system, const SearchRegion& region,
                    const RootSearchOptions& options) {
  const MonodromyIntegrator counter(system, options.counting.steps);
  const MonodromyIntegrator refiner(system, options.refine.steps);
  RootSearch search{counter, refiner, options, {}};
  const int total = count_roots(counter, region, options.counting);
  search.process(region, total);
  return Spectrum::from_eigenvalues(search.roots, SpectrumSource::monodromy);
}

}  // namespace detphase
