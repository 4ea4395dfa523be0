#pragma once

#include <complex>
#include <functional>

namespace gml {

using complex = std::complex<double>;
using RealFunction = std::function<double(double)>;
using PlaneFunction = std::function<double(complex)>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
  // Starting node count of the periodic rule; doubled until converged.
  int angular_nodes = 64;
  int max_angular_nodes = 8192;

  // Tolerances used for nested (area) integrals.
  static QuadratureConfig composite() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    return cfg;
  }

  // Throws DomainError unless rel_tol > 0 and angular_nodes is even and >= 8.
  void validate() const;

  // Config for an inner integral whose noise must stay well below the outer
  // tolerance.
  QuadratureConfig inner() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
// Converges when the summed error estimate is at most
// max(abs_tol, rel_tol * |result|); throws NonConvergenceError once
// max_subdivisions intervals are in use.
QuadratureResult integrate_with_error(const RealFunction& f, double a,
                                      double b, const QuadratureConfig& cfg);

double adaptive_integrate(const RealFunction& f, double a, double b,
                          const QuadratureConfig& cfg = {});

// Equispaced trapezoid rule on [0, 2pi) with `nodes` points.
double periodic_trapezoid(const RealFunction& f, int nodes);

// Doubles the node count from cfg.angular_nodes until two successive
// trapezoid sums agree to cfg.rel_tol. Throws NonConvergenceError past
// cfg.max_angular_nodes.
double periodic_trapezoid_converged(const RealFunction& f,
                                    const QuadratureConfig& cfg,
                                    int start_nodes = 0);

// Periodic trapezoid first; integrands with kinks (zeros of |f|^p on the
// circle) fall back to adaptive Gauss-Kronrod over [0, 2pi].
double periodic_integrate(const RealFunction& f, const QuadratureConfig& cfg,
                          int start_nodes = 0);

// Area integral of g over the disk B(center, radius) in polar coordinates
// around `center`: angular inner, radial outer.
double disk_integral(const PlaneFunction& g, complex center, double radius,
                     const QuadratureConfig& cfg, int start_nodes = 0);

// Bisection for a sign change of f on [lo, hi]. Stops once the bracket is
// narrower than x_tol (absolute) or the midpoint is no longer representable.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double root() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};
Bracket bisect(const RealFunction& f, double lo, double hi, double x_tol);

}  // namespace gml
