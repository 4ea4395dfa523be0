#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gml/power_series.hpp"

namespace gml {

// D(g) = g'/g + x g''/g - x (g'/g)^2. Equals phi''(u) / x for
// phi(u) = ln g(e^u), so its sign is the convexity of ln g in ln x.
double d_functional(double g_value, double g1, double g2, double x);

// D(f_lambda) computed as -alpha f_lambda' K_lambda / f_lambda^2 with
// K_lambda = int_0^x t^lambda (x - t) e^{-alpha t} dt, which avoids the
// cancellation of the three-term form.
double d_weighted_power(double lambda, double alpha, double x);

// Delta(lambda, x) = D(f_lambda) - D(f_0). Positive where ln M(z^k, r) is
// convex in ln r (x = r^2, lambda = pk/2), negative where it is concave.
double delta_functional(double lambda, double alpha, double x);

struct ProofDiagnostics {
  double x = 0.0;
  double d1 = 0.0;      // h ln x - dh/dlambda
  double d2 = 0.0;      // (lambda + 1 - alpha x) h - 2 x^{lambda+1} e^{-alpha x}
  double delta1 = 0.0;  // -h + x^{lambda+1} e^{-alpha x} (lambda + 1 - alpha x) / Q
  double delta = 0.0;   // -h^2 / d2 - d1, same sign as dDelta/dlambda
  double ddelta_dlambda = 0.0;
  bool singular = false;  // d2 vanished numerically; delta not usable
};

// h = f_lambda(x). d1 comes from a nonnegative integrand and delta1 from
// integrating its x-derivative, so neither loses digits to cancellation.
ProofDiagnostics proof_diagnostics(double lambda, double alpha, double x);

// delta1 by the closed form; only for cross-checking.
double delta1_closed_form(double lambda, double alpha, double x);

// The unique zero x* of delta1 for alpha < 0, found by bisection to 1e-12.
double delta1_root(double lambda, double alpha);

enum class Classification {
  kConvex,
  kConcave,
  kConvexThenConcave,
  kIndeterminate,
  kDegenerate,
};

std::string to_string(Classification c);

struct SignInterval {
  double x_lo = 0.0;
  double x_hi = 0.0;
  int sign = 0;  // -1, 0 or +1
};

struct Transition {
  double x0 = 0.0;
  double lo = 0.0;  // functional has opposite signs at lo and hi
  double hi = 0.0;
  double tol = 0.0;
  double r0() const;  // sqrt(x0)
};

struct ConvexityReport {
  double lambda = 0.0;
  std::vector<SignInterval> sign_profile;
  std::vector<Transition> transitions;
  Classification classification = Classification::kIndeterminate;
  std::string note;
};

// Scan settings for sign profiles in x.
struct ScanGrid {
  double x_min = 1e-4;
  int points_per_decade = 400;
  double root_tol = 1e-12;
};

// Sign profile and roots of fn on the log grid (x_min, x_max]. Grid values
// with |fn| <= zero_floor(x) count as sign 0.
ConvexityReport sign_scan(const std::function<double(double)>& fn,
                          double x_max, const ScanGrid& grid,
                          const std::function<double(double)>& zero_floor = {});

// Convexity of ln M_{p,alpha}(z^k, r) in ln r, scanned in x = r^2.
ConvexityReport classify_monomial_means(int k, double p, double alpha,
                                        double x_max,
                                        const ScanGrid& grid = {});

// sqrt((pk + 2) / (-2 alpha)); requires alpha < 0.
double corollary_c_bound(int k, double p, double alpha);

// Second differences of g at the interior points of a strictly increasing
// grid u. On a uniform grid this is g[i+1] - 2 g[i] + g[i-1]; otherwise the
// three-point divided difference is rescaled to match that form.
std::vector<double> second_differences(std::span<const double> u,
                                       std::span<const double> g);

struct SeriesConvexityReport {
  std::vector<double> radii;
  std::vector<double> log_means;
  std::vector<double> second_differences;  // at radii[1 .. n-2]
  double min_second_difference = 0.0;
  bool convex = true;  // every second difference >= -1e-7
};

// Discrete convexity of ln M_{2,alpha}(f, r) in ln r on a grid inside
// (0, sqrt(1 / -alpha)].
SeriesConvexityReport series_convexity_check(const PowerSeriesFunction& f,
                                             double alpha,
                                             std::span<const double> radii);

struct ThreeCircles {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs + 1e-9; }
};

// lhs = ln(r2/r1) ln M(r), rhs = ln(r2/r) ln M(r1) + ln(r/r1) ln M(r2) for
// M = M_{p,alpha}(z^k, .). The radii must lie in a region where ln M is
// certified convex in ln r.
ThreeCircles three_circles_check(int k, double p, double alpha, double r1,
                                 double r, double r2);

// Analysis of M_{2,1}(a + z, r) with c = |a|^2, in x = r^2:
//   F = (c + 1 - (c + 1 + x) e^{-x}) / (1 - e^{-x}),
//   D(F) = G e^{-4x} / (g^2 h^2), g = c + 1 - (c + 1 + x) e^{-x}, h = 1 - e^{-x},
// and the auxiliary functions with G' = x e^{3x} H, H'' = e^{-x} J.
namespace remark {

double F(double c, double x);
double G(double c, double x);
// G e^{-3x}; same sign as G without overflow.
double G_scaled(double c, double x);
double H(double c, double x);
double H_prime(double c, double x);
double J(double c, double x);
double J_prime(double c, double x);
// D(F) from G.
double DF(double c, double x);

// G_0 = (-1 + 3x - x^2) e^{3x} + (3 - 6x) e^{2x} + (-3 + 3x + x^2) e^x + 1,
// the limit of G / (c + 1) as c grows.
double G0(double x);
double G0_scaled(double x);

}  // namespace remark

// Root of G_0 on [1, 3] by bisection to 1e-10.
double g0_root();

struct RemarkReport {
  double c = 0.0;
  double J0 = 0.0;
  bool J_nonincreasing = true;     // sampled on (0, x_max]
  double H_prime_at_60 = 0.0;      // approaches -3(c + 1)
  std::optional<Transition> x0;    // sign change of G, c > 0
  std::vector<SignInterval> sign_profile;
  bool nonpositive = false;        // G <= 0 on the samples (expected for c = 0)
  Classification classification = Classification::kIndeterminate;
  std::string note;
};

RemarkReport remark_linear_analysis(double c, double x_max,
                                    const ScanGrid& grid = {1e-3, 200, 1e-12});

}  // namespace gml
