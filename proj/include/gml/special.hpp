#pragma once

#include "gml/quadrature.hpp"

namespace gml {

// f_lambda(x) = int_0^x t^lambda e^{-alpha t} dt, the radial integral behind
// every monomial mean. Evaluated by a positive-term series (no cancellation
// for either sign of alpha); x = +inf is allowed when alpha > 0.
//
// Throws DomainError for lambda < 0 or x < 0, DivergentIntegralError for
// x = +inf with alpha <= 0 and OverflowGuardError for alpha < 0 with
// x > 700 / |alpha|.
double weighted_power_integral(double lambda, double alpha, double x,
                               const QuadratureConfig& cfg = {});

// Same integral by adaptive quadrature after the substitution
// t = x v^{1/(lambda+1)}, which removes the endpoint singularity.
double weighted_power_integral_quadrature(double lambda, double alpha,
                                          double x,
                                          const QuadratureConfig& cfg = {});

// Closed form for integer lambda by repeated integration by parts.
double weighted_power_integral_integer(int lambda, double alpha, double x);

// ln f_lambda(x); finite wherever f_lambda(x) > 0 even if the value itself
// would overflow.
double log_weighted_power_integral(double lambda, double alpha, double x);

// K_lambda(x) = int_0^x t^lambda (x - t) e^{-alpha t} dt = x f_lambda - f_{lambda+1},
// returned as a logarithm. Used for the cancellation-free D functional.
double log_weighted_power_moment(double lambda, double alpha, double x);

struct PowerIntegralDerivs {
  double h1 = 0.0;  // x^lambda e^{-alpha x}
  double h2 = 0.0;  // (lambda - alpha x) x^{lambda-1} e^{-alpha x}
  double h3 = 0.0;  // x^{lambda-2} e^{-alpha x} (lambda^2 - lambda - 2 lambda alpha x + alpha^2 x^2)
};

// First three x-derivatives of f_lambda. Requires x > 0.
PowerIntegralDerivs weighted_power_integral_derivs(double lambda, double alpha,
                                                   double x);

// d f_lambda / d lambda = int_0^x t^lambda e^{-alpha t} ln t dt.
double weighted_power_log_integral(double lambda, double alpha, double x,
                                   const QuadratureConfig& cfg = {});

// int_0^x t^lambda e^{-alpha t} ln(x / t) dt = f_lambda ln x - d f_lambda / d lambda.
// The integrand is nonnegative, so the result carries full relative accuracy.
double weighted_power_log_gap(double lambda, double alpha, double x,
                              const QuadratureConfig& cfg = {});

// Gamma((k+1)/2) / Gamma(k/2) for k >= 1.
double gamma_half_ratio(int k);

// Regularized upper incomplete gamma Q(s, y) = Gamma(s, y) / Gamma(s).
double regularized_upper_gamma(double s, double y);

// Smallest y (to within 1%) with Q(lambda + 1, y) <= rel. Used to truncate
// Gaussian radial integrals: int_{y/beta}^inf x^lambda e^{-beta x} dx is
// below rel times the full integral.
double gamma_tail_threshold(double lambda, double rel);

// Rejects alpha < 0 with x beyond 700 / |alpha|.
void check_overflow_guard(double alpha, double x);

}  // namespace gml
