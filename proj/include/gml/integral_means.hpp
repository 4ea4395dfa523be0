#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gml/power_series.hpp"
#include "gml/quadrature.hpp"

namespace gml {

// Parameters of M_{p,alpha}(f, r). r may be +inf (alpha > 0 only).
struct MeansParams {
  double p = 2.0;
  double alpha = 1.0;
  double r = 1.0;

  void validate() const;
};

// v(r) = r e^{-alpha r^2}.
struct RadialWeight {
  double alpha = 1.0;
  double operator()(double r) const;
  // int_0^r v(s) ds
  double integral(double r) const;
};

// M_{p,alpha}(z^k, r) = f_{pk/2}(r^2) / f_0(r^2). r = 0 gives the limit
// (1 for k = 0, else 0) and r = +inf the ratio Gamma(pk/2 + 1) / alpha^{pk/2}.
double means_monomial(int k, double p, double alpha, double r);

// M_{2,alpha}(f, r) = sum_k |a_k|^2 M_{2,alpha}(z^k, r). r = +inf allowed for
// alpha > 0.
double means_series_p2(const PowerSeriesFunction& f, double alpha, double r);

// M(r) = int_0^{2pi} |f(r e^{i theta})|^p d theta.
double angular_mean(const PowerSeriesFunction& f, double p, double r,
                    const QuadratureConfig& cfg = QuadratureConfig::composite());

// Nested quadrature of the defining ratio: angular inner, radial outer.
double means_generic(const PowerSeriesFunction& f, double p, double alpha,
                     double r,
                     const QuadratureConfig& cfg = QuadratureConfig::composite());

// means_generic at each of the increasing radii, integrating the numerator
// piecewise so the sweep costs one radial pass.
std::vector<double> means_generic_sweep(
    const PowerSeriesFunction& f, double p, double alpha,
    std::span<const double> radii,
    const QuadratureConfig& cfg = QuadratureConfig::composite());

// M_{p,alpha}(f, inf) for alpha > 0; throws DivergentIntegralError otherwise.
// The radial range is truncated where the Gaussian tail bound drops below
// 1e-14 of the accumulated integral.
double means_at_infinity(const PowerSeriesFunction& f, double p, double alpha,
                         const QuadratureConfig& cfg = QuadratureConfig::composite());

// dM/dr = v(r) int_0^r (M(r) - M(s)) v(s) ds / (2 pi (int_0^r v)^2).
double means_derivative(const PowerSeriesFunction& f, double p, double alpha,
                        double r,
                        const QuadratureConfig& cfg = QuadratureConfig::composite());

struct MaximumPrincipleReport {
  double lower_bound = 0.0;               // |f(0)|^p
  std::optional<double> upper_bound;      // M(inf), alpha > 0 only
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<std::string> violations;    // empty when the chain holds
  bool holds() const { return violations.empty(); }
};

// Checks |f(0)|^p <= M(r_1) <= ... <= M(r_n) <= M(inf) with a relative slack
// of 1e-9.
MaximumPrincipleReport maximum_principle_check(
    const PowerSeriesFunction& f, double p, double alpha,
    std::span<const double> radii,
    const QuadratureConfig& cfg = QuadratureConfig::composite());

struct EmbedBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs * (1.0 + 1e-9); }
};

// lhs = int_{|z|<r} |f e^{-|z|^2/2}|^p dA,
// rhs = (int_{|z|<r} e^{-p|z|^2/2} dA) M_{p,p/2}(f, inf).
EmbedBound embed_bound_check(const PowerSeriesFunction& f, double p, double r,
                             const QuadratureConfig& cfg = QuadratureConfig::composite());

}  // namespace gml
