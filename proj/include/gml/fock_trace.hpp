#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gml/measures.hpp"
#include "gml/power_series.hpp"
#include "gml/quadrature.hpp"

namespace gml {

// k_w(z) = exp(z conj(w) - |w|^2 / 2). Throws OverflowGuardError when the
// real part of the exponent exceeds 700.
complex kernel_eval(complex w, complex z);

// (e^{z conj(a)} - p_m(z conj(a))) / z^m with p_m the Taylor polynomial of
// e^u of order m - 1 (p_0 = 0). The value at z = 0 is conj(a)^m / m!.
complex kernel_remainder(complex a, complex z, int m);

// Test functions for trace ratios.
struct TestFunction {
  enum class Kind { kMonomial, kKernel, kKernelRemainder };
  Kind kind = Kind::kMonomial;
  int k = 0;       // monomial degree
  complex a;       // kernel point
  int m = 0;       // remainder order

  static TestFunction monomial(int k);
  static TestFunction kernel(complex a);
  static TestFunction remainder(complex a, int m);

  std::string label() const;
  complex operator()(complex z) const;
  // |f(z)| e^{-|z|^2/2}, evaluated without forming e^{|z|^2} for kernels.
  double weighted_abs(complex z) const;
  // Centre and radius of a disk outside which (|z|^m0 weighted_abs)^q is
  // below 1e-16 of its integral.
  complex center() const;
  double essential_radius(double q, int m0) const;
};

// ||f||_{F^{p,m}} = (int |z^m f(z) e^{-|z|^2/2}|^p dA)^{1/p}. Monomials use
// pi Gamma(p(k+m)/2 + 1) (2/p)^{p(k+m)/2 + 1}; everything else goes through
// the Gaussian mean at infinity.
double fock_sobolev_norm(const PowerSeriesFunction& f, double p, int m,
                         const QuadratureConfig& cfg = QuadratureConfig::composite());
double fock_sobolev_norm(const TestFunction& f, double p, int m,
                         const QuadratureConfig& cfg = QuadratureConfig::composite());

// ||f||_{L^q(mu)} = (int |f e^{-|z|^2/2}|^q dmu)^{1/q}.
double lq_norm(const TestFunction& f, const MeasureSpec& mu, double q,
               const QuadratureConfig& cfg = QuadratureConfig::composite());
double lq_norm(const PowerSeriesFunction& f, const MeasureSpec& mu, double q,
               const QuadratureConfig& cfg = QuadratureConfig::composite());

// ||f||_{L^q(mu)} / ||f||_{F^{p,m}}; throws DomainError if the denominator
// vanishes.
double trace_ratio(const TestFunction& f, const MeasureSpec& mu, double p,
                   double q, int m,
                   const QuadratureConfig& cfg = QuadratureConfig::composite());
double trace_ratio(const PowerSeriesFunction& f, const MeasureSpec& mu, double p,
                   double q, int m,
                   const QuadratureConfig& cfg = QuadratureConfig::composite());

struct FamilyRatios {
  std::vector<std::string> labels;
  std::vector<double> ratios;
  double max() const;
};

FamilyRatios trace_ratio_family(const std::vector<TestFunction>& family,
                                const MeasureSpec& mu, double p, double q, int m,
                                const QuadratureConfig& cfg = QuadratureConfig::composite());

std::vector<TestFunction> monomial_family(int max_degree);
std::vector<TestFunction> kernel_family(const std::vector<complex>& points);
std::vector<TestFunction> remainder_family(const std::vector<complex>& points, int m);

struct LatticeParams {
  double s = 0.5;        // lattice spacing
  double r = 1.0;        // ball radius
  double r_trunc = 10.0; // centres with |a| <= r_trunc
  double q = 2.0;
  double p = 2.0;
  int m = 0;

  // s = r / 2 and r_trunc = 10 max(1, r).
  static LatticeParams defaults(double r, double p, double q, int m);
  // s <= r, r_trunc >= 10 max(1, r), positive exponents, m >= 0.
  void validate() const;
  std::vector<complex> centers() const;
};

struct SupStatistic {
  double value = 0.0;
  complex argmax;
  double inner_max = 0.0;   // centres with |a| <= r_trunc / 2
  double outer_max = 0.0;   // centres with r_trunc / 2 < |a| <= r_trunc
  bool unbounded = false;   // outer_max > 1.25 inner_max
  std::vector<std::string> warnings;
};

// sup_a mu(B(a, r)) / (1 + |a|)^{m q} over the lattice, refined on a
// quarter-spacing patch around the best centre. A lower bound of the true sup.
SupStatistic carleson_sup_statistic(const MeasureSpec& mu, const LatticeParams& lat,
                                    const QuadratureConfig& cfg = QuadratureConfig::composite());

struct SumStatistic {
  double value = 0.0;
  double tail_bound = 0.0;      // 0 when no ball outside r_trunc meets the support
  double shell_fraction = 0.0;  // share of the sum from 0.9 r_trunc < |a| <= r_trunc
  bool divergent = false;       // shell_fraction > 1e-3
  std::vector<std::string> warnings;
};

// sum_a (mu(B(a, r)) / (1 + |a|)^{m q})^{p / (p - q)}; requires q < p.
SumStatistic carleson_sum_statistic(const MeasureSpec& mu, const LatticeParams& lat,
                                    const QuadratureConfig& cfg = QuadratureConfig::composite());

// Pushforward of e^{-q|z|^2/2} dA under z -> a z + b: density
// |a|^{-2} e^{-q |(w - b)/a|^2 / 2}.
MeasureSpec composition_measure(complex a, complex b, double q);

// (|phi'(z)| / (1 + |z|))^q dA.
MeasureSpec volterra_measure(const PowerSeriesFunction& phi, double q);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double rel = 1e-12) const {
    return lhs <= rhs + rel * std::max(1.0, std::abs(rhs));
  }
};

// lhs = pi sum_{k>=1} |a_k|^2 k!, rhs = pi sum_{k>=1} |a_k|^2 k k!.
InequalitySides poincare_gap(const PowerSeriesFunction& f);
// The same two integrals by quadrature.
InequalitySides poincare_gap_quadrature(
    const PowerSeriesFunction& f,
    const QuadratureConfig& cfg = QuadratureConfig::composite());

// int |f' e^{-|z|^2/2}| dA; closed form for monomials.
double derivative_l1_norm(const PowerSeriesFunction& f,
                          const QuadratureConfig& cfg = QuadratureConfig::composite());

// lhs = ||f||_{F^2}^2 - pi |f(0)|^2, rhs = C (int |f' e^{-|z|^2/2}| dA)^2 with
// C = 1/(4 pi) (sharp, monomials only) or 1/(2 pi).
InequalitySides iso_sobolev_check(const PowerSeriesFunction& f, bool sharp,
                                  const QuadratureConfig& cfg = QuadratureConfig::composite());

// r_0(t) = +1 on [0, 1/2), -1 on [1/2, 1), extended with period 1, and
// r_j(t) = r_0(2^j t).
int rademacher(int j, double t);

struct KhinchineResult {
  double lp_avg = 0.0;   // (int_0^1 |sum_j c_j r_j(t)|^p dt)^{1/p}
  double l2_norm = 0.0;  // (sum_j |c_j|^2)^{1/2}
  double ratio() const { return lp_avg / l2_norm; }
};

// c[i] multiplies r_{i+1}. The integrand is constant on dyadic intervals of
// length 2^{-(n+1)} for n = c.size(), so the average is exact.
KhinchineResult khinchine_check(const std::vector<complex>& c, double p);

}  // namespace gml
