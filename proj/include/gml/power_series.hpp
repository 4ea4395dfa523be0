#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace gml {

using complex = std::complex<double>;

// An entire function given by finitely many Taylor coefficients at 0.
class PowerSeriesFunction {
 public:
  PowerSeriesFunction() = default;
  explicit PowerSeriesFunction(std::vector<complex> coeffs);

  static PowerSeriesFunction monomial(int k, complex coefficient = 1.0);
  static PowerSeriesFunction constant(complex value);

  // Horner evaluation.
  complex operator()(complex z) const;

  // |f(z)|^p computed as (|f|^2)^{p/2}.
  double abs_pow(complex z, double p) const;

  // Index of the last nonzero coefficient; -1 for the zero function.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  bool is_constant() const { return degree() <= 0; }
  // k if f = a z^k with a != 0.
  std::optional<int> monomial_degree() const;

  complex coeff(int k) const;
  std::span<const complex> coeffs() const { return coeffs_; }

  PowerSeriesFunction derivative() const;
  PowerSeriesFunction scaled(complex c) const;
  // z^m f(z)
  PowerSeriesFunction times_power(int m) const;

  // sum_k |a_k| r^k, an upper bound for max_{|z| = r} |f(z)|.
  double modulus_bound(double r) const;

  // All degree() zeros with multiplicity, by Aberth-Ehrlich iteration.
  // Multiple zeros are only accurate to about eps^{1/multiplicity}.
  std::vector<complex> zeros() const;

 private:
  std::vector<complex> coeffs_;
};

}  // namespace gml
