#include "gml/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gml/errors.hpp"

namespace gml {

PowerSeriesFunction::PowerSeriesFunction(std::vector<complex> coeffs)
    : coeffs_(std::move(coeffs)) {
  for (const auto& a : coeffs_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw DomainError("Taylor coefficients must be finite");
    }
  }
}

PowerSeriesFunction PowerSeriesFunction::monomial(int k, complex coefficient) {
  if (k < 0) throw DomainError("monomial degree must be >= 0");
  std::vector<complex> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = coefficient;
  return PowerSeriesFunction(std::move(c));
}

PowerSeriesFunction PowerSeriesFunction::constant(complex value) {
  return PowerSeriesFunction({value});
}

complex PowerSeriesFunction::operator()(complex z) const {
  complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

double PowerSeriesFunction::abs_pow(complex z, double p) const {
  const double sq = std::norm((*this)(z));
  if (p == 2.0) return sq;
  return std::pow(sq, 0.5 * p);
}

int PowerSeriesFunction::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
    if (coeffs_[static_cast<std::size_t>(k)] != complex(0.0)) return k;
  }
  return -1;
}

std::optional<int> PowerSeriesFunction::monomial_degree() const {
  const int n = degree();
  if (n < 0) return std::nullopt;
  for (int k = 0; k < n; ++k) {
    if (coeffs_[static_cast<std::size_t>(k)] != complex(0.0)) return std::nullopt;
  }
  return n;
}

complex PowerSeriesFunction::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

PowerSeriesFunction PowerSeriesFunction::derivative() const {
  if (coeffs_.size() <= 1) return PowerSeriesFunction({0.0});
  std::vector<complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  }
  return PowerSeriesFunction(std::move(d));
}

PowerSeriesFunction PowerSeriesFunction::scaled(complex c) const {
  std::vector<complex> s = coeffs_;
  for (auto& a : s) a *= c;
  return PowerSeriesFunction(std::move(s));
}

PowerSeriesFunction PowerSeriesFunction::times_power(int m) const {
  if (m < 0) throw DomainError("times_power needs m >= 0");
  std::vector<complex> s(static_cast<std::size_t>(m), 0.0);
  s.insert(s.end(), coeffs_.begin(), coeffs_.end());
  return PowerSeriesFunction(std::move(s));
}

double PowerSeriesFunction::modulus_bound(double r) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * r + std::abs(*it);
  }
  return acc;
}

std::vector<complex> PowerSeriesFunction::zeros() const {
  const int n = degree();
  if (n <= 0) return {};
  // Start on a circle of the geometric-mean root modulus, off the real axis.
  const double lead = std::abs(coeffs_[n]);
  double rho = 0.0;
  for (int k = 0; k < n; ++k) {
    rho = std::max(rho, std::pow(std::abs(coeffs_[k]) / lead, 1.0 / (n - k)));
  }
  rho = rho > 0.0 ? 0.5 * rho : 1.0;
  std::vector<complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(rho, (6.283185307179586 * k + 0.4) / n);

  const PowerSeriesFunction df = derivative();
  for (int it = 0; it < 500; ++it) {
    double largest = 0.0;
    for (int i = 0; i < n; ++i) {
      const complex value = (*this)(z[i]);
      if (value == complex(0.0)) continue;
      const complex slope = df(z[i]);
      complex repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const complex newton = slope == complex(0.0) ? complex(1e-3 * rho) : value / slope;
      const complex step = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      largest = std::max(largest, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (largest <= 1e-15) break;
  }
  return z;
}

}  // namespace gml
