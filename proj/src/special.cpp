#include "gml/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gml/errors.hpp"

namespace gml {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRescale = 1e280;
const double kLogRescale = std::log(kRescale);

// value = mantissa * exp(log_scale)
struct Scaled {
  double log_scale = 0.0;
  double mantissa = 0.0;
  double log() const { return log_scale + std::log(mantissa); }
};

void check_arguments(double lambda, double x) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError(fmt::format("lambda must be finite and >= 0, got {}", lambda));
  }
  if (!(x >= 0.0)) throw DomainError(fmt::format("x must be >= 0, got {}", x));
}

// Series for int_0^x t^lambda (x - t)^moment e^{-alpha t} dt / moment!,
// moment in {0, 1}, with every term positive.
//
// alpha > 0 uses the Kummer-transformed form
//   f = x^s e^{-y} sum_n y^n / ((s)(s+1)...(s+n)),            y = alpha x
//   K = x^{s+1} e^{-y} sum_n (n+1) y^n / ((s)(s+1)...(s+n+1)),
// alpha < 0 the plain expansion of e^{|alpha| t}
//   f = x^s sum_n y^n / (n! (s+n)),  K = x^{s+1} sum_n y^n / (n! (s+n)(s+n+1)),
// where s = lambda + 1.
Scaled power_series(double lambda, double alpha, double x, int moment) {
  const double s = lambda + 1.0;
  const double log_x = std::log(x);
  Scaled out;
  if (alpha == 0.0) {
    out.log_scale = (s + moment) * log_x;
    out.mantissa = moment == 0 ? 1.0 / s : 1.0 / (s * (s + 1.0));
    return out;
  }
  const double y = std::abs(alpha) * x;
  double sum = 0.0;
  if (alpha > 0.0) {
    out.log_scale = (s + moment) * log_x - y;
    double u = moment == 0 ? 1.0 / s : 1.0 / (s * (s + 1.0));
    for (int n = 0; n < 200000; ++n) {
      const double term = moment == 0 ? u : (n + 1) * u;
      sum += term;
      if (n > y && term <= 1e-17 * sum) break;
      u *= y / (s + moment + n + 1.0);
    }
  } else {
    out.log_scale = (s + moment) * log_x;
    double c = 1.0;  // y^n / n!, rescaled when large
    for (int n = 0; n < 200000; ++n) {
      const double term =
          moment == 0 ? c / (s + n) : c / ((s + n) * (s + n + 1.0));
      sum += term;
      if (n > y && term <= 1e-17 * sum) break;
      c *= y / (n + 1.0);
      if (c > kRescale) {
        c /= kRescale;
        sum /= kRescale;
        out.log_scale += kLogRescale;
      }
    }
  }
  out.mantissa = sum;
  return out;
}

// Beyond this point the alpha > 0 series needs too many terms; use the
// complement of the upper incomplete gamma instead.
bool use_complement(double lambda, double alpha, double x) {
  return alpha > 0.0 && alpha * x > lambda + 51.0;
}

double log_integral_complement(double lambda, double alpha, double x) {
  const double s = lambda + 1.0;
  return std::lgamma(s) + std::log1p(-regularized_upper_gamma(s, alpha * x)) -
         s * std::log(alpha);
}

}  // namespace

void check_overflow_guard(double alpha, double x) {
  if (alpha < 0.0 && x > 700.0 / -alpha) {
    throw OverflowGuardError(fmt::format(
        "x = {} exceeds the overflow guard 700/|alpha| = {} for alpha = {}", x,
        700.0 / -alpha, alpha));
  }
}

double log_weighted_power_integral(double lambda, double alpha, double x) {
  check_arguments(lambda, x);
  if (std::isinf(x)) {
    if (alpha <= 0.0) {
      throw DivergentIntegralError("f_lambda(inf) diverges for alpha <= 0");
    }
    return std::lgamma(lambda + 1.0) - (lambda + 1.0) * std::log(alpha);
  }
  check_overflow_guard(alpha, x);
  if (x == 0.0) return -kInf;
  if (use_complement(lambda, alpha, x)) {
    return log_integral_complement(lambda, alpha, x);
  }
  return power_series(lambda, alpha, x, 0).log();
}

double weighted_power_integral(double lambda, double alpha, double x,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  return std::exp(log_weighted_power_integral(lambda, alpha, x));
}

double log_weighted_power_moment(double lambda, double alpha, double x) {
  check_arguments(lambda, x);
  if (!std::isfinite(x)) throw DomainError("moment needs finite x");
  check_overflow_guard(alpha, x);
  if (x == 0.0) return -kInf;
  if (use_complement(lambda, alpha, x)) {
    // x f_lambda - f_{lambda+1}; x exceeds the mean (lambda+1)/alpha by at
    // least 50/alpha here, so the difference is well conditioned.
    const double lf0 = log_integral_complement(lambda, alpha, x);
    const double lf1 = log_integral_complement(lambda + 1.0, alpha, x);
    return lf0 + std::log(x - std::exp(lf1 - lf0));
  }
  return power_series(lambda, alpha, x, 1).log();
}

double weighted_power_integral_quadrature(double lambda, double alpha,
                                          double x,
                                          const QuadratureConfig& cfg) {
  check_arguments(lambda, x);
  if (!std::isfinite(x)) throw DomainError("quadrature route needs finite x");
  check_overflow_guard(alpha, x);
  if (x == 0.0) return 0.0;
  const double s = lambda + 1.0;
  const double shift = std::max(0.0, -alpha * x);  // keeps the integrand <= 1
  auto integrand = [&](double v) {
    return std::exp(-alpha * x * std::pow(v, 1.0 / s) - shift);
  };
  const double inner = adaptive_integrate(integrand, 0.0, 1.0, cfg);
  return std::exp(s * std::log(x) + shift) / s * inner;
}

double weighted_power_integral_integer(int lambda, double alpha, double x) {
  if (lambda < 0) throw DomainError("integer route needs lambda >= 0");
  check_arguments(lambda, x);
  if (alpha == 0.0) return std::pow(x, lambda + 1) / (lambda + 1);
  // int_0^x t^n e^{-a t} dt = n!/a^{n+1} (1 - e^{-a x} sum_{j<=n} (a x)^j / j!)
  const double y = alpha * x;
  if (std::abs(y) <= lambda + 1.0) {
    // The bracket equals e^{-y} sum_{j>n} y^j / j!; summing the tail directly
    // avoids the cancellation. Factor y^{n+1}/(n+1)! out against n!/a^{n+1}.
    double tail = 0.0;
    double term = 1.0;
    for (int j = lambda + 1; j < lambda + 200; ++j) {
      tail += term;
      term *= y / (j + 1);
      if (std::abs(term) < 1e-17 * std::abs(tail)) break;
    }
    return std::pow(x, lambda + 1) / (lambda + 1) * std::exp(-y) * tail;
  }
  double partial = 0.0;
  double term = 1.0;
  for (int j = 0; j <= lambda; ++j) {
    if (j > 0) term *= y / j;
    partial += term;
  }
  return std::tgamma(lambda + 1.0) / std::pow(alpha, lambda + 1) *
         (1.0 - std::exp(-y) * partial);
}

PowerIntegralDerivs weighted_power_integral_derivs(double lambda, double alpha,
                                                   double x) {
  check_arguments(lambda, x);
  if (!(x > 0.0)) throw DomainError("derivatives need x > 0");
  const double log_x = std::log(x);
  const double ax = alpha * x;
  PowerIntegralDerivs d;
  d.h1 = std::exp(lambda * log_x - ax);
  d.h2 = (lambda - ax) * std::exp((lambda - 1.0) * log_x - ax);
  d.h3 = (lambda * lambda - lambda - 2.0 * lambda * ax + ax * ax) *
         std::exp((lambda - 2.0) * log_x - ax);
  return d;
}

double weighted_power_log_gap(double lambda, double alpha, double x,
                              const QuadratureConfig& cfg) {
  check_arguments(lambda, x);
  check_overflow_guard(alpha, x);
  if (x == 0.0) return 0.0;
  // t = x e^{-u}: int_0^inf x^s e^{-s u} e^{-alpha x e^{-u}} u du.
  const double s = lambda + 1.0;
  const double log_x = std::log(x);
  const double ax = alpha * x;
  const double upper = std::log(std::max(1.0, std::abs(ax))) + 80.0 / s + 5.0;
  auto integrand = [&](double u) {
    return u * std::exp(s * (log_x - u) - ax * std::exp(-u));
  };
  return adaptive_integrate(integrand, 0.0, upper, cfg);
}

double weighted_power_log_integral(double lambda, double alpha, double x,
                                   const QuadratureConfig& cfg) {
  if (x == 0.0) return 0.0;
  return weighted_power_integral(lambda, alpha, x, cfg) * std::log(x) -
         weighted_power_log_gap(lambda, alpha, x, cfg);
}

double gamma_half_ratio(int k) {
  if (k < 1) throw DomainError("gamma_half_ratio needs k >= 1");
  // R(k+2) = (k+1)/k R(k), started from R(1) = 1/sqrt(pi), R(2) = sqrt(pi)/2.
  const double sqrt_pi = std::sqrt(kPi);
  double ratio = (k % 2 == 1) ? 1.0 / sqrt_pi : 0.5 * sqrt_pi;
  for (int j = (k % 2 == 1) ? 1 : 2; j < k; j += 2) {
    ratio *= (j + 1.0) / j;
  }
  return ratio;
}

double regularized_upper_gamma(double s, double y) {
  if (!(s > 0.0)) throw DomainError("regularized_upper_gamma needs s > 0");
  if (y <= 0.0) return 1.0;
  const double log_prefactor = -y + s * std::log(y) - std::lgamma(s);
  if (y < s + 1.0) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= y / (s + n);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return 1.0 - std::exp(log_prefactor) * sum;
  }
  // Modified Lentz continued fraction.
  constexpr double kTiny = 1e-300;
  double b = y + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

double gamma_tail_threshold(double lambda, double rel) {
  if (!(rel > 0.0 && rel < 1.0)) throw DomainError("tail fraction must lie in (0, 1)");
  const double s = lambda + 1.0;
  double hi = std::max(1.0, s);
  while (regularized_upper_gamma(s, hi) > rel) hi *= 1.5;
  double lo = hi / 1.5;
  while (hi - lo > 0.01 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_upper_gamma(s, mid) > rel) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace gml
