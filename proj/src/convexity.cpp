#include "gml/convexity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gml/errors.hpp"
#include "gml/integral_means.hpp"
#include "gml/parallel.hpp"
#include "gml/quadrature.hpp"
#include "gml/special.hpp"

namespace gml {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_lambda_x(double lambda, double x) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError(fmt::format("lambda must be finite and >= 0, got {}", lambda));
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("x must be finite and > 0, got {}", x));
  }
}

int sign_of(double v, double floor) {
  if (std::abs(v) <= floor) return 0;
  return v > 0.0 ? 1 : -1;
}

// x^{lambda+1} e^{-alpha x}
double edge_term(double lambda, double alpha, double x) {
  return std::exp((lambda + 1.0) * std::log(x) - alpha * x);
}

double q_poly(double lambda, double alpha, double x) {
  const double s = lambda + 1.0;
  return s * s - (2.0 * lambda + 1.0) * alpha * x + alpha * alpha * x * x;
}

// delta1 = int_0^x delta1'(t) dt with
// delta1'(t) = -alpha t^{lambda+1} e^{-alpha t} (lambda + 1 + alpha t) / Q(t)^2.
// For alpha < 0 the integrand changes sign at (lambda+1)/|alpha|; the two
// pieces are integrated separately so each meets a relative tolerance.
double delta1_integral(double lambda, double alpha, double x) {
  auto integrand = [&](double t) {
    if (t == 0.0) return 0.0;
    const double q = q_poly(lambda, alpha, t);
    return -alpha * edge_term(lambda, alpha, t) * (lambda + 1.0 + alpha * t) /
           (q * q);
  };
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  if (alpha < 0.0) {
    const double turn = (lambda + 1.0) / -alpha;
    if (x > turn) {
      return adaptive_integrate(integrand, 0.0, turn, cfg) +
             adaptive_integrate(integrand, turn, x, cfg);
    }
  }
  return adaptive_integrate(integrand, 0.0, x, cfg);
}

double log_means_monomial(int k, double p, double alpha, double r) {
  if (k == 0) return 0.0;
  const double x = r * r;
  return log_weighted_power_integral(0.5 * p * k, alpha, x) -
         log_weighted_power_integral(0.0, alpha, x);
}

std::vector<double> log_grid(double x_min, double x_max, int per_decade) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max)) {
    throw DomainError(fmt::format("need 0 < x_min < x_max < inf, got ({}, {})",
                                  x_min, x_max));
  }
  if (per_decade < 1) throw DomainError("points_per_decade must be >= 1");
  std::vector<double> xs;
  const double step = 1.0 / per_decade;
  const double last = std::log10(x_max / x_min);
  for (int i = 0;; ++i) {
    const double e = i * step;
    if (e >= last * (1.0 - 1e-14)) break;
    xs.push_back(x_min * std::pow(10.0, e));
  }
  xs.push_back(x_max);
  return xs;
}

}  // namespace

double d_functional(double g_value, double g1, double g2, double x) {
  if (!(g_value > 0.0)) {
    throw DomainError(fmt::format("D(g) needs g > 0, got {}", g_value));
  }
  if (!(x > 0.0)) throw DomainError(fmt::format("D(g) needs x > 0, got {}", x));
  const double ratio = g1 / g_value;
  return ratio + x * g2 / g_value - x * ratio * ratio;
}

double d_weighted_power(double lambda, double alpha, double x) {
  check_lambda_x(lambda, x);
  check_overflow_guard(alpha, x);
  if (alpha == 0.0) return 0.0;
  const double log_h1 = lambda * std::log(x) - alpha * x;
  const double log_k = log_weighted_power_moment(lambda, alpha, x);
  const double log_h = log_weighted_power_integral(lambda, alpha, x);
  return -alpha * std::exp(log_h1 + log_k - 2.0 * log_h);
}

double delta_functional(double lambda, double alpha, double x) {
  check_lambda_x(lambda, x);
  check_overflow_guard(alpha, x);
  if (lambda == 0.0 || alpha == 0.0) return 0.0;
  return d_weighted_power(lambda, alpha, x) - d_weighted_power(0.0, alpha, x);
}

ProofDiagnostics proof_diagnostics(double lambda, double alpha, double x) {
  check_lambda_x(lambda, x);
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw DomainError("proof diagnostics need a finite alpha != 0");
  }
  check_overflow_guard(alpha, x);
  ProofDiagnostics out;
  out.x = x;
  const double h = weighted_power_integral(lambda, alpha, x);
  const double h1 = std::exp(lambda * std::log(x) - alpha * x);
  const double edge = edge_term(lambda, alpha, x);
  out.d1 = weighted_power_log_gap(lambda, alpha, x);
  out.d2 = (lambda + 1.0 - alpha * x) * h - 2.0 * edge;
  out.delta1 = delta1_integral(lambda, alpha, x);
  if (out.d2 == 0.0 || !std::isfinite(out.d2) ||
      std::abs(out.d2) <= 16.0 * kEps * std::abs(2.0 * edge)) {
    out.singular = true;
    out.delta = std::numeric_limits<double>::quiet_NaN();
    out.ddelta_dlambda = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.delta = -h * h / out.d2 - out.d1;
  out.ddelta_dlambda = (h1 / h) * (1.0 + out.d1 * out.d2 / (h * h));
  return out;
}

double delta1_closed_form(double lambda, double alpha, double x) {
  check_lambda_x(lambda, x);
  check_overflow_guard(alpha, x);
  const double h = weighted_power_integral(lambda, alpha, x);
  return -h + edge_term(lambda, alpha, x) * (lambda + 1.0 - alpha * x) /
                  q_poly(lambda, alpha, x);
}

double delta1_root(double lambda, double alpha) {
  if (!(alpha < 0.0)) throw DomainError("delta1 has a zero only for alpha < 0");
  check_lambda_x(lambda, 1.0);
  auto fn = [&](double x) { return delta1_integral(lambda, alpha, x); };
  const double lo = (lambda + 1.0) / -alpha;
  double hi = 2.0 * lo;
  while (fn(hi) >= 0.0) {
    hi *= 2.0;
    check_overflow_guard(alpha, hi);
  }
  return bisect(fn, lo, hi, 1e-12).root();
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::kConvex:
      return "convex";
    case Classification::kConcave:
      return "concave";
    case Classification::kConvexThenConcave:
      return "convex-then-concave";
    case Classification::kIndeterminate:
      return "indeterminate";
    case Classification::kDegenerate:
      return "degenerate";
  }
  return "indeterminate";
}

double Transition::r0() const { return std::sqrt(x0); }

ConvexityReport sign_scan(const std::function<double(double)>& fn,
                          double x_max, const ScanGrid& grid,
                          const std::function<double(double)>& zero_floor) {
  const std::vector<double> xs = log_grid(grid.x_min, x_max, grid.points_per_decade);
  std::vector<double> values(xs.size());
  std::vector<int> signs(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    values[i] = fn(xs[i]);
    const double floor = zero_floor ? zero_floor(xs[i]) : 0.0;
    signs[i] = sign_of(values[i], floor);
  });

  ConvexityReport report;
  // Roots between consecutive nonzero samples of opposite sign.
  std::size_t last_nonzero = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (signs[i] == 0) continue;
    if (last_nonzero < xs.size() && signs[last_nonzero] != signs[i]) {
      const Bracket b = bisect(fn, xs[last_nonzero], xs[i], grid.root_tol);
      report.transitions.push_back({b.root(), b.lo, b.hi, b.width()});
    }
    last_nonzero = i;
  }

  // Runs of equal sign; a run boundary at a root sits on the root.
  std::size_t next_root = 0;
  double start = xs.front();
  for (std::size_t i = 1; i <= xs.size(); ++i) {
    if (i < xs.size() && signs[i] == signs[i - 1]) continue;
    double end = i < xs.size() ? xs[i] : xs.back();
    if (i < xs.size() && signs[i] != 0 && signs[i - 1] != 0 &&
        next_root < report.transitions.size()) {
      end = report.transitions[next_root++].x0;
    }
    report.sign_profile.push_back({start, end, signs[i - 1]});
    start = end;
  }

  std::vector<int> pattern;
  for (const int s : signs) {
    if (s != 0 && (pattern.empty() || pattern.back() != s)) pattern.push_back(s);
  }
  if (pattern.empty()) {
    report.classification = Classification::kDegenerate;
  } else if (pattern.size() == 1) {
    report.classification =
        pattern[0] > 0 ? Classification::kConvex : Classification::kConcave;
  } else if (pattern.size() == 2 && pattern[0] > 0) {
    report.classification = Classification::kConvexThenConcave;
  } else {
    report.classification = Classification::kIndeterminate;
  }
  return report;
}

ConvexityReport classify_monomial_means(int k, double p, double alpha,
                                        double x_max, const ScanGrid& grid) {
  if (k < 0) throw DomainError("k must be >= 0");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be positive");
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  if (!(x_max > grid.x_min) || !std::isfinite(x_max)) {
    throw DomainError(fmt::format("x_max must be finite and > {}", grid.x_min));
  }
  check_overflow_guard(alpha, x_max);
  const double lambda = 0.5 * p * k;

  if (k == 0 || alpha == 0.0) {
    ConvexityReport report;
    report.lambda = lambda;
    report.sign_profile.push_back({grid.x_min, x_max, 0});
    report.classification = Classification::kDegenerate;
    report.note = k == 0 ? "M is identically 1"
                         : "alpha = 0: ln M is linear in ln r";
    return report;
  }

  auto fn = [&](double x) { return delta_functional(lambda, alpha, x); };
  auto floor = [&](double x) {
    return 8.0 * kEps *
           (std::abs(d_weighted_power(lambda, alpha, x)) +
            std::abs(d_weighted_power(0.0, alpha, x)));
  };
  ConvexityReport report = sign_scan(fn, x_max, grid, floor);
  report.lambda = lambda;

  if (alpha > 0.0) {
    if (report.classification != Classification::kConcave) {
      report.note = "expected concavity for alpha > 0";
    }
    return report;
  }
  switch (report.classification) {
    case Classification::kConvexThenConcave: {
      const double bound = (lambda + 1.0) / -alpha;
      const double x0 = report.transitions.front().x0;
      report.note = x0 > bound
                        ? fmt::format("x0 = {:.12g} > (pk+2)/(-2 alpha) = {:.12g}",
                                      x0, bound)
                        : fmt::format("x0 = {:.12g} does not exceed (pk+2)/(-2 alpha) = {:.12g}",
                                      x0, bound);
      break;
    }
    case Classification::kConvex:
      report.classification = Classification::kIndeterminate;
      report.note = fmt::format(
          "no sign change up to x_max = {:.6g}; increase x_max", x_max);
      break;
    default:
      report.note = "unexpected sign pattern";
      break;
  }
  return report;
}

double corollary_c_bound(int k, double p, double alpha) {
  if (k < 0) throw DomainError("k must be >= 0");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be positive");
  if (!(alpha < 0.0)) {
    throw DomainError(fmt::format("corollary bound needs alpha < 0, got {}", alpha));
  }
  return std::sqrt((p * k + 2.0) / (-2.0 * alpha));
}

std::vector<double> second_differences(std::span<const double> u,
                                       std::span<const double> g) {
  if (u.size() != g.size()) throw DomainError("grid and values differ in length");
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!(u[i] > u[i - 1])) throw DomainError("grid must be strictly increasing");
  }
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double h1 = u[i] - u[i - 1];
    const double h2 = u[i + 1] - u[i];
    out.push_back(2.0 * (h1 * g[i + 1] - (h1 + h2) * g[i] + h2 * g[i - 1]) /
                  (h1 + h2));
  }
  return out;
}

SeriesConvexityReport series_convexity_check(const PowerSeriesFunction& f,
                                             double alpha,
                                             std::span<const double> radii) {
  if (!(alpha < 0.0)) throw DomainError("series convexity check needs alpha < 0");
  if (f.is_zero()) throw DomainError("f must not vanish identically");
  const double limit = std::sqrt(1.0 / -alpha) * (1.0 + 1e-12);
  for (const double r : radii) {
    if (!(r > 0.0) || r > limit) {
      throw DomainError(fmt::format("radius {} outside (0, {}]", r, limit));
    }
  }
  SeriesConvexityReport report;
  report.radii.assign(radii.begin(), radii.end());
  std::vector<double> u;
  for (const double r : radii) {
    u.push_back(std::log(r));
    report.log_means.push_back(std::log(means_series_p2(f, alpha, r)));
  }
  report.second_differences = second_differences(u, report.log_means);
  for (const double d : report.second_differences) {
    report.min_second_difference = std::min(report.min_second_difference, d);
    if (d < -1e-7) report.convex = false;
  }
  return report;
}

ThreeCircles three_circles_check(int k, double p, double alpha, double r1,
                                 double r, double r2) {
  if (!(r1 > 0.0 && r1 <= r && r <= r2) || !std::isfinite(r2)) {
    throw DomainError("three circles need 0 < r1 <= r <= r2 < inf");
  }
  if (k < 0) throw DomainError("k must be >= 0");
  if (k > 0 && alpha > 0.0) {
    throw DomainError("ln M is concave in ln r for alpha > 0; no convex region");
  }
  if (k > 0 && alpha < 0.0 && r2 > corollary_c_bound(k, p, alpha) * (1.0 + 1e-12)) {
    const double x_max = std::min(std::max(100.0, 4.0 * r2 * r2), 700.0 / -alpha);
    const ConvexityReport report = classify_monomial_means(k, p, alpha, x_max);
    if (report.classification != Classification::kConvexThenConcave ||
        r2 * r2 > report.transitions.front().x0) {
      throw DomainError(fmt::format(
          "r2 = {} is outside the certified convex region of ln M", r2));
    }
  }
  const double m1 = log_means_monomial(k, p, alpha, r1);
  const double m = log_means_monomial(k, p, alpha, r);
  const double m2 = log_means_monomial(k, p, alpha, r2);
  ThreeCircles out;
  out.lhs = std::log(r2 / r1) * m;
  out.rhs = std::log(r2 / r) * m1 + std::log(r / r1) * m2;
  return out;
}

namespace remark {
namespace {

__extension__ typedef __int128 int128;

constexpr int kTaylorTerms = 41;

// n-th derivative at 0 of x^j e^{a x}.
int128 derivative_at_zero(int n, int j, int a) {
  if (n < j) return 0;
  int128 v = 1;
  for (int i = 0; i < j; ++i) v *= n - i;
  for (int i = 0; i < n - j; ++i) v *= a;
  return v;
}

struct TaylorCoefficients {
  std::array<double, kTaylorTerms> g0{};  // G_0
  std::array<double, kTaylorTerms> e{};   // x^2 e^x (1 + x - e^x)
};

const TaylorCoefficients& taylor() {
  static const TaylorCoefficients coeffs = [] {
    TaylorCoefficients t;
    for (int n = 0; n < kTaylorTerms; ++n) {
      const int128 g0 =
          -derivative_at_zero(n, 0, 3) + 3 * derivative_at_zero(n, 1, 3) -
          derivative_at_zero(n, 2, 3) + 3 * derivative_at_zero(n, 0, 2) -
          6 * derivative_at_zero(n, 1, 2) - 3 * derivative_at_zero(n, 0, 1) +
          3 * derivative_at_zero(n, 1, 1) + derivative_at_zero(n, 2, 1) +
          (n == 0 ? 1 : 0);
      const int128 e = derivative_at_zero(n, 2, 1) + derivative_at_zero(n, 3, 1) -
                         derivative_at_zero(n, 2, 2);
      t.g0[n] = static_cast<double>(g0);
      t.e[n] = static_cast<double>(e);
    }
    return t;
  }();
  return coeffs;
}

// Below this x the closed forms cancel badly (G ~ c x^4 / 2).
constexpr double kTaylorCutoff = 0.5;

double G_taylor(double c, double x) {
  const auto& t = taylor();
  double sum = 0.0;
  double power = 1.0;  // x^n / n!
  for (int n = 0; n < kTaylorTerms; ++n) {
    if (n > 0) power *= x / n;
    sum += ((c + 1.0) * t.g0[n] + t.e[n]) * power;
  }
  return sum;
}

void check_c_x(double c, double x) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("c must be finite and >= 0");
  if (!(x >= 0.0)) throw DomainError("x must be >= 0");
}

}  // namespace

double F(double c, double x) {
  check_c_x(c, x);
  if (x == 0.0) return c;
  if (std::isinf(x)) return c + 1.0;
  const double h = -std::expm1(-x);
  return c + weighted_power_integral(1.0, 1.0, x) / h;
}

double G_scaled(double c, double x) {
  check_c_x(c, x);
  if (x < kTaylorCutoff) return G_taylor(c, x) * std::exp(-3.0 * x);
  const double e1 = std::exp(-x);
  const double e2 = e1 * e1;
  const double x2 = x * x;
  return (c + 1.0) * (-1.0 + 3.0 * x - x2) +
         (3.0 + 3.0 * c - 6.0 * x - 6.0 * c * x - x2) * e1 +
         (-3.0 - 3.0 * c + 3.0 * x + 3.0 * c * x + 2.0 * x2 + c * x2 + x2 * x) * e2 +
         (c + 1.0) * e2 * e1;
}

double G(double c, double x) {
  check_c_x(c, x);
  if (x < kTaylorCutoff) return G_taylor(c, x);
  return G_scaled(c, x) * std::exp(3.0 * x);
}

double H(double c, double x) {
  check_c_x(c, x);
  const double e1 = std::exp(-x);
  return (c + 1.0) * (7.0 - 3.0 * x) - (14.0 + 12.0 * c + 2.0 * x) * e1 +
         (7.0 + 5.0 * c + 5.0 * x + c * x + x * x) * e1 * e1;
}

double H_prime(double c, double x) {
  check_c_x(c, x);
  const double e1 = std::exp(-x);
  return -3.0 * (c + 1.0) + (12.0 + 12.0 * c + 2.0 * x) * e1 -
         (9.0 + 9.0 * c + 8.0 * x + 2.0 * c * x + 2.0 * x * x) * e1 * e1;
}

double J(double c, double x) {
  check_c_x(c, x);
  return -10.0 - 12.0 * c - 2.0 * x +
         (10.0 + 16.0 * c + 12.0 * x + 4.0 * c * x + 4.0 * x * x) * std::exp(-x);
}

double J_prime(double c, double x) {
  check_c_x(c, x);
  const double e1 = std::exp(-x);
  return 2.0 * std::expm1(-x) - (12.0 * c + 4.0 * x + 4.0 * c * x + 4.0 * x * x) * e1;
}

double DF(double c, double x) {
  check_c_x(c, x);
  if (!(x > 0.0)) throw DomainError("D(F) needs x > 0");
  const double h = -std::expm1(-x);
  const double g = c * h + weighted_power_integral(1.0, 1.0, x);
  return G_scaled(c, x) * std::exp(-x) / (g * g * h * h);
}

double G0(double x) {
  const double e1 = std::exp(x);
  const double x2 = x * x;
  return (-1.0 + 3.0 * x - x2) * e1 * e1 * e1 + (3.0 - 6.0 * x) * e1 * e1 +
         (-3.0 + 3.0 * x + x2) * e1 + 1.0;
}

double G0_scaled(double x) {
  const double e1 = std::exp(-x);
  const double x2 = x * x;
  return (-1.0 + 3.0 * x - x2) + (3.0 - 6.0 * x) * e1 +
         (-3.0 + 3.0 * x + x2) * e1 * e1 + e1 * e1 * e1;
}

}  // namespace remark

double g0_root() { return bisect(remark::G0_scaled, 1.0, 3.0, 1e-10).root(); }

RemarkReport remark_linear_analysis(double c, double x_max, const ScanGrid& grid) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("c must be finite and >= 0");
  if (!(x_max > grid.x_min) || !std::isfinite(x_max)) {
    throw DomainError(fmt::format("x_max must be finite and > {}", grid.x_min));
  }
  RemarkReport report;
  report.c = c;
  report.J0 = remark::J(c, 0.0);
  report.H_prime_at_60 = remark::H_prime(c, 60.0);

  const std::vector<double> xs = log_grid(grid.x_min, x_max, grid.points_per_decade);
  double prev = report.J0;
  for (const double x : xs) {
    const double j = remark::J(c, x);
    if (j > prev + 1e-12 * std::max(1.0, std::abs(prev))) report.J_nonincreasing = false;
    prev = j;
  }

  const ConvexityReport scan =
      sign_scan([c](double x) { return remark::G_scaled(c, x); }, x_max, grid);
  report.sign_profile = scan.sign_profile;
  report.classification = scan.classification;
  report.nonpositive = std::all_of(scan.sign_profile.begin(), scan.sign_profile.end(),
                                   [](const SignInterval& s) { return s.sign <= 0; });
  if (scan.transitions.size() == 1) report.x0 = scan.transitions.front();

  if (c == 0.0) {
    report.note = report.nonpositive ? "G <= 0 on all samples: concave"
                                     : "G takes positive values for c = 0";
  } else if (report.classification == Classification::kConvexThenConcave) {
    report.note = fmt::format("D(F) > 0 on (0, {0:.12g}), < 0 on ({0:.12g}, {1:.6g}]",
                              report.x0->x0, x_max);
  } else {
    report.note = "unexpected sign pattern for c > 0";
  }
  return report;
}

}  // namespace gml
