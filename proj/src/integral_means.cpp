#include "gml/integral_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gml/errors.hpp"
#include "gml/special.hpp"

namespace gml {
namespace {

constexpr double kSlack = 1e-9;

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError(fmt::format("p must be positive and finite, got {}", p));
  }
}

void check_radius(double r) {
  if (!(r >= 0.0)) throw DomainError(fmt::format("radius must be >= 0, got {}", r));
}

// |f|^p has angular frequencies up to about p * deg; start the periodic rule
// comfortably above that.
int angular_start_nodes(const PowerSeriesFunction& f, double p) {
  const double want = 4.0 * (p * std::max(f.degree(), 0) + 2.0);
  int nodes = 8;
  while (nodes < want && nodes < (1 << 20)) nodes *= 2;
  return nodes;
}

// Integrates |f|^p over circles and radial segments. Unless p is an even
// integer, |f|^p is not smooth where f vanishes: circles passing close to a
// zero are integrated piecewise between the zero angles, and radial integrals
// are split at the zero moduli.
class ZeroAwareRule {
 public:
  ZeroAwareRule(const PowerSeriesFunction& f, double p)
      : f_(f), p_(p), start_(angular_start_nodes(f, p)) {
    if (p == 2.0 * std::round(0.5 * p)) return;
    for (const complex& z : f.zeros()) {
      if (std::abs(z) == 0.0) continue;
      moduli_.push_back(std::abs(z));
      angles_.push_back(std::arg(z) < 0.0 ? std::arg(z) + kTwoPi : std::arg(z));
    }
  }

  // int_0^{2pi} |f(s e^{i theta})|^p d theta
  double circle(double s, const QuadratureConfig& cfg) const {
    if (s == 0.0) return kTwoPi * f_.abs_pow(0.0, p_);
    auto on_circle = [&](double theta) { return f_.abs_pow(std::polar(s, theta), p_); };
    std::vector<double> cuts;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
      if (std::abs(std::log(s / moduli_[j])) < kNearZero) cuts.push_back(angles_[j]);
    }
    if (cuts.empty()) {
      try {
        return periodic_trapezoid_converged(on_circle, cfg, start_);
      } catch (const NonConvergenceError&) {
        cuts = angles_;
      }
    }
    if (cuts.empty()) return adaptive_integrate(on_circle, 0.0, kTwoPi, cfg);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(cuts.front() + kTwoPi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) total += adaptive_integrate(on_circle, cuts[i], cuts[i + 1], cfg);
    }
    return total;
  }

  // int_a^b g(s) ds, split at the zero moduli inside (a, b).
  double radial(const RealFunction& g, double a, double b,
                const QuadratureConfig& cfg) const {
    std::vector<double> nodes = {a};
    for (const double rho : moduli_) {
      if (rho > a && rho < b) nodes.push_back(rho);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (nodes[i + 1] > nodes[i]) total += adaptive_integrate(g, nodes[i], nodes[i + 1], cfg);
    }
    return total;
  }

 private:
  // Circles with |ln(s / |z_j|)| below this are split at arg z_j; farther
  // out the periodic rule converges within a few hundred nodes.
  static constexpr double kNearZero = 0.25;

  const PowerSeriesFunction& f_;
  double p_;
  int start_;
  std::vector<double> moduli_;
  std::vector<double> angles_;
};

// int_a^b M(s) s e^{-alpha s^2} ds
double radial_numerator(const PowerSeriesFunction& f, double p, double alpha,
                        double a, double b, const QuadratureConfig& cfg) {
  const QuadratureConfig angular = cfg.inner();
  const ZeroAwareRule rule(f, p);
  auto integrand = [&](double s) {
    if (s == 0.0) return 0.0;
    return rule.circle(s, angular) * s * std::exp(-alpha * s * s);
  };
  return rule.radial(integrand, a, b, cfg);
}

}  // namespace

void MeansParams::validate() const {
  check_p(p);
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (std::isinf(r) && alpha <= 0.0) {
    throw DomainError("r = inf requires alpha > 0");
  }
}

double RadialWeight::operator()(double r) const {
  return r * std::exp(-alpha * r * r);
}

double RadialWeight::integral(double r) const {
  const double x = r * r;
  if (alpha == 0.0) return 0.5 * x;
  if (std::isinf(r)) {
    if (alpha < 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 / alpha;
  }
  return -std::expm1(-alpha * x) / (2.0 * alpha);
}

double means_monomial(int k, double p, double alpha, double r) {
  if (k < 0) throw DomainError("monomial degree must be >= 0");
  check_p(p);
  check_radius(r);
  if (k == 0) return 1.0;
  if (r == 0.0) return 0.0;
  const double lambda = 0.5 * p * k;
  if (std::isinf(r)) {
    if (alpha <= 0.0) {
      throw DivergentIntegralError("M(inf) diverges for alpha <= 0");
    }
    return std::exp(std::lgamma(lambda + 1.0) - lambda * std::log(alpha));
  }
  const double x = r * r;
  return std::exp(log_weighted_power_integral(lambda, alpha, x) -
                  log_weighted_power_integral(0.0, alpha, x));
}

double means_series_p2(const PowerSeriesFunction& f, double alpha, double r) {
  check_radius(r);
  double sum = 0.0;
  const auto coeffs = f.coeffs();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double weight = std::norm(coeffs[k]);
    if (weight == 0.0) continue;
    sum += weight * means_monomial(static_cast<int>(k), 2.0, alpha, r);
  }
  return sum;
}

double angular_mean(const PowerSeriesFunction& f, double p, double r,
                    const QuadratureConfig& cfg) {
  check_p(p);
  check_radius(r);
  return ZeroAwareRule(f, p).circle(r, cfg);
}

double means_generic(const PowerSeriesFunction& f, double p, double alpha,
                     double r, const QuadratureConfig& cfg) {
  const double radii[] = {r};
  return means_generic_sweep(f, p, alpha, radii, cfg).front();
}

std::vector<double> means_generic_sweep(const PowerSeriesFunction& f, double p,
                                        double alpha,
                                        std::span<const double> radii,
                                        const QuadratureConfig& cfg) {
  check_p(p);
  std::vector<double> out;
  out.reserve(radii.size());
  const RadialWeight weight{alpha};
  const double at_zero = f.abs_pow(0.0, p);
  double previous = 0.0;
  double numerator = 0.0;
  for (const double r : radii) {
    check_radius(r);
    if (std::isinf(r)) throw DomainError("use means_at_infinity for r = inf");
    if (r < previous) throw DomainError("radii must be nondecreasing");
    check_overflow_guard(alpha, r * r);
    if (r == 0.0) {
      out.push_back(at_zero);
      continue;
    }
    if (f.is_constant()) {
      out.push_back(at_zero);
      previous = r;
      continue;
    }
    numerator += radial_numerator(f, p, alpha, previous, r, cfg);
    previous = r;
    out.push_back(numerator / (kTwoPi * weight.integral(r)));
  }
  return out;
}

double means_at_infinity(const PowerSeriesFunction& f, double p, double alpha,
                         const QuadratureConfig& cfg) {
  check_p(p);
  if (!(alpha > 0.0)) {
    throw DivergentIntegralError(
        fmt::format("M(f, inf) diverges for alpha = {} <= 0", alpha));
  }
  if (f.is_constant()) return f.abs_pow(0.0, p);

  // |f(z)|^p <= S^p (1 + |z|^{p n}) with S = sum |a_k|; the two tails of the
  // Gaussian integrals beyond R give an explicit bound.
  const double lambda = 0.5 * p * f.degree();
  const double bound = std::pow(f.modulus_bound(1.0), p);
  auto tail_bound = [&](double radius) {
    const double y = alpha * radius * radius;
    const double poly_tail =
        std::exp(std::lgamma(lambda + 1.0) - (lambda + 1.0) * std::log(alpha)) *
        regularized_upper_gamma(lambda + 1.0, y);
    return kPi * bound * (poly_tail + std::exp(-y) / alpha);
  };

  double radius = std::sqrt(gamma_tail_threshold(lambda, 1e-17) / alpha);
  double numerator = radial_numerator(f, p, alpha, 0.0, radius, cfg);
  for (int grow = 0; tail_bound(radius) > 1e-14 * numerator; ++grow) {
    if (grow >= 40) {
      throw NonConvergenceError("Gaussian tail did not fall below 1e-14",
                                numerator * alpha / kPi,
                                tail_bound(radius) * alpha / kPi);
    }
    const double next = 1.2 * radius;
    numerator += radial_numerator(f, p, alpha, radius, next, cfg);
    radius = next;
  }
  return numerator * alpha / kPi;
}

double means_derivative(const PowerSeriesFunction& f, double p, double alpha,
                        double r, const QuadratureConfig& cfg) {
  check_p(p);
  if (!(r > 0.0) || std::isinf(r)) throw DomainError("means_derivative needs finite r > 0");
  check_overflow_guard(alpha, r * r);
  if (f.is_constant()) return 0.0;
  const QuadratureConfig angular = cfg.inner();
  const ZeroAwareRule rule(f, p);
  const double at_r = rule.circle(r, angular);
  auto integrand = [&](double s) {
    if (s == 0.0) return 0.0;
    return (at_r - rule.circle(s, angular)) * s * std::exp(-alpha * s * s);
  };
  const double gap = rule.radial(integrand, 0.0, r, cfg);
  const RadialWeight weight{alpha};
  const double mass = weight.integral(r);
  return weight(r) * gap / (kTwoPi * mass * mass);
}

MaximumPrincipleReport maximum_principle_check(const PowerSeriesFunction& f,
                                               double p, double alpha,
                                               std::span<const double> radii,
                                               const QuadratureConfig& cfg) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw DomainError("radii must be positive and increasing");
    }
  }
  MaximumPrincipleReport report;
  report.radii.assign(radii.begin(), radii.end());
  report.lower_bound = f.abs_pow(0.0, p);
  report.values = means_generic_sweep(f, p, alpha, radii, cfg);
  if (alpha > 0.0) report.upper_bound = means_at_infinity(f, p, alpha, cfg);

  auto below = [](double a, double b) {
    return a < b - kSlack * std::max(1.0, std::abs(b));
  };
  double prev = report.lower_bound;
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    const double v = report.values[i];
    if (below(v, prev)) {
      report.violations.push_back(
          i == 0 ? fmt::format("M({:.12g}) = {:.12g} < |f(0)|^p = {:.12g}",
                               radii[i], v, prev)
                 : fmt::format("M({:.12g}) = {:.12g} < M({:.12g}) = {:.12g}",
                               radii[i], v, radii[i - 1], prev));
    }
    prev = v;
  }
  if (report.upper_bound && !report.values.empty() &&
      below(*report.upper_bound, report.values.back())) {
    report.violations.push_back(
        fmt::format("M(inf) = {:.12g} < M({:.12g}) = {:.12g}", *report.upper_bound,
                    radii.back(), report.values.back()));
  }
  return report;
}

EmbedBound embed_bound_check(const PowerSeriesFunction& f, double p, double r,
                             const QuadratureConfig& cfg) {
  check_p(p);
  if (!(r > 0.0) || std::isinf(r)) throw DomainError("embed_bound_check needs finite r > 0");
  const double alpha = 0.5 * p;
  EmbedBound out;
  out.lhs = f.is_constant()
                ? f.abs_pow(0.0, p) * kTwoPi * RadialWeight{alpha}.integral(r)
                : radial_numerator(f, p, alpha, 0.0, r, cfg);
  const double disk_weight = kTwoPi * RadialWeight{alpha}.integral(r);
  out.rhs = disk_weight * means_at_infinity(f, p, alpha, cfg);
  return out;
}

}  // namespace gml
