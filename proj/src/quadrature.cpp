#include "gml/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "gml/errors.hpp"

namespace gml {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Interval {
  double a;
  double b;
  double value;
  double error;
  double abs_value;  // integral of |f|, for the roundoff floor
};

// QUADPACK qk15 error heuristics.
Interval gauss_kronrod_15(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double res_k = f_center * kWgk[7];
  double res_g = f_center * kWg[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  const double value = res_k * half;
  res_abs *= scale;
  res_asc *= scale;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  if (!std::isfinite(value)) {
    throw NumericalError(
        fmt::format("non-finite integrand on [{}, {}]", a, b));
  }
  return {a, b, value, err, res_abs};
}

bool by_error(const Interval& x, const Interval& y) {
  if (x.error != y.error) return x.error < y.error;
  return x.a > y.a;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (abs_tol < 0.0) throw DomainError("abs_tol must be nonnegative");
  if (angular_nodes < 8 || angular_nodes % 2 != 0) {
    throw DomainError("angular_nodes must be even and at least 8");
  }
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

QuadratureConfig QuadratureConfig::inner() const {
  QuadratureConfig cfg = *this;
  cfg.rel_tol = std::max(1e-13, 0.01 * rel_tol);
  cfg.abs_tol = 0.01 * abs_tol;
  return cfg;
}

QuadratureResult integrate_with_error(const RealFunction& f, double a,
                                      double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integration limits must be finite");
  }
  if (a > b) throw DomainError("integration requires a <= b");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Interval> heap;
  heap.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + 1);
  heap.push_back(gauss_kronrod_15(f, a, b));
  for (;;) {
    double total = 0.0;
    double total_err = 0.0;
    double total_abs = 0.0;
    for (const auto& iv : heap) {
      total += iv.value;
      total_err += iv.error;
      total_abs += iv.abs_value;
    }
    // Each interval's error estimate is floored at 50 eps of its |f| integral,
    // so a tolerance below that floor is met once the floor dominates.
    const double target = std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total),
                                    200.0 * kEps * total_abs});
    if (total_err <= target) {
      return {total, total_err, static_cast<int>(heap.size())};
    }
    if (static_cast<int>(heap.size()) >= cfg.max_subdivisions) {
      throw NonConvergenceError(
          fmt::format("adaptive quadrature on [{}, {}] did not converge: "
                      "estimate {} with error bound {}",
                      a, b, total, total_err),
          total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Interval worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergenceError(
          fmt::format("adaptive quadrature hit machine resolution near {}",
                      worst.a),
          total, total_err);
    }
    heap.push_back(gauss_kronrod_15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gauss_kronrod_15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

double adaptive_integrate(const RealFunction& f, double a, double b,
                          const QuadratureConfig& cfg) {
  return integrate_with_error(f, a, b, cfg).value;
}

double periodic_trapezoid(const RealFunction& f, int nodes) {
  if (nodes < 1) throw DomainError("periodic_trapezoid needs nodes >= 1");
  const double h = kTwoPi / nodes;
  double sum = 0.0;
  for (int j = 0; j < nodes; ++j) sum += f(h * j);
  return h * sum;
}

double periodic_trapezoid_converged(const RealFunction& f,
                                    const QuadratureConfig& cfg,
                                    int start_nodes) {
  int nodes = std::max(cfg.angular_nodes, start_nodes);
  double previous = periodic_trapezoid(f, nodes);
  while (2 * nodes <= cfg.max_angular_nodes) {
    // Reuse the existing nodes: only the midpoints are new.
    const double h = kTwoPi / nodes;
    double odd = 0.0;
    for (int j = 0; j < nodes; ++j) odd += f(h * (j + 0.5));
    const double current = 0.5 * (previous + h * odd);
    nodes *= 2;
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(current));
    if (std::abs(current - previous) <= target) return current;
    previous = current;
  }
  throw NonConvergenceError(
      fmt::format("periodic trapezoid did not converge with {} nodes", nodes),
      previous, std::abs(previous) * cfg.rel_tol);
}

double periodic_integrate(const RealFunction& f, const QuadratureConfig& cfg,
                          int start_nodes) {
  try {
    return periodic_trapezoid_converged(f, cfg, start_nodes);
  } catch (const NonConvergenceError&) {
    return adaptive_integrate(f, 0.0, kTwoPi, cfg);
  }
}

double disk_integral(const PlaneFunction& g, complex center, double radius,
                     const QuadratureConfig& cfg, int start_nodes) {
  if (!(radius >= 0.0)) throw DomainError("disk radius must be nonnegative");
  const QuadratureConfig angular = cfg.inner();
  auto ring = [&](double rho) {
    if (rho == 0.0) return kTwoPi * rho * g(center);
    auto on_circle = [&](double theta) {
      return g(center + std::polar(rho, theta));
    };
    return rho * periodic_integrate(on_circle, angular, start_nodes);
  };
  return adaptive_integrate(ring, 0.0, radius, cfg);
}

Bracket bisect(const RealFunction& f, double lo, double hi, double x_tol) {
  if (!(lo < hi)) throw DomainError("bisection needs lo < hi");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, lo};
  if (f_hi == 0.0) return {hi, hi};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw DomainError(
        fmt::format("no sign change on [{}, {}] ({} vs {})", lo, hi, f_lo, f_hi));
  }
  for (int it = 0; it < 400 && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {mid, mid};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace gml
