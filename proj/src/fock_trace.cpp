#include "gml/fock_trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gml/errors.hpp"
#include "gml/integral_means.hpp"
#include "gml/parallel.hpp"
#include "gml/special.hpp"

namespace gml {
namespace {

constexpr double kTailRel = 1e-16;

void check_exponent(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{} must be finite and > 0, got {}", name, v));
  }
}

void check_order(int m) {
  if (m < 0) throw DomainError(fmt::format("m must be >= 0, got {}", m));
}

// Radius beyond which int s^{2 lambda} e^{-q s^2 / 2} s ds has lost all but
// kTailRel of its mass.
double gaussian_tail_radius(double lambda, double q) {
  return std::sqrt(2.0 * gamma_tail_threshold(lambda, kTailRel) / q);
}

// log of int |z|^{p n} e^{-p |z|^2 / 2} dA = pi Gamma(pn/2 + 1) (2/p)^{pn/2 + 1}.
double log_monomial_norm_power(double p, int n) {
  const double lambda = 0.5 * p * n;
  return std::log(kPi) + std::lgamma(lambda + 1.0) +
         (lambda + 1.0) * std::log(2.0 / p);
}

std::string complex_label(complex a) {
  return fmt::format("{:.6g}{:+.6g}i", a.real(), a.imag());
}

}  // namespace

complex kernel_eval(complex w, complex z) {
  const complex exponent = z * std::conj(w) - 0.5 * std::norm(w);
  if (exponent.real() > 700.0) {
    throw OverflowGuardError(fmt::format(
        "kernel exponent {} exceeds the overflow guard", exponent.real()));
  }
  return std::exp(exponent);
}

complex kernel_remainder(complex a, complex z, int m) {
  check_order(m);
  const complex abar = std::conj(a);
  const complex u = z * abar;
  if (m == 0) {
    if (u.real() > 700.0) throw OverflowGuardError("kernel remainder exponent too large");
    return std::exp(u);
  }
  if (std::abs(u) <= 2.0) {
    // conj(a)^m sum_{j>=m} u^{j-m} / j!
    complex sum = 0.0;
    complex term = 1.0;
    for (int j = 1; j <= m; ++j) term /= static_cast<double>(j);
    for (int j = m; j < m + 60; ++j) {
      sum += term;
      term *= u / static_cast<double>(j + 1);
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return std::pow(abar, m) * sum;
  }
  if (u.real() > 700.0) throw OverflowGuardError("kernel remainder exponent too large");
  complex taylor = 0.0;
  complex term = 1.0;
  for (int j = 0; j < m; ++j) {
    taylor += term;
    term *= u / static_cast<double>(j + 1);
  }
  return (std::exp(u) - taylor) / std::pow(z, m);
}

TestFunction TestFunction::monomial(int k) {
  if (k < 0) throw DomainError("monomial degree must be >= 0");
  TestFunction f;
  f.kind = Kind::kMonomial;
  f.k = k;
  return f;
}

TestFunction TestFunction::kernel(complex a) {
  TestFunction f;
  f.kind = Kind::kKernel;
  f.a = a;
  return f;
}

TestFunction TestFunction::remainder(complex a, int m) {
  check_order(m);
  TestFunction f;
  f.kind = Kind::kKernelRemainder;
  f.a = a;
  f.m = m;
  return f;
}

std::string TestFunction::label() const {
  switch (kind) {
    case Kind::kMonomial:
      return fmt::format("z^{}", k);
    case Kind::kKernel:
      return fmt::format("k_a(a={})", complex_label(a));
    case Kind::kKernelRemainder:
      return fmt::format("remainder(a={},m={})", complex_label(a), m);
  }
  return "";
}

complex TestFunction::operator()(complex z) const {
  switch (kind) {
    case Kind::kMonomial:
      return std::pow(z, k);
    case Kind::kKernel:
      return kernel_eval(a, z);
    case Kind::kKernelRemainder:
      return kernel_remainder(a, z, m);
  }
  return 0.0;
}

double TestFunction::weighted_abs(complex z) const {
  const double rho2 = std::norm(z);
  switch (kind) {
    case Kind::kMonomial:
      if (k == 0) return std::exp(-0.5 * rho2);
      if (rho2 == 0.0) return 0.0;
      return std::exp(0.5 * k * std::log(rho2) - 0.5 * rho2);
    case Kind::kKernel:
      return std::exp(-0.5 * std::norm(z - a));
    case Kind::kKernelRemainder:
      return std::abs(kernel_remainder(a, z, m)) * std::exp(-0.5 * rho2);
  }
  return 0.0;
}

complex TestFunction::center() const {
  return kind == Kind::kKernel ? a : complex(0.0);
}

double TestFunction::essential_radius(double q, int m0) const {
  check_exponent(q, "q");
  check_order(m0);
  switch (kind) {
    case Kind::kMonomial:
      return gaussian_tail_radius(0.5 * q * (k + m0), q);
    case Kind::kKernel:
      return gaussian_tail_radius(0.5 * q * m0, q) + 2.0;
    case Kind::kKernelRemainder:
      return std::abs(a) + gaussian_tail_radius(0.5 * q * m0, q) + 2.0;
  }
  return 0.0;
}

double fock_sobolev_norm(const PowerSeriesFunction& f, double p, int m,
                         const QuadratureConfig& cfg) {
  check_exponent(p, "p");
  check_order(m);
  if (f.is_zero()) return 0.0;
  if (const auto k = f.monomial_degree()) {
    return std::abs(f.coeff(*k)) * std::exp(log_monomial_norm_power(p, *k + m) / p);
  }
  const double integral =
      2.0 * kPi / p * means_at_infinity(f.times_power(m), p, 0.5 * p, cfg);
  return std::pow(integral, 1.0 / p);
}

double fock_sobolev_norm(const TestFunction& f, double p, int m,
                         const QuadratureConfig& cfg) {
  check_exponent(p, "p");
  check_order(m);
  if (f.kind == TestFunction::Kind::kMonomial) {
    return std::exp(log_monomial_norm_power(p, f.k + m) / p);
  }
  if (f.kind == TestFunction::Kind::kKernel && m == 0) {
    return std::pow(2.0 * kPi / p, 1.0 / p);
  }
  auto integrand = [&](complex z) {
    const double w = f.weighted_abs(z);
    if (w == 0.0) return 0.0;
    return std::pow(std::pow(std::abs(z), m) * w, p);
  };
  const double integral =
      disk_integral(integrand, f.center(), f.essential_radius(p, m), cfg);
  return std::pow(integral, 1.0 / p);
}

double lq_norm(const TestFunction& f, const MeasureSpec& mu, double q,
               const QuadratureConfig& cfg) {
  check_exponent(q, "q");
  auto integrand = [&](complex z) { return std::pow(f.weighted_abs(z), q); };
  const double integral =
      integrate_measure(mu, integrand, f.center(), f.essential_radius(q, 0), cfg);
  return std::pow(integral, 1.0 / q);
}

double lq_norm(const PowerSeriesFunction& f, const MeasureSpec& mu, double q,
               const QuadratureConfig& cfg) {
  check_exponent(q, "q");
  if (f.is_zero()) return 0.0;
  auto integrand = [&](complex z) {
    return f.abs_pow(z, q) * std::exp(-0.5 * q * std::norm(z));
  };
  // |f(z)| <= S (1 + |z|)^n; pad the monomial tail radius for the (1 + |z|).
  const double radius =
      gaussian_tail_radius(0.5 * q * std::max(f.degree(), 0), q) + 1.0 +
      std::sqrt(2.0 * std::max(0.0, std::log(f.modulus_bound(1.0) + 1.0)) / q);
  const double integral = integrate_measure(mu, integrand, 0.0, radius, cfg);
  return std::pow(integral, 1.0 / q);
}

double trace_ratio(const TestFunction& f, const MeasureSpec& mu, double p,
                   double q, int m, const QuadratureConfig& cfg) {
  const double denominator = fock_sobolev_norm(f, p, m, cfg);
  if (!(denominator > 0.0)) throw DomainError("trace ratio needs a nonzero F^{p,m} norm");
  return lq_norm(f, mu, q, cfg) / denominator;
}

double trace_ratio(const PowerSeriesFunction& f, const MeasureSpec& mu, double p,
                   double q, int m, const QuadratureConfig& cfg) {
  const double denominator = fock_sobolev_norm(f, p, m, cfg);
  if (!(denominator > 0.0)) throw DomainError("trace ratio needs a nonzero F^{p,m} norm");
  return lq_norm(f, mu, q, cfg) / denominator;
}

double FamilyRatios::max() const {
  double out = 0.0;
  for (const double r : ratios) out = std::max(out, r);
  return out;
}

FamilyRatios trace_ratio_family(const std::vector<TestFunction>& family,
                                const MeasureSpec& mu, double p, double q, int m,
                                const QuadratureConfig& cfg) {
  FamilyRatios out;
  out.ratios.resize(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    out.ratios[i] = trace_ratio(family[i], mu, p, q, m, cfg);
  });
  for (const auto& f : family) out.labels.push_back(f.label());
  return out;
}

std::vector<TestFunction> monomial_family(int max_degree) {
  std::vector<TestFunction> out;
  for (int k = 0; k <= max_degree; ++k) out.push_back(TestFunction::monomial(k));
  return out;
}

std::vector<TestFunction> kernel_family(const std::vector<complex>& points) {
  std::vector<TestFunction> out;
  for (const auto& a : points) out.push_back(TestFunction::kernel(a));
  return out;
}

std::vector<TestFunction> remainder_family(const std::vector<complex>& points, int m) {
  std::vector<TestFunction> out;
  for (const auto& a : points) out.push_back(TestFunction::remainder(a, m));
  return out;
}

LatticeParams LatticeParams::defaults(double r, double p, double q, int m) {
  LatticeParams lat;
  lat.r = r;
  lat.s = 0.5 * r;
  lat.r_trunc = 10.0 * std::max(1.0, r);
  lat.p = p;
  lat.q = q;
  lat.m = m;
  return lat;
}

void LatticeParams::validate() const {
  check_exponent(s, "s");
  check_exponent(r, "r");
  check_exponent(p, "p");
  check_exponent(q, "q");
  check_order(m);
  if (s > r) throw DomainError(fmt::format("lattice spacing s = {} exceeds r = {}", s, r));
  if (!(r_trunc >= 10.0 * std::max(1.0, r)) || !std::isfinite(r_trunc)) {
    throw DomainError(fmt::format("r_trunc = {} must be at least 10 max(1, r) = {}",
                                  r_trunc, 10.0 * std::max(1.0, r)));
  }
}

std::vector<complex> LatticeParams::centers() const {
  validate();
  const int n = static_cast<int>(std::floor(r_trunc / s));
  std::vector<complex> out;
  for (int j = -n; j <= n; ++j) {
    for (int i = -n; i <= n; ++i) {
      const complex a(s * i, s * j);
      if (std::abs(a) <= r_trunc * (1.0 + 1e-12)) out.push_back(a);
    }
  }
  return out;
}

SupStatistic carleson_sup_statistic(const MeasureSpec& mu, const LatticeParams& lat,
                                    const QuadratureConfig& cfg) {
  const std::vector<complex> centers = lat.centers();
  const double exponent = lat.m * lat.q;
  auto statistic = [&](complex a) {
    return ball_mass(mu, a, lat.r, cfg) / std::pow(1.0 + std::abs(a), exponent);
  };
  std::vector<double> values(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) { values[i] = statistic(centers[i]); });

  SupStatistic out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (values[i] > values[best]) best = i;
    if (std::abs(centers[i]) <= 0.5 * lat.r_trunc) {
      out.inner_max = std::max(out.inner_max, values[i]);
    } else {
      out.outer_max = std::max(out.outer_max, values[i]);
    }
  }
  out.value = values[best];
  out.argmax = centers[best];

  std::vector<complex> patch;
  const double h = 0.25 * lat.s;
  for (int j = -4; j <= 4; ++j) {
    for (int i = -4; i <= 4; ++i) {
      if (i != 0 || j != 0) patch.push_back(centers[best] + complex(h * i, h * j));
    }
  }
  std::vector<double> refined(patch.size());
  parallel_for(patch.size(), [&](std::size_t i) { refined[i] = statistic(patch[i]); });
  for (std::size_t i = 0; i < patch.size(); ++i) {
    if (refined[i] > out.value) {
      out.value = refined[i];
      out.argmax = patch[i];
    }
  }

  out.unbounded = out.outer_max > 1.25 * out.inner_max;
  if (mu.support_radius > lat.r_trunc) {
    out.warnings.push_back(fmt::format(
        "support extends beyond r_trunc = {:.6g}; centres sampled only up to it",
        lat.r_trunc));
  }
  out.warnings.push_back("sup sampled on a lattice with one refinement pass; a lower bound");
  return out;
}

SumStatistic carleson_sum_statistic(const MeasureSpec& mu, const LatticeParams& lat,
                                    const QuadratureConfig& cfg) {
  lat.validate();
  if (!(lat.q < lat.p)) {
    throw DomainError(fmt::format(
        "lattice sum needs q < p (exponent p/(p-q)); got p = {}, q = {}", lat.p, lat.q));
  }
  const std::vector<complex> centers = lat.centers();
  const double power = lat.p / (lat.p - lat.q);
  const double exponent = lat.m * lat.q;
  std::vector<double> terms(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const double mass = ball_mass(mu, centers[i], lat.r, cfg);
    terms[i] = mass > 0.0
                   ? std::exp(power * (std::log(mass) -
                                       exponent * std::log1p(std::abs(centers[i]))))
                   : 0.0;
  });
  SumStatistic out;
  double shell = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    out.value += terms[i];
    if (std::abs(centers[i]) > 0.9 * lat.r_trunc) shell += terms[i];
  }
  out.shell_fraction = out.value > 0.0 ? shell / out.value : 0.0;
  out.divergent = out.shell_fraction > 1e-3;
  if (mu.support_radius + lat.r < lat.r_trunc) {
    out.tail_bound = 0.0;
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
    out.warnings.push_back(fmt::format(
        "balls centred beyond r_trunc = {:.6g} meet the support; tail not bounded",
        lat.r_trunc));
  }
  return out;
}

MeasureSpec composition_measure(complex a, complex b, double q) {
  if (a == complex(0.0)) throw DomainError("composition map z -> a z + b needs a != 0");
  check_exponent(q, "q");
  const double scale = 1.0 / std::norm(a);
  return MeasureSpec::plane(
      [a, b, q, scale](complex w) {
        return scale * std::exp(-0.5 * q * std::norm((w - b) / a));
      },
      "composition");
}

MeasureSpec volterra_measure(const PowerSeriesFunction& phi, double q) {
  check_exponent(q, "q");
  const PowerSeriesFunction dphi = phi.derivative();
  if (dphi.is_zero()) return MeasureSpec::atoms({}, "volterra");
  return MeasureSpec::plane(
      [dphi, q](complex z) {
        return std::pow(std::abs(dphi(z)) / (1.0 + std::abs(z)), q);
      },
      "volterra");
}

InequalitySides poincare_gap(const PowerSeriesFunction& f) {
  InequalitySides out;
  for (int k = 1; k <= f.degree(); ++k) {
    const double w = std::norm(f.coeff(k)) * std::tgamma(k + 1.0);
    out.lhs += w;
    out.rhs += k * w;
  }
  out.lhs *= kPi;
  out.rhs *= kPi;
  return out;
}

InequalitySides poincare_gap_quadrature(const PowerSeriesFunction& f,
                                        const QuadratureConfig& cfg) {
  InequalitySides out;
  out.lhs = kPi * means_at_infinity(f, 2.0, 1.0, cfg) - kPi * std::norm(f(0.0));
  out.rhs = kPi * means_at_infinity(f.derivative(), 2.0, 1.0, cfg);
  return out;
}

double derivative_l1_norm(const PowerSeriesFunction& f, const QuadratureConfig& cfg) {
  const PowerSeriesFunction df = f.derivative();
  if (df.is_zero()) return 0.0;
  if (const auto k = f.monomial_degree()) {
    // int |k z^{k-1}| e^{-|z|^2/2} dA = 2 pi k 2^{(k-1)/2} Gamma((k+1)/2)
    const int n = *k;
    return std::abs(f.coeff(n)) * 2.0 * kPi * n *
           std::exp(0.5 * (n - 1) * std::log(2.0) + std::lgamma(0.5 * (n + 1)));
  }
  return 2.0 * kPi * means_at_infinity(df, 1.0, 0.5, cfg);
}

InequalitySides iso_sobolev_check(const PowerSeriesFunction& f, bool sharp,
                                  const QuadratureConfig& cfg) {
  if (sharp && !f.is_constant() && !f.monomial_degree()) {
    throw DomainError("the sharp constant is only checked for monomials");
  }
  InequalitySides out;
  out.lhs = poincare_gap(f).lhs;
  const double l1 = derivative_l1_norm(f, cfg);
  out.rhs = l1 * l1 / ((sharp ? 4.0 : 2.0) * kPi);
  return out;
}

int rademacher(int j, double t) {
  if (j < 0) throw DomainError("Rademacher index must be >= 0");
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("Rademacher argument must lie in [0, 1)");
  const double u = std::ldexp(t, j);
  return u - std::floor(u) < 0.5 ? 1 : -1;
}

KhinchineResult khinchine_check(const std::vector<complex>& c, double p) {
  check_exponent(p, "p");
  if (c.empty()) throw DomainError("Khinchine check needs at least one coefficient");
  if (c.size() > 24) throw DomainError("Khinchine check supports at most 24 coefficients");
  const int n = static_cast<int>(c.size());
  const long intervals = 1L << (n + 1);
  double total = 0.0;
  for (long i = 0; i < intervals; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(intervals);
    complex s = 0.0;
    for (int j = 0; j < n; ++j) s += c[j] * static_cast<double>(rademacher(j + 1, t));
    total += p == 2.0 ? std::norm(s) : std::pow(std::norm(s), 0.5 * p);
  }
  KhinchineResult out;
  out.lp_avg = std::pow(total / static_cast<double>(intervals), 1.0 / p);
  double l2 = 0.0;
  for (const auto& v : c) l2 += std::norm(v);
  out.l2_norm = std::sqrt(l2);
  return out;
}

}  // namespace gml
