#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "gml/errors.hpp"
#include "gml/integral_means.hpp"
#include "util.hpp"

using namespace gml;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
const double kMonoZ = (1 - 2 * std::exp(-1.0)) / (1 - std::exp(-1.0));
}  // namespace

TEST_CASE("monomial means") {
  CHECK(means_monomial(0, 3.5, -2.0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(means_monomial(1, 2, 1, 1), kMonoZ) < 1e-14);
  CHECK(rel_err(means_monomial(1, 2, 1, kInf), 1.0) < 1e-14);
  CHECK(rel_err(means_monomial(3, 2, 1, kInf), 6.0) < 1e-13);
  CHECK(means_monomial(2, 2, 1, 0.0) == 0.0);
  CHECK(means_monomial(0, 2, 1, 0.0) == 1.0);
  // alpha = 0 is the plain area average: 2 r^{pk} / (pk + 2).
  CHECK(rel_err(means_monomial(2, 1.5, 0.0, 2.0), 2 * std::pow(2.0, 3.0) / 5.0) < 1e-13);
}

TEST_CASE("series means for p = 2") {
  CHECK(rel_err(means_series_p2(PowerSeriesFunction({1.0, 1.0}), 1, 1), 1 + kMonoZ) < 1e-14);
  CHECK(means_series_p2(PowerSeriesFunction(), 1, 1) == 0.0);
  CHECK(rel_err(means_series_p2(PowerSeriesFunction({0.0, 0.0, 3.0}), 1, 2),
                9 * means_monomial(2, 2, 1, 2)) < 1e-14);
  CHECK(rel_err(means_series_p2(PowerSeriesFunction({1.0, 1.0}), 1, kInf), 2.0) < 1e-14);
}

TEST_CASE("angular means") {
  const auto cfg = QuadratureConfig{};
  CHECK(rel_err(angular_mean(PowerSeriesFunction::monomial(1), 2, 3, cfg), kTwoPi * 9) < 1e-13);
  CHECK(rel_err(angular_mean(PowerSeriesFunction({1.0, 1.0}), 2, 1, cfg), 4 * kPi) < 1e-13);
  CHECK(rel_err(angular_mean(PowerSeriesFunction({1.0}), 0.7, 2.5, cfg), kTwoPi) < 1e-14);
  // |1 + e^{i theta}| = 2 |cos(theta / 2)| integrates to 8.
  CHECK(rel_err(angular_mean(PowerSeriesFunction({1.0, 1.0}), 1, 1, cfg), 8.0) < 1e-11);
}

TEST_CASE("generic means by quadrature") {
  CHECK(rel_err(means_generic(PowerSeriesFunction({1.0}), 1.3, -0.5, 2.0), 1.0) < 1e-14);
  CHECK(rel_err(means_generic(PowerSeriesFunction::monomial(1), 2, 1, 1), kMonoZ) < 1e-9);
  // mpmath nested quadrature and a 4000^2 Cartesian Riemann sum.
  const double v = means_generic(PowerSeriesFunction({1.0, 1.0}), 1, 1, 1);
  CHECK(rel_err(v, 1.1095759898234403) < 1e-10);
  CHECK(std::abs(v - 1.1095761700259494) < 1e-6);
  CHECK(rel_err(means_generic(PowerSeriesFunction({1.0, 1.0}), 3.5, -1, 1.5), 6.7899776307758412) < 1e-9);
}

TEST_CASE("sweep matches single radii") {
  const PowerSeriesFunction f({complex(0.3, -1), 2.0, complex(0, 0.5)});
  const std::vector<double> radii = {0.2, 0.9, 1.4, 2.5};
  const auto sweep = means_generic_sweep(f, 1.5, -0.7, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    CHECK(rel_err(sweep[i], means_generic(f, 1.5, -0.7, radii[i])) < 1e-9);
  }
  const std::vector<double> bad = {1.0, 0.5};
  CHECK_THROWS_AS(means_generic_sweep(f, 2, 1, bad), DomainError);
}

TEST_CASE("means at infinity") {
  for (int k = 0; k <= 5; ++k) {
    CHECK(rel_err(means_at_infinity(PowerSeriesFunction::monomial(k), 2, 1), std::tgamma(k + 1.0)) < 1e-10);
  }
  CHECK(means_at_infinity(PowerSeriesFunction({1.0}), 2, 1) == 1.0);
  CHECK(rel_err(means_at_infinity(PowerSeriesFunction::monomial(1), 2, 2), 0.5) < 1e-10);
  // Elliptic-integral oracle for the kinked integrand |z^2 - 1|.
  CHECK(rel_err(means_at_infinity(PowerSeriesFunction({-1.0, 0.0, 1.0}), 1, 1), 1.4667431066911093) < 1e-10);
  CHECK_THROWS_AS(means_at_infinity(PowerSeriesFunction::monomial(1), 2, -1), DivergentIntegralError);
  CHECK_THROWS_AS(means_at_infinity(PowerSeriesFunction::monomial(1), 2, 0), DivergentIntegralError);
}

TEST_CASE("radial derivative") {
  CHECK(means_derivative(PowerSeriesFunction({1.0}), 2, 1, 0.8) == 0.0);
  CHECK(means_derivative(PowerSeriesFunction({5.0}), 1, -1, 2.0) == 0.0);
  const double d = means_derivative(PowerSeriesFunction::monomial(1), 2, 1, 1);
  CHECK(rel_err(d, 0.67739377467693179) < 1e-9);
  const double h = 1e-5;
  const double fd = (means_monomial(1, 2, 1, 1 + h) - means_monomial(1, 2, 1, 1 - h)) / (2 * h);
  CHECK(rel_err(d, fd) < 1e-8);
  CHECK_THROWS_AS(means_derivative(PowerSeriesFunction::monomial(1), 2, 1, 0.0), DomainError);
}

TEST_CASE("maximum principle chain") {
  const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0};
  const auto rep = maximum_principle_check(PowerSeriesFunction({1.0, 1.0}), 2, 1, grid);
  CHECK(rep.holds());
  CHECK(rep.lower_bound == 1.0);
  REQUIRE(rep.upper_bound);
  CHECK(rel_err(*rep.upper_bound, 2.0) < 1e-10);
  for (std::size_t i = 1; i < rep.values.size(); ++i) CHECK(rep.values[i] >= rep.values[i - 1]);

  const auto flat = maximum_principle_check(PowerSeriesFunction({complex(0, 2)}), 3, -1, grid);
  for (const double v : flat.values) CHECK(rel_err(v, 8.0) < 1e-14);
  const auto z = maximum_principle_check(PowerSeriesFunction::monomial(1), 2, 1, grid);
  CHECK(z.lower_bound == 0.0);
  CHECK(z.values.front() < 0.15);
  CHECK(!maximum_principle_check(PowerSeriesFunction::monomial(1), 2, -1, grid).upper_bound);
}

TEST_CASE("embedding bound") {
  const auto one = embed_bound_check(PowerSeriesFunction({1.0}), 2, 1);
  CHECK(one.holds());
  const auto z = embed_bound_check(PowerSeriesFunction::monomial(1), 2, 1);
  // lhs = pi (1 - 2/e), rhs = pi (1 - 1/e) * 1
  CHECK(rel_err(z.lhs, kPi * (1 - 2 * std::exp(-1.0))) < 1e-9);
  CHECK(rel_err(z.rhs, kPi * (1 - std::exp(-1.0))) < 1e-9);
  CHECK(z.holds());
  CHECK(embed_bound_check(PowerSeriesFunction({1.0, 1.0}), 1, 2).holds());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(means_monomial(1, 0, 1, 1), DomainError);
  CHECK_THROWS_AS(means_generic(PowerSeriesFunction({1.0, 1.0}), -1, 1, 1), DomainError);
  CHECK_THROWS_AS((MeansParams{2, -1, kInf}.validate()), DomainError);
  CHECK_THROWS_AS(means_generic(PowerSeriesFunction({1.0, 1.0}), 2, -1, 30), OverflowGuardError);
}
