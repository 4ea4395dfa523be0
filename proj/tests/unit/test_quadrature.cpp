#include <cmath>
#include <cstdlib>

#include <doctest.h>

#include "gml/errors.hpp"
#include "gml/parallel.hpp"
#include "gml/quadrature.hpp"
#include "util.hpp"

using namespace gml;

TEST_CASE("adaptive integration examples") {
  CHECK(adaptive_integrate([](double) { return 1.0; }, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(adaptive_integrate([](double t) { return std::sin(t); }, 0, kPi), 2.0) < 1e-13);
  CHECK(rel_err(adaptive_integrate([](double t) { return t * std::exp(t); }, 0, 1), 1.0) < 1e-13);
  CHECK(adaptive_integrate([](double t) { return t; }, 2, 2) == 0.0);
}

TEST_CASE("adaptive integration handles endpoint singularities and kinks") {
  CHECK(rel_err(adaptive_integrate([](double t) { return 1 / std::sqrt(t); }, 0, 1), 2.0) < 1e-10);
  CHECK(rel_err(adaptive_integrate([](double t) { return std::abs(t - 0.3); }, 0, 1), 0.29) < 1e-12);
}

TEST_CASE("adaptive integration reports nonconvergence with its best estimate") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 3;
  try {
    adaptive_integrate([](double t) { return std::sin(1 / (t + 1e-3)); }, 0, 1, cfg);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("periodic trapezoid examples") {
  CHECK(rel_err(periodic_trapezoid([](double) { return 1.0; }, 16), kTwoPi) < 1e-15);
  CHECK(rel_err(periodic_trapezoid([](double t) { return std::cos(t) * std::cos(t); }, 16), kPi) < 1e-15);
  CHECK(rel_err(periodic_trapezoid([](double t) { return std::norm(std::polar(1.0, t)); }, 8), kTwoPi) < 1e-15);
  QuadratureConfig cfg;
  CHECK(rel_err(periodic_trapezoid_converged([](double t) { return std::exp(std::cos(t)); }, cfg),
                kTwoPi * std::cyl_bessel_i(0.0, 1.0)) < 1e-13);
}

TEST_CASE("periodic rule falls back for kinked integrands") {
  QuadratureConfig cfg;
  cfg.max_angular_nodes = 256;
  CHECK_THROWS_AS(periodic_trapezoid_converged([](double t) { return std::abs(std::sin(t)); }, cfg),
                  NonConvergenceError);
  CHECK(rel_err(periodic_integrate([](double t) { return std::abs(std::sin(t)); }, cfg), 4.0) < 1e-11);
}

TEST_CASE("disk integral of polynomials and Gaussians") {
  const auto cfg = QuadratureConfig::composite();
  CHECK(rel_err(disk_integral([](complex) { return 1.0; }, complex(3, -1), 2.0, cfg), 4 * kPi) < 1e-12);
  CHECK(rel_err(disk_integral([](complex z) { return std::exp(-std::norm(z)); }, 0.0, 1.0, cfg),
                1.9858653037988715) < 1e-12);
  CHECK(rel_err(disk_integral([](complex z) { return std::exp(-std::norm(z)); }, complex(1, 1), 0.7, cfg),
                0.25140540233041469) < 1e-11);
}

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  cfg.rel_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = QuadratureConfig{};
  cfg.angular_nodes = 7;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK(QuadratureConfig::composite().inner().rel_tol < QuadratureConfig::composite().rel_tol);
}

TEST_CASE("bisection") {
  const auto b = bisect([](double x) { return x * x - 2; }, 0, 2, 1e-14);
  CHECK(std::abs(b.root() - std::sqrt(2.0)) < 1e-14);
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1; }, 0, 2, 1e-12), DomainError);
}

TEST_CASE("parallel_for fills every slot and rethrows the lowest failing index") {
  std::vector<int> slots(1000, 0);
  parallel_for(slots.size(), [&](std::size_t i) { slots[i] = static_cast<int>(i) * 2; });
  for (std::size_t i = 0; i < slots.size(); ++i) CHECK(slots[i] == static_cast<int>(i) * 2);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw DomainError(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()) == "17");
  }
  CHECK(worker_count() >= 1);
}
