#include <cmath>
#include <vector>

#include <doctest.h>

#include "gml/convexity.hpp"
#include "gml/errors.hpp"
#include "gml/integral_means.hpp"
#include "gml/special.hpp"
#include "util.hpp"

using namespace gml;

TEST_CASE("D functional examples") {
  for (double x : {0.3, 1.0, 7.0}) CHECK(std::abs(d_functional(x, 1, 0, x)) < 1e-15);
  const double e = std::exp(1.0);
  CHECK(rel_err(d_functional(e, e, e, 1), 1.0) < 1e-15);
  CHECK(d_functional(4.0, 0, 0, 2.5) == 0.0);
}

TEST_CASE("Delta against mpmath oracles") {
  CHECK(delta_functional(0, 1, 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rel_err(delta_functional(1, 1, 1), -0.20734392232360923) < 1e-12);
  CHECK(rel_err(delta_functional(1, -1, 1), 0.10448627378495137) < 1e-12);
  CHECK(rel_err(delta_functional(0.5, 1, 0.01), -0.10029432123471789) < 1e-11);
  CHECK(rel_err(delta_functional(2, -1, 10), -0.018048146638796865) < 1e-11);
}

TEST_CASE("stable Delta matches the three-term D functional away from 0") {
  for (double lambda : {0.5, 2.0}) {
    for (double alpha : {-1.0, 1.0}) {
      for (double x : {0.5, 2.0, 6.0}) {
        const auto dl = weighted_power_integral_derivs(lambda, alpha, x);
        const auto d0 = weighted_power_integral_derivs(0, alpha, x);
        const double three_term =
            d_functional(weighted_power_integral(lambda, alpha, x), dl.h1, dl.h2, x) -
            d_functional(weighted_power_integral(0, alpha, x), d0.h1, d0.h2, x);
        CHECK(std::abs(three_term - delta_functional(lambda, alpha, x)) < 1e-9);
      }
    }
  }
}

TEST_CASE("proof diagnostics") {
  const auto d = proof_diagnostics(1, 1, 1);
  CHECK(rel_err(d.d2, 1 - 4 * std::exp(-1.0)) < 1e-13);
  CHECK(d.d2 < 0.0);
  CHECK(proof_diagnostics(2, -1, 1e-6).d1 < 1e-12);
  CHECK(proof_diagnostics(2, -1, 1e-6).d1 >= 0.0);
  for (double x : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(std::abs(proof_diagnostics(1, -1, x).delta1 - delta1_closed_form(1, -1, x)) <
          1e-10 * std::max(1.0, std::abs(delta1_closed_form(1, -1, x))));
  }
  // The sign of dDelta/dlambda follows delta = -h^2 / d2 - d1.
  for (double x : {0.5, 2.0, 5.0}) {
    const auto p = proof_diagnostics(1.0, -1.0, x);
    if (!p.singular) {
      const double eps = 1e-5;
      const double fd = (delta_functional(1 + eps, -1, x) - delta_functional(1 - eps, -1, x)) / (2 * eps);
      CHECK(rel_err(p.ddelta_dlambda, fd) < 1e-6);
    }
  }
}

TEST_CASE("delta1 roots") {
  CHECK(rel_err(delta1_root(0.5, -1), 2.2319214032098468) < 1e-10);
  CHECK(rel_err(delta1_root(1.0, -1), 2.6879993454994913) < 1e-10);
  CHECK(rel_err(delta1_root(2.0, -1), 3.6323090508717679) < 1e-10);
  CHECK(delta1_root(1.0, -1) > 2.0);
}

TEST_CASE("monomial classification") {
  const auto concave = classify_monomial_means(3, 2, 1, 100);
  CHECK(concave.classification == Classification::kConcave);
  CHECK(concave.transitions.empty());
  CHECK(to_string(Classification::kConvexThenConcave) == "convex-then-concave");

  struct Case {
    int k;
    double p, alpha, x0;
  };
  for (const Case& c : {Case{1, 2, -1, 3.1676197847451612}, Case{2, 2, -1, 3.3548286442194923},
                        Case{1, 1, -2, 1.5332980205465649}}) {
    const auto rep = classify_monomial_means(c.k, c.p, c.alpha, 100);
    CHECK(rep.classification == Classification::kConvexThenConcave);
    REQUIRE(rep.transitions.size() == 1);
    CHECK(rel_err(rep.transitions[0].x0, c.x0) < 1e-11);
    CHECK(rep.transitions[0].r0() > corollary_c_bound(c.k, c.p, c.alpha));
  }
  CHECK(classify_monomial_means(0, 2, -1, 100).classification == Classification::kDegenerate);
  CHECK(classify_monomial_means(2, 2, 0, 100).classification == Classification::kDegenerate);
}

TEST_CASE("corollary bound") {
  CHECK(rel_err(corollary_c_bound(1, 2, -1), std::sqrt(2.0)) < 1e-15);
  CHECK(rel_err(corollary_c_bound(0, 2, -1), 1.0) < 1e-15);
  CHECK(rel_err(corollary_c_bound(2, 1, -2), 1.0) < 1e-15);
  CHECK_THROWS_AS(corollary_c_bound(1, 2, 1), DomainError);
}

TEST_CASE("series convexity") {
  std::vector<double> radii;
  for (int i = 0; i < 50; ++i) radii.push_back(0.05 * std::pow(20.0, i / 49.0));
  const auto lin = series_convexity_check(PowerSeriesFunction({1.0, 1.0}), -1, radii);
  CHECK(lin.convex);
  CHECK(lin.min_second_difference >= -1e-7);
  const auto flat = series_convexity_check(PowerSeriesFunction({2.0}), -1, radii);
  for (const double d : flat.second_differences) CHECK(std::abs(d) < 1e-14);
  CHECK(series_convexity_check(PowerSeriesFunction::monomial(3), -1, radii).convex);
}

TEST_CASE("second differences on a nonuniform grid are exact for quadratics") {
  const std::vector<double> u = {0.0, 0.3, 1.0, 1.2, 2.0};
  std::vector<double> g;
  for (const double x : u) g.push_back(3 * x * x - x + 1);
  // The rescaled form equals g'' h1 h2 at each interior point.
  const auto d = second_differences(u, g);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(rel_err(d[i], 6.0 * (u[i + 1] - u[i]) * (u[i + 2] - u[i + 1])) < 1e-12);
  }
}

TEST_CASE("three circles") {
  const auto same1 = three_circles_check(1, 2, -1, 0.7, 0.7, 1.2);
  CHECK(same1.lhs == same1.rhs);
  const auto same2 = three_circles_check(1, 2, -1, 0.3, 1.2, 1.2);
  CHECK(same2.lhs == same2.rhs);
  CHECK(three_circles_check(1, 2, -1, 0.3, 0.7, 1.2).holds());
  CHECK_THROWS_AS(three_circles_check(1, 2, 1, 0.3, 0.7, 1.2), DomainError);
}

TEST_CASE("remark on c + z") {
  CHECK(rel_err(remark::G0(1), std::exp(3.0) - 3 * std::exp(2.0) + std::exp(1.0) + 1) < 1e-13);
  CHECK(remark::G0(1) > 0.0);
  CHECK(rel_err(remark::G0(2), std::exp(6.0) - 9 * std::exp(4.0) + 7 * std::exp(2.0) + 1) < 1e-12);
  CHECK(remark::G0(2) < 0.0);
  CHECK(std::abs(g0_root() - 1.860470949935198) < 1e-9);

  const auto zero = remark_linear_analysis(0, 20);
  CHECK(zero.nonpositive);
  CHECK(zero.classification == Classification::kConcave);
  CHECK(zero.J0 == 0.0);

  for (auto [c, x0] : {std::pair{1.0, 1.4912758526832323}, std::pair{4.0, 1.7361355169321332}}) {
    const auto rep = remark_linear_analysis(c, 20);
    CHECK(rep.J0 == 4 * c);
    CHECK(rep.J_nonincreasing);
    CHECK(rel_err(rep.H_prime_at_60, -3 * (c + 1)) < 1e-6);
    REQUIRE(rep.x0);
    CHECK(rel_err(rep.x0->x0, x0) < 1e-10);
    CHECK(remark::G(c, rep.x0->lo) * remark::G(c, rep.x0->hi) <= 0.0);
  }
  CHECK(remark::DF(100, g0_root() - 0.05) > 0.0);
}

TEST_CASE("remark G: series and closed form agree across the switch") {
  for (double x : {0.3, 0.49, 0.51, 0.7, 1.3}) {
    CHECK(rel_err(remark::G(1, x), remark::G_scaled(1, x) * std::exp(3 * x)) < 1e-9);
  }
}
