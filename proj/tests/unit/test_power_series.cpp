#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "gml/errors.hpp"
#include "gml/power_series.hpp"
#include "util.hpp"

using namespace gml;

TEST_CASE("evaluation and structure") {
  const PowerSeriesFunction f({1.0, complex(0, 2), 0.0, 3.0, 0.0});
  CHECK(f.degree() == 3);
  CHECK(std::abs(f(complex(1, 1)) - (1.0 + complex(0, 2) * complex(1, 1) + 3.0 * std::pow(complex(1, 1), 3))) < 1e-14);
  CHECK(rel_err(f.abs_pow(0.5, 3.0), std::pow(std::abs(f(0.5)), 3.0)) < 1e-14);
  CHECK(!f.monomial_degree());
  CHECK(PowerSeriesFunction::monomial(4, 2.0).monomial_degree() == 4);
  CHECK(PowerSeriesFunction().is_zero());
  CHECK(PowerSeriesFunction::constant(5.0).is_constant());
  CHECK_THROWS_AS(PowerSeriesFunction({1.0, std::nan("")}), DomainError);
}

TEST_CASE("derivative, scaling and shifts") {
  const PowerSeriesFunction f({1.0, 2.0, 3.0});
  const auto df = f.derivative();
  CHECK(df.degree() == 1);
  CHECK(df.coeff(0) == complex(2.0));
  CHECK(df.coeff(1) == complex(6.0));
  CHECK(f.times_power(2).coeff(4) == complex(3.0));
  CHECK(f.times_power(2).coeff(1) == complex(0.0));
  CHECK(f.scaled(complex(0, 1)).coeff(2) == complex(0, 3));
  CHECK(f.modulus_bound(2.0) == 1 + 4 + 12);
}

TEST_CASE("zeros of polynomials") {
  const PowerSeriesFunction g({complex(1, 2), complex(-3, 0.5), 0.0, complex(0, 1)});
  const auto z = g.zeros();
  REQUIRE(z.size() == 3);
  for (const auto& w : z) CHECK(std::abs(g(w)) < 1e-12);
  // numpy.roots oracle
  const complex expected[] = {{1.0897365483329431, -1.6356013205770386},
                              {-1.3550157648439294, 1.0192690333037766},
                              {0.2652792165109864, 0.61633228727326195}};
  for (const auto& e : expected) {
    const double best = std::abs(*std::min_element(z.begin(), z.end(), [&](complex a, complex b) {
      return std::abs(a - e) < std::abs(b - e);
    }) - e);
    CHECK(best < 1e-12);
  }
  CHECK(PowerSeriesFunction({1.0}).zeros().empty());
  const auto origin = PowerSeriesFunction::monomial(3).zeros();
  for (const auto& w : origin) CHECK(std::abs(w) < 1e-4);
}
