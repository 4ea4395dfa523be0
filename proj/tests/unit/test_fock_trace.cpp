#include <cmath>
#include <vector>

#include <doctest.h>

#include "gml/errors.hpp"
#include "gml/fock_trace.hpp"
#include "util.hpp"

using namespace gml;

TEST_CASE("Fock-Sobolev norms") {
  const double sqrt_pi = std::sqrt(kPi);
  CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction({1.0}), 2, 0), sqrt_pi) < 1e-14);
  CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction::monomial(1), 2, 0), sqrt_pi) < 1e-14);
  CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction({1.0}), 2, 1), sqrt_pi) < 1e-14);
  for (int k = 0; k <= 6; ++k) {
    for (int m = 0; m <= 2; ++m) {
      const double closed = std::sqrt(kPi * std::tgamma(k + m + 1.0));
      CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction::monomial(k), 2, m), closed) < 1e-12);
    }
  }
  // Orthogonality: ||1 + z||^2 = pi + pi.
  CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction({1.0, 1.0}), 2, 0), std::sqrt(2 * kPi)) < 1e-10);
  CHECK(rel_err(fock_sobolev_norm(PowerSeriesFunction({1.0, 0.0, 2.0}), 2, 1),
                std::sqrt(kPi * (1 + 4 * 6))) < 1e-10);
  CHECK(fock_sobolev_norm(PowerSeriesFunction(), 2, 0) == 0.0);
}

TEST_CASE("monomial norms by quadrature match the closed form") {
  for (int k = 1; k <= 4; ++k) {
    const auto f = PowerSeriesFunction::monomial(k);
    const auto t = TestFunction::monomial(k);
    const double closed = fock_sobolev_norm(f, 2, 1);
    CHECK(rel_err(fock_sobolev_norm(t, 2, 1), closed) < 1e-10);
  }
  // The order-1 remainder at a = 1 is (e^z - 1) / z, whose norm has no shortcut.
  const double rem = fock_sobolev_norm(TestFunction::remainder(1.0, 1), 2, 1);
  // ||z (e^z - 1)/z||^2 = ||e^z - 1||^2 = pi (e - 1).
  CHECK(rel_err(rem, std::sqrt(kPi * (std::exp(1.0) - 1.0))) < 1e-9);
  CHECK(rel_err(fock_sobolev_norm(TestFunction::remainder(0.0, 0), 2, 2),
                fock_sobolev_norm(PowerSeriesFunction::monomial(0), 2, 2)) < 1e-8);
}

TEST_CASE("kernels") {
  CHECK(std::abs(kernel_eval(0.0, complex(3, 4)) - 1.0) < 1e-15);
  CHECK(std::abs(kernel_eval(1.0, 1.0) - std::exp(0.5)) < 1e-15);
  const complex w(2, 3);
  CHECK(std::abs(std::abs(kernel_eval(w, w)) * std::exp(-0.5 * std::norm(w)) - 1.0) < 1e-14);
  CHECK_THROWS_AS(kernel_eval(40.0, 40.0), OverflowGuardError);
  // Every normalized kernel has the same F^p norm.
  CHECK(rel_err(fock_sobolev_norm(TestFunction::kernel(complex(1, -2)), 2, 0), std::sqrt(kPi)) < 1e-14);
  // ||z k_a||^2 = pi (1 + |a|^2).
  CHECK(rel_err(fock_sobolev_norm(TestFunction::kernel(2.0), 2, 1), std::sqrt(5 * kPi)) < 1e-9);
}

TEST_CASE("kernel remainders") {
  const complex a(1, 2), z(3, 1);
  CHECK(std::abs(kernel_remainder(a, z, 0) - std::exp(z * std::conj(a))) < 1e-12 * std::abs(std::exp(z * std::conj(a))));
  CHECK(std::abs(kernel_remainder(a, 0.0, 1) - std::conj(a)) < 1e-15);
  CHECK(std::abs(kernel_remainder(a, 1e-9, 1) - std::conj(a)) < 1e-8);
  CHECK(std::abs(kernel_remainder(0.0, z, 1)) == 0.0);
  const complex u = z * std::conj(a);
  const complex direct = (std::exp(u) - 1.0 - u - u * u / 2.0) / std::pow(z, 3);
  CHECK(std::abs(kernel_remainder(a, z, 3) - direct) < 1e-12 * std::abs(direct));
  // Series and direct branches meet continuously at |z conj(a)| = 2.
  const complex b(1, 0);
  CHECK(std::abs(kernel_remainder(b, 1.999999, 2) - kernel_remainder(b, 2.000001, 2)) < 1e-5);
}

TEST_CASE("ball masses of induced measures") {
  const auto v = volterra_measure(PowerSeriesFunction({0.0, 0.0, 1.0}), 2);
  CHECK(rel_err(ball_mass(v, 0.5, 1.0), 2.3796855413473427) < 1e-10);
  const auto flat = volterra_measure(PowerSeriesFunction({3.0}), 2);
  CHECK(ball_mass(flat, 0.0, 10.0) == 0.0);
  const auto lin = volterra_measure(PowerSeriesFunction::monomial(1), 2);
  CHECK(carleson_sup_statistic(lin, LatticeParams::defaults(1, 2, 2, 0)).value <= kPi);

  const auto id = composition_measure(1.0, 0.0, 2.0);
  CHECK(rel_err(ball_mass(id, 0.0, 1.0), 1.9858653037988715) < 1e-8);
  const auto sup = carleson_sup_statistic(id, LatticeParams::defaults(1, 2, 2, 0));
  CHECK(rel_err(sup.value, 1.9858653037988715) < 1e-8);
  CHECK(!sup.unbounded);
  const auto shifted = carleson_sup_statistic(composition_measure(1.0, 5.0, 2.0),
                                              LatticeParams::defaults(1, 2, 2, 0));
  CHECK(std::abs(shifted.argmax - complex(5, 0)) < 0.2);
  const auto doubled = composition_measure(2.0, 0.0, 2.0);
  CHECK(rel_err(ball_mass(doubled, 0.0, 2.0), 1.9858653037988715) < 1e-8);
  CHECK_THROWS_AS(composition_measure(0.0, 1.0, 2.0), DomainError);
}

TEST_CASE("trace ratios") {
  const auto leb = lebesgue_measure();
  CHECK(rel_err(trace_ratio(PowerSeriesFunction({1.0}), leb, 2, 2, 0), 1.0) < 1e-9);
  CHECK(rel_err(trace_ratio(PowerSeriesFunction::monomial(1), leb, 2, 2, 0), 1.0) < 1e-9);
  CHECK(rel_err(trace_ratio(PowerSeriesFunction({1.0}), unit_atom_measure(), 2, 2, 0),
                1 / std::sqrt(kPi)) < 1e-14);
  CHECK_THROWS_AS(trace_ratio(PowerSeriesFunction(), leb, 2, 2, 0), DomainError);
  const auto fam = trace_ratio_family(monomial_family(6), leb, 2, 2, 0);
  for (const double r : fam.ratios) CHECK(std::abs(r - 1.0) < 1e-8);
  CHECK(fam.labels[3] == "z^3");
}

TEST_CASE("monomial ratios stabilise for a passing measure") {
  const auto fam = trace_ratio_family(monomial_family(10), gaussian_measure(), 2, 2, 0);
  CHECK(fam.ratios[10] <= 1.05 * fam.ratios[8]);
  // int |z|^{2k} e^{-2|z|^2} / int |z|^{2k} e^{-|z|^2} = 2^{-(k+1)}
  for (int k = 0; k <= 10; ++k) CHECK(rel_err(fam.ratios[k], std::pow(2.0, -0.5 * (k + 1))) < 1e-8);
}

TEST_CASE("lattice statistics") {
  const auto leb = lebesgue_measure();
  const auto sup = carleson_sup_statistic(leb, LatticeParams::defaults(1, 2, 2, 0));
  CHECK(std::abs(sup.value - kPi) < 1e-6);
  CHECK(!sup.unbounded);

  LatticeParams one;
  one.r = 1;
  one.q = 2;
  one.m = 1;
  const auto atom = carleson_sup_statistic(unit_atom_measure(), one);
  CHECK(atom.value == 1.0);
  CHECK(atom.argmax == complex(0.0));

  const auto lat = LatticeParams::defaults(1, 2, 2, 1);
  CHECK(carleson_sup_statistic(growing_atomic_measure(1, 2, lat.r_trunc), lat).unbounded);

  LatticeParams sum_lat;
  sum_lat.s = 1;
  sum_lat.r = 1.5;
  sum_lat.r_trunc = 15;
  sum_lat.p = 2;
  sum_lat.q = 1;
  const auto sum = carleson_sum_statistic(unit_atom_measure(), sum_lat);
  CHECK(sum.value == 9.0);
  CHECK(sum.tail_bound == 0.0);
  CHECK(!sum.divergent);
  CHECK(carleson_sum_statistic(MeasureSpec::atoms({}), sum_lat).value == 0.0);
  const auto leb_sum = carleson_sum_statistic(leb, sum_lat);
  CHECK(leb_sum.divergent);
  CHECK(std::isinf(leb_sum.tail_bound));

  LatticeParams bad = sum_lat;
  bad.q = 3;
  CHECK_THROWS_AS(carleson_sum_statistic(leb, bad), DomainError);
  bad = sum_lat;
  bad.s = 2;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = sum_lat;
  bad.r_trunc = 5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("lattice centres are deterministic and symmetric") {
  LatticeParams lat;
  lat.s = 1;
  lat.r = 1;
  lat.r_trunc = 10;
  const auto c = lat.centers();
  CHECK(c.size() == 317);  // integer points in the closed disk of radius 10
  CHECK(c == lat.centers());
}

TEST_CASE("Gaussian Poincare inequality") {
  const auto z = poincare_gap(PowerSeriesFunction::monomial(1));
  CHECK(rel_err(z.lhs, kPi) < 1e-15);
  CHECK(z.lhs == z.rhs);
  const auto c = poincare_gap(PowerSeriesFunction({4.0}));
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  const auto z2 = poincare_gap(PowerSeriesFunction::monomial(2));
  CHECK(rel_err(z2.lhs, 2 * kPi) < 1e-15);
  CHECK(rel_err(z2.rhs, 4 * kPi) < 1e-15);
  const auto equal = poincare_gap(PowerSeriesFunction({3.0, complex(1, -2)}));
  CHECK(equal.lhs == equal.rhs);
  const PowerSeriesFunction f({1.0, complex(0.5, 1), -2.0, complex(0, 0.3)});
  const auto closed = poincare_gap(f);
  const auto quad = poincare_gap_quadrature(f);
  CHECK(rel_err(quad.lhs, closed.lhs) < 1e-8);
  CHECK(rel_err(quad.rhs, closed.rhs) < 1e-8);
  CHECK(closed.holds());
}

TEST_CASE("Gaussian iso-Sobolev inequality") {
  const auto z = iso_sobolev_check(PowerSeriesFunction::monomial(1), true);
  CHECK(rel_err(z.lhs, kPi) < 1e-14);
  CHECK(rel_err(z.rhs, kPi) < 1e-14);
  const auto c = iso_sobolev_check(PowerSeriesFunction({2.0}), true);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  for (int k = 2; k <= 20; ++k) CHECK(iso_sobolev_check(PowerSeriesFunction::monomial(k), true).holds());
  CHECK(iso_sobolev_check(PowerSeriesFunction({1.0, 1.0, 1.0}), false).holds());
  CHECK_THROWS_AS(iso_sobolev_check(PowerSeriesFunction({1.0, 1.0}), true), DomainError);
  CHECK(rel_err(derivative_l1_norm(PowerSeriesFunction({0.0, 1.0, 1.0})), 16.71889436500265) < 1e-10);
  CHECK(rel_err(derivative_l1_norm(PowerSeriesFunction::monomial(1)), kTwoPi) < 1e-14);
}

TEST_CASE("Rademacher functions") {
  CHECK(rademacher(0, 0.25) == 1);
  CHECK(rademacher(0, 0.75) == -1);
  CHECK(rademacher(1, 0.3) == -1);
  CHECK(rademacher(1, 0.3) == rademacher(0, 0.6));
  CHECK(rademacher(0, 0.0) == 1);
  CHECK(rademacher(0, 0.5) == -1);
  CHECK_THROWS_AS(rademacher(0, 1.0), DomainError);
  CHECK_THROWS_AS(rademacher(0, -0.1), DomainError);
}

TEST_CASE("Khinchine averages") {
  for (double p : {0.5, 1.0, 3.0}) {
    const auto single = khinchine_check({1.0}, p);
    CHECK(single.lp_avg == 1.0);
    CHECK(single.l2_norm == 1.0);
  }
  const auto two = khinchine_check({1.0, 1.0}, 2);
  CHECK(rel_err(two.lp_avg, std::sqrt(2.0)) < 1e-15);
  CHECK(rel_err(two.l2_norm, std::sqrt(2.0)) < 1e-15);
  const auto one = khinchine_check({1.0, 1.0}, 1);
  CHECK(one.lp_avg == 1.0);
  CHECK(rel_err(one.ratio(), 1 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(khinchine_check({}, 2), DomainError);
}
