#include "gml/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "gml/convexity.hpp"
#include "gml/errors.hpp"
#include "gml/fock_trace.hpp"
#include "gml/integral_means.hpp"
#include "gml/measures.hpp"
#include "gml/parallel.hpp"
#include "gml/special.hpp"

namespace gml {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) { return format_number(v); }

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// Number of sign changes among the nonzero entries.
int sign_changes(const std::vector<SignInterval>& profile) {
  int changes = 0;
  int last = 0;
  for (const auto& run : profile) {
    if (run.sign == 0) continue;
    if (last != 0 && run.sign != last) ++changes;
    last = run.sign;
  }
  return changes;
}

std::vector<PowerSeriesFunction> random_set(Rng& rng, int count, int max_degree) {
  std::vector<PowerSeriesFunction> out;
  for (int i = 0; i < count; ++i) out.push_back(random_polynomial(rng, max_degree, 2.0));
  return out;
}

Outcome g0_root_criterion() {
  const auto start = Clock::now();
  const double root = g0_root();
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const double err = std::abs(root - 1.86047095);
  return {err <= 1e-6 && seconds < 0.1,
          fmt::format("root {} (|err| {}); {}", num(root), num(err),
                      seconds < 0.1 ? "under 0.1 s" : "over the 0.1 s budget")};
}

Outcome route_agreement_criterion(std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  const auto polys = random_set(rng, 200, 6);
  const std::vector<double> radii = {0.5, 1.0, 2.0};
  const std::vector<double> alphas = {-1.0, 1.0};
  std::vector<double> series_err(polys.size(), 0.0);
  std::vector<double> monomial_err(polys.size(), 0.0);
  parallel_for(polys.size(), [&](std::size_t i) {
    const auto& f = polys[i];
    const int d = f.degree();
    const auto lead = PowerSeriesFunction::monomial(d, f.coeff(d));
    for (const double alpha : alphas) {
      const auto quad = means_generic_sweep(f, 2.0, alpha, radii);
      const auto quad_lead = means_generic_sweep(lead, 2.0, alpha, radii);
      for (std::size_t j = 0; j < radii.size(); ++j) {
        const double series = means_series_p2(f, alpha, radii[j]);
        series_err[i] = std::max(series_err[i], std::abs(series - quad[j]) / series);
        const double closed =
            std::norm(f.coeff(d)) * means_monomial(d, 2.0, alpha, radii[j]);
        monomial_err[i] =
            std::max(monomial_err[i], std::abs(closed - quad_lead[j]) / closed);
      }
    }
  });
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const double worst_series = *std::max_element(series_err.begin(), series_err.end());
  const double worst_mono = *std::max_element(monomial_err.begin(), monomial_err.end());
  const bool ok = worst_series <= 1e-8 && worst_mono <= 1e-8 && seconds < 60.0;
  return {ok, fmt::format("max rel diff series/quadrature {}, monomial closed form/quadrature {}; {}",
                          num(worst_series), num(worst_mono),
                          seconds < 60.0 ? "under 60 s" : "over the 60 s budget")};
}

Outcome maximum_principle_criterion(std::uint64_t seed) {
  Rng rng(seed);
  const auto polys = random_set(rng, 200, 6);
  const std::vector<double> radii = {0.25, 0.5, 1.0, 1.5, 2.0};
  const std::vector<double> ps = {1.0, 2.0, 3.5};
  const std::vector<double> alphas = {-1.0, 1.0};
  const std::size_t cases = ps.size() * alphas.size();
  std::vector<std::string> failure(polys.size() * cases);
  parallel_for(failure.size(), [&](std::size_t idx) {
    const auto& f = polys[idx / cases];
    const double p = ps[(idx % cases) / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const auto rep = maximum_principle_check(f, p, alpha, radii);
    if (!rep.holds()) {
      failure[idx] = fmt::format("poly {} p={} alpha={}: {}", idx / cases, p, alpha,
                                 rep.violations.front());
    }
  });
  int failures = 0;
  std::string first;
  for (const auto& msg : failure) {
    if (msg.empty()) continue;
    if (failures++ == 0) first = msg;
  }
  if (failures == 0) {
    return {true, fmt::format("{} chains nondecreasing and within bounds", failure.size())};
  }
  return {false, fmt::format("{} of {} chains violated; first: {}", failures,
                             failure.size(), first)};
}

Outcome monotone_concavity_criterion() {
  const auto xs = log_space(1e-3, 30.0, 200);
  double worst = -std::numeric_limits<double>::infinity();
  for (const double lambda : {0.5, 1.0, 2.0, 5.0}) {
    for (const double x : xs) worst = std::max(worst, delta_functional(lambda, 1.0, x));
  }
  return {worst <= 1e-10, fmt::format("max Delta over 800 samples {}", num(worst))};
}

// Location in ln r where the discrete second differences of ln M(z^k, r)
// turn from positive to negative; NaN unless there is exactly one such turn.
double discrete_turn(int k, double p, double alpha, double x_max, double* step) {
  const int n = 600;
  const double u_lo = std::log(0.05);
  const double u_hi = 0.5 * std::log(x_max);
  const double h = (u_hi - u_lo) / (n - 1);
  *step = h;
  std::vector<double> u(n), g(n);
  for (int i = 0; i < n; ++i) {
    u[i] = u_lo + h * i;
    g[i] = std::log(means_monomial(k, p, alpha, std::exp(u[i])));
  }
  const auto d2 = second_differences(u, g);
  int changes = 0;
  double turn = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < d2.size(); ++i) {
    if ((d2[i - 1] > 0.0) != (d2[i] > 0.0)) {
      ++changes;
      turn = 0.5 * (u[i] + u[i + 1]);
    }
  }
  return changes == 1 && d2.front() > 0.0 ? turn : std::numeric_limits<double>::quiet_NaN();
}

Outcome transition_point_criterion() {
  struct Case {
    int k;
    double p;
    double alpha;
  };
  bool ok = true;
  std::vector<std::string> parts;
  for (const Case& c : {Case{1, 2.0, -1.0}, Case{2, 2.0, -1.0}, Case{1, 1.0, -2.0}}) {
    const auto rep = classify_monomial_means(c.k, c.p, c.alpha, 100.0);
    const double bound = (c.p * c.k + 2.0) / (-2.0 * c.alpha);
    bool case_ok = rep.transitions.size() == 1 &&
                   rep.classification == Classification::kConvexThenConcave;
    std::string text = fmt::format("(k={},p={},alpha={}) ", c.k, c.p, c.alpha);
    if (!case_ok) {
      text += fmt::format("{} sign changes", rep.transitions.size());
    } else {
      const double x0 = rep.transitions.front().x0;
      double step = 0.0;
      const double turn = discrete_turn(c.k, c.p, c.alpha, 100.0, &step);
      const double offset = std::abs(turn - 0.5 * std::log(x0));
      case_ok = std::sqrt(x0) > std::sqrt(bound) && std::isfinite(turn) &&
                offset <= 2.0 * step;
      text += fmt::format("x0 {} vs bound {}, discrete turn off by {} steps", num(x0),
                          num(bound), std::isfinite(turn) ? num(offset / step) : "nan");
    }
    ok = ok && case_ok;
    parts.push_back(text);
  }
  return {ok, fmt::format("{}", fmt::join(parts, "; "))};
}

Outcome proof_diagnostics_criterion() {
  const auto xs = log_space(1e-2, 20.0, 100);
  double min_d1 = std::numeric_limits<double>::infinity();
  double max_d2 = -std::numeric_limits<double>::infinity();
  for (const double lambda : {0.5, 1.0, 2.0}) {
    for (const double alpha : {-1.0, 1.0}) {
      for (const double x : xs) {
        const auto diag = proof_diagnostics(lambda, alpha, x);
        min_d1 = std::min(min_d1, diag.d1);
        max_d2 = std::max(max_d2, diag.d2);
      }
    }
  }
  bool ok = min_d1 >= -1e-12 && max_d2 < 0.0;
  std::vector<std::string> roots;
  for (const double lambda : {0.5, 1.0, 2.0}) {
    const auto rep = sign_scan(
        [lambda](double x) { return proof_diagnostics(lambda, -1.0, x).delta1; }, 50.0,
        ScanGrid{});
    const bool one = rep.transitions.size() == 1;
    const double x_star = one ? rep.transitions.front().x0 : 0.0;
    ok = ok && one && x_star > lambda + 1.0;
    roots.push_back(one ? fmt::format("lambda={}: x* {}", lambda, num(x_star))
                        : fmt::format("lambda={}: {} sign changes", lambda,
                                      rep.transitions.size()));
  }
  return {ok, fmt::format("min d1 {}, max d2 {}; {}", num(min_d1), num(max_d2),
                          fmt::join(roots, ", "))};
}

Outcome series_convexity_criterion(std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedull);
  const auto polys = random_set(rng, 100, 6);
  const auto radii = log_space(0.02, 1.0, 60);
  double worst = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (const auto& f : polys) {
    const auto rep = series_convexity_check(f, -1.0, radii);
    worst = std::min(worst, rep.min_second_difference);
    if (!rep.convex) ++failures;
  }
  return {failures == 0, fmt::format("{} of 100 failed; min second difference {}",
                                     failures, num(worst))};
}

Outcome remark_linear_criterion() {
  const double lambda = g0_root();
  const double x_lo = lambda * (1.0 + 1e-3) * (1.0 + 1e-3);
  const auto tail = log_space(x_lo, 60.0, 200);
  bool ok = true;
  std::vector<std::string> parts;
  for (const double c : {0.0, 1.0, 4.0}) {
    const auto rep = remark_linear_analysis(c, 20.0);
    double worst_tail = -std::numeric_limits<double>::infinity();
    for (const double x : tail) worst_tail = std::max(worst_tail, remark::DF(c, x));
    bool case_ok = worst_tail <= 0.0;
    std::string text = fmt::format("c={}: ", c);
    if (c == 0.0) {
      case_ok = case_ok && rep.nonpositive;
      text += rep.nonpositive ? "D(F) <= 0 on (0, 20]" : "D(F) positive somewhere";
    } else {
      const bool unique = rep.x0.has_value() && sign_changes(rep.sign_profile) == 1;
      case_ok = case_ok && unique && rep.J0 == 4.0 * c;
      text += fmt::format("J(0) {}, ", num(rep.J0));
      text += unique ? fmt::format("x0 {}", num(rep.x0->x0)) : "no unique sign change";
    }
    text += fmt::format(", max D(F) past sqrt(lambda) {}", num(worst_tail));
    ok = ok && case_ok;
    parts.push_back(text);
  }
  const double probe = remark::DF(100.0, lambda - 0.05);
  ok = ok && probe > 0.0;
  parts.push_back(fmt::format("probe D(F)(c=100, lambda-0.05) {}", num(probe)));
  return {ok, fmt::format("{}", fmt::join(parts, "; "))};
}

Outcome sharp_inequalities_criterion(std::uint64_t seed) {
  Rng rng(seed ^ 0x9a9ull);
  int poincare_fail = 0;
  for (int i = 0; i < 500; ++i) {
    if (!poincare_gap(random_polynomial(rng, 10, 2.0)).holds()) ++poincare_fail;
  }
  const auto z = PowerSeriesFunction::monomial(1);
  const auto eq = poincare_gap(z);
  const double poincare_eq = std::abs(eq.lhs - eq.rhs) / eq.rhs;
  int iso_fail = 0;
  for (int k = 1; k <= 20; ++k) {
    if (!iso_sobolev_check(PowerSeriesFunction::monomial(k), true).holds()) ++iso_fail;
  }
  const auto iso = iso_sobolev_check(z, true);
  const double iso_eq = std::abs(iso.lhs - iso.rhs) / iso.rhs;
  int gamma_fail = 0;
  for (int k = 1; k <= 200; ++k) {
    if (!(gamma_half_ratio(k) <= std::sqrt((k + 1) / 2.0))) ++gamma_fail;
  }
  const bool ok = poincare_fail == 0 && poincare_eq <= 1e-12 && iso_fail == 0 &&
                  iso_eq <= 1e-10 && gamma_fail == 0;
  return {ok, fmt::format("poincare failures {}, equality gap at z {}; sharp iso failures {}, "
                          "equality gap at z {}; gamma ratio failures {}",
                          poincare_fail, num(poincare_eq), iso_fail, num(iso_eq), gamma_fail)};
}

Outcome trace_conditions_criterion() {
  const auto start = Clock::now();
  std::vector<std::string> parts;

  // (a) Lebesgue measure, p = q = 2, m = 0.
  const auto leb = lebesgue_measure();
  const auto sup = carleson_sup_statistic(leb, LatticeParams::defaults(1.0, 2.0, 2.0, 0));
  const double sup_err = std::abs(sup.value - kPi);
  const auto ratios = trace_ratio_family(monomial_family(6), leb, 2.0, 2.0, 0);
  double ratio_err = 0.0;
  for (const double r : ratios.ratios) ratio_err = std::max(ratio_err, std::abs(r - 1.0));
  const bool a_ok = sup_err <= 1e-6 && ratio_err <= 1e-8 && !sup.unbounded;
  parts.push_back(fmt::format("(a) sup {} (|err| {}), max |ratio - 1| {}", num(sup.value),
                              num(sup_err), num(ratio_err)));

  // (b) growing atomic weights, m = 1, p = q = 2.
  const auto lat = LatticeParams::defaults(1.0, 2.0, 2.0, 1);
  const auto grow = growing_atomic_measure(1, 2.0, lat.r_trunc);
  const auto gsup = carleson_sup_statistic(grow, lat);
  const auto kr = trace_ratio_family(kernel_family({2.0, 4.0, 6.0}), grow, 2.0, 2.0, 1);
  const bool increasing = kr.ratios[0] < kr.ratios[1] && kr.ratios[1] < kr.ratios[2];
  const bool b_ok = gsup.unbounded && increasing;
  parts.push_back(fmt::format("(b) sup flagged {}, kernel ratios {} {} {}",
                              gsup.unbounded ? "unbounded" : "bounded", num(kr.ratios[0]),
                              num(kr.ratios[1]), num(kr.ratios[2])));

  // (c) single atom, q < p: every lattice centre within r of the atom adds 1.
  LatticeParams one;
  one.s = 1.0;
  one.r = 1.5;
  one.r_trunc = 15.0;
  one.p = 2.0;
  one.q = 1.0;
  one.m = 0;
  const auto sum = carleson_sum_statistic(unit_atom_measure(), one);
  int expected = 0;
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      if (i * i + j * j <= 2) ++expected;  // |a|^2 <= 2.25 on the integer lattice
    }
  }
  const bool c_ok = sum.value == expected && sum.tail_bound == 0.0 && !sum.divergent;
  parts.push_back(fmt::format("(c) lattice sum {} vs {} centres", num(sum.value), expected));

  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  parts.push_back(seconds < 120.0 ? "under 120 s" : "over the 120 s budget");
  return {a_ok && b_ok && c_ok && seconds < 120.0, fmt::format("{}", fmt::join(parts, "; "))};
}

Outcome khinchine_criterion(std::uint64_t seed) {
  Rng rng(seed ^ 0x4b1ull);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(1, 12);
    std::vector<complex> c(n);
    for (auto& v : c) v = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    const auto res = khinchine_check(c, 2.0);
    worst = std::max(worst, std::abs(res.lp_avg - res.l2_norm) / res.l2_norm);
  }
  const auto pair = khinchine_check({1.0, 1.0}, 1.0);
  return {worst <= 1e-14 && pair.lp_avg == 1.0,
          fmt::format("max rel gap at p=2 {}; c=(1,1), p=1 average {}", num(worst),
                      num(pair.lp_avg))};
}

struct Spec {
  const char* id;
  const char* title;
};

constexpr Spec kSpecs[] = {
    {"g0-root", "G0 root by bisection"},
    {"route-agreement", "series, closed form and quadrature agree"},
    {"maximum-principle", "means nondecreasing in r and bounded"},
    {"monotone-concavity", "monomial log-concavity for alpha > 0"},
    {"transition-point", "single convex-to-concave transition for alpha < 0"},
    {"proof-diagnostics", "signs of d1, d2 and delta1"},
    {"series-convexity", "log-convexity of polynomial means on (0, 1]"},
    {"remark-linear", "means of c + z"},
    {"sharp-inequalities", "Poincare and iso-Sobolev inequalities"},
    {"trace-conditions", "lattice statistics and trace ratios"},
    {"khinchine", "Khinchine averages"},
    {"determinism", "repeated runs give identical JSON"},
};

Outcome determinism_criterion(std::uint64_t seed) {
  AcceptanceOptions inner;
  inner.seed = seed;
  for (const auto& id : criterion_ids()) {
    if (id != "determinism") inner.only.push_back(id);
  }
  const std::string first = render_json(acceptance_report(run_acceptance(inner), inner));
  const std::string second = render_json(acceptance_report(run_acceptance(inner), inner));
  return {first == second, first == second
                               ? fmt::format("two runs, {} bytes each, identical", first.size())
                               : "the two JSON reports differ"};
}

Outcome run_one(const std::string& id, std::uint64_t seed) {
  if (id == "g0-root") return g0_root_criterion();
  if (id == "route-agreement") return route_agreement_criterion(seed);
  if (id == "maximum-principle") return maximum_principle_criterion(seed);
  if (id == "monotone-concavity") return monotone_concavity_criterion();
  if (id == "transition-point") return transition_point_criterion();
  if (id == "proof-diagnostics") return proof_diagnostics_criterion();
  if (id == "series-convexity") return series_convexity_criterion(seed);
  if (id == "remark-linear") return remark_linear_criterion();
  if (id == "sharp-inequalities") return sharp_inequalities_criterion(seed);
  if (id == "trace-conditions") return trace_conditions_criterion();
  if (id == "khinchine") return khinchine_criterion(seed);
  return determinism_criterion(seed);
}

}  // namespace

double Rng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

PowerSeriesFunction random_polynomial(Rng& rng, int max_degree, double b) {
  const int degree = rng.integer(0, max_degree);
  std::vector<complex> coeffs(degree + 1);
  for (auto& c : coeffs) c = complex(rng.uniform(-b, b), rng.uniform(-b, b));
  return PowerSeriesFunction(std::move(coeffs));
}

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& spec : kSpecs) out.emplace_back(spec.id);
    return out;
  }();
  return ids;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const auto& ids = criterion_ids();
  for (const auto& id : options.only) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw DomainError(fmt::format("unknown criterion '{}'", id));
    }
  }
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), ids[i]) == options.only.end()) {
      continue;
    }
    CriterionResult res;
    res.number = static_cast<int>(i) + 1;
    res.id = ids[i];
    res.title = kSpecs[i].title;
    const auto start = Clock::now();
    try {
      const Outcome outcome = run_one(ids[i], options.seed);
      res.passed = outcome.passed;
      res.detail = outcome.detail;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = fmt::format("error: {}", e.what());
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(std::move(res));
  }
  return out;
}

Report acceptance_report(const std::vector<CriterionResult>& results,
                         const AcceptanceOptions& options) {
  Report report;
  report.command = "verify-paper";
  report.params.emplace_back("seed", static_cast<std::int64_t>(options.seed));
  report.params.emplace_back(
      "only", options.only.empty() ? std::string("all")
                                   : fmt::format("{}", fmt::join(options.only, ",")));
  auto& table = report.add_table("criteria", {"number", "id", "title", "passed", "detail"});
  std::int64_t passed = 0;
  std::vector<std::string> failed;
  for (const auto& res : results) {
    table.add_row({static_cast<std::int64_t>(res.number), res.id, res.title, res.passed,
                   res.detail});
    if (res.passed) {
      ++passed;
    } else {
      failed.push_back(res.id);
    }
  }
  report.summary.emplace_back("criteria_run", static_cast<std::int64_t>(results.size()));
  report.summary.emplace_back("criteria_passed", passed);
  report.summary.emplace_back("all_passed", failed.empty());
  if (!failed.empty()) {
    report.summary.emplace_back("failed", fmt::format("{}", fmt::join(failed, ",")));
  }
  return report;
}

}  // namespace gml
