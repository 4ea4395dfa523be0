#include "gml/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gml/acceptance.hpp"
#include "gml/convexity.hpp"
#include "gml/errors.hpp"
#include "gml/fock_trace.hpp"
#include "gml/integral_means.hpp"
#include "gml/measures.hpp"

namespace gml {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    out.push_back(item);
  }
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) {
    throw DomainError(fmt::format("cannot parse '{}' in {}", text, context));
  }
  return v;
}

complex parse_complex(const std::string& token) {
  if (token.empty()) throw DomainError("empty coefficient");
  if (token.back() != 'i') return parse_real(token, "coefficient");
  const std::string body = token.substr(0, token.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  const std::string re = split_at == std::string::npos ? "" : body.substr(0, split_at);
  std::string im = split_at == std::string::npos ? body : body.substr(split_at);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return complex(re.empty() ? 0.0 : parse_real(re, token), parse_real(im, token));
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(fmt::format("{} must be finite", name));
}

MeasureSpec resolve_measure(const TraceOptions& o, double r_trunc) {
  if (o.measure == "lebesgue") return lebesgue_measure();
  if (o.measure == "atom0") return unit_atom_measure();
  if (o.measure == "gaussian") return gaussian_measure();
  if (o.measure == "growing") return growing_atomic_measure(o.m, o.q, r_trunc);
  return load_measure_file(o.measure);
}

void add_sign_profile(Report& report, const std::vector<SignInterval>& profile) {
  auto& table = report.add_table("sign_profile", {"x_lo", "x_hi", "r_lo", "r_hi", "sign"});
  for (const auto& run : profile) {
    table.add_row({run.x_lo, run.x_hi, std::sqrt(run.x_lo), std::sqrt(run.x_hi),
                   static_cast<std::int64_t>(run.sign)});
  }
}

void add_transitions(Report& report, const std::vector<Transition>& transitions) {
  auto& table = report.add_table("transitions", {"x0", "r0", "bracket_lo", "bracket_hi"});
  for (const auto& t : transitions) table.add_row({t.x0, t.r0(), t.lo, t.hi});
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DomainError(fmt::format("cannot open {} for writing", path));
  file << text;
  if (!file) throw DomainError(fmt::format("cannot write {}", path));
}

}  // namespace

std::vector<complex> parse_coefficients(const std::string& text) {
  std::vector<complex> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_complex(token));
  if (out.empty()) throw DomainError("--coeffs needs at least one coefficient");
  for (const auto& c : out) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("coefficients must be finite");
    }
  }
  return out;
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split(text, ',')) {
    const double r = token == "inf" ? kInf : parse_real(token, "--radii");
    if (!(r > 0.0)) throw DomainError(fmt::format("radii must be positive, got {}", token));
    out.push_back(r);
  }
  if (out.empty()) throw DomainError("--radii needs at least one radius");
  return out;
}

Report means_report(const MeansOptions& o) {
  const PowerSeriesFunction f(parse_coefficients(o.coeffs));
  const std::vector<double> radii = parse_radii(o.radii);
  for (const double r : radii) MeansParams{o.p, o.alpha, r}.validate();

  std::vector<double> finite;
  for (const double r : radii) {
    if (std::isfinite(r)) finite.push_back(r);
  }
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
  const std::vector<double> swept = means_generic_sweep(f, o.p, o.alpha, finite);
  const auto mono = f.monomial_degree();

  Report report;
  report.command = "means";
  report.params = {{"coeffs", o.coeffs}, {"p", o.p}, {"alpha", o.alpha}, {"radii", o.radii}};
  auto& table = report.add_table(
      "means", {"r", "value_closed_form", "value_series", "value_quadrature", "derivative"});
  for (const double r : radii) {
    Cell closed;
    if (f.is_zero()) {
      closed = 0.0;
    } else if (mono) {
      closed = std::pow(std::abs(f.coeff(*mono)), o.p) * means_monomial(*mono, o.p, o.alpha, r);
    }
    Cell series;
    if (o.p == 2.0) series = means_series_p2(f, o.alpha, r);
    Cell quadrature;
    Cell derivative;
    if (std::isfinite(r)) {
      const auto at = std::lower_bound(finite.begin(), finite.end(), r) - finite.begin();
      quadrature = swept[at];
      derivative = means_derivative(f, o.p, o.alpha, r);
    } else {
      quadrature = means_at_infinity(f, o.p, o.alpha);
    }
    table.add_row({r, closed, series, quadrature, derivative});
  }

  if (!finite.empty()) {
    const auto chain = maximum_principle_check(f, o.p, o.alpha, finite);
    report.summary.emplace_back("lower_bound", chain.lower_bound);
    report.summary.emplace_back("upper_bound",
                                chain.upper_bound ? Cell(*chain.upper_bound) : Cell());
    report.summary.emplace_back("maximum_principle", chain.holds());
    for (const auto& v : chain.violations) report.notes.push_back(v);
  }
  return report;
}

Report convexity_report(const ConvexityOptions& o) {
  Report report;
  report.command = "convexity";
  if (o.remark_g0) {
    report.params = {{"mode", std::string("remark-g0")}};
    const double root = g0_root();
    report.summary = {{"g0_root", root}, {"sqrt_g0_root", std::sqrt(root)}};
    report.notes.push_back(
        "M_{2,1}(c + z, r) is log-concave in ln r for r > sqrt(g0_root), for every c");
    return report;
  }
  if (o.remark_c) {
    const double c = *o.remark_c;
    check_finite(c, "--remark-c");
    if (c < 0.0) throw DomainError("--remark-c must be >= 0 (it is |a|^2)");
    check_finite(o.x_max, "--x-max");
    report.params = {{"mode", std::string("remark-c")}, {"c", c}, {"x_max", o.x_max}};
    const auto rep = remark_linear_analysis(c, o.x_max);
    add_sign_profile(report, rep.sign_profile);
    std::vector<Transition> t;
    if (rep.x0) t.push_back(*rep.x0);
    add_transitions(report, t);
    report.summary = {{"classification", to_string(rep.classification)},
                      {"J0", rep.J0},
                      {"J_nonincreasing", rep.J_nonincreasing},
                      {"H_prime_at_60", rep.H_prime_at_60},
                      {"g0_root", g0_root()}};
    if (!rep.note.empty()) report.notes.push_back(rep.note);
    return report;
  }
  if (!o.k) throw DomainError("convexity needs --k, --remark-g0 or --remark-c");
  check_finite(o.x_max, "--x-max");
  report.params = {{"mode", std::string("monomial")},
                   {"k", static_cast<std::int64_t>(*o.k)},
                   {"p", o.p},
                   {"alpha", o.alpha},
                   {"x_max", o.x_max}};
  const auto rep = classify_monomial_means(*o.k, o.p, o.alpha, o.x_max);
  add_sign_profile(report, rep.sign_profile);
  add_transitions(report, rep.transitions);
  report.summary = {{"classification", to_string(rep.classification)},
                    {"lambda", rep.lambda}};
  if (o.alpha < 0.0 && *o.k > 0) {
    report.summary.emplace_back("c_lower_bound", corollary_c_bound(*o.k, o.p, o.alpha));
  }
  if (!rep.note.empty()) report.notes.push_back(rep.note);
  return report;
}

Report trace_report(const TraceOptions& o) {
  LatticeParams lat = LatticeParams::defaults(o.r, o.p, o.q, o.m);
  if (o.s) lat.s = *o.s;
  if (o.r_trunc) lat.r_trunc = *o.r_trunc;
  lat.validate();
  const MeasureSpec mu = resolve_measure(o, lat.r_trunc);

  Report report;
  report.command = "trace";
  report.params = {{"measure", o.measure}, {"p", o.p},     {"q", o.q},
                   {"m", static_cast<std::int64_t>(o.m)}, {"r", o.r}, {"s", lat.s},
                   {"r_trunc", lat.r_trunc}};

  const auto sup = carleson_sup_statistic(mu, lat);
  report.summary = {{"sup_value", sup.value},
                    {"sup_argmax_re", sup.argmax.real()},
                    {"sup_argmax_im", sup.argmax.imag()},
                    {"sup_inner_max", sup.inner_max},
                    {"sup_outer_max", sup.outer_max},
                    {"sup_unbounded", sup.unbounded}};
  for (const auto& w : sup.warnings) report.notes.push_back(w);

  bool bounded = !sup.unbounded;
  if (o.q < o.p) {
    const auto sum = carleson_sum_statistic(mu, lat);
    report.summary.emplace_back("sum_value", sum.value);
    report.summary.emplace_back("sum_tail_bound", sum.tail_bound);
    report.summary.emplace_back("sum_shell_fraction", sum.shell_fraction);
    report.summary.emplace_back("sum_divergent", sum.divergent);
    for (const auto& w : sum.warnings) report.notes.push_back(w);
    bounded = !sum.divergent;
  }

  auto& table = report.add_table("trace_ratios", {"family", "member", "ratio"});
  const auto monomials = trace_ratio_family(monomial_family(10), mu, o.p, o.q, o.m);
  for (std::size_t i = 0; i < monomials.ratios.size(); ++i) {
    table.add_row({std::string("monomial"), monomials.labels[i], monomials.ratios[i]});
  }
  const std::vector<complex> points = {0.0, 2.0, 4.0, 6.0};
  const auto kernels = trace_ratio_family(kernel_family(points), mu, o.p, o.q, o.m);
  for (std::size_t i = 0; i < kernels.ratios.size(); ++i) {
    table.add_row({std::string("kernel"), kernels.labels[i], kernels.ratios[i]});
  }
  if (o.m > 0) {
    const auto rem = trace_ratio_family(remainder_family({2.0, 4.0, 6.0}, o.m), mu, o.p,
                                        o.q, o.m);
    for (std::size_t i = 0; i < rem.ratios.size(); ++i) {
      table.add_row({std::string("remainder"), rem.labels[i], rem.ratios[i]});
    }
  }
  const double r8 = monomials.ratios[8];
  report.summary.emplace_back("monomial_growth_8_to_10",
                              r8 > 0.0 ? Cell(monomials.ratios[10] / r8 - 1.0) : Cell());
  report.summary.emplace_back("monomial_max_ratio", monomials.max());
  report.summary.emplace_back("kernel_max_ratio", kernels.max());
  report.summary.emplace_back("verdict", std::string(bounded ? "bounded" : "unbounded"));
  report.notes.push_back(o.q < o.p ? "verdict from the lattice sum (q < p)"
                                   : "verdict from the sup statistic (p <= q)");
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian integral means and Fock-space trace laboratory", "gml"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string out_path;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--out", out_path, "write the report to PATH instead of stdout");
  };

  MeansOptions means;
  auto* means_cmd = app.add_subcommand("means", "Gaussian integral means of a polynomial");
  means_cmd->add_option("--coeffs", means.coeffs, "coefficients a_0,a_1,... (re, re+imi)");
  means_cmd->add_option("--p", means.p, "exponent p > 0");
  means_cmd->add_option("--alpha", means.alpha, "Gaussian parameter alpha");
  means_cmd->add_option("--radii", means.radii, "comma-separated radii, inf allowed");
  add_output(means_cmd);

  ConvexityOptions conv;
  auto* conv_cmd = app.add_subcommand("convexity", "log-log convexity of integral means");
  conv_cmd->add_option("--k", conv.k, "monomial degree");
  conv_cmd->add_option("--p", conv.p, "exponent p > 0");
  conv_cmd->add_option("--alpha", conv.alpha, "Gaussian parameter alpha");
  conv_cmd->add_option("--x-max", conv.x_max, "scan range (0, x_max] in x = r^2");
  conv_cmd->add_flag("--remark-g0", conv.remark_g0, "root of G0 for means of c + z");
  conv_cmd->add_option("--remark-c", conv.remark_c, "analyse M_{2,1}(a + z) with c = |a|^2");
  add_output(conv_cmd);

  TraceOptions trace;
  auto* trace_cmd = app.add_subcommand("trace", "trace inequalities for a measure");
  trace_cmd->add_option("--measure", trace.measure,
                        "lebesgue, atom0, gaussian, growing or a JSON file");
  trace_cmd->add_option("--p", trace.p, "Fock-Sobolev exponent p");
  trace_cmd->add_option("--q", trace.q, "L^q(mu) exponent q");
  trace_cmd->add_option("--m", trace.m, "Fock-Sobolev order m >= 0");
  trace_cmd->add_option("--r", trace.r, "ball radius r");
  trace_cmd->add_option("--s", trace.s, "lattice spacing s <= r (default r/2)");
  trace_cmd->add_option("--r-trunc", trace.r_trunc, "lattice truncation radius");
  add_output(trace_cmd);

  AcceptanceOptions verify;
  std::vector<std::string> only;
  auto* verify_cmd = app.add_subcommand("verify-paper", "run the acceptance suite");
  verify_cmd->add_option("--seed", verify.seed, "seed for the random sweeps");
  verify_cmd->add_option("--only", only, "criterion ids (comma-separated)")->delimiter(',');
  add_output(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'gml --help' for usage\n";
    return 2;
  }

  try {
    const OutputFormat fmt_kind = parse_output_format(format);
    if (*means_cmd) {
      write_output(render(means_report(means), fmt_kind), out_path, out);
    } else if (*conv_cmd) {
      write_output(render(convexity_report(conv), fmt_kind), out_path, out);
    } else if (*trace_cmd) {
      write_output(render(trace_report(trace), fmt_kind), out_path, out);
    } else {
      verify.only = only;
      const auto results = run_acceptance(verify);
      write_output(render(acceptance_report(results, verify), fmt_kind), out_path, out);
      std::vector<std::string> failed;
      for (const auto& res : results) {
        if (!res.passed) failed.push_back(fmt::format("{} ({})", res.number, res.id));
      }
      if (!failed.empty()) {
        err << "failed criteria: " << fmt::format("{}", fmt::join(failed, ", ")) << "\n";
        return 1;
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    err << "numerical error: " << e.what() << " (best estimate "
        << format_number(e.best_estimate()) << ", error bound "
        << format_number(e.error_bound()) << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace gml
