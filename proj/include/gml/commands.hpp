#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gml/power_series.hpp"
#include "gml/report.hpp"

namespace gml {

// "1,0,-2.5", "1+2i,0.5-i,3i". Throws DomainError on malformed input.
std::vector<complex> parse_coefficients(const std::string& text);
// Comma-separated positive radii; "inf" is accepted.
std::vector<double> parse_radii(const std::string& text);

struct MeansOptions {
  std::string coeffs = "0,1";
  double p = 2.0;
  double alpha = 1.0;
  std::string radii = "1";
};

struct ConvexityOptions {
  std::optional<int> k;
  double p = 2.0;
  double alpha = 1.0;
  double x_max = 100.0;
  bool remark_g0 = false;
  std::optional<double> remark_c;
};

struct TraceOptions {
  // lebesgue, atom0, gaussian, growing, or a path to a measure JSON file.
  std::string measure = "lebesgue";
  double p = 2.0;
  double q = 2.0;
  int m = 0;
  double r = 1.0;
  std::optional<double> s;        // default r / 2
  std::optional<double> r_trunc;  // default 10 max(1, r)
};

Report means_report(const MeansOptions& options);
Report convexity_report(const ConvexityOptions& options);
Report trace_report(const TraceOptions& options);

// Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
// 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gml
