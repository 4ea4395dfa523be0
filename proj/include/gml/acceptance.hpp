#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gml/power_series.hpp"
#include "gml/report.hpp"

namespace gml {

// Uniform draws from std::mt19937_64 with an explicit mapping, so sequences
// are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform on {lo, ..., hi}.
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

// Degree uniform in [0, max_degree], coefficients uniform in [-b, b]^2.
PowerSeriesFunction random_polynomial(Rng& rng, int max_degree, double b);

struct CriterionResult {
  int number = 0;
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;  // wall time; never written to reports
};

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  std::vector<std::string> only;  // criterion ids; empty runs all
};

// Ids in criterion order: g0-root, route-agreement, maximum-principle,
// monotone-concavity, transition-point, proof-diagnostics, series-convexity,
// remark-linear, sharp-inequalities, trace-conditions, khinchine,
// determinism.
const std::vector<std::string>& criterion_ids();

// Throws DomainError for unknown ids in options.only.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

Report acceptance_report(const std::vector<CriterionResult>& results,
                         const AcceptanceOptions& options);

}  // namespace gml
