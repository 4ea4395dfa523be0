#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gml/quadrature.hpp"

namespace gml {

struct Atom {
  complex point;
  double weight = 0.0;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
};

// dmu = density(|w|) dA(w).
struct RadialDensity {
  std::function<double(double)> density;
};

// dmu = density(w) dA(w).
struct PlaneDensity {
  std::function<double(complex)> density;
};

// Cell-averaged densities on a square grid. values[j][i] covers the cell
// [x0 + i h, x0 + (i+1) h] x [y0 + j h, y0 + (j+1) h].
struct GridDensity {
  double cell = 1.0;
  complex origin;
  std::vector<std::vector<double>> values;
};

// A nonnegative measure on the plane. Immutable after construction.
struct MeasureSpec {
  std::string label;
  std::variant<AtomicMeasure, RadialDensity, PlaneDensity, GridDensity> body;
  // Smallest R with supp(mu) inside the closed disk |w| <= R; +inf when the
  // support is unbounded.
  double support_radius = std::numeric_limits<double>::infinity();

  static MeasureSpec atoms(std::vector<Atom> atoms, std::string label = "atoms");
  static MeasureSpec radial(std::function<double(double)> density,
                            std::string label, double support_radius =
                                std::numeric_limits<double>::infinity());
  static MeasureSpec plane(std::function<double(complex)> density,
                           std::string label, double support_radius =
                               std::numeric_limits<double>::infinity());
  static MeasureSpec grid(GridDensity grid, std::string label = "grid");
};

// mu(B(a, r)). Atoms with |point - a| = r count as inside. Densities are
// integrated in polar coordinates around a; grid cells cut by the circle are
// split by 16 x 16 subsampling.
double ball_mass(const MeasureSpec& mu, complex a, double r,
                 const QuadratureConfig& cfg = QuadratureConfig::composite());

// int g dmu, where g is negligible outside the disk B(center, radius).
// Atoms are summed regardless of the disk.
double integrate_measure(const MeasureSpec& mu, const PlaneFunction& g,
                         complex center, double radius,
                         const QuadratureConfig& cfg = QuadratureConfig::composite());

// {"atoms": [[re, im, w], ...]} or
// {"grid": {"cell": h, "origin": [x0, y0], "values": [[...], ...]}}.
// Throws DomainError on malformed input or negative weights.
MeasureSpec measure_from_json(const std::string& text);
MeasureSpec load_measure_file(const std::string& path);

// Built-in measures for the CLI and the acceptance suite:
//   lebesgue  dA
//   atom0     unit atom at 0
//   gaussian  e^{-|w|^2} dA
//   growing   atoms at the integer lattice points with |a| <= extent and
//             weights (1 + |a|)^{m q + 1}
MeasureSpec lebesgue_measure();
MeasureSpec unit_atom_measure();
MeasureSpec gaussian_measure();
MeasureSpec growing_atomic_measure(int m, double q, double extent);

}  // namespace gml
