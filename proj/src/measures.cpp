#include "gml/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

#include "gml/errors.hpp"

namespace gml {
namespace {

constexpr int kSubsamples = 16;

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussNodes = {0.1127016653792583, 0.5,
                                               0.8872983346207417};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0,
                                                 5.0 / 18.0};

void check_ball(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError(fmt::format("ball radius must be finite and > 0, got {}", r));
  }
}

double grid_support_radius(const GridDensity& g) {
  double out = 0.0;
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    for (std::size_t i = 0; i < g.values[j].size(); ++i) {
      if (g.values[j][i] == 0.0) continue;
      for (int cx = 0; cx <= 1; ++cx) {
        for (int cy = 0; cy <= 1; ++cy) {
          const complex corner =
              g.origin + complex(g.cell * (static_cast<double>(i) + cx),
                                 g.cell * (static_cast<double>(j) + cy));
          out = std::max(out, std::abs(corner));
        }
      }
    }
  }
  return out;
}

double grid_ball_mass(const GridDensity& g, complex a, double r) {
  const double h = g.cell;
  double mass = 0.0;
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    for (std::size_t i = 0; i < g.values[j].size(); ++i) {
      const double v = g.values[j][i];
      if (v == 0.0) continue;
      const double x0 = g.origin.real() + h * static_cast<double>(i);
      const double y0 = g.origin.imag() + h * static_cast<double>(j);
      const double x1 = x0 + h;
      const double y1 = y0 + h;
      const double dx_near = std::max({x0 - a.real(), 0.0, a.real() - x1});
      const double dy_near = std::max({y0 - a.imag(), 0.0, a.imag() - y1});
      if (std::hypot(dx_near, dy_near) >= r) continue;
      const double dx_far = std::max(std::abs(x0 - a.real()), std::abs(x1 - a.real()));
      const double dy_far = std::max(std::abs(y0 - a.imag()), std::abs(y1 - a.imag()));
      if (std::hypot(dx_far, dy_far) <= r) {
        mass += v * h * h;
        continue;
      }
      int inside = 0;
      for (int sy = 0; sy < kSubsamples; ++sy) {
        for (int sx = 0; sx < kSubsamples; ++sx) {
          const complex w(x0 + h * (sx + 0.5) / kSubsamples,
                          y0 + h * (sy + 0.5) / kSubsamples);
          if (std::abs(w - a) <= r) ++inside;
        }
      }
      mass += v * h * h * inside / (kSubsamples * kSubsamples);
    }
  }
  return mass;
}

double grid_integral(const GridDensity& g, const PlaneFunction& fn) {
  const double h = g.cell;
  double total = 0.0;
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    for (std::size_t i = 0; i < g.values[j].size(); ++i) {
      const double v = g.values[j][i];
      if (v == 0.0) continue;
      const double x0 = g.origin.real() + h * static_cast<double>(i);
      const double y0 = g.origin.imag() + h * static_cast<double>(j);
      double cell = 0.0;
      for (int u = 0; u < 3; ++u) {
        for (int w = 0; w < 3; ++w) {
          cell += kGaussWeights[u] * kGaussWeights[w] *
                  fn(complex(x0 + h * kGaussNodes[u], y0 + h * kGaussNodes[w]));
        }
      }
      total += v * h * h * cell;
    }
  }
  return total;
}

double finite_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw DomainError(fmt::format("{} must be a number", what));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DomainError(fmt::format("{} must be finite", what));
  return v;
}

}  // namespace

MeasureSpec MeasureSpec::atoms(std::vector<Atom> atoms, std::string label) {
  double support = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.weight >= 0.0) || !std::isfinite(atom.weight)) {
      throw DomainError("atom weights must be finite and >= 0");
    }
    if (!std::isfinite(atom.point.real()) || !std::isfinite(atom.point.imag())) {
      throw DomainError("atom positions must be finite");
    }
    if (atom.weight > 0.0) support = std::max(support, std::abs(atom.point));
  }
  MeasureSpec mu;
  mu.label = std::move(label);
  mu.body = AtomicMeasure{std::move(atoms)};
  mu.support_radius = support;
  return mu;
}

MeasureSpec MeasureSpec::radial(std::function<double(double)> density,
                                std::string label, double support_radius) {
  MeasureSpec mu;
  mu.label = std::move(label);
  mu.body = RadialDensity{std::move(density)};
  mu.support_radius = support_radius;
  return mu;
}

MeasureSpec MeasureSpec::plane(std::function<double(complex)> density,
                               std::string label, double support_radius) {
  MeasureSpec mu;
  mu.label = std::move(label);
  mu.body = PlaneDensity{std::move(density)};
  mu.support_radius = support_radius;
  return mu;
}

MeasureSpec MeasureSpec::grid(GridDensity grid, std::string label) {
  if (!(grid.cell > 0.0) || !std::isfinite(grid.cell)) {
    throw DomainError("grid cell size must be finite and > 0");
  }
  const std::size_t width = grid.values.empty() ? 0 : grid.values.front().size();
  for (const auto& row : grid.values) {
    if (row.size() != width) throw DomainError("grid rows must have equal length");
    for (const double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("grid densities must be finite and >= 0");
      }
    }
  }
  MeasureSpec mu;
  mu.label = std::move(label);
  mu.support_radius = grid_support_radius(grid);
  mu.body = std::move(grid);
  return mu;
}

double ball_mass(const MeasureSpec& mu, complex a, double r,
                 const QuadratureConfig& cfg) {
  check_ball(r);
  if (std::abs(a) - r > mu.support_radius) return 0.0;
  if (const auto* atoms = std::get_if<AtomicMeasure>(&mu.body)) {
    double mass = 0.0;
    for (const auto& atom : atoms->atoms) {
      if (std::abs(atom.point - a) <= r) mass += atom.weight;
    }
    return mass;
  }
  if (const auto* radial = std::get_if<RadialDensity>(&mu.body)) {
    return disk_integral([&](complex w) { return radial->density(std::abs(w)); },
                         a, r, cfg);
  }
  if (const auto* plane = std::get_if<PlaneDensity>(&mu.body)) {
    return disk_integral(plane->density, a, r, cfg);
  }
  return grid_ball_mass(std::get<GridDensity>(mu.body), a, r);
}

double integrate_measure(const MeasureSpec& mu, const PlaneFunction& g,
                         complex center, double radius,
                         const QuadratureConfig& cfg) {
  if (const auto* atoms = std::get_if<AtomicMeasure>(&mu.body)) {
    double total = 0.0;
    for (const auto& atom : atoms->atoms) {
      if (atom.weight > 0.0) total += atom.weight * g(atom.point);
    }
    return total;
  }
  if (const auto* grid = std::get_if<GridDensity>(&mu.body)) {
    return grid_integral(*grid, g);
  }
  check_ball(radius);
  if (const auto* radial = std::get_if<RadialDensity>(&mu.body)) {
    return disk_integral(
        [&](complex w) { return radial->density(std::abs(w)) * g(w); }, center,
        radius, cfg);
  }
  const auto& plane = std::get<PlaneDensity>(mu.body);
  return disk_integral([&](complex w) { return plane.density(w) * g(w); }, center,
                       radius, cfg);
}

MeasureSpec measure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(fmt::format("measure JSON does not parse: {}", e.what()));
  }
  if (!j.is_object()) throw DomainError("measure JSON must be an object");
  if (j.contains("atoms") == j.contains("grid")) {
    throw DomainError("measure JSON needs exactly one of \"atoms\" or \"grid\"");
  }
  if (j.contains("atoms")) {
    const auto& list = j["atoms"];
    if (!list.is_array()) throw DomainError("\"atoms\" must be an array");
    std::vector<Atom> atoms;
    for (const auto& entry : list) {
      if (!entry.is_array() || entry.size() != 3) {
        throw DomainError("each atom must be [re, im, weight]");
      }
      atoms.push_back({complex(finite_number(entry[0], "atom re"),
                               finite_number(entry[1], "atom im")),
                       finite_number(entry[2], "atom weight")});
    }
    return MeasureSpec::atoms(std::move(atoms), "atoms");
  }
  const auto& g = j["grid"];
  if (!g.is_object() || !g.contains("cell") || !g.contains("origin") ||
      !g.contains("values")) {
    throw DomainError("\"grid\" needs cell, origin and values");
  }
  GridDensity grid;
  grid.cell = finite_number(g["cell"], "grid cell");
  const auto& origin = g["origin"];
  if (!origin.is_array() || origin.size() != 2) {
    throw DomainError("grid origin must be [x0, y0]");
  }
  grid.origin = complex(finite_number(origin[0], "origin x"),
                        finite_number(origin[1], "origin y"));
  if (!g["values"].is_array()) throw DomainError("grid values must be an array of rows");
  for (const auto& row : g["values"]) {
    if (!row.is_array()) throw DomainError("grid values must be an array of rows");
    std::vector<double> out;
    for (const auto& v : row) out.push_back(finite_number(v, "grid value"));
    grid.values.push_back(std::move(out));
  }
  return MeasureSpec::grid(std::move(grid), "grid");
}

MeasureSpec load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(fmt::format("cannot open measure file {}", path));
  std::ostringstream text;
  text << in.rdbuf();
  MeasureSpec mu = measure_from_json(text.str());
  mu.label = path;
  return mu;
}

MeasureSpec lebesgue_measure() {
  return MeasureSpec::radial([](double) { return 1.0; }, "lebesgue");
}

MeasureSpec unit_atom_measure() {
  return MeasureSpec::atoms({{complex(0.0, 0.0), 1.0}}, "atom0");
}

MeasureSpec gaussian_measure() {
  return MeasureSpec::radial([](double s) { return std::exp(-s * s); }, "gaussian");
}

MeasureSpec growing_atomic_measure(int m, double q, double extent) {
  if (m < 0) throw DomainError("m must be >= 0");
  if (!(q > 0.0)) throw DomainError("q must be positive");
  if (!(extent >= 0.0) || !std::isfinite(extent)) {
    throw DomainError("extent must be finite and >= 0");
  }
  std::vector<Atom> atoms;
  const int n = static_cast<int>(std::floor(extent));
  for (int y = -n; y <= n; ++y) {
    for (int x = -n; x <= n; ++x) {
      const complex a(x, y);
      const double modulus = std::abs(a);
      if (modulus > extent) continue;
      atoms.push_back({a, std::pow(1.0 + modulus, m * q + 1.0)});
    }
  }
  return MeasureSpec::atoms(std::move(atoms), "growing");
}

}  // namespace gml
