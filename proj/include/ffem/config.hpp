#pragma once

// Problem description and its INI-style configuration file.
//
//   [geometry]   L, h, b                      (m)
//   [material]   E                            (Pa)
//   [fractional] alpha, lf_ratio              (lf = lf_ratio * L)
//   [mesh]       n_inf, elements, gauss_points, window, integration, inner_points
//   [load]       kind, q_bar | p_bar | magnitude, location_ratio
//   [bc]         type
//   [solver]     load_steps, tol, max_iters, divergence, linearized
//   [study]      alphas, lf_ratios, n_inf     (comma-separated lists)
//   [output]     dir
//
// Every key is optional; see BeamConfig for the defaults.

#include <cmath>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ffem/beam_system.hpp"
#include "ffem/frac_kernel.hpp"
#include "ffem/nonlocal_basis.hpp"
#include "ffem/solver.hpp"

namespace ffem {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BeamConfig {
  // geometry and material
  double L = 1.0;
  double h = 0.01;
  double b = 1.0;
  double E = 3e9;

  // fractional model
  double alpha = 0.8;
  double lf_ratio = 0.1;

  // discretization: elements = 0 derives Ne from n_inf (Ne = n_inf * L / lf)
  int n_inf = 10;
  int elements = 0;
  int gauss_points = 4;
  BasisOptions basis;

  // load; magnitudes are nondimensional (q_bar = q0 L / h, P_bar = P L / h)
  // unless `dimensional` is set
  LoadKind load_kind = LoadKind::UDL;
  double load = 10.0;
  bool dimensional = false;
  double location_ratio = 0.5;

  BCKind bc = BCKind::ClampedClamped;
  SolverControls solver;
  bool linearized = false;

  // study grids for sweep / converge
  std::vector<double> alphas = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
  std::vector<double> lf_ratios = {0.2, 0.1, 0.05};
  std::vector<int> n_infs = {2, 5, 10, 20};

  std::string output_dir = ".";
  int threads = 1;

  [[nodiscard]] double lf() const { return lf_ratio * L; }

  [[nodiscard]] int element_count() const {
    if (elements > 0) return elements;
    return static_cast<int>(std::lround(n_inf / lf_ratio));
  }

  /// Dimensional load magnitude: N/m for a UDL, N for a point load.
  [[nodiscard]] double load_magnitude() const { return dimensional ? load : load * h / L; }

  [[nodiscard]] SectionProps section() const { return {E, b, h}; }
  [[nodiscard]] FracParams frac() const { return {alpha, lf()}; }

  /// Throws ConfigError on invalid values; returns warnings for suspicious ones.
  std::vector<std::string> validate() const {
    std::vector<std::string> warn;
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (!(L > 0.0 && h > 0.0 && b > 0.0 && E > 0.0)) fail("geometry and material values must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail("fractional.alpha must lie in (0, 1]");
    if (!(lf_ratio > 0.0)) fail("fractional.lf_ratio must be positive");
    if (elements == 0 && n_inf < 1) fail("mesh.n_inf must be >= 1");
    if (element_count() < 2) fail("mesh needs at least two elements");
    if (gauss_points < 1) fail("mesh.gauss_points must be >= 1");
    if (location_ratio < 0.0 || location_ratio > 1.0) fail("load.location_ratio must lie in [0, 1]");
    if (threads < 1) fail("threads must be >= 1");
    try {
      solver.validate();
    } catch (const std::exception& e) {
      fail(e.what());
    }
    if (L / h < 20.0) warn.push_back("L/h below 20: the Euler-Bernoulli assumptions are doubtful");
    if (alpha < 0.5) warn.push_back("alpha below 0.5: the fractional model approaches its physical breakdown (~0.4)");
    return warn;
  }
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v;
    if (!(is >> v)) throw ConfigError("key '" + key + "': cannot parse list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace detail

inline BeamConfig config_from_tree(const boost::property_tree::ptree& tree) {
  BeamConfig c;
  static const std::set<std::string> known = {
      "geometry.L",         "geometry.h",          "geometry.b",        "material.E",
      "fractional.alpha",   "fractional.lf_ratio", "mesh.n_inf",        "mesh.elements",
      "mesh.gauss_points",  "mesh.window",         "mesh.integration",  "mesh.inner_points",
      "load.kind",          "load.q_bar",          "load.p_bar",        "load.magnitude",
      "load.location_ratio", "bc.type",            "solver.load_steps", "solver.tol",
      "solver.max_iters",   "solver.divergence",   "solver.linearized", "study.alphas",
      "study.lf_ratios",    "study.n_inf",         "output.dir",        "run.threads"};
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known.count(full)) throw ConfigError("unknown key '" + full + "'");
    }
  }

  auto num = [&](const std::string& key, auto& target) {
    using T = std::decay_t<decltype(target)>;
    if (auto v = tree.get_optional<std::string>(key)) {
      std::stringstream is(*v);
      T parsed;
      if (!(is >> parsed) || !(is >> std::ws).eof())
        throw ConfigError("key '" + key + "': cannot parse value '" + *v + "'");
      target = parsed;
    }
  };
  auto word = [&](const std::string& key) { return tree.get_optional<std::string>(key); };

  num("geometry.L", c.L);
  num("geometry.h", c.h);
  num("geometry.b", c.b);
  num("material.E", c.E);
  num("fractional.alpha", c.alpha);
  num("fractional.lf_ratio", c.lf_ratio);
  num("mesh.n_inf", c.n_inf);
  num("mesh.elements", c.elements);
  num("mesh.gauss_points", c.gauss_points);
  num("mesh.inner_points", c.basis.inner_points);
  if (auto w = word("mesh.window")) {
    if (*w == "exact") c.basis.window = HorizonWindow::Exact;
    else if (*w == "rounded") c.basis.window = HorizonWindow::Rounded;
    else if (*w == "rounded_inclusive") c.basis.window = HorizonWindow::RoundedInclusive;
    else throw ConfigError("key 'mesh.window': expected exact, rounded or rounded_inclusive, got '" + *w + "'");
  }
  if (auto w = word("mesh.integration")) {
    if (*w == "closed") c.basis.integration = PieceIntegration::ClosedForm;
    else if (*w == "gauss") c.basis.integration = PieceIntegration::GaussLegendre;
    else throw ConfigError("key 'mesh.integration': expected closed or gauss, got '" + *w + "'");
  }

  if (auto w = word("load.kind")) {
    if (*w == "udl") c.load_kind = LoadKind::UDL;
    else if (*w == "point") c.load_kind = LoadKind::Point;
    else throw ConfigError("key 'load.kind': expected udl or point, got '" + *w + "'");
  }
  const int given = static_cast<int>(tree.count("load") ? tree.get_child("load").count("q_bar") +
                                                              tree.get_child("load").count("p_bar") +
                                                              tree.get_child("load").count("magnitude")
                                                        : 0);
  if (given > 1) throw ConfigError("section [load]: give only one of q_bar, p_bar, magnitude");
  if (tree.get_optional<std::string>("load.q_bar")) {
    if (c.load_kind != LoadKind::UDL) throw ConfigError("key 'load.q_bar' requires kind = udl");
    num("load.q_bar", c.load);
  }
  if (tree.get_optional<std::string>("load.p_bar")) {
    if (c.load_kind != LoadKind::Point) throw ConfigError("key 'load.p_bar' requires kind = point");
    num("load.p_bar", c.load);
  }
  if (tree.get_optional<std::string>("load.magnitude")) {
    num("load.magnitude", c.load);
    c.dimensional = true;
  }
  num("load.location_ratio", c.location_ratio);

  if (auto w = word("bc.type")) {
    if (*w == "clamped") c.bc = BCKind::ClampedClamped;
    else if (*w == "pinned") c.bc = BCKind::PinnedPinned;
    else throw ConfigError("key 'bc.type': expected clamped or pinned, got '" + *w + "'");
  }
  num("solver.load_steps", c.solver.load_steps);
  num("solver.tol", c.solver.tol);
  num("solver.max_iters", c.solver.max_iters);
  num("solver.divergence", c.solver.divergence);
  if (auto w = word("solver.linearized")) {
    if (*w == "true" || *w == "1") c.linearized = true;
    else if (*w == "false" || *w == "0") c.linearized = false;
    else throw ConfigError("key 'solver.linearized': expected true or false, got '" + *w + "'");
  }
  if (auto w = word("study.alphas")) c.alphas = detail::parse_list<double>("study.alphas", *w);
  if (auto w = word("study.lf_ratios")) c.lf_ratios = detail::parse_list<double>("study.lf_ratios", *w);
  if (auto w = word("study.n_inf")) c.n_infs = detail::parse_list<int>("study.n_inf", *w);
  if (auto w = word("output.dir")) c.output_dir = *w;
  num("run.threads", c.threads);
  c.validate();
  return c;
}

inline BeamConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  return config_from_tree(tree);
}

inline BeamConfig load_config(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  try {
    return config_from_tree(tree);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace ffem
