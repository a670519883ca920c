#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ffem/beam_system.hpp"
#include "ffem/config.hpp"
#include "ffem/nonlocal_basis.hpp"
#include "ffem/solver.hpp"

namespace ffem {

struct LoadStepRecord {
  double load_factor = 0.0;
  Eigen::VectorXd X;
  std::vector<FracValues> frac;  // at Gauss points
  double w_mid = 0.0;            // m
  int iterations = 0;
  std::vector<double> residuals;
};

struct SolutionRecord {
  BeamConfig config;
  std::shared_ptr<const NonlocalBasis> basis;
  std::shared_ptr<const BeamModel> model;
  Eigen::VectorXd F;  // full load vector at load factor 1
  std::vector<LoadStepRecord> steps;

  [[nodiscard]] const LoadStepRecord& final() const { return steps.back(); }
};

/// Transverse deflection of the Hermite interpolant at x.
inline double deflection_at(const NonlocalBasis& basis, const Eigen::VectorXd& X, double x) {
  const Mesh& mesh = basis.mesh();
  const DofLayout& lay = basis.layout();
  const auto [e, xi] = mesh.locate(x);
  const HermiteShape s = shape_hermite(xi, mesh.element_length());
  double w = 0.0;
  for (int k = 0; k < 4; ++k) w += s.value[k] * X(lay.transverse_offset() + lay.element_w(e) + k);
  return w;
}

inline double axial_at(const NonlocalBasis& basis, const Eigen::VectorXd& X, double x) {
  const auto [e, xi] = basis.mesh().locate(x);
  const LagrangeShape s = shape_lagrange(xi, basis.mesh().element_length());
  return s.value[0] * X(basis.layout().element_u(e)) + s.value[1] * X(basis.layout().element_u(e) + 1);
}

inline std::shared_ptr<const NonlocalBasis> make_basis(const BeamConfig& c) {
  BasisOptions opt = c.basis;
  opt.threads = c.threads;
  return std::make_shared<const NonlocalBasis>(
      build_basis(Mesh(c.L, c.element_count()), QuadRule(c.gauss_points), c.frac(), opt));
}

inline LoadSpec make_load(const BeamConfig& c) {
  LoadSpec load;
  load.kind = c.load_kind;
  load.magnitude = c.load_magnitude();
  load.location = c.location_ratio * c.L;
  return load;
}

/// Incremental Newton solve of a configured problem, optionally on a prebuilt
/// basis and with an extra load description.
inline SolutionRecord solve(const BeamConfig& c, const ProgressHook& hook = {},
                            std::shared_ptr<const NonlocalBasis> basis = nullptr, const LoadSpec* load = nullptr) {
  c.validate();
  SolutionRecord rec;
  rec.config = c;
  rec.basis = basis ? std::move(basis) : make_basis(c);
  rec.model = std::make_shared<const BeamModel>(rec.basis, c.section(), c.bc, c.linearized);
  const LoadSpec spec = load ? *load : make_load(c);
  rec.F = assemble_forces(rec.basis->mesh(), rec.basis->layout(), rec.basis->quad(), spec);

  NewtonSolver<BeamModel> newton(*rec.model, c.solver, hook);
  for (auto& s : newton.solve(rec.F)) {
    LoadStepRecord r;
    r.load_factor = s.load_factor;
    r.frac = rec.basis->frac_values(s.X);
    r.w_mid = deflection_at(*rec.basis, s.X, 0.5 * c.L);
    r.iterations = s.iterations;
    r.residuals = std::move(s.residuals);
    r.X = std::move(s.X);
    rec.steps.push_back(std::move(r));
  }
  return rec;
}

}  // namespace ffem
