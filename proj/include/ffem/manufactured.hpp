#pragma once

// Manufactured loads for the clamped-clamped beam with
//
//   u0 = U0 (1 - x/L)(x/L),   w0 = W0 (1 - x/L)^2 (x/L)^2
//
// The resultants N = A11 (D^a u0 + (D^a w0)^2 / 2) and M = -D11 D^a(w0') are
// evaluated from the exact polynomial fields. The loads follow from the strong
// form, F_a = -(G_N)' and F_t = -(G_M)'' - (G_{N D^a w0})', where G_f is the
// adjoint fractional integral of f (AdjointIntegral); the integer derivatives
// are taken by fourth-order central differences.
//
// The horizon terminals stop moving with s at s = lf and s = L - lf, so (G_M)'
// jumps there by -(1 - a)/2 M(0)/lf and -(1 - a)/2 M(L)/lf. F_t therefore
// carries two concentrated forces on top of the sampled distributed part.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffem/beam_system.hpp"
#include "ffem/frac_kernel.hpp"
#include "ffem/mesh.hpp"
#include "ffem/parallel.hpp"

namespace ffem {

struct ManufacturedCase {
  double U0 = 0.0;  // m
  double W0 = 0.0;  // m
};

class ManufacturedFields {
 public:
  ManufacturedFields(ManufacturedCase c, double L, SectionProps sec, FracParams fp)
      : L_(L), sec_(sec), fp_(fp), adj_(fp.alpha, fp.lf, L, 32) {
    u_ = Polynomial{0.0, c.U0 / L, -c.U0 / (L * L)};
    w_ = Polynomial{0.0, 0.0, c.W0 / (L * L), -2.0 * c.W0 / (L * L * L), c.W0 / (L * L * L * L)};
    dw_ = w_.derivative();
  }

  [[nodiscard]] double u(double x) const { return u_(x); }
  [[nodiscard]] double w(double x) const { return w_(x); }

  [[nodiscard]] double frac_u(double x) const { return rc_derivative(u_, x, horizon(x), fp_.alpha); }
  [[nodiscard]] double frac_w(double x) const { return rc_derivative(w_, x, horizon(x), fp_.alpha); }
  [[nodiscard]] double frac_slope(double x) const { return rc_derivative(dw_, x, horizon(x), fp_.alpha); }

  [[nodiscard]] double N(double x) const {
    const double d = frac_w(x);
    return sec_.A11() * (frac_u(x) + 0.5 * d * d);
  }
  [[nodiscard]] double M(double x) const { return -sec_.D11() * frac_slope(x); }

  [[nodiscard]] double G_N(double s) const {
    return adj_([this](double x) { return N(x); }, s);
  }
  [[nodiscard]] double G_M(double s) const {
    return adj_([this](double x) { return M(x); }, s);
  }
  [[nodiscard]] double G_ND(double s) const {
    return adj_([this](double x) { return N(x) * frac_w(x); }, s);
  }

  /// Concentrated transverse forces (x, P) from the jumps of (G_M)'.
  [[nodiscard]] std::vector<std::pair<double, double>> concentrated() const {
    if (fp_.alpha == 1.0 || fp_.lf >= L_) return {};
    const double c = 0.5 * (1.0 - fp_.alpha) / fp_.lf;
    return {{fp_.lf, c * M(0.0)}, {L_ - fp_.lf, c * M(L_)}};
  }

  /// Distributed loads (F_a, F_t) at s, with finite-difference step at most delta.
  /// The step shrinks near the ends (log-singular G) and near the kinks at lf, L - lf.
  [[nodiscard]] std::pair<double, double> loads(double s, double delta) const {
    double gap = std::min(s, L_ - s);
    if (fp_.alpha < 1.0) gap = std::min({gap, std::abs(s - fp_.lf), std::abs(s - (L_ - fp_.lf))});
    const double d = std::min(delta, gap / 10.0);
    auto first = [&](auto&& f) { return (f(s - 2 * d) - 8 * f(s - d) + 8 * f(s + d) - f(s + 2 * d)) / (12 * d); };
    auto second = [&](auto&& f) {
      return (-f(s - 2 * d) + 16 * f(s - d) - 30 * f(s) + 16 * f(s + d) - f(s + 2 * d)) / (12 * d * d);
    };
    const double fa = -first([this](double t) { return G_N(t); });
    const double ft = -second([this](double t) { return G_M(t); }) - first([this](double t) { return G_ND(t); });
    return {fa, ft};
  }

 private:
  [[nodiscard]] Horizon horizon(double x) const { return horizon_at(std::clamp(x, 0.0, L_), fp_.lf, L_); }

  double L_;
  SectionProps sec_;
  FracParams fp_;
  AdjointIntegral adj_;
  Polynomial u_, w_, dw_;
};

/// Loads sampled at every Gauss point of the mesh (element-major), ready for
/// LoadSpec::axial_samples / transverse_samples. The finite-difference step is
/// a tenth of the Gauss-point spacing.
inline LoadSpec manufactured_loads(const ManufacturedCase& c, const SectionProps& sec, const FracParams& fp,
                                   const Mesh& mesh, const QuadRule& quad, int threads = 1,
                                   double delta_scale = 1.0) {
  const ManufacturedFields f(c, mesh.length(), sec, fp);
  const double delta = delta_scale * mesh.element_length() / (10.0 * quad.points);
  const int n = mesh.elements() * quad.points;
  LoadSpec load;
  load.kind = LoadKind::UDL;
  load.magnitude = 0.0;
  load.axial_samples.assign(static_cast<std::size_t>(n), 0.0);
  load.transverse_samples.assign(static_cast<std::size_t>(n), 0.0);
  if (c.U0 == 0.0 && c.W0 == 0.0) return load;
  load.concentrated = f.concentrated();
  parallel_for(n, threads, [&](int g) {
    const double x = mesh.to_physical(g / quad.points, quad.rule.nodes[g % quad.points]);
    const auto [fa, ft] = f.loads(x, delta);
    load.axial_samples[static_cast<std::size_t>(g)] = fa;
    load.transverse_samples[static_cast<std::size_t>(g)] = ft;
  });
  return load;
}

}  // namespace ffem
