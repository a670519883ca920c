#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffem/mesh.hpp"
#include "ffem/nonlocal_basis.hpp"

namespace ffem {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct SectionProps {
  double E = 3e9;  // Pa
  double b = 1.0;  // m
  double h = 0.01; // m

  [[nodiscard]] double A11() const { return E * b * h; }
  [[nodiscard]] double D11() const { return E * b * h * h * h / 12.0; }

  void validate() const {
    if (!(E > 0.0 && b > 0.0 && h > 0.0)) throw std::domain_error("SectionProps: E, b and h must be positive");
  }
};

enum class LoadKind { UDL, Point };

/**
 * Transverse load plus optional distributed fields. The sampled vectors, when
 * non-empty, hold one value per Gauss point (element-major) and are used by
 * the element quadrature as they are.
 */
struct LoadSpec {
  LoadKind kind = LoadKind::UDL;
  double magnitude = 0.0;  // N/m for UDL, N for a point load
  double location = 0.0;   // m, point loads only
  std::function<double(double)> axial;          // F_a(x), N/m
  std::vector<double> axial_samples;            // F_a at Gauss points
  std::vector<double> transverse_samples;       // extra F_t at Gauss points
  std::vector<std::pair<double, double>> concentrated;  // extra (x, P) transverse point forces
};

enum class BCKind { ClampedClamped, PinnedPinned };

inline std::string to_string(BCKind bc) {
  return bc == BCKind::ClampedClamped ? "clamped-clamped" : "pinned-pinned";
}

/// Full-size indices (into X = [U_g; W_g]) fixed by the boundary conditions.
inline std::vector<int> constrained_dofs(const DofLayout& layout, BCKind bc) {
  const int last = layout.axial_size() - 1;
  const int off = layout.transverse_offset();
  std::vector<int> fixed = {layout.u(0), layout.u(last), off + layout.w(0), off + layout.w(last)};
  if (bc == BCKind::ClampedClamped) {
    fixed.push_back(off + layout.slope(0));
    fixed.push_back(off + layout.slope(last));
  } else if (bc != BCKind::PinnedPinned) {
    throw std::invalid_argument("unknown boundary condition kind");
  }
  std::sort(fixed.begin(), fixed.end());
  return fixed;
}

inline std::vector<int> free_dofs(const DofLayout& layout, BCKind bc) {
  const std::vector<int> fixed = constrained_dofs(layout, bc);
  std::vector<int> active;
  for (int i = 0; i < layout.size(); ++i)
    if (!std::binary_search(fixed.begin(), fixed.end(), i)) active.push_back(i);
  return active;
}

inline Vector gather(const Vector& full, const std::vector<int>& idx) {
  Vector r(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) r(static_cast<Eigen::Index>(k)) = full(idx[k]);
  return r;
}

inline Vector scatter(const Vector& reduced, const std::vector<int>& idx, int size) {
  Vector full = Vector::Zero(size);
  for (std::size_t k = 0; k < idx.size(); ++k) full(idx[k]) = reduced(static_cast<Eigen::Index>(k));
  return full;
}

inline Matrix gather(const Matrix& full, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix r(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) r(i, j) = full(idx[i], idx[j]);
  return r;
}

struct AssembledSystem {
  Matrix K11, K12, K21, K22;
  Matrix KS;  // [[K11, K12], [K21, K22]]
  Matrix KT;
  Vector FA, FT;
  Vector R;
};

struct ReducedSystem {
  std::vector<int> active;
  Matrix KS;
  Matrix KT;
  Vector F;
  Vector R;
};

/// Consistent nodal forces [F_A; F_T] for a load.
inline Vector assemble_forces(const Mesh& mesh, const DofLayout& layout, const QuadRule& quad, const LoadSpec& load) {
  Vector F = Vector::Zero(layout.size());
  const int off = layout.transverse_offset();
  const double le = mesh.element_length();
  const double J = mesh.jacobian();
  const int ngp = quad.points;
  const auto n_gp = static_cast<std::size_t>(mesh.elements() * ngp);
  if (!load.axial_samples.empty() && load.axial_samples.size() != n_gp)
    throw std::invalid_argument("assemble_forces: axial samples must have one value per Gauss point");
  if (!load.transverse_samples.empty() && load.transverse_samples.size() != n_gp)
    throw std::invalid_argument("assemble_forces: transverse samples must have one value per Gauss point");

  const double q0 = load.kind == LoadKind::UDL ? load.magnitude : 0.0;
  for (int e = 0; e < mesh.elements(); ++e) {
    for (int j = 0; j < ngp; ++j) {
      const double xi = quad.rule.nodes[j];
      const double wg = quad.rule.weights[j] * J;
      const std::size_t g = static_cast<std::size_t>(e * ngp + j);
      const double x = mesh.to_physical(e, xi);
      double fa = load.axial ? load.axial(x) : 0.0;
      if (!load.axial_samples.empty()) fa += load.axial_samples[g];
      double ft = q0;
      if (!load.transverse_samples.empty()) ft += load.transverse_samples[g];
      if (fa != 0.0) {
        const LagrangeShape s = shape_lagrange(xi, le);
        for (int k = 0; k < 2; ++k) F(layout.element_u(e) + k) += wg * fa * s.value[k];
      }
      if (ft != 0.0) {
        const HermiteShape s = shape_hermite(xi, le);
        for (int k = 0; k < 4; ++k) F(off + layout.element_w(e) + k) += wg * ft * s.value[k];
      }
    }
  }
  auto point = [&](double x, double P) {
    if (x < 0.0 || x > mesh.length()) throw std::domain_error("point load location outside [0, L]");
    const auto [e, xi] = mesh.locate(x);
    const HermiteShape s = shape_hermite(xi, le);
    for (int k = 0; k < 4; ++k) F(off + layout.element_w(e) + k) += P * s.value[k];
  };
  if (load.kind == LoadKind::Point && load.magnitude != 0.0) point(load.location, load.magnitude);
  for (const auto& [x, P] : load.concentrated) point(x, P);
  return F;
}

/**
 * Fractional von Karman beam on a prebuilt nonlocal basis. At each Gauss point
 * with a = D^a u, d = D^a w, t = D^a w':
 *
 *   N = A11 (a + d^2/2),  R = \int N B_u^T + N d B_w^T + D11 t B_theta^T - F
 *
 * The linearized variant drops every d-dependent term. Its stiffness is then
 * constant, so it is assembled once and the residual is K X - F with that
 * same matrix; Newton and a direct solve see one operator.
 */
class BeamModel {
 public:
  BeamModel(std::shared_ptr<const NonlocalBasis> basis, SectionProps sec, BCKind bc, bool linearized = false)
      : basis_(std::move(basis)), sec_(sec), bc_(bc), linearized_(linearized) {
    if (!basis_ || basis_->points() == 0) throw std::invalid_argument("BeamModel: basis not built");
    sec_.validate();
    active_ = free_dofs(basis_->layout(), bc_);
    if (linearized_) linear_K_ = tangent(Vector::Zero(size()));
  }

  [[nodiscard]] int size() const { return basis_->layout().size(); }
  [[nodiscard]] const std::vector<int>& active() const { return active_; }
  [[nodiscard]] const NonlocalBasis& basis() const { return *basis_; }
  [[nodiscard]] const SectionProps& section() const { return sec_; }
  [[nodiscard]] BCKind bc() const { return bc_; }
  [[nodiscard]] bool linearized() const { return linearized_; }

  /// R(X) = K_S(X) X - F (full size, constrained rows included).
  [[nodiscard]] Vector residual(const Vector& X, const Vector& F) const {
    check(X);
    if (linearized_) return linear_residual(X, F);
    const int off = basis_->layout().transverse_offset();
    const double A11 = sec_.A11();
    const double D11 = sec_.D11();
    Vector R = -F;
    for (int g = 0; g < basis_->points(); ++g) {
      const BasisRow& r = basis_->row(g);
      const double wg = basis_->weight(g);
      const FracValues v = basis_->evaluate(r, X);
      const double d = linearized_ ? 0.0 : v.dw;
      const double N = A11 * (v.du + 0.5 * d * d);
      add_row(R, r.bu, 0, wg * N);
      add_row(R, r.bw, off, wg * N * d);
      add_row(R, r.btheta, off, wg * D11 * v.dtheta);
    }
    return R;
  }

  [[nodiscard]] Matrix tangent(const Vector& X) const {
    check(X);
    if (linearized_ && linear_K_.size() > 0) return linear_K_;
    const int n = size();
    const int off = basis_->layout().transverse_offset();
    const double A11 = sec_.A11();
    const double D11 = sec_.D11();
    Matrix K = Matrix::Zero(n, n);
    for (int g = 0; g < basis_->points(); ++g) {
      const BasisRow& r = basis_->row(g);
      const double wg = basis_->weight(g);
      const FracValues v = basis_->evaluate(r, X);
      const double d = linearized_ ? 0.0 : v.dw;
      add_outer(K, r.bu, 0, r.bu, 0, wg * A11);
      add_outer(K, r.btheta, off, r.btheta, off, wg * D11);
      if (linearized_) continue;
      add_outer(K, r.bw, off, r.bw, off, wg * A11 * (v.du + 1.5 * d * d));
      add_outer(K, r.bu, 0, r.bw, off, wg * A11 * d);
      add_outer(K, r.bw, off, r.bu, 0, wg * A11 * d);
    }
    return K;
  }

  /// Secant blocks of K_S(X); K21 = 2 K12^T.
  [[nodiscard]] AssembledSystem assemble(const Vector& X, const Vector& F) const {
    check(X);
    const DofLayout& lay = basis_->layout();
    const int nu = lay.axial_size();
    const int nw = lay.transverse_size();
    const double A11 = sec_.A11();
    const double D11 = sec_.D11();
    AssembledSystem s;
    s.K11 = Matrix::Zero(nu, nu);
    s.K12 = Matrix::Zero(nu, nw);
    s.K21 = Matrix::Zero(nw, nu);
    s.K22 = Matrix::Zero(nw, nw);
    for (int g = 0; g < basis_->points(); ++g) {
      const BasisRow& r = basis_->row(g);
      const double wg = basis_->weight(g);
      const double d = linearized_ ? 0.0 : basis_->evaluate(r, X).dw;
      add_outer(s.K11, r.bu, 0, r.bu, 0, wg * A11);
      add_outer(s.K22, r.btheta, 0, r.btheta, 0, wg * D11);
      if (d == 0.0) continue;
      add_outer(s.K12, r.bu, 0, r.bw, 0, 0.5 * wg * A11 * d);
      add_outer(s.K21, r.bw, 0, r.bu, 0, wg * A11 * d);
      add_outer(s.K22, r.bw, 0, r.bw, 0, 0.5 * wg * A11 * d * d);
    }
    s.KS.resize(nu + nw, nu + nw);
    s.KS << s.K11, s.K12, s.K21, s.K22;
    s.KT = tangent(X);
    s.FA = F.head(nu);
    s.FT = F.tail(nw);
    s.R = s.KS * X - F;
    return s;
  }

  /// Eliminates the constrained rows and columns.
  [[nodiscard]] ReducedSystem apply_bcs(const AssembledSystem& s) const {
    ReducedSystem r;
    r.active = active_;
    r.KS = gather(s.KS, active_);
    r.KT = gather(s.KT, active_);
    Vector F(s.FA.size() + s.FT.size());
    F << s.FA, s.FT;
    r.F = gather(F, active_);
    r.R = gather(s.R, active_);
    return r;
  }

  /// Axial force and bending moment resultants at an arbitrary x.
  [[nodiscard]] std::pair<double, double> resultants(const BasisRow& r, const Vector& X) const {
    const FracValues v = basis_->evaluate(r, X);
    const double d = linearized_ ? 0.0 : v.dw;
    return {sec_.A11() * (v.du + 0.5 * d * d), -sec_.D11() * v.dtheta};
  }

 private:
  // K X - F accumulated in extended precision, so that the incremental solve
  // is not limited by cancellation in the residual.
  [[nodiscard]] Vector linear_residual(const Vector& X, const Vector& F) const {
    const Eigen::Index n = X.size();
    Vector R(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      long double s = -static_cast<long double>(F(i));
      for (Eigen::Index j = 0; j < n; ++j) s += static_cast<long double>(linear_K_(j, i)) * X(j);
      R(i) = static_cast<double>(s);
    }
    return R;
  }

  void check(const Vector& X) const {
    if (X.size() != size()) throw std::invalid_argument("BeamModel: state size does not match the DOF layout");
  }

  static void add_row(Vector& R, const SparseRow& row, int offset, double scale) {
    for (std::size_t k = 0; k < row.values.size(); ++k) R(offset + row.first + static_cast<int>(k)) += scale * row.values[k];
  }

  static void add_outer(Matrix& K, const SparseRow& a, int oa, const SparseRow& b, int ob, double scale) {
    if (scale == 0.0) return;
    const auto na = static_cast<Eigen::Index>(a.values.size());
    const auto nb = static_cast<Eigen::Index>(b.values.size());
    const Eigen::Map<const Vector> va(a.values.data(), na);
    const Eigen::Map<const Vector> vb(b.values.data(), nb);
    K.block(oa + a.first, ob + b.first, na, nb).noalias() += (scale * va) * vb.transpose();
  }

  std::shared_ptr<const NonlocalBasis> basis_;
  SectionProps sec_;
  BCKind bc_;
  bool linearized_;
  std::vector<int> active_;
  Matrix linear_K_;
};

}  // namespace ffem
