#pragma once

// Integer-order (local) von Karman Euler-Bernoulli beam, assembled element by
// element with its own shape-function code. Serves as the independent
// reference for the alpha = 1 limit of the fractional model.

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ffem/beam_system.hpp"
#include "ffem/quadrature.hpp"

namespace ffem {

class ClassicalBeam {
 public:
  ClassicalBeam(double L, int elements, SectionProps sec, BCKind bc, bool linearized = false, int gauss_points = 4)
      : L_(L), ne_(elements), le_(L / elements), sec_(sec), linearized_(linearized), gl_(gauss_legendre(gauss_points)) {
    if (!(L > 0.0) || elements < 2) throw std::domain_error("ClassicalBeam: need L > 0 and at least two elements");
    sec_.validate();
    nodes_ = ne_ + 1;
    // Same global ordering as the fractional model: [u_0..u_N, w_0, w'_0, ...].
    std::vector<int> fixed = {0, ne_, nodes_, nodes_ + 2 * ne_};
    if (bc == BCKind::ClampedClamped) {
      fixed.push_back(nodes_ + 1);
      fixed.push_back(nodes_ + 2 * ne_ + 1);
    }
    for (int i = 0; i < size(); ++i)
      if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) active_.push_back(i);
  }

  [[nodiscard]] int size() const { return 3 * nodes_; }
  [[nodiscard]] int elements() const { return ne_; }
  [[nodiscard]] const std::vector<int>& active() const { return active_; }

  [[nodiscard]] Eigen::VectorXd residual(const Eigen::VectorXd& X, const Eigen::VectorXd& F) const {
    Eigen::VectorXd R = -F;
    for (int e = 0; e < ne_; ++e) {
      const auto idx = dofs(e);
      for (int q = 0; q < gl_.size(); ++q) {
        const Point p = point(e, q, X);
        const double N = sec_.A11() * (p.du + 0.5 * p.dw * p.dw);
        const double M = sec_.D11() * p.ddw;
        for (int k = 0; k < 2; ++k) R(idx[k]) += p.wq * N * p.su[k];
        for (int k = 0; k < 4; ++k) R(idx[2 + k]) += p.wq * (N * p.dw * p.hw[k] + M * p.ht[k]);
      }
    }
    return R;
  }

  [[nodiscard]] Eigen::MatrixXd tangent(const Eigen::VectorXd& X) const {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(size(), size());
    const double A = sec_.A11();
    const double D = sec_.D11();
    for (int e = 0; e < ne_; ++e) {
      const auto idx = dofs(e);
      for (int q = 0; q < gl_.size(); ++q) {
        const Point p = point(e, q, X);
        std::array<double, 6> bu{}, bw{}, bt{};
        for (int k = 0; k < 2; ++k) bu[k] = p.su[k];
        for (int k = 0; k < 4; ++k) {
          bw[2 + k] = p.hw[k];
          bt[2 + k] = p.ht[k];
        }
        const double kww = A * (p.du + 1.5 * p.dw * p.dw);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) {
            double v = A * bu[i] * bu[j] + D * bt[i] * bt[j];
            if (!linearized_) v += kww * bw[i] * bw[j] + A * p.dw * (bu[i] * bw[j] + bw[i] * bu[j]);
            K(idx[i], idx[j]) += p.wq * v;
          }
      }
    }
    return K;
  }

  /// Consistent load vector for a UDL q0 (N/m) or a point load P at x (N).
  [[nodiscard]] Eigen::VectorXd forces(const LoadSpec& load) const {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(size());
    if (load.kind == LoadKind::UDL) {
      // Exact integrals of the cubic Hermite functions.
      for (int e = 0; e < ne_; ++e) {
        const auto idx = dofs(e);
        const double q = load.magnitude;
        F(idx[2]) += q * le_ / 2.0;
        F(idx[3]) += q * le_ * le_ / 12.0;
        F(idx[4]) += q * le_ / 2.0;
        F(idx[5]) -= q * le_ * le_ / 12.0;
      }
    } else {
      int e = static_cast<int>(load.location / le_);
      if (e >= ne_) e = ne_ - 1;
      const double z = load.location - e * le_;
      const auto h = hermite(z);
      const auto idx = dofs(e);
      for (int k = 0; k < 4; ++k) F(idx[2 + k]) += load.magnitude * h[k];
    }
    return F;
  }

  /// Transverse deflection at x.
  [[nodiscard]] double deflection(const Eigen::VectorXd& X, double x) const {
    int e = static_cast<int>(x / le_);
    if (e >= ne_) e = ne_ - 1;
    const auto h = hermite(x - e * le_);
    const auto idx = dofs(e);
    double w = 0.0;
    for (int k = 0; k < 4; ++k) w += h[k] * X(idx[2 + k]);
    return w;
  }

 private:
  struct Point {
    double wq;
    double du, dw, ddw;
    std::array<double, 2> su;
    std::array<double, 4> hw, ht;
  };

  [[nodiscard]] std::array<int, 6> dofs(int e) const {
    const int w0 = nodes_ + 2 * e;
    return {e, e + 1, w0, w0 + 1, w0 + 2, w0 + 3};
  }

  [[nodiscard]] std::array<double, 4> hermite(double z) const {
    const double r = z / le_;
    return {1 - 3 * r * r + 2 * r * r * r, le_ * (r - 2 * r * r + r * r * r), 3 * r * r - 2 * r * r * r,
            le_ * (r * r * r - r * r)};
  }

  [[nodiscard]] Point point(int e, int q, const Eigen::VectorXd& X) const {
    Point p{};
    const double z = 0.5 * le_ * (gl_.nodes[q] + 1.0);
    const double r = z / le_;
    p.wq = 0.5 * le_ * gl_.weights[q];
    p.su = {-1.0 / le_, 1.0 / le_};
    p.hw = {(-6 * r + 6 * r * r) / le_, 1 - 4 * r + 3 * r * r, (6 * r - 6 * r * r) / le_, 3 * r * r - 2 * r};
    p.ht = {(-6 + 12 * r) / (le_ * le_), (-4 + 6 * r) / le_, (6 - 12 * r) / (le_ * le_), (6 * r - 2) / le_};
    const auto idx = dofs(e);
    p.du = p.su[0] * X(idx[0]) + p.su[1] * X(idx[1]);
    for (int k = 0; k < 4; ++k) {
      p.dw += p.hw[k] * X(idx[2 + k]);
      p.ddw += p.ht[k] * X(idx[2 + k]);
    }
    if (linearized_) p.dw = 0.0;
    return p;
  }

  double L_;
  int ne_;
  double le_;
  int nodes_ = 0;
  SectionProps sec_;
  bool linearized_;
  GaussRule gl_;
  std::vector<int> active_;
};

}  // namespace ffem
