#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffem/polynomial.hpp"
#include "ffem/quadrature.hpp"

namespace ffem {

/// Uniform 1D mesh of two-noded elements on [0, L].
class Mesh {
 public:
  Mesh(double L, int elements) : L_(L), ne_(elements) {
    if (!(L > 0.0)) throw std::domain_error("Mesh: length must be positive");
    if (elements < 2) throw std::domain_error("Mesh: need at least two elements");
    le_ = L / elements;
  }

  [[nodiscard]] double length() const { return L_; }
  [[nodiscard]] int elements() const { return ne_; }
  [[nodiscard]] int nodes() const { return ne_ + 1; }
  [[nodiscard]] double element_length() const { return le_; }
  [[nodiscard]] double node(int i) const { return i == ne_ ? L_ : i * le_; }
  [[nodiscard]] double jacobian() const { return 0.5 * le_; }

  [[nodiscard]] double to_physical(int e, double xi) const { return node(e) + 0.5 * (xi + 1.0) * le_; }

  /// Containing element and natural coordinate; interior nodes belong to the
  /// element on their right, x = L to the last element.
  [[nodiscard]] std::pair<int, double> locate(double s) const {
    if (s < 0.0 || s > L_) throw std::domain_error("Mesh::locate: position outside [0, L]");
    int e = static_cast<int>(std::floor(s / le_));
    if (e >= ne_) e = ne_ - 1;
    if (e < 0) e = 0;
    double xi = 2.0 * (s - node(e)) / le_ - 1.0;
    if (xi > 1.0) xi = 1.0;
    return {e, xi};
  }

 private:
  double L_;
  int ne_;
  double le_;
};

/// Global DOF numbering: X = [U_g ; W_g], W_g interleaves (w, dw/dx) per node.
class DofLayout {
 public:
  explicit DofLayout(const Mesh& mesh) : nodes_(mesh.nodes()) {}

  [[nodiscard]] int axial_size() const { return nodes_; }
  [[nodiscard]] int transverse_size() const { return 2 * nodes_; }
  [[nodiscard]] int size() const { return 3 * nodes_; }

  /// Offset of W_g inside X.
  [[nodiscard]] int transverse_offset() const { return nodes_; }

  [[nodiscard]] int u(int node) const { return node; }
  [[nodiscard]] int w(int node) const { return 2 * node; }
  [[nodiscard]] int slope(int node) const { return 2 * node + 1; }

  /// First U_g / W_g index of element e's contiguous local block.
  [[nodiscard]] int element_u(int e) const { return e; }
  [[nodiscard]] int element_w(int e) const { return 2 * e; }

 private:
  int nodes_;
};

/// Element-level Gauss-Legendre rule.
struct QuadRule {
  int points = 4;
  GaussRule rule;

  explicit QuadRule(int n = 4) : points(n), rule(gauss_legendre(n)) {
    if (n < 1) throw std::domain_error("QuadRule: need at least one point");
  }
};

struct LagrangeShape {
  std::array<double, 2> value;
  std::array<double, 2> d1;  // d/dx
};

struct HermiteShape {
  std::array<double, 4> value;
  std::array<double, 4> d1;  // d/dx
  std::array<double, 4> d2;  // d2/dx2
};

inline LagrangeShape shape_lagrange(double xi, double le) {
  return {{0.5 * (1.0 - xi), 0.5 * (1.0 + xi)}, {-1.0 / le, 1.0 / le}};
}

/// Cubic Hermite basis; slope DOFs carry dw/dx in physical units.
inline HermiteShape shape_hermite(double xi, double le) {
  const double j = 0.5 * le;
  const double a = 1.0 - xi;
  const double b = 1.0 + xi;
  HermiteShape s;
  s.value = {0.25 * a * a * (2.0 + xi), j * 0.25 * a * a * b, 0.25 * b * b * (2.0 - xi), j * 0.25 * b * b * (xi - 1.0)};
  // dN/dxi
  const std::array<double, 4> dxi = {0.75 * (xi * xi - 1.0), j * 0.25 * (3.0 * xi * xi - 2.0 * xi - 1.0),
                                     0.75 * (1.0 - xi * xi), j * 0.25 * (3.0 * xi * xi + 2.0 * xi - 1.0)};
  const std::array<double, 4> dxi2 = {1.5 * xi, j * 0.5 * (3.0 * xi - 1.0), -1.5 * xi, j * 0.5 * (3.0 * xi + 1.0)};
  for (int k = 0; k < 4; ++k) {
    s.d1[k] = dxi[k] / j;
    s.d2[k] = dxi2[k] / (j * j);
  }
  return s;
}

/**
 * Shape-function derivative rows as polynomials in z = s - x_left over one
 * element, z in [0, le]. These are the integrands the nonlocal operators
 * convolve with the kernel.
 */
struct ElementDerivativePolys {
  std::array<Polynomial, 2> bu;      // dL/ds, degree 0
  std::array<Polynomial, 4> bw;      // dH/ds, degree 2
  std::array<Polynomial, 4> btheta;  // d2H/ds2, degree 1

  explicit ElementDerivativePolys(double le) {
    const double l2 = le * le;
    const double l3 = l2 * le;
    const std::array<Polynomial, 4> h = {Polynomial{1.0, 0.0, -3.0 / l2, 2.0 / l3},
                                         Polynomial{0.0, 1.0, -2.0 / le, 1.0 / l2},
                                         Polynomial{0.0, 0.0, 3.0 / l2, -2.0 / l3},
                                         Polynomial{0.0, 0.0, -1.0 / le, 1.0 / l2}};
    bu = {Polynomial{-1.0 / le}, Polynomial{1.0 / le}};
    for (int k = 0; k < 4; ++k) {
      bw[k] = h[k].derivative();
      btheta[k] = bw[k].derivative();
    }
  }
};

}  // namespace ffem
