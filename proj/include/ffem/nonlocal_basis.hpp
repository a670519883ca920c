#pragma once

// Global fractional B-matrices. Each row maps the global DOF vector to a
// fractional derivative (D^a u, D^a w or D^a w') at one evaluation point:
//
//   row(x) = \int_{x-lA}^{x+lB} A(x, s) B(s) C(x, s) ds
//
// where B(s) holds the integer-order shape derivatives of the element
// containing s. On every element piece the integrand is a polynomial times
// |x - s|^(-a), so the default path integrates each piece in closed form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ffem/frac_kernel.hpp"
#include "ffem/mesh.hpp"
#include "ffem/parallel.hpp"

namespace ffem {

/// Contiguous slice of a long, mostly-zero row.
struct SparseRow {
  int first = 0;
  std::vector<double> values;

  [[nodiscard]] int last() const { return first + static_cast<int>(values.size()); }

  template <class Vec>
  [[nodiscard]] double dot(const Vec& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) s += values[k] * x[first + static_cast<int>(k)];
    return s;
  }

  void add(int index, double v) {
    if (values.empty()) {
      first = index;
      values.push_back(v);
      return;
    }
    if (index < first) {
      values.insert(values.begin(), static_cast<std::size_t>(first - index), 0.0);
      first = index;
    } else if (index >= last()) {
      values.resize(static_cast<std::size_t>(index - first + 1), 0.0);
    }
    values[static_cast<std::size_t>(index - first)] += v;
  }
};

/// How the horizon is cut into element pieces.
enum class HorizonWindow {
  // Exact clipped interval (x - lA, x + lB); partial end elements included.
  Exact,
  // Node-aligned: ceil(lA/le) whole elements left of the piece holding x,
  // and on the right that piece plus floor(lB/le) - 1 whole elements.
  Rounded,
  // As Rounded, but the piece holding x also counts toward ceil(lA/le) on the
  // left, mirroring the right side.
  RoundedInclusive,
};

/// How the pieces not touching x are integrated.
enum class PieceIntegration {
  ClosedForm,
  GaussLegendre,
};

struct BasisOptions {
  HorizonWindow window = HorizonWindow::Exact;
  PieceIntegration integration = PieceIntegration::ClosedForm;
  int inner_points = 4;  // Gauss-Legendre order for GaussLegendre pieces
  int threads = 1;
};

struct BasisRow {
  double x = 0.0;
  Horizon horizon;
  int n_left = 0;   // N_A^inf
  int n_right = 0;  // N_B^inf
  SparseRow bu;      // over U_g
  SparseRow bw;      // over W_g
  SparseRow btheta;  // over W_g
};

/// Fractional derivatives at one point.
struct FracValues {
  double du = 0.0;
  double dw = 0.0;
  double dtheta = 0.0;
};

class NonlocalBasis {
 public:
  NonlocalBasis(Mesh mesh, QuadRule quad, FracParams fp, BasisOptions opt = {})
      : mesh_(mesh), layout_(mesh_), quad_(std::move(quad)), fp_(fp), opt_(opt), polys_(mesh_.element_length()) {
    fp_.validate();
    if (opt_.inner_points < 1) throw std::domain_error("NonlocalBasis: inner_points must be >= 1");
    inner_ = gauss_legendre(opt_.inner_points);
  }

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] const DofLayout& layout() const { return layout_; }
  [[nodiscard]] const QuadRule& quad() const { return quad_; }
  [[nodiscard]] const FracParams& params() const { return fp_; }
  [[nodiscard]] const BasisOptions& options() const { return opt_; }

  [[nodiscard]] int points() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] const BasisRow& row(int gp) const { return rows_[static_cast<std::size_t>(gp)]; }
  [[nodiscard]] const std::vector<BasisRow>& rows() const { return rows_; }
  /// Quadrature weight w_j * J of Gauss point gp.
  [[nodiscard]] double weight(int gp) const { return quad_.rule.weights[gp % quad_.points] * mesh_.jacobian(); }

  /// Row at an arbitrary x in [0, L].
  [[nodiscard]] BasisRow basis_row(double x) const {
    BasisRow r;
    r.x = x;
    r.horizon = horizon_at(x, fp_.lf, mesh_.length());
    const double le = mesh_.element_length();
    r.n_left = static_cast<int>(std::ceil(r.horizon.lA / le - 1e-12));
    r.n_right = static_cast<int>(std::floor(r.horizon.lB / le + 1e-12));

    if (fp_.is_local()) {
      const auto [e, xi] = mesh_.locate(x);
      add_local(r, e, x - mesh_.node(e), 1.0);
      return r;
    }

    const Horizon& h = r.horizon;
    const double c = 0.5 * (1.0 - fp_.alpha);
    const double cA = h.lA > 0.0 ? c * std::pow(h.lA, fp_.alpha - 1.0) : 0.0;
    const double cB = h.lB > 0.0 ? c * std::pow(h.lB, fp_.alpha - 1.0) : 0.0;

    // Zero-length sides contribute the one-sided limit B(x)/2.
    if (h.lA == 0.0 || h.lB == 0.0) {
      const auto [e, xi] = mesh_.locate(x);
      const double w = (h.lA == 0.0 ? 0.5 : 0.0) + (h.lB == 0.0 ? 0.5 : 0.0);
      add_local(r, e, x - mesh_.node(e), w);
    }

    double lo = x - h.lA;
    double hi = x + h.lB;
    if (opt_.window != HorizonWindow::Exact) {
      const int e = mesh_.locate(x).first;
      const int left = opt_.window == HorizonWindow::Rounded ? r.n_left : std::max(r.n_left - 1, 0);
      lo = h.lA > 0.0 ? mesh_.node(std::max(0, e - left)) : x;
      hi = h.lB > 0.0 ? mesh_.node(std::min(mesh_.elements(), e + std::max(r.n_right, 1))) : x;
    }
    if (lo < 0.0) lo = 0.0;
    if (hi > mesh_.length()) hi = mesh_.length();

    const int e_lo = mesh_.locate(lo).first;
    const int e_hi = mesh_.locate(hi).first;
    for (int e = e_lo; e <= e_hi; ++e) {
      const double xa = mesh_.node(e);
      const double xb = mesh_.node(e + 1);
      // Left piece (s < x) and right piece (s > x) of this element.
      const double la = std::max(xa, lo);
      const double lb = std::min(xb, x);
      if (lb > la && cA > 0.0) add_piece(r, e, la, lb, cA);
      const double ra = std::max(xa, x);
      const double rb = std::min(xb, hi);
      if (rb > ra && cB > 0.0) add_piece(r, e, ra, rb, cB);
    }
    return r;
  }

  /// Builds the rows at all Gauss points.
  void build() {
    const int ngp = quad_.points;
    const int n = mesh_.elements() * ngp;
    rows_.assign(static_cast<std::size_t>(n), {});
    parallel_for(n, opt_.threads, [&](int g) {
      const int e = g / ngp;
      const int j = g % ngp;
      rows_[static_cast<std::size_t>(g)] = basis_row(mesh_.to_physical(e, quad_.rule.nodes[j]));
    });
  }

  /// (D^a u, D^a w, D^a w') at every Gauss point for X = [U_g; W_g].
  template <class Vec>
  [[nodiscard]] std::vector<FracValues> frac_values(const Vec& X) const {
    if (static_cast<int>(X.size()) != layout_.size())
      throw std::invalid_argument("frac_values: state size does not match the DOF layout");
    std::vector<FracValues> out(rows_.size());
    for (std::size_t g = 0; g < rows_.size(); ++g) out[g] = evaluate(rows_[g], X);
    return out;
  }

  template <class Vec>
  [[nodiscard]] FracValues evaluate(const BasisRow& r, const Vec& X) const {
    const double* U = X.data();
    const double* W = X.data() + layout_.transverse_offset();
    return {r.bu.dot(U), r.bw.dot(W), r.btheta.dot(W)};
  }

  /// Debug dump; columns: gauss_point, x, operator, dof, value.
  void write_csv(std::ostream& os) const {
    os.precision(17);
    os << "gauss_point,x,operator,dof,value\n";
    for (std::size_t g = 0; g < rows_.size(); ++g) {
      const BasisRow& r = rows_[g];
      auto dump = [&](const SparseRow& row, const char* name, int offset) {
        for (std::size_t k = 0; k < row.values.size(); ++k)
          os << g << ',' << r.x << ',' << name << ',' << offset + row.first + static_cast<int>(k) << ','
             << row.values[k] << '\n';
      };
      dump(r.bu, "u", 0);
      dump(r.bw, "w", layout_.transverse_offset());
      dump(r.btheta, "theta", layout_.transverse_offset());
    }
  }

 private:
  // Adds weight * B(x) of element e, z = x - x_e.
  void add_local(BasisRow& r, int e, double z, double weight) const {
    for (int k = 0; k < 2; ++k) r.bu.add(layout_.element_u(e) + k, weight * polys_.bu[k](z));
    for (int k = 0; k < 4; ++k) {
      r.bw.add(layout_.element_w(e) + k, weight * polys_.bw[k](z));
      r.btheta.add(layout_.element_w(e) + k, weight * polys_.btheta[k](z));
    }
  }

  // Adds scale * \int_a^b |x - s|^(-a) B_e(s) ds for a piece [a, b] of element e
  // that does not contain x in its interior.
  void add_piece(BasisRow& r, int e, double a, double b, double scale) const {
    const double x = r.x;
    const double xe = mesh_.node(e);
    const bool touches = (a == x || b == x);
    if (touches || opt_.integration == PieceIntegration::ClosedForm) {
      double m[3];
      for (int k = 0; k < 3; ++k) m[k] = singular_moment(x, a, b, fp_.alpha, k);
      auto integrate = [&](const Polynomial& p) {
        const Polynomial q = p.shifted(a - xe);
        double s = 0.0;
        for (int k = 0; k <= q.degree(); ++k) s += q.coeff(static_cast<std::size_t>(k)) * m[k];
        return scale * s;
      };
      for (int k = 0; k < 2; ++k) r.bu.add(layout_.element_u(e) + k, integrate(polys_.bu[k]));
      for (int k = 0; k < 4; ++k) {
        r.bw.add(layout_.element_w(e) + k, integrate(polys_.bw[k]));
        r.btheta.add(layout_.element_w(e) + k, integrate(polys_.btheta[k]));
      }
      return;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double su[2] = {0, 0}, sw[4] = {0, 0, 0, 0}, st[4] = {0, 0, 0, 0};
    for (int q = 0; q < inner_.size(); ++q) {
      const double s = mid + half * inner_.nodes[q];
      const double wq = scale * half * inner_.weights[q] * std::pow(std::abs(x - s), -fp_.alpha);
      const double z = s - xe;
      for (int k = 0; k < 2; ++k) su[k] += wq * polys_.bu[k](z);
      for (int k = 0; k < 4; ++k) {
        sw[k] += wq * polys_.bw[k](z);
        st[k] += wq * polys_.btheta[k](z);
      }
    }
    for (int k = 0; k < 2; ++k) r.bu.add(layout_.element_u(e) + k, su[k]);
    for (int k = 0; k < 4; ++k) {
      r.bw.add(layout_.element_w(e) + k, sw[k]);
      r.btheta.add(layout_.element_w(e) + k, st[k]);
    }
  }

  Mesh mesh_;
  DofLayout layout_;
  QuadRule quad_;
  FracParams fp_;
  BasisOptions opt_;
  ElementDerivativePolys polys_;
  GaussRule inner_;
  std::vector<BasisRow> rows_;
};

inline NonlocalBasis build_basis(const Mesh& mesh, const QuadRule& quad, const FracParams& fp,
                                 const BasisOptions& opt = {}) {
  NonlocalBasis basis(mesh, quad, fp, opt);
  basis.build();
  return basis;
}

}  // namespace ffem
