#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ffem/nonlocal_basis.hpp"

using namespace ffem;

namespace {

// Nodal DOFs X = [U; W] interpolating u(x) and w(x).
Eigen::VectorXd interpolate(const Mesh& m, const Polynomial& u, const Polynomial& w) {
  const DofLayout d(m);
  Eigen::VectorXd X(d.size());
  const Polynomial dw = w.derivative();
  for (int i = 0; i < m.nodes(); ++i) {
    const double x = m.node(i);
    X(d.u(i)) = u(x);
    X(d.transverse_offset() + d.w(i)) = w(x);
    X(d.transverse_offset() + d.slope(i)) = dw(x);
  }
  return X;
}

}  // namespace

TEST(SparseRow, AddGrowsBothWays) {
  SparseRow r;
  r.add(5, 1.0);
  r.add(3, 2.0);
  r.add(7, 3.0);
  r.add(5, 1.0);
  EXPECT_EQ(r.first, 3);
  EXPECT_EQ(r.last(), 8);
  EXPECT_EQ(r.values, (std::vector<double>{2.0, 0.0, 2.0, 0.0, 3.0}));
  const std::vector<double> x = {0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(r.dot(x), 7.0);
}

TEST(NonlocalBasis, AffineFieldsGiveTheirSlope) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 15; ++t) {
    const double L = 1.0;
    const FracParams fp{0.5 + 0.49 * u(rng), L * (0.05 + 0.15 * u(rng))};
    const Mesh mesh(L, 20 + static_cast<int>(60 * u(rng)));
    const NonlocalBasis b = build_basis(mesh, QuadRule(4), fp);
    const double c = u(rng) - 0.5, s = 2 * u(rng) - 1;
    const Eigen::VectorXd X = interpolate(mesh, Polynomial{c, s}, Polynomial{c, s});
    for (const FracValues& v : b.frac_values(X)) {
      EXPECT_NEAR(v.du, s, 1e-10 * std::abs(s));
      EXPECT_NEAR(v.dw, s, 1e-10 * std::abs(s));
      EXPECT_NEAR(v.dtheta, 0.0, 1e-9);
    }
  }
}

TEST(NonlocalBasis, CubicDeflectionIsDifferentiatedExactly) {
  // The Hermite interpolant of a cubic is the cubic itself, so the rows must
  // reproduce the closed-form Riesz-Caputo derivative of w and w'.
  const double L = 1.0;
  const FracParams fp{0.7, 0.15};
  const Mesh mesh(L, 40);
  const NonlocalBasis b = build_basis(mesh, QuadRule(3), fp);
  const Polynomial w{0.2, -0.4, 1.1, -0.7};
  const Polynomial dw = w.derivative();
  const Eigen::VectorXd X = interpolate(mesh, Polynomial{0.0, 0.3}, w);
  const auto vals = b.frac_values(X);
  for (int g = 0; g < b.points(); ++g) {
    const double x = b.row(g).x;
    const Horizon h = horizon_at(x, fp.lf, L);
    EXPECT_NEAR(vals[g].dw, rc_derivative(w, x, h, fp.alpha), 1e-11);
    EXPECT_NEAR(vals[g].dtheta, rc_derivative(dw, x, h, fp.alpha), 1e-9);
  }
  // Also at the ends, where one side of the horizon vanishes.
  for (double x : {0.0, L}) {
    const FracValues v = b.evaluate(b.basis_row(x), X);
    EXPECT_NEAR(v.dw, rc_derivative(w, x, horizon_at(x, fp.lf, L), fp.alpha), 1e-11);
  }
}

TEST(NonlocalBasis, LocalOrderGivesShapeDerivatives) {
  const Mesh mesh(1.0, 10);
  const NonlocalBasis b = build_basis(mesh, QuadRule(2), FracParams{1.0, 0.1});
  const Polynomial w{0.0, 0.5, -1.0, 2.0};
  const Eigen::VectorXd X = interpolate(mesh, Polynomial{0.1, 0.7}, w);
  const auto vals = b.frac_values(X);
  for (int g = 0; g < b.points(); ++g) {
    const double x = b.row(g).x;
    EXPECT_NEAR(vals[g].du, 0.7, 1e-13);
    EXPECT_NEAR(vals[g].dw, w.derivative()(x), 1e-12);
    EXPECT_NEAR(vals[g].dtheta, w.derivative().derivative()(x), 1e-10);
    EXPECT_EQ(b.row(g).bw.values.size(), 4u);
  }
}

TEST(NonlocalBasis, GaussPiecesConvergeToClosedForm) {
  const Mesh mesh(1.0, 30);
  const FracParams fp{0.6, 0.1};
  BasisOptions gl;
  gl.integration = PieceIntegration::GaussLegendre;
  gl.inner_points = 12;
  const NonlocalBasis exact = build_basis(mesh, QuadRule(4), fp);
  const NonlocalBasis approx = build_basis(mesh, QuadRule(4), fp, gl);
  const Eigen::VectorXd X = interpolate(mesh, Polynomial{0.0, 0.2, -0.2}, Polynomial{0.0, 0.0, 1.0, -1.0});
  const auto a = exact.frac_values(X);
  const auto b = approx.frac_values(X);
  for (std::size_t g = 0; g < a.size(); ++g) {
    EXPECT_NEAR(a[g].du, b[g].du, 1e-6);
    EXPECT_NEAR(a[g].dw, b[g].dw, 1e-6);
    EXPECT_NEAR(a[g].dtheta, b[g].dtheta, 1e-5);
  }
}

TEST(NonlocalBasis, WindowModes) {
  const Mesh mesh(1.0, 50);  // lf / le = 5
  const FracParams fp{0.8, 0.1};
  BasisOptions rounded, inclusive;
  rounded.window = HorizonWindow::Rounded;
  inclusive.window = HorizonWindow::RoundedInclusive;
  const NonlocalBasis e = build_basis(mesh, QuadRule(4), fp);
  const NonlocalBasis r = build_basis(mesh, QuadRule(4), fp, rounded);
  const NonlocalBasis i = build_basis(mesh, QuadRule(4), fp, inclusive);
  // Interior Gauss point of element 25: x in (0.5, 0.52).
  const int g = 25 * 4 + 1;
  EXPECT_EQ(e.row(g).n_left, 5);
  EXPECT_EQ(e.row(g).n_right, 5);
  // Rounded: five whole elements left of element 25; inclusive: four.
  EXPECT_EQ(r.row(g).bu.first, 20);
  EXPECT_EQ(i.row(g).bu.first, 21);
  // Right side: the element holding x plus four more, ending at node 30
  // (last() is one past the final DOF).
  EXPECT_EQ(r.row(g).bu.last(), 31);
  EXPECT_EQ(i.row(g).bu.last(), 31);
  // Exact: x + lf falls inside element 30.
  EXPECT_EQ(e.row(g).bu.first, 20);
  EXPECT_EQ(e.row(g).bu.last(), 32);
}

TEST(NonlocalBasis, ThreadCountDoesNotChangeRows) {
  const Mesh mesh(1.0, 40);
  const FracParams fp{0.75, 0.1};
  BasisOptions many;
  many.threads = 3;
  const NonlocalBasis a = build_basis(mesh, QuadRule(4), fp);
  const NonlocalBasis b = build_basis(mesh, QuadRule(4), fp, many);
  for (int g = 0; g < a.points(); ++g) {
    EXPECT_EQ(a.row(g).bw.first, b.row(g).bw.first);
    EXPECT_EQ(a.row(g).bw.values, b.row(g).bw.values);
    EXPECT_EQ(a.row(g).btheta.values, b.row(g).btheta.values);
  }
}

TEST(NonlocalBasis, CsvDump) {
  const Mesh mesh(1.0, 4);
  const NonlocalBasis b = build_basis(mesh, QuadRule(1), FracParams{0.9, 0.5});
  std::ostringstream os;
  b.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "gauss_point,x,operator,dof,value");
  std::size_t n = 0;
  while (std::getline(is, line)) ++n;
  std::size_t want = 0;
  for (const auto& r : b.rows()) want += r.bu.values.size() + r.bw.values.size() + r.btheta.values.size();
  EXPECT_EQ(n, want);
}

TEST(NonlocalBasis, StateSizeChecked) {
  const NonlocalBasis b = build_basis(Mesh(1.0, 4), QuadRule(2), FracParams{0.9, 0.2});
  const Eigen::VectorXd small = Eigen::VectorXd::Zero(3);
  EXPECT_THROW((void)b.frac_values(small), std::invalid_argument);
}
