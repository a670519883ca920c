#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ffem/config.hpp"
#include "ffem/post.hpp"
#include "ffem/problem.hpp"

using namespace ffem;

namespace {

BeamConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, EmptyFileGivesStudyDefaults) {
  const BeamConfig c = parse("");
  EXPECT_DOUBLE_EQ(c.L, 1.0);
  EXPECT_DOUBLE_EQ(c.L / c.h, 100.0);
  EXPECT_DOUBLE_EQ(c.b, 1.0);
  EXPECT_DOUBLE_EQ(c.E, 3e9);
  EXPECT_DOUBLE_EQ(c.lf_ratio, 0.1);
  EXPECT_EQ(c.element_count(), 100);  // lf / le = 10
  EXPECT_NEAR(c.lf() / (c.L / c.element_count()), 10.0, 1e-12);
  EXPECT_EQ(c.bc, BCKind::ClampedClamped);
  EXPECT_EQ(c.basis.window, HorizonWindow::Exact);
  EXPECT_EQ(c.solver.load_steps, 10);
  EXPECT_EQ(c.n_infs, (std::vector<int>{2, 5, 10, 20}));
}

TEST(Config, FullFile) {
  const BeamConfig c = parse(R"(
[geometry]
L = 2.0
h = 0.02
[fractional]
alpha = 0.7
lf_ratio = 0.05
[mesh]
n_inf = 4
window = rounded_inclusive
integration = gauss
inner_points = 6
[load]
kind = point
p_bar = 300
location_ratio = 0.25
[bc]
type = pinned
[solver]
load_steps = 5
tol = 1e-8
linearized = true
[study]
alphas = 1, 0.75
n_inf = 3, 6
[output]
dir = out/here
[run]
threads = 2
)");
  EXPECT_DOUBLE_EQ(c.L, 2.0);
  EXPECT_EQ(c.element_count(), 80);
  EXPECT_EQ(c.basis.window, HorizonWindow::RoundedInclusive);
  EXPECT_EQ(c.basis.integration, PieceIntegration::GaussLegendre);
  EXPECT_EQ(c.basis.inner_points, 6);
  EXPECT_EQ(c.load_kind, LoadKind::Point);
  EXPECT_NEAR(c.load_magnitude(), 300 * 0.02 / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.location_ratio, 0.25);
  EXPECT_EQ(c.bc, BCKind::PinnedPinned);
  EXPECT_EQ(c.solver.load_steps, 5);
  EXPECT_TRUE(c.linearized);
  EXPECT_EQ(c.alphas, (std::vector<double>{1.0, 0.75}));
  EXPECT_EQ(c.n_infs, (std::vector<int>{3, 6}));
  EXPECT_EQ(c.output_dir, "out/here");
  EXPECT_EQ(c.threads, 2);
}

TEST(Config, DimensionalLoad) {
  const BeamConfig c = parse("[load]\nmagnitude = 250\n");
  EXPECT_TRUE(c.dimensional);
  EXPECT_DOUBLE_EQ(c.load_magnitude(), 250.0);
  EXPECT_NEAR(parse("[load]\nq_bar = 10\n").load_magnitude(), 0.1, 1e-15);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[geometry]\nlength = 1\n"), ConfigError);
  EXPECT_THROW(parse("[geometry]\nL = abc\n"), ConfigError);
  EXPECT_THROW(parse("[geometry]\nL = 1 m\n"), ConfigError);
  EXPECT_THROW(parse("[fractional]\nalpha = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("[bc]\ntype = free\n"), ConfigError);
  EXPECT_THROW(parse("[load]\nkind = point\nq_bar = 3\n"), ConfigError);
  EXPECT_THROW(parse("[load]\nq_bar = 3\nmagnitude = 2\n"), ConfigError);
  EXPECT_THROW(parse("[study]\nalphas = 1, x\n"), ConfigError);
  EXPECT_THROW(parse("L = 1\n"), ConfigError);
  try {
    parse("[geometry]\nL = 1\nthis line is broken\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    parse("[mesh]\nwindow = sideways\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mesh.window"), std::string::npos);
  }
}

TEST(Config, Warnings) {
  BeamConfig c;
  EXPECT_TRUE(c.validate().empty());
  c.h = 0.1;
  c.alpha = 0.45;
  EXPECT_EQ(c.validate().size(), 2u);
}

TEST(Normalization, Formulas) {
  BeamConfig c;
  Normalized n = nondimensionalize(c, c.h, 0.1);
  EXPECT_DOUBLE_EQ(n.w_bar, 1.0);
  EXPECT_DOUBLE_EQ(n.load_bar, 10.0);
  // q0 = q_bar h / L round-trips
  EXPECT_DOUBLE_EQ(nondimensionalize(c, 0.0, c.load_magnitude()).load_bar, c.load);
  c.load_kind = LoadKind::Point;
  n = nondimensionalize(c, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(n.load_bar, 100.0);
  EXPECT_DOUBLE_EQ(n.q0, 1.0);
  EXPECT_DOUBLE_EQ(normalize_stress(c, 2.5e4, 0.25), 2.5e4 * 1e-4 / 0.25);
  EXPECT_DOUBLE_EQ(normalize_stress(c, 1.0, 0.0), 0.0);
}

TEST(Stress, ZeroAndPureBending) {
  BeamConfig c;
  c.elements = 20;
  const auto basis = make_basis(c);
  Eigen::VectorXd X = Eigen::VectorXd::Zero(basis->layout().size());
  StressProfile p = stress_profile(*basis, c.section(), X, 0.5, 11);
  for (double s : p.sigma) EXPECT_EQ(s, 0.0);

  // Transverse field only, membrane coupling dropped: eps0 = 0.
  const auto& lay = basis->layout();
  for (int i = 0; i < basis->mesh().nodes(); ++i) {
    const double x = basis->mesh().node(i);
    X(lay.transverse_offset() + lay.w(i)) = 1e-3 * x * x * (1 - x) * (1 - x);
    X(lay.transverse_offset() + lay.slope(i)) = 1e-3 * (2 * x - 6 * x * x + 4 * x * x * x);
  }
  p = stress_profile(*basis, c.section(), X, 0.3, 11, true);
  EXPECT_EQ(p.eps0, 0.0);
  EXPECT_NE(p.kappa, 0.0);
  EXPECT_NEAR(p.sigma[5], 0.0, 1e-9 * std::abs(p.sigma[0]));
  for (int k = 0; k < 11; ++k) EXPECT_NEAR(p.sigma[k], -p.sigma[10 - k], 1e-12 * std::abs(p.sigma[0]));
  EXPECT_DOUBLE_EQ(p.x3.front(), -0.5 * c.h);
  EXPECT_DOUBLE_EQ(p.x3.back(), 0.5 * c.h);
  EXPECT_DOUBLE_EQ(p.M, c.section().D11() * p.kappa);
}

TEST(Csv, LoadDisplacementRoundTrip) {
  BeamConfig c;
  c.elements = 20;
  c.load = 5e4;
  const SolutionRecord rec = solve(c);
  std::ostringstream os;
  write_load_displacement(os, rec);
  const auto rows = read_csv(os.str());
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"load_factor", "load_bar", "w_bar_mid", "iterations"}));
  for (std::size_t k = 0; k < rec.steps.size(); ++k) {
    const auto& s = rec.steps[k];
    const Normalized n = nondimensionalize(c, s.w_mid, s.load_factor * c.load_magnitude());
    EXPECT_EQ(std::stod(rows[k + 1][0]), s.load_factor);
    EXPECT_EQ(std::stod(rows[k + 1][1]), n.load_bar);
    EXPECT_EQ(std::stod(rows[k + 1][2]), n.w_bar);
    EXPECT_EQ(std::stoi(rows[k + 1][3]), s.iterations);
  }
  EXPECT_GT(rec.final().w_mid, 0.0);
}

TEST(Csv, StressRoundTripAndZeroLoad) {
  BeamConfig c;
  c.elements = 20;
  c.load = 0.0;
  const SolutionRecord rec = solve(c);
  for (const auto& s : rec.steps) EXPECT_EQ(s.X.norm(), 0.0);
  const StressProfile p = stress_profile(*rec.basis, c.section(), rec.final().X, 0.5);
  std::ostringstream os;
  write_stress(os, c, p, 0.0);
  const auto rows = read_csv(os.str());
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x3_over_h", "sigma_bar"}));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_EQ(std::stod(rows[k][0]), p.x3[k - 1] / c.h);
    EXPECT_EQ(std::stod(rows[k][1]), 0.0);
  }
}
