#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ffem/frac_kernel.hpp"
#include "oracles.hpp"

using namespace ffem;

TEST(FracParams, Validation) {
  EXPECT_NO_THROW((FracParams{1.0, 0.1}.validate()));
  EXPECT_NO_THROW((FracParams{0.3, 0.1}.validate()));
  EXPECT_THROW((FracParams{0.0, 0.1}.validate()), std::domain_error);
  EXPECT_THROW((FracParams{1.2, 0.1}.validate()), std::domain_error);
  EXPECT_THROW((FracParams{0.8, 0.0}.validate()), std::domain_error);
  EXPECT_TRUE((FracParams{0.45, 0.1}.below_physical_range()));
  EXPECT_FALSE((FracParams{0.5, 0.1}.below_physical_range()));
  EXPECT_TRUE((FracParams{1.0, 0.1}.is_local()));
}

TEST(Horizon, InteriorAndTruncated) {
  const double L = 2.0;
  Horizon h = horizon_at(0.5 * L, 0.1 * L, L);
  EXPECT_DOUBLE_EQ(h.lA, 0.1 * L);
  EXPECT_DOUBLE_EQ(h.lB, 0.1 * L);
  h = horizon_at(0.05 * L, 0.1 * L, L);
  EXPECT_DOUBLE_EQ(h.lA, 0.05 * L);
  EXPECT_DOUBLE_EQ(h.lB, 0.1 * L);
  h = horizon_at(L, 0.1 * L, L);
  EXPECT_DOUBLE_EQ(h.lA, 0.1 * L);
  EXPECT_DOUBLE_EQ(h.lB, 0.0);
  EXPECT_THROW(horizon_at(-0.01, 0.1, 1.0), std::domain_error);
  EXPECT_THROW(horizon_at(1.01, 0.1, 1.0), std::domain_error);
}

TEST(Kernel, Values) {
  EXPECT_NEAR(kernel(0.0, 0.5, 1.0, 0.5), 0.25 / std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(kernel(0.0, 0.5, 1.0, 0.5), 0.353553390593273762, 1e-15);
  EXPECT_DOUBLE_EQ(kernel(0.5, 0.0, 1.0, 0.5), kernel(0.0, 0.5, 1.0, 0.5));
  EXPECT_NEAR(kernel(0.0, 0.1, 0.1, 0.8), 1.0, 1e-14);
  EXPECT_THROW(kernel(0.3, 0.3, 1.0, 0.5), std::domain_error);
  EXPECT_THROW(kernel(0.0, 0.3, 1.0, 1.0), std::domain_error);
}

TEST(Kernel, PositiveDecayingWithHalfUnitMass) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.05 + 0.9 * u(rng);
    const double r = u(rng);
    const double k = kernel(0.0, r, 1.0, a);
    EXPECT_GT(k, 0.0);
    EXPECT_GT(k, kernel(0.0, r * 1.01, 1.0, a));
  }
  // Each side carries mass 1/2 whatever the order and length scale.
  for (int i = 0; i < 20; ++i) {
    const double a = 0.05 + 0.9 * u(rng);
    const double l = 0.5 * u(rng);
    const double mass = oracle::singular([&](double) { return 0.5 * (1 - a) * std::pow(l, a - 1); }, l, a);
    EXPECT_NEAR(mass, 0.5, 1e-10);
    EXPECT_DOUBLE_EQ(kernel(0.0, l, l, a) * l, 0.5 * (1 - a));
  }
}

TEST(Attenuation, SideSelection) {
  const Horizon h{0.1, 0.2};
  EXPECT_DOUBLE_EQ(attenuation(0.5, 0.45, h, 0.7), kernel(0.5, 0.45, 0.1, 0.7));
  EXPECT_DOUBLE_EQ(attenuation(0.5, 0.6, h, 0.7), kernel(0.5, 0.6, 0.2, 0.7));
  const Horizon sym{0.2, 0.2};
  for (double d : {0.01, 0.05, 0.13}) EXPECT_DOUBLE_EQ(attenuation(0.5, 0.5 - d, sym, 0.6), attenuation(0.5, 0.5 + d, sym, 0.6));
  EXPECT_THROW(attenuation(0.5, 0.35, h, 0.7), std::domain_error);
  EXPECT_THROW(attenuation(0.5, 0.5, h, 0.7), std::domain_error);
}

TEST(SingularMoment, ClosedFormExamples) {
  const double a = 0.37;
  EXPECT_NEAR(singular_moment(0.2, 0.2, 0.5, a, 0), std::pow(0.3, 1 - a) / (1 - a), 1e-14);
  EXPECT_NEAR(singular_moment(0.0, 0.0, 1.0, 0.5, 0), 2.0, 1e-14);
  EXPECT_NEAR(singular_moment(0.0, 0.0, 1.0, 0.5, 1), 2.0 / 3.0, 1e-14);
  EXPECT_THROW(singular_moment(0.5, 0.0, 1.0, 0.5, 0), std::domain_error);
  EXPECT_THROW(singular_moment(0.0, 0.0, 1.0, 1.0, 0), std::domain_error);
  EXPECT_THROW(singular_moment(0.0, 0.0, 1.0, 0.5, 4), std::domain_error);
}

TEST(SingularMoment, MatchesQuadratureOracle) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const double alpha = 0.05 + 0.9 * u(rng);
    const double a = u(rng);
    const double b = a + 0.01 + u(rng);
    const int k = i % 4;
    // x at an endpoint or outside the interval, on either side.
    double x;
    switch (i % 4) {
      case 0: x = a; break;
      case 1: x = b; break;
      case 2: x = a - 0.5 * u(rng); break;
      default: x = b + 0.5 * u(rng); break;
    }
    const double got = singular_moment(x, a, b, alpha, k);
    double want;
    if (x <= a) {
      want = oracle::singular([&](double t) { return std::pow(t - (a - x), k); }, b - x, alpha) -
             oracle::singular([&](double t) { return std::pow(t - (a - x), k); }, a - x, alpha);
    } else {
      want = oracle::singular([&](double t) { return std::pow(x - t - a, k); }, x - a, alpha) -
             oracle::singular([&](double t) { return std::pow(x - t - a, k); }, x - b, alpha);
    }
    EXPECT_NEAR(got, want, 1e-10 * std::max(1.0, std::abs(want))) << "case " << i;
  }
}

TEST(RieszCaputo, ConstantAndAffine) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double alpha = 0.01 + 0.98 * u(rng);
    const Horizon h{0.01 + u(rng), 0.01 + u(rng)};
    const double c = 4 * u(rng) - 2, b = 4 * u(rng) - 2, x = u(rng);
    EXPECT_NEAR(rc_derivative(Polynomial{c}, x, h, alpha), 0.0, 1e-14);
    EXPECT_NEAR(rc_derivative(make_field(Polynomial{c}), x, h, alpha), 0.0, 1e-14);
    EXPECT_NEAR(rc_derivative(Polynomial{c, b}, x, h, alpha), b, 1e-12 * std::abs(b));
    EXPECT_NEAR(rc_derivative(make_field(Polynomial{c, b}), x, h, alpha), b, 1e-12 * std::abs(b));
  }
}

TEST(RieszCaputo, SquareAgainstOracle) {
  const Polynomial f{0.0, 0.0, 1.0};
  const Horizon h{0.5, 0.5};
  const double want = oracle::rc([](double s) { return 2.0 * s; }, 0.5, h, 0.5);
  EXPECT_NEAR(rc_derivative(f, 0.5, h, 0.5), want, 1e-8 * std::abs(want));
  EXPECT_NEAR(rc_derivative(make_field(f), 0.5, h, 0.5), want, 1e-8 * std::abs(want));
}

TEST(RieszCaputo, RandomSmoothFieldsAgainstOracle) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto f = oracle::SmoothField::random(rng);
    const double alpha = 0.5 + 0.49 * u(rng);
    const Horizon h{0.02 + 0.3 * u(rng), 0.02 + 0.3 * u(rng)};
    const double x = u(rng);
    const double want = oracle::rc([&](double s) { return f.slope(s); }, x, h, alpha);
    EXPECT_NEAR(rc_derivative(f.field(), x, h, alpha), want, 1e-8 * std::max(1.0, std::abs(want))) << "case " << i;
  }
}

TEST(RieszCaputo, PolynomialClosedFormMatchesQuadraturePath) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Polynomial p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double alpha = 0.5 + 0.45 * std::abs(u(rng));
    const Horizon h{0.3 * std::abs(u(rng)), 0.3 * std::abs(u(rng))};
    const double x = u(rng);
    EXPECT_NEAR(rc_derivative(p, x, h, alpha), rc_derivative(make_field(p), x, h, alpha), 1e-12);
  }
}

TEST(RieszCaputo, ZeroLengthSideIsHalfSlope) {
  const Polynomial p{1.0, 2.0, 3.0};
  const double x = 0.0;
  const double alpha = 0.7;
  const Horizon h{0.0, 0.2};
  const double right = 0.5 * (1 - alpha) * std::pow(0.2, alpha - 1) *
                       oracle::singular([](double t) { return 2.0 + 6.0 * t; }, 0.2, alpha);
  EXPECT_NEAR(rc_derivative(p, x, h, alpha), 0.5 * 2.0 + right, 1e-12);
}

TEST(RieszCaputo, ClassicalLimit) {
  const auto f = make_field(Polynomial{0.3, -1.0, 2.0, 0.5});
  const Horizon h{0.1, 0.1};
  const double x = 0.4;
  const double exact = f.derivative(x);
  EXPECT_NEAR(rc_derivative(f, x, h, 0.999), exact, 1e-2 * std::abs(exact));
  EXPECT_DOUBLE_EQ(rc_derivative(f, x, h, 1.0), exact);
  EXPECT_THROW(rc_derivative(f, x, h, 0.0), std::domain_error);
}

TEST(RieszCaputo, DomainCheck) {
  const auto f = make_field(Polynomial{0.0, 1.0}, 0.0, 1.0);
  EXPECT_THROW(rc_derivative(f, 0.05, Horizon{0.1, 0.1}, 0.8), std::domain_error);
  EXPECT_NO_THROW(rc_derivative(f, 0.1, Horizon{0.1, 0.1}, 0.8));
}

TEST(RieszRL, ZeroConstantAndLinear) {
  const Horizon h{0.2, 0.2};
  EXPECT_DOUBLE_EQ(r_rl_derivative(Polynomial{0.0}, 0.5, h, 0.6), 0.0);
  EXPECT_NEAR(r_rl_derivative(make_field(Polynomial{2.5}), 0.5, h, 0.6), 0.0, 1e-14);
  const oracle::Fn c = [](double) { return 2.5; };
  EXPECT_NEAR(oracle::r_rl(c, 0.5, h, 0.6), 0.0, 1e-10);
  EXPECT_NEAR(r_rl_derivative(make_field(Polynomial{0.0, 1.0}), 0.5, h, 0.6), 1.0, 1e-12);
  EXPECT_NEAR(oracle::r_rl([](double s) { return s; }, 0.5, h, 0.6), 1.0, 1e-9);
}

TEST(RieszRL, RandomSmoothFieldsAgainstOracle) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto f = oracle::SmoothField::random(rng);
    const double alpha = 0.5 + 0.49 * u(rng);
    const Horizon h{0.02 + 0.3 * u(rng), 0.02 + 0.3 * u(rng)};
    const double x = u(rng);
    const double want = oracle::r_rl([&](double s) { return f.value(s); }, x, h, alpha);
    EXPECT_NEAR(r_rl_derivative(f.field(), x, h, alpha), want, 1e-8 * std::max(1.0, std::abs(want)))
        << "case " << i;
  }
}

TEST(RieszIntegral, SignStructure) {
  const Horizon h{0.2, 0.2};
  const double x = 0.5;
  EXPECT_DOUBLE_EQ(riesz_integral(make_field(Polynomial{0.0}), x, h, 0.7), 0.0);
  EXPECT_NEAR(riesz_integral(make_field(Polynomial{3.0}), x, h, 0.7), 0.0, 1e-14);
  const Polynomial odd{-x, 1.0};
  const double want = oracle::riesz([&](double s) { return s - x; }, x, h, 0.7);
  EXPECT_GT(std::abs(want), 1e-3);
  EXPECT_NEAR(riesz_integral(make_field(odd), x, h, 0.7), want, 1e-8 * std::abs(want));
}

TEST(RieszIntegral, RandomAgainstOracle) {
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto f = oracle::SmoothField::random(rng);
    const double alpha = 0.5 + 0.49 * u(rng);
    const Horizon h{0.02 + 0.3 * u(rng), 0.02 + 0.3 * u(rng)};
    const double x = u(rng);
    const double want = oracle::riesz([&](double s) { return f.value(s); }, x, h, alpha);
    EXPECT_NEAR(riesz_integral(f.field(), x, h, alpha), want, 1e-9 * std::max(1.0, std::abs(want)));
  }
}

// The adjoint integral is what makes integration by parts exact on [0, L]:
// \int_0^L g D^a f dx = \int_0^L G f' ds for any f, g.
TEST(AdjointIntegral, IntegrationByPartsOnBoundedBeam) {
  const double L = 1.0, lf = 0.2, alpha = 0.7;
  const Polynomial f{0.1, 0.4, -0.3, 0.8};
  const Polynomial df = f.derivative();
  const Polynomial g{1.0, -0.5, 0.25};
  const AdjointIntegral adj(alpha, lf, L, 32);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto lhs_integrand = [&](double x) { return g(x) * rc_derivative(f, x, horizon_at(x, lf, L), alpha); };
  double lhs = 0.0, rhs = 0.0;
  // Both integrands have kinks at lf and L - lf; integrate piecewise.
  const double br[] = {0.0, lf, L - lf, L};
  for (int k = 0; k < 3; ++k) {
    lhs += ts.integrate(lhs_integrand, br[k], br[k + 1], 1e-12);
    rhs += ts.integrate([&](double s) { return adj([&](double x) { return g(x); }, s) * df(s); }, br[k], br[k + 1],
                        1e-12);
  }
  EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(lhs));
}

TEST(AdjointIntegral, UnitFieldIsOneAwayFromTheEnds) {
  // Just past a kink a breakpoint lands next to t = 0; the result must not notice.
  const AdjointIntegral adj(0.7, 0.2, 1.0);
  for (double s : {0.2, 0.2 + 1e-7, 0.21, 0.5, 0.8 - 1e-7, 0.8})
    EXPECT_NEAR(adj([](double) { return 1.0; }, s), 1.0, 1e-13) << "s = " << s;
}

TEST(AdjointIntegral, LocalLimitIsIdentity) {
  const AdjointIntegral adj(1.0, 0.1, 1.0);
  EXPECT_DOUBLE_EQ(adj([](double x) { return 3.0 * x; }, 0.4), 1.2);
  EXPECT_THROW((void)adj([](double x) { return x; }, 1.2), std::domain_error);
}
