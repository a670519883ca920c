#pragma once

// Scalar fractional-order operators on a 1D horizon: the power-law kernel,
// the asymmetric attenuation function, closed-form weakly singular moments,
// and the Riesz-Caputo / Riesz-Riemann-Liouville derivatives.
//
// Convention: the Riesz-Caputo derivative of f at x over the horizon
// (x - lA, x + lB) is
//
//   D^a f(x) = (1 - a)/2 * [ lA^(a-1) \int_{x-lA}^{x} f'(s) (x - s)^(-a) ds
//                          + lB^(a-1) \int_{x}^{x+lB} f'(s) (s - x)^(-a) ds ]
//
// i.e. the Gamma(2 - a)/2 prefactor with Gamma(1 - a) already absorbed into
// the Caputo integrals. Affine fields map to their slope for any horizon.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffem/polynomial.hpp"
#include "ffem/quadrature.hpp"

namespace ffem {

/// Order and isotropic horizon length of the fractional model.
struct FracParams {
  double alpha = 1.0;
  double lf = 0.1;  // m

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::domain_error("fractional order alpha must lie in (0, 1], got " + std::to_string(alpha));
    if (!(lf > 0.0)) throw std::domain_error("horizon length lf must be positive");
  }

  [[nodiscard]] bool is_local() const { return alpha == 1.0; }

  /// Orders below 0.5 approach the range where the model stops being physical.
  [[nodiscard]] bool below_physical_range() const { return alpha < 0.5; }
};

/// Left/right horizon lengths at an evaluation point.
struct Horizon {
  double lA = 0.0;
  double lB = 0.0;
};

inline Horizon horizon_at(double x, double lf, double L) {
  if (!(lf > 0.0) || !(L > 0.0)) throw std::domain_error("horizon_at: lf and L must be positive");
  if (x < 0.0 || x > L) throw std::domain_error("horizon_at: x outside [0, L]");
  return {std::min(lf, x), std::min(lf, L - x)};
}

/// Power-law kernel (1 - a)/2 * l^(a - 1) * |x - s|^(-a).
inline double kernel(double x, double s, double l, double alpha) {
  if (x == s) throw std::domain_error("kernel: singular at x == s");
  if (!(l > 0.0)) throw std::domain_error("kernel: length scale must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("kernel: alpha must lie in (0, 1)");
  return 0.5 * (1.0 - alpha) * std::pow(l, alpha - 1.0) * std::pow(std::abs(x - s), -alpha);
}

/// Kernel with the length scale of the side of x on which s lies.
inline double attenuation(double x, double s, const Horizon& h, double alpha) {
  if (s == x) throw std::domain_error("attenuation: singular at s == x");
  if (s <= x - h.lA || s >= x + h.lB) throw std::domain_error("attenuation: s outside the horizon");
  return kernel(x, s, s < x ? h.lA : h.lB, alpha);
}

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// [t^p]_{t0}^{t0+H} evaluated without cancellation for small H / t0.
inline double power_increment(double t0, double H, double p) {
  if (t0 == 0.0) return std::pow(H, p);
  return std::pow(t0, p) * std::expm1(p * std::log1p(H / t0));
}

}  // namespace detail

/**
 * Exact value of \int_a^b |x - s|^(-alpha) (s - a)^k ds for k in {0, 1, 2, 3}.
 * x must be an endpoint of [a, b] or lie outside it; an interior x has to be
 * split by the caller.
 */
inline double singular_moment(double x, double a, double b, double alpha, int k) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("singular_moment: alpha must lie in [0, 1)");
  if (k < 0 || k > 3) throw std::domain_error("singular_moment: degree must lie in 0..3");
  if (b < a) throw std::domain_error("singular_moment: b < a");
  if (x > a && x < b) throw std::domain_error("singular_moment: x strictly inside (a, b); split first");
  const double H = b - a;
  if (H == 0.0) return 0.0;

  double sum = 0.0;
  if (x <= a) {
    // t = s - x in [d, d + H], (s - a) = t - d.
    const double d = a - x;
    for (int j = 0; j <= k; ++j) {
      const double p = j + 1.0 - alpha;
      const double c = detail::binomial(k, j) * (k - j == 0 ? 1.0 : std::pow(-d, k - j));
      if (c == 0.0) continue;
      sum += c * detail::power_increment(d, H, p) / p;
    }
  } else {
    // t = x - s in [e, e + H], (s - a) = (e + H) - t.
    const double e = x - b;
    for (int j = 0; j <= k; ++j) {
      const double p = j + 1.0 - alpha;
      const double c = detail::binomial(k, j) * (k - j == 0 ? 1.0 : std::pow(e + H, k - j)) *
                       (j % 2 == 0 ? 1.0 : -1.0);
      if (c == 0.0) continue;
      sum += c * detail::power_increment(e, H, p) / p;
    }
  }
  return sum;
}

/// A scalar field on [lo, hi] with an evaluable first derivative.
struct ScalarField {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

inline ScalarField make_field(const Polynomial& p, double lo = -std::numeric_limits<double>::infinity(),
                              double hi = std::numeric_limits<double>::infinity()) {
  Polynomial dp = p.derivative();
  return {[p](double x) { return p(x); }, [dp](double x) { return dp(x); }, lo, hi};
}

namespace detail {

inline void check_horizon(const ScalarField& f, double x, double left, double right, const char* who) {
  const double slack = 1e-12 * std::max({1.0, std::abs(x), left, right});
  if (left < 0.0 || right < 0.0) throw std::domain_error(std::string(who) + ": negative horizon length");
  if (x - left < f.lo - slack || x + right > f.hi + slack)
    throw std::domain_error(std::string(who) + ": horizon extends past the field's domain");
}

inline double check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error(std::string(who) + ": alpha must lie in (0, 1]");
  return alpha;
}

// (1 - a)/2 * l^(a-1) * \int_0^l phi(t) t^(-a) dt, with the l -> 0 limit phi(0)/2.
template <class Fn>
double half_caputo(const WeakSingularRule& rule, Fn&& phi, double l) {
  const double alpha = rule.alpha();
  if (l == 0.0) return 0.5 * phi(0.0);
  return 0.5 * (1.0 - alpha) * std::pow(l, alpha - 1.0) * rule.integrate(phi, l);
}

}  // namespace detail

/// Riesz-Caputo derivative of a general field by Gauss-Jacobi quadrature.
inline double rc_derivative(const ScalarField& f, double x, const Horizon& h, double alpha,
                            const WeakSingularRule* rule = nullptr) {
  detail::check_alpha(alpha, "rc_derivative");
  detail::check_horizon(f, x, h.lA, h.lB, "rc_derivative");
  if (alpha == 1.0) return f.derivative(x);
  std::optional<WeakSingularRule> local_rule;
  if (!rule) rule = &local_rule.emplace(alpha);
  const WeakSingularRule& r = *rule;
  return detail::half_caputo(r, [&](double t) { return f.derivative(x - t); }, h.lA) +
         detail::half_caputo(r, [&](double t) { return f.derivative(x + t); }, h.lB);
}

/// Riesz-Caputo derivative of a polynomial in closed form.
inline double rc_derivative(const Polynomial& p, double x, const Horizon& h, double alpha) {
  detail::check_alpha(alpha, "rc_derivative");
  const Polynomial dp = p.derivative();
  if (alpha == 1.0) return dp(x);
  const Polynomial taylor = dp.shifted(x);
  double sum = 0.0;
  double powA = 1.0;
  double powB = 1.0;
  for (int m = 0; m <= taylor.degree(); ++m) {
    sum += taylor.coeff(m) * (powA + powB) / (m + 1.0 - alpha);
    powA *= -h.lA;
    powB *= h.lB;
  }
  return 0.5 * (1.0 - alpha) * sum;
}

/**
 * Riesz-type Riemann-Liouville derivative at x: the left operator runs over
 * (x - lB, x) with prefactor lB^(a-1), the right one over (x, x + lA) with
 * lA^(a-1). The terminals move with x, so the result equals the Caputo form
 * with the length scales swapped; this is the exact adjoint of rc_derivative
 * for horizons of constant length.
 */
inline double r_rl_derivative(const ScalarField& g, double x, const Horizon& h, double alpha,
                              const WeakSingularRule* rule = nullptr) {
  return rc_derivative(g, x, Horizon{h.lB, h.lA}, alpha, rule);
}

inline double r_rl_derivative(const Polynomial& g, double x, const Horizon& h, double alpha) {
  return rc_derivative(g, x, Horizon{h.lB, h.lA}, alpha);
}

/**
 * Riesz fractional integral of order (1 - a):
 *   Gamma(2-a)/2 * ( lB^(a-1) I_left[g] - lA^(a-1) I_right[g] )
 * with I_left over (x - lB, x) and I_right over (x, x + lA).
 */
inline double riesz_integral(const ScalarField& g, double x, const Horizon& h, double alpha,
                             const WeakSingularRule* rule = nullptr) {
  detail::check_alpha(alpha, "riesz_integral");
  detail::check_horizon(g, x, h.lB, h.lA, "riesz_integral");
  if (alpha == 1.0) return 0.0;
  std::optional<WeakSingularRule> local_rule;
  if (!rule) rule = &local_rule.emplace(alpha);
  const WeakSingularRule& r = *rule;
  // Gamma(2-a)/Gamma(1-a) = 1 - a folds into half_caputo's prefactor.
  return detail::half_caputo(r, [&](double t) { return g.value(x - t); }, h.lB) -
         detail::half_caputo(r, [&](double t) { return g.value(x + t); }, h.lA);
}

/**
 * Adjoint fractional integral on a bounded beam [0, L]:
 *
 *   G(s) = \int A_p(x, s; lA(x), lB(x)) g(x) dx
 *
 * over every x whose (truncated) horizon contains s. For a point s whose
 * neighbours all see full horizons this is the Riesz-type integral with plus
 * sign and dG/ds equals r_rl_derivative. Near the ends the length scales of
 * the integration points are used, so integration by parts against
 * rc_derivative is exact on the whole beam.
 */
class AdjointIntegral {
 public:
  AdjointIntegral(double alpha, double lf, double L, int points = 24)
      : alpha_(alpha), lf_(lf), L_(L), rule_(alpha < 1.0 ? alpha : 0.0, points), gl_(gauss_legendre(points)) {
    detail::check_alpha(alpha, "AdjointIntegral");
    if (!(lf > 0.0) || !(L > 0.0)) throw std::domain_error("AdjointIntegral: lf and L must be positive");
  }

  [[nodiscard]] double alpha() const { return alpha_; }

  template <class Fn>
  [[nodiscard]] double operator()(Fn&& g, double s) const {
    if (s < 0.0 || s > L_) throw std::domain_error("AdjointIntegral: s outside [0, L]");
    if (alpha_ == 1.0) return g(s);
    const Horizon h = horizon_at(s, lf_, L_);
    const double a1 = alpha_ - 1.0;
    // Points left of s weight with their right length scale, and vice versa.
    auto left = [&](double t) {
      const double x = s - t;
      return std::pow(std::min(lf_, L_ - x), a1) * g(x);
    };
    auto right = [&](double t) {
      const double x = s + t;
      return std::pow(std::min(lf_, x), a1) * g(x);
    };
    // Kinks of the integrand sit where the neighbour's horizon stops being
    // truncated; grading resolves the (d + t)^(a-1) growth near the ends.
    const double left_sum =
        integrate_piece(left, h.lA, {s - lf_, s - (L_ - lf_)}, L_ - s < lf_ ? L_ - s : -1.0);
    const double right_sum = integrate_piece(right, h.lB, {lf_ - s, (L_ - lf_) - s}, s < lf_ ? s : -1.0);
    return 0.5 * (1.0 - alpha_) * (left_sum + right_sum);
  }

 private:
  template <class Fn>
  double integrate_piece(Fn&& phi, double tmax, std::initializer_list<double> kinks, double grade) const {
    if (tmax <= 0.0) return 0.0;
    std::vector<double> br{0.0, tmax};
    for (double k : kinks)
      if (k > 0.0 && k < tmax) br.push_back(k);
    if (grade > 0.0)
      for (double t = grade; t < tmax; t = 2.0 * t + grade) br.push_back(t);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(), [&](double p, double q) { return q - p <= 1e-14 * tmax; }),
             br.end());
    // A breakpoint close to t = 0 leaves t^(-a) nearly singular on the next
    // piece; split geometrically so every Gauss-Legendre piece has b <= 3a.
    for (std::size_t i = 1; i + 1 < br.size(); ++i)
      if (br[i + 1] > 3.0 * br[i]) br.insert(br.begin() + static_cast<std::ptrdiff_t>(i) + 1, 3.0 * br[i]);

    double sum = rule_.integrate(phi, br[1]);
    for (std::size_t i = 1; i + 1 < br.size(); ++i) {
      const double a = br[i];
      const double b = br[i + 1];
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      double part = 0.0;
      for (int k = 0; k < gl_.size(); ++k) {
        const double t = mid + half * gl_.nodes[k];
        part += gl_.weights[k] * std::pow(t, -alpha_) * phi(t);
      }
      sum += half * part;
    }
    return sum;
  }

  double alpha_;
  double lf_;
  double L_;
  WeakSingularRule rule_;
  GaussRule gl_;
};

}  // namespace ffem
