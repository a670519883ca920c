#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ffem/problem.hpp"

namespace ffem {

struct StressProfile {
  double x1 = 0.0;
  double eps0 = 0.0;   // membrane strain D^a u + (D^a w)^2 / 2
  double kappa = 0.0;  // -D^a w'
  double N = 0.0;      // N
  double M = 0.0;      // N m
  std::vector<double> x3;
  double sigma_mid = 0.0;     // Pa, at x3 = 0
  std::vector<double> sigma;  // Pa
};

/// Axial stress E (eps0 + x3 kappa) through the thickness at x1.
inline StressProfile stress_profile(const NonlocalBasis& basis, const SectionProps& sec, const Eigen::VectorXd& X,
                                    double x1, int samples = 21, bool linearized = false) {
  const BasisRow row = basis.basis_row(x1);
  const FracValues v = basis.evaluate(row, X);
  const double d = linearized ? 0.0 : v.dw;
  StressProfile p;
  p.x1 = x1;
  p.eps0 = v.du + 0.5 * d * d;
  p.kappa = -v.dtheta;
  p.N = sec.A11() * p.eps0;
  p.M = sec.D11() * p.kappa;
  p.sigma_mid = sec.E * p.eps0;
  for (int k = 0; k < samples; ++k) {
    const double z = samples == 1 ? 0.0 : -0.5 * sec.h + sec.h * k / (samples - 1);
    p.x3.push_back(z);
    p.sigma.push_back(sec.E * (p.eps0 + z * p.kappa));
  }
  return p;
}

struct Normalized {
  double w_bar = 0.0;
  double load_bar = 0.0;  // q_bar or P_bar
  double q0 = 0.0;        // load intensity used for stress scaling, N/m
};

/// w_bar = w / h, q_bar = q0 L / h, P_bar = P L / h. Point loads use P / L as
/// the intensity in the stress scaling.
inline Normalized nondimensionalize(const BeamConfig& c, double w, double load) {
  Normalized n;
  n.w_bar = w / c.h;
  n.load_bar = load * c.L / c.h;
  n.q0 = c.load_kind == LoadKind::UDL ? load : load / c.L;
  return n;
}

/// sigma_bar = sigma (h / L)^2 / q0
inline double normalize_stress(const BeamConfig& c, double sigma, double q0) {
  return q0 == 0.0 ? 0.0 : sigma * (c.h / c.L) * (c.h / c.L) / q0;
}

inline void set_csv_precision(std::ostream& os) { os << std::setprecision(std::numeric_limits<double>::max_digits10); }

/// Columns: load_factor, load_bar, w_bar_mid, iterations
inline void write_load_displacement(std::ostream& os, const SolutionRecord& rec) {
  set_csv_precision(os);
  os << "load_factor,load_bar,w_bar_mid,iterations\n";
  const double full = rec.config.load_magnitude();
  for (const auto& s : rec.steps) {
    const Normalized n = nondimensionalize(rec.config, s.w_mid, s.load_factor * full);
    os << s.load_factor << ',' << n.load_bar << ',' << n.w_bar << ',' << s.iterations << '\n';
  }
}

/// Columns: x3_over_h, sigma_bar
inline void write_stress(std::ostream& os, const BeamConfig& c, const StressProfile& p, double q0) {
  set_csv_precision(os);
  os << "x3_over_h,sigma_bar\n";
  for (std::size_t k = 0; k < p.x3.size(); ++k) os << p.x3[k] / c.h << ',' << normalize_stress(c, p.sigma[k], q0) << '\n';
}

}  // namespace ffem
