#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ffem {

/// Dense univariate polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> c) : coeffs_(c) {}
  explicit Polynomial(std::vector<double> c) : coeffs_(std::move(c)) {}

  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  [[nodiscard]] double operator()(double x) const {
    double v = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
    return v;
  }

  [[nodiscard]] Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
  }

  /// Coefficients of p(x) re-expanded in powers of (x - x0).
  [[nodiscard]] Polynomial shifted(double x0) const {
    std::vector<double> c = coeffs_;
    const std::size_t n = c.size();
    // Repeated synthetic division (Taylor shift).
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t k = n - 1; k > i; --k) c[k - 1] += x0 * c[k];
    return Polynomial(std::move(c));
  }

  /// p(scale * x)
  [[nodiscard]] Polynomial scaled(double scale) const {
    std::vector<double> c = coeffs_;
    double f = 1.0;
    for (double& ck : c) {
      ck *= f;
      f *= scale;
    }
    return Polynomial(std::move(c));
  }

  Polynomial& operator*=(double s) {
    for (double& ck : coeffs_) ck *= s;
    return *this;
  }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial{0.0};
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
  }

 private:
  std::vector<double> coeffs_{0.0};
};

}  // namespace ffem
