#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace ffem {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int step = -1, std::vector<double> history = {})
      : std::runtime_error(what), step_(step), history_(std::move(history)) {}

  [[nodiscard]] int step() const { return step_; }
  [[nodiscard]] const std::vector<double>& history() const { return history_; }

 private:
  int step_;
  std::vector<double> history_;
};

struct SolverControls {
  int load_steps = 10;
  double tol = 1e-6;        // on ||R|| / ||F_lambda|| over active DOFs
  int max_iters = 50;
  double divergence = 1e8;  // abort when ||R|| grows past this multiple of its step-start value

  void validate() const {
    if (load_steps < 1) throw std::domain_error("solver: load_steps must be >= 1");
    if (!(tol > 0.0 && tol < 1.0)) throw std::domain_error("solver: tol must lie in (0, 1)");
    if (max_iters < 1) throw std::domain_error("solver: max_iters must be >= 1");
    if (!(divergence > 1.0)) throw std::domain_error("solver: divergence factor must exceed 1");
  }
};

/// Per-iteration progress record.
struct IterationInfo {
  int step = 0;  // 1-based load step
  int iter = 0;  // 1-based iteration within the step
  double residual = 0.0;  // relative residual after the update
};

using ProgressHook = std::function<void(const IterationInfo&)>;

/**
 * Solves K x = rhs for symmetric K: Cholesky first, LDL^T when K is not
 * positive definite. Throws SolverError if both factorizations fail.
 * K is equilibrated by its diagonal first (axial and bending stiffnesses
 * differ by orders of magnitude) and the solution gets one refinement pass
 * with the residual formed in extended precision.
 */
inline Eigen::VectorXd solve_linear_system(const Eigen::MatrixXd& K, const Eigen::VectorXd& rhs) {
  if (K.rows() != K.cols() || K.rows() != rhs.size())
    throw std::invalid_argument("solve_linear_system: dimension mismatch");
  if (rhs.size() == 0) return rhs;
  Eigen::VectorXd s = K.diagonal().cwiseAbs();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = s(i) > 0.0 ? 1.0 / std::sqrt(s(i)) : 1.0;
  const Eigen::MatrixXd Ks = s.asDiagonal() * K * s.asDiagonal();
  auto refine = [&](const auto& fact) {
    Eigen::VectorXd x = s.asDiagonal() * fact.solve(s.asDiagonal() * rhs);
    using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const VecL rl = rhs.cast<long double>() - K.cast<long double>() * x.cast<long double>();
    const Eigen::VectorXd r = rl.cast<double>();
    x += s.asDiagonal() * fact.solve(s.asDiagonal() * r);
    return x;
  };
  Eigen::LLT<Eigen::MatrixXd> llt(Ks);
  if (llt.info() == Eigen::Success) return refine(llt);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Ks);
  if (ldlt.info() == Eigen::Success) {
    // rcond() misses exactly zero pivots, so bound it by the pivot ratio too.
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    const double rcond = std::min(ldlt.rcond(), d.maxCoeff() > 0.0 ? d.minCoeff() / d.maxCoeff() : 0.0);
    if (rcond > 1e3 * std::numeric_limits<double>::epsilon()) return refine(ldlt);
    std::ostringstream os;
    os << "linear solve failed: matrix is numerically singular (rcond " << rcond << ")";
    throw SolverError(os.str());
  }
  throw SolverError("linear solve failed: factorization of the tangent matrix broke down");
}

struct StepResult {
  double load_factor = 0.0;
  Eigen::VectorXd X;
  int iterations = 0;
  std::vector<double> residuals;  // relative residual after each iteration
};

/**
 * Incremental Newton-Raphson on a model exposing
 *   size(), active(), residual(X, F), tangent(X).
 * F_lambda = lambda F with lambda = k / load_steps. Each step starts from the
 * previous converged state.
 */
template <class Model>
class NewtonSolver {
 public:
  NewtonSolver(const Model& model, SolverControls controls = {}, ProgressHook hook = {})
      : model_(model), ctl_(controls), hook_(std::move(hook)) {
    ctl_.validate();
  }

  /// One update X <- X - K_T^{-1} R on the active DOFs. Returns the norm of the update.
  double newton_step(Eigen::VectorXd& X, const Eigen::VectorXd& F) const {
    const auto& act = model_.active();
    const Eigen::VectorXd R = model_.residual(X, F);
    const Eigen::MatrixXd K = model_.tangent(X);
    Eigen::VectorXd r(static_cast<Eigen::Index>(act.size()));
    Eigen::MatrixXd Kr(r.size(), r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      r(i) = R(act[i]);
      for (Eigen::Index j = 0; j < r.size(); ++j) Kr(i, j) = K(act[i], act[j]);
    }
    const Eigen::VectorXd dx = solve_linear_system(Kr, r);
    for (Eigen::Index i = 0; i < r.size(); ++i) X(act[i]) -= dx(i);
    return dx.norm();
  }

  [[nodiscard]] double active_norm(const Eigen::VectorXd& v) const {
    double s = 0.0;
    for (int i : model_.active()) s += v(i) * v(i);
    return std::sqrt(s);
  }

  /// Converges one load level from X (modified in place).
  StepResult solve_level(Eigen::VectorXd& X, const Eigen::VectorXd& F, double lambda, int step) const {
    StepResult out;
    out.load_factor = lambda;
    const double fnorm = active_norm(F);
    const double start = active_norm(model_.residual(X, F));
    for (int it = 1; it <= ctl_.max_iters; ++it) {
      try {
        newton_step(X, F);
      } catch (const SolverError& e) {
        throw SolverError(fail_message(e.what(), step), step, out.residuals);
      }
      const double rn = active_norm(model_.residual(X, F));
      const double rel = fnorm > 0.0 ? rn / fnorm : rn;
      out.residuals.push_back(rel);
      out.iterations = it;
      if (hook_) hook_({step, it, rel});
      if (!std::isfinite(rn) || !X.allFinite())
        throw SolverError(fail_message("NaN or Inf in the Newton iterate", step), step, out.residuals);
      if (rn <= ctl_.tol * fnorm || rn == 0.0) {
        out.X = X;
        return out;
      }
      if (start > 0.0 && rn > ctl_.divergence * start)
        throw SolverError(fail_message("Newton iteration diverged", step), step, out.residuals);
    }
    throw SolverError(fail_message("Newton iteration did not converge in max_iters", step), step, out.residuals);
  }

  /// Full incremental solve from X = 0.
  std::vector<StepResult> solve(const Eigen::VectorXd& F) const {
    if (F.size() != model_.size()) throw std::invalid_argument("NewtonSolver: force vector has the wrong size");
    Eigen::VectorXd X = Eigen::VectorXd::Zero(model_.size());
    std::vector<StepResult> steps;
    steps.reserve(static_cast<std::size_t>(ctl_.load_steps));
    for (int k = 1; k <= ctl_.load_steps; ++k) {
      const double lambda = static_cast<double>(k) / ctl_.load_steps;
      steps.push_back(solve_level(X, lambda * F, lambda, k));
    }
    return steps;
  }

 private:
  static std::string fail_message(const char* what, int step) {
    return std::string(what) + " at load step " + std::to_string(step);
  }

  const Model& model_;
  SolverControls ctl_;
  ProgressHook hook_;
};

}  // namespace ffem
