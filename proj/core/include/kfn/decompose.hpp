#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kfn/ksolve.hpp"
#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn {

struct Split {
  Vector x0;
  Vector y0;
  /// ||x0||_X + t0 ||y0||_Y, evaluated at the returned pieces.
  double objective = 0.0;
};

/// x = x0 + y0 with ||x0||_X + t0 ||y0||_Y < rho^{1/p} ||x||_X, using the
/// couple's minimizer at t0. Throws CheckFailure ("no contraction at t0")
/// when the minimizer does not beat the bound, and DomainError when p is not
/// in (0, min(p_X, p_Y)] or rho is not in (0, 1).
Split near_optimal_split(const Vector& x, double t0, double rho, double p,
                         const CoupleSpec& couple, const SolveOptions& opts = {});

struct DecompositionStep {
  Vector x_m;
  Vector y_m;
  double x_norm = 0.0;  ///< ||x_m||_X
  double y_norm = 0.0;  ///< ||y_m||_Y
};

struct DecompositionTrace {
  double t0 = 0.0;
  double rho = 0.0;
  double p = 1.0;
  Vector x{0.0};
  double x_norm = 0.0;
  std::vector<DecompositionStep> steps;
  /// y_0 + ... + y_m over the recorded steps.
  Vector z_final{0.0};
  /// The residual dropped below 1e-14 ||x||_X before m_steps.
  bool stopped_early = false;
  /// Set when a step failed; the steps before it are kept.
  std::optional<std::string> failure;
};

/// Repeats near_optimal_split on the residual: x_{m} + y_{m} = x_{m-1}, with
/// x_{-1} = x, for m = 0..m_steps. Each step asserts
///   ||x_m||_X < (rho^{1/p})^{m+1} ||x||_X,
///   ||y_m||_Y < t0^{-1} (rho^{1/p})^{m+1} ||x||_X,
///   x = x_m + y_m + ... + y_0 within 1e-10 ||x||_X.
/// A failed split or assertion ends the run with `failure` set.
DecompositionTrace iterate_decomposition(const Vector& x, double t0, double rho, double p,
                                         int m_steps, const CoupleSpec& couple,
                                         const SolveOptions& opts = {});

/// sum_{k=m+1}^{n} rho^{k+1}; n < 0 means n = infinity.
double geometric_tail(double rho, int m, int n);

struct CauchyReport {
  std::size_t pairs_checked = 0;
  /// Largest ||z_n - z_m||_Y^p / sum_{k=m+1}^n ||y_k||_Y^p seen.
  double worst_triangle_ratio = 0.0;
  /// t0^{-p} ||x||_X^p rho^{M+2} / (1 - rho) with M the last step.
  double final_tail_bound = 0.0;
  /// final_tail_bound <= tol, or the residual reached zero so every later
  /// y_k vanishes.
  bool tail_below_tol = false;
};

/// For all recorded n > m asserts
///   ||z_n - z_m||_Y^p <= sum_{k=m+1}^n ||y_k||_Y^p
///                     <= t0^{-p} ||x||_X^p sum_{k=m+1}^n rho^{k+1}.
/// Throws CheckFailure on a violation: the first inequality failing means p
/// is wrong for Y.
CauchyReport verify_cauchy_in_y(const DecompositionTrace& trace, const CoupleSpec& couple,
                                double tol);

/// Smallest m >= 0 with t0^{-p} ||x||^p rho^{m+2} / (1 - rho) <= tol.
int steps_for_tail(double x_norm, double t0, double rho, double p, double tol);

}  // namespace kfn
