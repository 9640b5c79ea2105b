#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kfn/kcurve.hpp"
#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn {

/// Value of K(x, t) = inf_y ||x - y||_X + t ||y||_Y with a certified error
/// bound and, when the solver produces one, the near-optimal y.
///
/// Invariants: objective(minimizer) <= value + error_bound, and
/// value <= ||x||_X (y = 0 is feasible).
struct KResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::optional<Element> minimizer;
  SolverKind method = SolverKind::brute_force;
};

/// ||x - y||_X + t ||y||_Y.
double k_objective(const CoupleSpec& couple, const Element& x, const Element& y, double t);

/// (l_1, weighted l_1): value = sum_k |x_k| min(1, t w_k), exact.
KResult k_weighted(const Vector& x, double t, const Vector& weights);

/// (l_1, sup): minimum over clip levels M of sum_k (|a_k| - M)_+ + t M,
/// evaluated at the breakpoints {0} u {|a_k|}. The smallest optimal level
/// wins ties.
KResult k_clip(const Vector& a, double t);

/// (sup, grid Lipschitz seminorm): minimum over L >= 0 of E(L) + t L where
/// E(L) is the best sup-distance from f to a grid function with Lipschitz
/// constant <= L. The minimizer is the midpoint of the L-Lipschitz upper and
/// lower envelopes of f. O(n^2) in the node count: building E needs the
/// largest difference at every node distance.
KResult k_lip(const GridFunction& f, double t);

/// (l_q, l_p) for q, p >= 1 (q may be +inf), certified to within `tol` by a
/// primal-dual gap. Throws CheckFailure if the gap cannot be closed.
KResult k_numeric(const Vector& x, double t, double q, double p, double tol);

/// Largest dimension accepted by k_bruteforce.
inline constexpr std::size_t kBruteForceMaxDim = 4;

/// Grid minimization of the objective over a box known to contain a
/// minimizer, exhaustive up to Lipschitz-bound pruning. value is the exact
/// minimum over the grid; error_bound = modulus of continuity at step/2.
/// Independent of the structured solvers; used as their oracle.
KResult k_bruteforce(const Element& x, double t, const CoupleSpec& couple, double grid_step);

struct SolveOptions {
  double numeric_tol = 1e-10;
  double grid_step = 1e-3;
};

/// Whether `solve` can evaluate this couple on this element.
bool solver_applicable(const CoupleSpec& couple, const Element& x);

/// Dispatches on couple.solver().
KResult solve(const CoupleSpec& couple, const Element& x, double t, const SolveOptions& opts = {});

/// max over samples of K(x, t): a lower bound for K(A, t) when samples lie
/// in A. With normalize set, every sample is first scaled to ||x||_X = 1.
double k_sup(const std::vector<Element>& samples, double t, const CoupleSpec& couple,
             bool normalize = false, const SolveOptions& opts = {});

/// K along an increasing t grid. Grid points are evaluated concurrently;
/// the result is identical to a sequential run. Monotonicity and the
/// ||x||_X bound are asserted afterwards (CheckFailure), never clamped.
KCurve k_curve(const Element& x, const CoupleSpec& couple, std::span<const double> t_grid,
               const SolveOptions& opts = {});

}  // namespace kfn
