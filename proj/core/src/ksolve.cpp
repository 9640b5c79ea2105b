#include "kfn/ksolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kfn/error.hpp"
#include "kfn/parallel.hpp"

namespace kfn {

double k_objective(const CoupleSpec& couple, const Element& x, const Element& y, double t) {
  const Vector& xs = samples_of(x);
  const Vector& ys = samples_of(y);
  if (xs.size() != ys.size()) {
    detail::fail_domain("k_objective: dim(x) = " + std::to_string(xs.size()) +
                        " but dim(y) = " + std::to_string(ys.size()));
  }
  return norm(couple.x_space(), with_samples(x, xs - ys)) + t * norm(couple.y_space(), y);
}

namespace {

// Empty when applicable, otherwise the reason.
std::string applicability(const CoupleSpec& couple, const Element& x) {
  const bool grid = std::holds_alternative<GridFunction>(x);
  const std::size_t dim = samples_of(x).size();
  switch (couple.solver()) {
    case SolverKind::weighted_closed_form: {
      if (grid) return "the weighted solver takes a vector, not a grid function";
      const std::size_t wd = couple.y_space().weights()->size();
      if (wd != dim) {
        return "dim(x) = " + std::to_string(dim) + " but the weights have length " +
               std::to_string(wd);
      }
      return {};
    }
    case SolverKind::clip_l1_sup:
      return grid ? "the clip solver takes a vector, not a grid function" : "";
    case SolverKind::lip_grid:
      return grid ? "" : "the lip_grid solver needs a grid function";
    case SolverKind::numeric_lq_lp:
      return grid ? "the numeric solver takes a vector, not a grid function" : "";
    case SolverKind::brute_force:
      if (dim > kBruteForceMaxDim) {
        return "brute force is limited to dimension " + std::to_string(kBruteForceMaxDim);
      }
      if (couple.y_space().kind() == SpaceKind::lip_grid && !grid) {
        return "a lip_grid Y needs a grid function";
      }
      if (couple.y_space().kind() == SpaceKind::weighted_l1 &&
          couple.y_space().weights()->size() != dim) {
        return "weights length does not match dim(x)";
      }
      return {};
  }
  return "unknown solver";
}

}  // namespace

bool solver_applicable(const CoupleSpec& couple, const Element& x) {
  return applicability(couple, x).empty();
}

KResult solve(const CoupleSpec& couple, const Element& x, double t, const SolveOptions& opts) {
  if (const std::string why = applicability(couple, x); !why.empty()) {
    detail::fail_domain(std::string(to_string(couple.solver())) + ": " + why);
  }
  switch (couple.solver()) {
    case SolverKind::weighted_closed_form:
      return k_weighted(std::get<Vector>(x), t, *couple.y_space().weights());
    case SolverKind::clip_l1_sup:
      return k_clip(std::get<Vector>(x), t);
    case SolverKind::lip_grid:
      return k_lip(std::get<GridFunction>(x), t);
    case SolverKind::numeric_lq_lp: {
      const SpaceSpec& xs = couple.x_space();
      const double q = xs.kind() == SpaceKind::sup ? std::numeric_limits<double>::infinity()
                                                   : xs.q();
      return k_numeric(std::get<Vector>(x), t, q, couple.y_space().q(), opts.numeric_tol);
    }
    case SolverKind::brute_force:
      return k_bruteforce(x, t, couple, opts.grid_step);
  }
  detail::fail_domain("unknown solver");
}

double k_sup(const std::vector<Element>& samples, double t, const CoupleSpec& couple,
             bool normalize, const SolveOptions& opts) {
  if (samples.empty()) detail::fail_domain("k_sup: empty sample list");
  std::vector<Element> work;
  work.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!normalize) {
      work.push_back(samples[i]);
      continue;
    }
    const double nx = norm(couple.x_space(), samples[i]);
    if (nx == 0.0) {
      detail::fail_domain("k_sup: sample " + std::to_string(i) + " has zero X norm");
    }
    work.push_back(scaled(samples[i], 1.0 / nx));
  }
  std::vector<double> values(work.size());
  parallel_for(work.size(), [&](std::size_t i) { values[i] = solve(couple, work[i], t, opts).value; });
  return *std::max_element(values.begin(), values.end());
}

KCurve k_curve(const Element& x, const CoupleSpec& couple, std::span<const double> t_grid,
               const SolveOptions& opts) {
  if (t_grid.empty()) detail::fail_domain("k_curve: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) {
      detail::fail_domain("k_curve: t values must be finite and positive");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      detail::fail_domain("k_curve: t grid must be strictly increasing");
    }
  }
  if (const std::string why = applicability(couple, x); !why.empty()) {
    detail::fail_domain(std::string(to_string(couple.solver())) + ": " + why);
  }
  KCurve curve;
  curve.t_values.assign(t_grid.begin(), t_grid.end());
  curve.k_values.resize(t_grid.size());
  curve.error_bounds.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const KResult r = solve(couple, x, t_grid[i], opts);
    curve.k_values[i] = r.value;
    curve.error_bounds[i] = r.error_bound;
  });
  check_kcurve(curve, norm(couple.x_space(), x));
  return curve;
}

}  // namespace kfn
