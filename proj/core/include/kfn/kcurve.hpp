#pragma once

#include <vector>

namespace kfn {

/// Sampled t -> K(x, t) with a per-sample solver error bound.
struct KCurve {
  std::vector<double> t_values;
  std::vector<double> k_values;
  std::vector<double> error_bounds;

  std::size_t size() const noexcept { return t_values.size(); }
};

/// Throws CheckFailure when t is not strictly increasing and positive, when
/// K decreases by more than the combined error bounds, or when some value
/// exceeds x_norm + error_bound.
void check_kcurve(const KCurve& curve, double x_norm, double slack = 1e-12);

/// Log-spaced grid of `points` values in [tmin, tmax].
std::vector<double> log_grid(double tmin, double tmax, std::size_t points);

/// t_k = 2^{-k} for k = 0..k_max, in increasing order of t.
std::vector<double> dyadic_grid(int k_max);

}  // namespace kfn
