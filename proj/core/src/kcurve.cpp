#include "kfn/kcurve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfn/error.hpp"

namespace kfn {

void check_kcurve(const KCurve& curve, double x_norm, double slack) {
  const std::size_t n = curve.t_values.size();
  if (curve.k_values.size() != n || curve.error_bounds.size() != n) {
    detail::fail_check("k-curve: column lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = curve.t_values[i];
    const double k = curve.k_values[i];
    const double err = curve.error_bounds[i];
    const double tol = err + slack * std::max(1.0, x_norm);
    if (!(t > 0.0)) detail::fail_check("k-curve: t must be positive");
    if (!(k >= -tol)) detail::fail_check("k-curve: negative K at index " + std::to_string(i));
    if (k > x_norm + tol) {
      detail::fail_check("k-curve: K exceeds ||x||_X at index " + std::to_string(i));
    }
    if (i > 0) {
      if (!(t > curve.t_values[i - 1])) detail::fail_check("k-curve: t not strictly increasing");
      if (k + tol + curve.error_bounds[i - 1] < curve.k_values[i - 1]) {
        detail::fail_check("k-curve: K decreases in t at index " + std::to_string(i));
      }
    }
  }
}

std::vector<double> log_grid(double tmin, double tmax, std::size_t points) {
  if (!(tmin > 0.0) || !(tmax >= tmin) || !std::isfinite(tmax)) {
    detail::fail_domain("t grid needs 0 < tmin <= tmax < inf");
  }
  if (points == 0) detail::fail_domain("t grid needs at least one point");
  if (points == 1) return {tmin};
  if (tmin == tmax) detail::fail_domain("t grid with several points needs tmin < tmax");
  std::vector<double> t(points);
  const double lo = std::log(tmin);
  const double hi = std::log(tmax);
  for (std::size_t i = 0; i < points; ++i) {
    t[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  t.front() = tmin;
  t.back() = tmax;
  return t;
}

std::vector<double> dyadic_grid(int k_max) {
  if (k_max < 0) detail::fail_domain("k_max must be >= 0");
  std::vector<double> t;
  for (int k = k_max; k >= 0; --k) t.push_back(std::ldexp(1.0, -k));
  return t;
}

}  // namespace kfn
