// Exact solvers for the three structured couples. Each returns the objective
// evaluated at the constructed minimizer, so the KResult invariant holds with
// error_bound = 0.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kfn/error.hpp"
#include "kfn/ksolve.hpp"

namespace kfn {

namespace {

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::fail_domain("t must be a finite positive number");
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

KResult k_weighted(const Vector& x, double t, const Vector& weights) {
  check_t(t);
  if (x.size() != weights.size()) {
    detail::fail_domain("k_weighted: dim(x) = " + std::to_string(x.size()) +
                        " but dim(w) = " + std::to_string(weights.size()));
  }
  for (double w : weights.entries()) {
    if (!(w > 0.0)) detail::fail_domain("k_weighted: weights must be strictly positive");
  }
  std::vector<double> y(x.size(), 0.0);
  double value = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double tw = t * weights[k];
    if (tw < 1.0) {
      y[k] = x[k];
      value += std::abs(x[k]) * tw;
    } else {
      value += std::abs(x[k]);
    }
  }
  return {value, 0.0, Element{Vector(std::move(y))}, SolverKind::weighted_closed_form};
}

KResult k_clip(const Vector& a, double t) {
  check_t(t);
  std::vector<double> mags(a.size());
  std::transform(a.entries().begin(), a.entries().end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end());

  // suffix[i] = sum of mags[i..]
  std::vector<double> suffix(mags.size() + 1, 0.0);
  for (std::size_t i = mags.size(); i-- > 0;) suffix[i] = suffix[i + 1] + mags[i];

  double best_level = 0.0;
  double best = suffix[0];
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double level = mags[i];
    if (level == 0.0 || (i > 0 && level == mags[i - 1])) continue;
    // Entries strictly above `level` start at the first index past the run.
    const auto above = static_cast<std::size_t>(
        std::upper_bound(mags.begin(), mags.end(), level) - mags.begin());
    const double g =
        suffix[above] - static_cast<double>(mags.size() - above) * level + t * level;
    if (g < best) {
      best = g;
      best_level = level;
    }
  }

  std::vector<double> y(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    y[k] = sign_of(a[k]) * std::min(std::abs(a[k]), best_level);
  }
  double value = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) value += std::abs(a[k] - y[k]);
  value += t * best_level;
  return {value, 0.0, Element{Vector(std::move(y))}, SolverKind::clip_l1_sup};
}

namespace {

struct Line {
  double intercept;
  double slope;
  double at(double x) const { return intercept + slope * x; }
};

// Smallest minimizer over x >= 0 of max_i lines[i](x). Requires at least one
// line with positive slope so the minimum exists.
double argmin_upper_envelope(std::vector<Line> lines) {
  std::sort(lines.begin(), lines.end(), [](const Line& l, const Line& r) {
    return l.slope < r.slope || (l.slope == r.slope && l.intercept > r.intercept);
  });
  std::vector<Line> hull;
  for (const Line& l : lines) {
    if (!hull.empty() && hull.back().slope == l.slope) continue;  // dominated duplicate slope
    while (hull.size() >= 2) {
      const Line& l1 = hull[hull.size() - 2];
      const Line& l2 = hull.back();
      const double x12 = (l1.intercept - l2.intercept) / (l2.slope - l1.slope);
      const double x13 = (l1.intercept - l.intercept) / (l.slope - l1.slope);
      if (x13 <= x12) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(l);
  }
  // Hull lines are active left to right; the first one with nonnegative
  // slope starts where the envelope stops decreasing.
  for (std::size_t j = 0; j < hull.size(); ++j) {
    if (hull[j].slope >= 0.0) {
      if (j == 0) return 0.0;
      const double x = (hull[j - 1].intercept - hull[j].intercept) /
                       (hull[j].slope - hull[j - 1].slope);
      return std::max(0.0, x);
    }
  }
  detail::fail_check("envelope minimization: no line with nonnegative slope");
}

// Midpoint of the L-Lipschitz upper envelope min_j (f_j + L|s_i - s_j|) and
// lower envelope max_j (f_j - L|s_i - s_j|), both in O(n).
std::vector<double> envelope_midpoint(std::span<const double> f, double lipschitz, double h) {
  const std::size_t n = f.size();
  const double step = lipschitz * h;
  std::vector<double> up(f.begin(), f.end());
  std::vector<double> lo(f.begin(), f.end());
  for (std::size_t i = 1; i < n; ++i) {
    up[i] = std::min(up[i], up[i - 1] + step);
    lo[i] = std::max(lo[i], lo[i - 1] - step);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    up[i] = std::min(up[i], up[i + 1] + step);
    lo[i] = std::max(lo[i], lo[i + 1] - step);
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = 0.5 * (up[i] + lo[i]);
  return g;
}

}  // namespace

KResult k_lip(const GridFunction& f, double t) {
  check_t(t);
  const auto v = f.values().entries();
  const std::size_t n = v.size();
  const double h = f.spacing();

  // E(L) = 1/2 max_k (D_k - L k h)_+ with D_k the largest difference between
  // nodes k apart, so E(L) + tL is the upper envelope of these lines.
  std::vector<Line> lines;
  lines.reserve(n);
  lines.push_back({0.0, t});
  for (std::size_t k = 1; k < n; ++k) {
    double dk = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) dk = std::max(dk, std::abs(v[i + k] - v[i]));
    if (dk > 0.0) lines.push_back({0.5 * dk, t - 0.5 * static_cast<double>(k) * h});
  }
  const double lipschitz = argmin_upper_envelope(std::move(lines));

  GridFunction g = f.with_values(Vector(envelope_midpoint(v, lipschitz, h)));
  const double value = norm(SpaceSpec::sup(), f.values() - g.values()) +
                       t * norm(SpaceSpec::lip_grid(), g);
  return {value, 0.0, Element{std::move(g)}, SolverKind::lip_grid};
}

}  // namespace kfn
