// Grid oracle for K. Deliberately shares no code path with the structured
// solvers beyond norm evaluation.
//
// Search box. For lattice X and Y, replacing y_k by its clamp to the segment
// between 0 and x_k lowers both |x_k - y_k| and |y_k|, so some minimizer is
// sign-aligned and dominated; we search y in prod_k [0, |x_k|] against |x|.
// For a grid-Lipschitz Y, clamping g to [min f, max f] lowers neither term's
// optimality (the sup distance and the difference quotients only shrink), so
// the box is [min f, max f]^n.
//
// Pruning uses an exact lower bound on each term over an index box: for a
// lattice norm, min over the box of ||x - y|| is the norm of the coordinate
// distances from x to the box; for the grid seminorm, the largest distance
// between adjacent coordinate intervals, over h.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kfn/error.hpp"
#include "kfn/ksolve.hpp"

namespace kfn {

namespace {

struct Axis {
  std::vector<double> points;
};

Axis make_axis(double lo, double hi, double step) {
  Axis ax;
  if (hi <= lo) {
    ax.points.push_back(lo);
    return ax;
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step));
  ax.points.reserve(count + 2);
  for (std::size_t m = 0; m <= count; ++m) {
    const double v = lo + static_cast<double>(m) * step;
    if (v < hi) ax.points.push_back(v);
  }
  ax.points.push_back(hi);
  return ax;
}

// Sup over |d_k| <= delta of |N(u + d) - N(u)| for the given space, with
// ||u|| <= bound (only used by quasi-norms).
double modulus(const SpaceSpec& s, std::size_t dim, double delta, double h, double bound) {
  switch (s.kind()) {
    case SpaceKind::sup: return delta;
    case SpaceKind::lip_grid: return 2.0 * delta / h;
    case SpaceKind::weighted_l1: {
      double sum = 0.0;
      for (double w : s.weights()->entries()) sum += w;
      return sum * delta;
    }
    case SpaceKind::lq: {
      const double q = s.q();
      const double d = std::pow(static_cast<double>(dim), 1.0 / q) * delta;
      if (q >= 1.0) return d;
      // ||a||^q <= ||b||^q + ||a - b||^q, and (B^q + D^q)^{1/q} - B grows with B.
      return std::pow(std::pow(bound, q) + std::pow(d, q), 1.0 / q) - bound;
    }
  }
  return 0.0;
}

struct Problem {
  std::vector<double> target;  // |x| for lattice boxes, f otherwise
  std::vector<Axis> axes;
  const SpaceSpec& xs;
  const SpaceSpec& ys;
  double t;
  double h;  // grid spacing for lip_grid, 0 otherwise

  mutable std::vector<double> diff;
  mutable std::vector<double> cur;

  double objective(const std::vector<double>& y) const {
    for (std::size_t k = 0; k < y.size(); ++k) diff[k] = target[k] - y[k];
    return detail::norm_of(xs, diff, h) + t * detail::norm_of(ys, y, h);
  }

  double lower_bound(const std::vector<std::size_t>& lo,
                     const std::vector<std::size_t>& hi) const {
    const std::size_t n = target.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double a = axes[k].points[lo[k]];
      const double b = axes[k].points[hi[k]];
      diff[k] = target[k] < a ? a - target[k] : (target[k] > b ? target[k] - b : 0.0);
    }
    const double xpart = detail::norm_of(xs, diff, h);
    double ypart = 0.0;
    if (ys.kind() == SpaceKind::lip_grid) {
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a0 = axes[k].points[lo[k]], b0 = axes[k].points[hi[k]];
        const double a1 = axes[k + 1].points[lo[k + 1]], b1 = axes[k + 1].points[hi[k + 1]];
        const double gap = std::max({0.0, a1 - b0, a0 - b1});
        ypart = std::max(ypart, gap / h);
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        const double a = axes[k].points[lo[k]];
        const double b = axes[k].points[hi[k]];
        cur[k] = a > 0.0 ? a : (b < 0.0 ? -b : 0.0);
      }
      ypart = detail::norm_of(ys, cur, h);
    }
    return xpart + t * ypart;
  }
};

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> y;
};

void consider(const Problem& pr, const std::vector<double>& y, Best& best) {
  const double v = pr.objective(y);
  if (v < best.value) {
    best.value = v;
    best.y = y;
  }
}

void enumerate(const Problem& pr, const std::vector<std::size_t>& lo,
               const std::vector<std::size_t>& hi, Best& best) {
  const std::size_t n = lo.size();
  std::vector<std::size_t> idx = lo;
  std::vector<double> y(n);
  while (true) {
    for (std::size_t k = 0; k < n; ++k) y[k] = pr.axes[k].points[idx[k]];
    consider(pr, y, best);
    std::size_t k = 0;
    while (k < n && idx[k] == hi[k]) {
      idx[k] = lo[k];
      ++k;
    }
    if (k == n) break;
    ++idx[k];
  }
}

void branch_and_bound(const Problem& pr, double prune_slack, Best& best) {
  const std::size_t n = pr.axes.size();
  struct Box {
    std::vector<std::size_t> lo, hi;
  };
  std::vector<Box> stack;
  Box root{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n)};
  for (std::size_t k = 0; k < n; ++k) root.hi[k] = pr.axes[k].points.size() - 1;
  stack.push_back(std::move(root));

  std::vector<double> y(n);
  while (!stack.empty()) {
    Box box = std::move(stack.back());
    stack.pop_back();
    if (pr.lower_bound(box.lo, box.hi) >= best.value - prune_slack) continue;

    std::size_t count = 1;
    std::size_t widest = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t len = box.hi[k] - box.lo[k] + 1;
      count = count > 64 ? count : count * len;
      if (len > box.hi[widest] - box.lo[widest] + 1) widest = k;
    }
    if (count <= 32) {
      enumerate(pr, box.lo, box.hi, best);
      continue;
    }
    // Probe the center so good incumbents appear early.
    for (std::size_t k = 0; k < n; ++k) {
      y[k] = pr.axes[k].points[(box.lo[k] + box.hi[k]) / 2];
    }
    consider(pr, y, best);

    const std::size_t mid = (box.lo[widest] + box.hi[widest]) / 2;
    Box left = box;
    Box right = std::move(box);
    left.hi[widest] = mid;
    right.lo[widest] = mid + 1;
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
}

}  // namespace

KResult k_bruteforce(const Element& x, double t, const CoupleSpec& couple, double grid_step) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::fail_domain("t must be a finite positive number");
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    detail::fail_domain("k_bruteforce: grid_step must be a finite positive number");
  }
  const Vector& s = samples_of(x);
  const std::size_t n = s.size();
  if (n > kBruteForceMaxDim) {
    detail::fail_domain("k_bruteforce: dimension " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(kBruteForceMaxDim));
  }
  const SpaceSpec& xs = couple.x_space();
  const SpaceSpec& ys = couple.y_space();
  const bool grid = std::holds_alternative<GridFunction>(x);
  if (ys.kind() == SpaceKind::lip_grid && !grid) {
    detail::fail_domain("k_bruteforce: a lip_grid Y needs a grid function");
  }
  const double h = grid ? std::get<GridFunction>(x).spacing() : 0.0;
  const bool lattice = xs.is_lattice() && ys.is_lattice();

  Problem pr{{}, {}, xs, ys, t, h, std::vector<double>(n), std::vector<double>(n)};
  pr.target.resize(n);
  if (lattice) {
    for (std::size_t k = 0; k < n; ++k) {
      pr.target[k] = std::abs(s[k]);
      pr.axes.push_back(make_axis(0.0, pr.target[k], grid_step));
    }
  } else {
    const auto e = s.entries();
    const double lo = *std::min_element(e.begin(), e.end());
    const double hi = *std::max_element(e.begin(), e.end());
    for (std::size_t k = 0; k < n; ++k) {
      pr.target[k] = s[k];
      pr.axes.push_back(make_axis(lo, hi, grid_step));
    }
  }

  std::size_t total = 1;
  for (const Axis& ax : pr.axes) {
    total = total > (std::size_t{1} << 40) ? total : total * ax.points.size();
  }
  if (total > (std::size_t{1} << 40)) {
    detail::fail_domain("k_bruteforce: grid too fine for this box (more than 2^40 points)");
  }

  const double x_norm = norm(xs, x);
  Best best;
  {
    std::vector<double> corner(n);
    for (std::size_t k = 0; k < n; ++k) corner[k] = pr.axes[k].points.front();
    consider(pr, corner, best);
    for (std::size_t k = 0; k < n; ++k) corner[k] = pr.axes[k].points.back();
    consider(pr, corner, best);
  }
  // Boxes whose bound ties the incumbent up to rounding are dropped; the
  // slack is charged to error_bound.
  const double prune_slack = 1e-13 * (1.0 + x_norm);
  branch_and_bound(pr, prune_slack, best);

  std::vector<double> y = best.y;
  if (lattice) {
    for (std::size_t k = 0; k < n; ++k) y[k] = s[k] < 0.0 ? -y[k] : y[k];
  }
  Element ymin = with_samples(x, Vector(std::move(y)));
  const double value = k_objective(couple, x, ymin, t);

  const double half = 0.5 * grid_step;
  const double y_bound = lattice ? norm(ys, x) : 0.0;
  const double err = modulus(xs, n, half, h, x_norm) + t * modulus(ys, n, half, h, y_bound) +
                     prune_slack;
  return {value, err, std::move(ymin), SolverKind::brute_force};
}

}  // namespace kfn
