// Certified K for (l_q, l_p), q, p >= 1.
//
// Finite q: the Pareto frontier of (||a - y||_q, ||y||_p) is traced by the
// separable problems min_y ||a - y||_q^q + lambda ||y||_p^p, one bisection per
// coordinate. The frontier slope at lambda is
//   g(lambda) = lambda p S^{p-1} / (q R^{q-1}),
// nondecreasing in lambda, and the optimum sits where g crosses t. The upper
// bound is the objective at the best y seen; the lower bound is <u, a> for a
// dual-feasible u (||u||_{q'} <= 1, ||u||_{p'} <= t) built from subgradients
// at that y. Both meet at the optimum.
//
// q = inf: K = min_M M + t ||(a - M)_+||_p, a convex function of the level M,
// bracketed by bisection on its derivative with a tangent-line lower bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kfn/error.hpp"
#include "kfn/ksolve.hpp"

namespace kfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pnorm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  return detail::norm_of(SpaceSpec::lq(p), v, 0.0);
}

double conjugate(double q) {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

// argmin over y in [0, a] of (a - y)^q + lambda y^p, a > 0.
double coordinate_split(double a, double lambda, double q, double p) {
  const auto deriv = [&](double y) {
    const double r = a - y;
    const double dq = q == 1.0 ? 1.0 : q * std::pow(r, q - 1.0);
    const double dp = p == 1.0 ? lambda : lambda * p * std::pow(y, p - 1.0);
    return dp - dq;
  };
  if (deriv(0.0) >= 0.0) return 0.0;
  if (deriv(a) <= 0.0) return a;
  double lo = 0.0;
  double hi = a;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (deriv(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Frontier {
  const std::vector<double>& a;
  double t, q, p;

  double objective(const std::vector<double>& y) const {
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - y[k];
    return pnorm(r, q) + t * pnorm(y, p);
  }

  std::vector<double> point(double lambda) const {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] > 0.0) y[k] = coordinate_split(a[k], lambda, q, p);
    }
    return y;
  }

  double slope(double lambda, const std::vector<double>& y) const {
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - y[k];
    const double big_r = pnorm(r, q);
    const double big_s = pnorm(y, p);
    const double num = p == 1.0 ? lambda : lambda * p * std::pow(big_s, p - 1.0);
    const double den = q == 1.0 ? 1.0 : q * std::pow(big_r, q - 1.0);
    if (den == 0.0) return kInf;
    return num / den;
  }

  // Dual lower bound from subgradients at y. `prefer_x` picks which side
  // fills coordinates where both are defined.
  double dual_bound(const std::vector<double>& y, bool prefer_x) const {
    const std::size_t n = a.size();
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = std::max(0.0, a[k] - y[k]);
    const double big_r = pnorm(r, q);
    const double big_s = pnorm(y, p);
    std::vector<double> u(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double from_x = -1.0;
      double from_y = -1.0;
      if (q == 1.0) {
        if (r[k] > 0.0) from_x = 1.0;
      } else if (big_r > 0.0) {
        from_x = std::pow(r[k] / big_r, q - 1.0);
      }
      if (p == 1.0) {
        if (y[k] > 0.0) from_y = t;
      } else if (big_s > 0.0) {
        from_y = t * std::pow(y[k] / big_s, p - 1.0);
      }
      if (prefer_x) {
        u[k] = from_x >= 0.0 ? from_x : std::max(0.0, from_y);
      } else {
        u[k] = from_y >= 0.0 ? from_y : std::max(0.0, from_x);
      }
    }
    const double scale =
        std::max({1.0, pnorm(u, conjugate(q)), pnorm(u, conjugate(p)) / t});
    double lb = 0.0;
    for (std::size_t k = 0; k < n; ++k) lb += u[k] / scale * a[k];
    return lb;
  }
};

struct Search {
  double upper = kInf;
  double lower = 0.0;
  std::vector<double> best_y;

  void visit(const Frontier& fr, const std::vector<double>& y) {
    const double obj = fr.objective(y);
    if (obj < upper) {
      upper = obj;
      best_y = y;
    }
    lower = std::max({lower, fr.dual_bound(y, true), fr.dual_bound(y, false)});
  }
  double gap() const { return upper - lower; }
};

std::vector<double> solve_finite_q(const std::vector<double>& a, double t, double q, double p,
                                   double tol, double& upper, double& lower) {
  const Frontier fr{a, t, q, p};
  Search s;
  s.visit(fr, std::vector<double>(a.size(), 0.0));
  s.visit(fr, a);

  // Bracket the crossing g(lambda) = t in log space.
  constexpr double kMaxLog = 600.0;
  double lo = 0.0;
  double hi = 0.0;
  bool have_lo = false;
  bool have_hi = false;
  for (double e = 0.0; e <= kMaxLog && !(have_lo && have_hi); e += 4.0) {
    for (double sgn : {-1.0, 1.0}) {
      const double le = sgn * e;
      const auto y = fr.point(std::exp(le));
      s.visit(fr, y);
      const double g = fr.slope(std::exp(le), y);
      if (g < t && (!have_lo || le > lo)) {
        if (!have_lo || le > lo) lo = le;
        have_lo = true;
      }
      if (g > t && (!have_hi || le < hi)) {
        hi = le;
        have_hi = true;
      }
      if (e == 0.0) break;
    }
  }
  if (have_lo && have_hi && lo < hi) {
    for (int it = 0; it < 200 && s.gap() > 0.25 * tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const auto y = fr.point(std::exp(mid));
      s.visit(fr, y);
      (fr.slope(std::exp(mid), y) < t ? lo : hi) = mid;
    }
  }
  upper = s.upper;
  lower = s.lower;
  return s.best_y;
}

std::vector<double> solve_sup_x(const std::vector<double>& a, double t, double p, double tol,
                                double& upper, double& lower) {
  const double amax = *std::max_element(a.begin(), a.end());
  std::vector<double> shrunk(a.size());
  const auto tail = [&](double m) {
    for (std::size_t k = 0; k < a.size(); ++k) shrunk[k] = std::max(0.0, a[k] - m);
    return pnorm(shrunk, p);
  };
  const auto h = [&](double m) { return m + t * tail(m); };
  const auto dh = [&](double m) {
    const double s = tail(m);
    if (s == 0.0) return 1.0;
    double acc = 0.0;
    for (double v : shrunk) {
      if (v > 0.0) acc += p == 1.0 ? 1.0 : std::pow(v / s, p - 1.0);
    }
    return 1.0 - t * acc;
  };

  double level = 0.0;
  if (p == 1.0) {
    // Piecewise linear: the minimum sits at a breakpoint.
    upper = h(0.0);
    for (double m : a) {
      const double v = h(m);
      if (v < upper || (v == upper && m < level)) {
        upper = v;
        level = m;
      }
    }
    lower = upper;
  } else if (dh(0.0) >= 0.0) {
    upper = lower = h(0.0);
  } else {
    double lo = 0.0;
    double hi = amax;
    double h_lo = h(lo), d_lo = dh(lo);
    double h_hi = h(hi), d_hi = dh(hi);
    upper = std::min(h_lo, h_hi);
    level = h_lo <= h_hi ? lo : hi;
    lower = -kInf;
    for (int it = 0; it < 400; ++it) {
      // Tangents at the bracket ends meet below the convex minimum.
      if (d_hi > d_lo) {
        const double x = (h_hi - h_lo + d_lo * lo - d_hi * hi) / (d_lo - d_hi);
        lower = std::max(lower, h_lo + d_lo * (std::clamp(x, lo, hi) - lo));
      }
      if (upper - lower <= 0.25 * tol) break;
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double hm = h(mid);
      const double dm = dh(mid);
      if (hm < upper) {
        upper = hm;
        level = mid;
      }
      if (dm < 0.0) {
        lo = mid, h_lo = hm, d_lo = dm;
      } else {
        hi = mid, h_hi = hm, d_hi = dm;
      }
    }
    lower = std::min(lower, upper);
  }
  std::vector<double> y(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) y[k] = std::max(0.0, a[k] - level);
  return y;
}

}  // namespace

KResult k_numeric(const Vector& x, double t, double q, double p, double tol) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::fail_domain("t must be a finite positive number");
  if (!(q >= 1.0) || !(p >= 1.0) || std::isinf(p)) {
    detail::fail_domain(
        "k_numeric needs q >= 1 and finite p >= 1; quasi-norm couples are non-convex and refused");
  }
  if (!(tol > 0.0)) detail::fail_domain("k_numeric: tol must be positive");

  const double scale = norm(SpaceSpec::sup(), x);
  if (scale == 0.0) {
    return {0.0, 0.0, Element{Vector::zeros(x.size())}, SolverKind::numeric_lq_lp};
  }
  // K is absolutely homogeneous and invariant under coordinate sign flips;
  // solve for |x| / max|x| and map back.
  std::vector<double> a(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) a[k] = std::abs(x[k]) / scale;

  double upper = 0.0;
  double lower = 0.0;
  const double scaled_tol = tol / scale;
  std::vector<double> y = std::isinf(q) ? solve_sup_x(a, t, p, scaled_tol, upper, lower)
                                        : solve_finite_q(a, t, q, p, scaled_tol, upper, lower);
  const double gap = std::max(0.0, upper - lower);
  if (gap > scaled_tol) {
    detail::fail_check("k_numeric: duality gap " + std::to_string(gap * scale) +
                       " exceeds tol " + std::to_string(tol));
  }
  for (std::size_t k = 0; k < y.size(); ++k) y[k] *= (x[k] < 0.0 ? -scale : scale);
  Vector ymin(std::move(y));
  const SpaceSpec xs = std::isinf(q) ? SpaceSpec::sup() : SpaceSpec::lq(q);
  const double value = norm(xs, x - ymin) + t * norm(SpaceSpec::lq(p), ymin);
  return {value, std::max(gap * scale, value - lower * scale), Element{std::move(ymin)},
          SolverKind::numeric_lq_lp};
}

}  // namespace kfn
