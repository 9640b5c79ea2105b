#pragma once

// Reference computations for the tests. Each one takes a different route to
// the quantity than the library does, so agreement is evidence rather than
// a tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Golden-section minimum of a convex function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min({f(lo), f(hi), fc, fd, f(0.5 * (a + b))});
}

/// (l_1, weighted l_1) separates by coordinate:
/// min_y |x - y| + t w |y| = |x| min(1, t w).
inline double weighted(const std::vector<double>& x, double t, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::abs(x[k]) * std::min(1.0, t * w[k]);
  return s;
}

/// (l_1, sup): minimize over the clip level M by golden section.
inline double clip(const std::vector<double>& a, double t) {
  double top = 0.0;
  for (double v : a) top = std::max(top, std::abs(v));
  auto f = [&](double m) {
    double s = t * m;
    for (double v : a) s += std::max(0.0, std::abs(v) - m);
    return s;
  };
  return golden_min(f, 0.0, top);
}

/// sup-distance from grid samples f (spacing h) to L-Lipschitz grid
/// functions: half the largest excess |f_i - f_j| - L |i - j| h.
inline double lip_distance(const std::vector<double>& f, double h, double lip) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      worst = std::max(worst, std::abs(f[i] - f[j]) - lip * static_cast<double>(j - i) * h);
    }
  }
  return 0.5 * worst;
}

/// (sup, Lip): minimize over the Lipschitz level by golden section.
inline double lip(const std::vector<double>& f, double h, double t) {
  double top = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) top = std::max(top, std::abs(f[i] - f[i - 1]) / h);
  return golden_min([&](double l) { return lip_distance(f, h, l) + t * l; }, 0.0, top);
}

/// (l_2, l_1) through the dual: K(x, t) = sup { <|x|, z> : ||z||_2 <= 1,
/// 0 <= z <= t }, attained at z_k = min(t, lambda |x_k|).
inline double l2_l1(const std::vector<double>& x, double t) {
  auto z_norm = [&](double lam) {
    double s = 0.0;
    for (double v : x) s += std::pow(std::min(t, lam * std::abs(v)), 2);
    return std::sqrt(s);
  };
  double smallest = HUGE_VAL;
  double l1 = 0.0;
  std::size_t nnz = 0;
  for (double v : x) {
    if (v == 0.0) continue;
    smallest = std::min(smallest, std::abs(v));
    l1 += std::abs(v);
    ++nnz;
  }
  if (nnz == 0) return 0.0;
  if (t * std::sqrt(static_cast<double>(nnz)) <= 1.0) return t * l1;
  double lo = 0.0, hi = t / smallest;  // z_norm(hi) = t sqrt(nnz) > 1
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (z_norm(mid) < 1.0 ? lo : hi) = mid;
  }
  double s = 0.0;
  for (double v : x) s += std::abs(v) * std::min(t, lo * std::abs(v));
  return s;
}

/// sum_{k >= 0} (2^{theta k} min(2^{-n0}, 2^{-k}))^q summed term by term,
/// which is the q-th power of the sharpest bound the K estimate allows.
inline double strict_series_pow(double theta, double q, int n0, int terms = 4000) {
  double s = 0.0;
  for (int k = 0; k < terms; ++k) {
    s += std::exp2(q * (theta * k - std::max(n0, k)));
  }
  return s;
}

/// sum_k sigma_k min(1, t w_k), summed directly.
inline double phi(const std::vector<double>& sigma, const std::vector<double>& w, double t) {
  double s = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) s += sigma[k] * std::min(1.0, t * w[k]);
  return s;
}

inline std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& e : v) e = u(rng);
  return v;
}

/// Non-decreasing positive weights, as the weighted couple requires.
inline std::vector<double> weights(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  auto v = uniform_vec(rng, n, lo, hi);
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> dyadic(int n, int sign) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = std::ldexp(1.0, sign * k);
  return v;
}

}  // namespace oracle
