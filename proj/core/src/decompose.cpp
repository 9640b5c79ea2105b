#include "kfn/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfn/error.hpp"

namespace kfn {

namespace {

void check_params(double t0, double rho, double p, const CoupleSpec& couple) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) detail::fail_domain("t0 must be finite and positive");
  if (!(rho > 0.0 && rho < 1.0)) detail::fail_domain("rho must lie in (0, 1)");
  if (!(p > 0.0 && p <= couple.common_p())) {
    detail::fail_domain("p must lie in (0, " + std::to_string(couple.common_p()) +
                        "], the exponent both spaces are p-normed for");
  }
}

}  // namespace

Split near_optimal_split(const Vector& x, double t0, double rho, double p,
                         const CoupleSpec& couple, const SolveOptions& opts) {
  check_params(t0, rho, p, couple);
  if (x.is_zero()) return {x, Vector::zeros(x.size()), 0.0};

  const double nx = norm(couple.x_space(), x);
  const double bound = std::pow(rho, 1.0 / p) * nx;
  const KResult r = solve(couple, Element{x}, t0, opts);
  if (!r.minimizer || !std::holds_alternative<Vector>(*r.minimizer)) {
    detail::fail_domain("near_optimal_split: the solver returned no vector minimizer");
  }
  Vector y0 = std::get<Vector>(*r.minimizer);
  Vector x0 = x - y0;
  const double obj = norm(couple.x_space(), x0) + t0 * norm(couple.y_space(), y0);
  if (!(obj < bound)) {
    detail::fail_check("no contraction at t0: K(x/||x||_X, t0) ~ " + std::to_string(obj / nx) +
                       " >= rho^{1/p} = " + std::to_string(bound / nx));
  }
  return {std::move(x0), std::move(y0), obj};
}

DecompositionTrace iterate_decomposition(const Vector& x, double t0, double rho, double p,
                                         int m_steps, const CoupleSpec& couple,
                                         const SolveOptions& opts) {
  check_params(t0, rho, p, couple);
  if (m_steps < 0) detail::fail_domain("m_steps must be nonnegative");

  DecompositionTrace tr;
  tr.t0 = t0;
  tr.rho = rho;
  tr.p = p;
  tr.x = x;
  tr.x_norm = norm(couple.x_space(), x);
  tr.z_final = Vector::zeros(x.size());

  const double factor = std::pow(rho, 1.0 / p);
  Vector residual = x;
  double level = tr.x_norm;  // (rho^{1/p})^{m+1} ||x||_X after the update below
  for (int m = 0; m <= m_steps; ++m) {
    level *= factor;
    Split s = [&]() -> Split {
      try {
        return near_optimal_split(residual, t0, rho, p, couple, opts);
      } catch (const CheckFailure& e) {
        tr.failure = "step " + std::to_string(m) + ": " + e.what();
        return {residual, Vector::zeros(x.size()), 0.0};
      }
    }();
    if (tr.failure) break;

    DecompositionStep st{s.x0, s.y0, norm(couple.x_space(), s.x0), norm(couple.y_space(), s.y0)};
    tr.z_final += s.y0;
    residual = s.x0;

    std::string broken;
    if (!(st.x_norm < level) && tr.x_norm > 0.0) {
      broken = "||x_m||_X = " + std::to_string(st.x_norm) + " not below " + std::to_string(level);
    } else if (!(st.y_norm < level / t0) && tr.x_norm > 0.0) {
      broken = "||y_m||_Y = " + std::to_string(st.y_norm) + " not below " +
               std::to_string(level / t0);
    } else {
      const double gap = norm(couple.x_space(), x - (residual + tr.z_final));
      if (gap > 1e-10 * tr.x_norm) {
        broken = "reconstruction error " + std::to_string(gap);
      }
    }
    tr.steps.push_back(std::move(st));
    if (!broken.empty()) {
      tr.failure = "step " + std::to_string(m) + ": " + broken;
      break;
    }
    if (tr.steps.back().x_norm < 1e-14 * tr.x_norm || residual.is_zero()) {
      tr.stopped_early = m < m_steps;
      break;
    }
  }
  return tr;
}

double geometric_tail(double rho, int m, int n) {
  if (!(rho > 0.0 && rho < 1.0)) detail::fail_domain("rho must lie in (0, 1)");
  const double head = std::pow(rho, m + 2) / (1.0 - rho);
  if (n < 0) return head;
  if (n <= m) return 0.0;
  return head * (1.0 - std::pow(rho, n - m));
}

CauchyReport verify_cauchy_in_y(const DecompositionTrace& trace, const CoupleSpec& couple,
                                double tol) {
  if (!(tol > 0.0)) detail::fail_domain("tol must be positive");
  const double p = trace.p;
  const std::size_t count = trace.steps.size();
  CauchyReport rep;
  if (count == 0) return rep;

  // z[j] = y_0 + ... + y_j; ypow[j] = ||y_j||_Y^p.
  std::vector<Vector> z;
  z.reserve(count);
  std::vector<double> ypow(count);
  for (std::size_t j = 0; j < count; ++j) {
    z.push_back(j == 0 ? trace.steps[0].y_m : z.back() + trace.steps[j].y_m);
    ypow[j] = std::pow(trace.steps[j].y_norm, p);
  }
  const double scale = std::pow(trace.t0, -p) * std::pow(trace.x_norm, p);

  for (std::size_t m = 0; m < count; ++m) {
    double partial = 0.0;
    for (std::size_t n = m + 1; n < count; ++n) {
      partial += ypow[n];
      const double lhs = std::pow(norm(couple.y_space(), z[n] - z[m]), p);
      const double slack = 1e-12 * (1.0 + partial);
      ++rep.pairs_checked;
      if (partial > 0.0) rep.worst_triangle_ratio = std::max(rep.worst_triangle_ratio, lhs / partial);
      if (lhs > partial + slack) {
        detail::fail_check("p-triangle inequality fails for Y between steps " + std::to_string(m) +
                           " and " + std::to_string(n) + "; p is misdeclared for this space");
      }
      const double geo = scale * geometric_tail(trace.rho, static_cast<int>(m), static_cast<int>(n));
      if (partial > geo * (1.0 + 1e-12)) {
        detail::fail_check("Y increments exceed the geometric bound between steps " +
                           std::to_string(m) + " and " + std::to_string(n));
      }
    }
  }
  const int last = static_cast<int>(count) - 1;
  rep.final_tail_bound = scale * geometric_tail(trace.rho, last, -1);
  rep.tail_below_tol = rep.final_tail_bound <= tol || trace.steps.back().x_m.is_zero();
  return rep;
}

int steps_for_tail(double x_norm, double t0, double rho, double p, double tol) {
  if (!(x_norm >= 0.0) || !(t0 > 0.0) || !(rho > 0.0 && rho < 1.0) || !(p > 0.0) ||
      !(tol > 0.0)) {
    detail::fail_domain("steps_for_tail: parameters out of range");
  }
  if (x_norm == 0.0) return 0;
  const double scale = std::pow(t0, -p) * std::pow(x_norm, p);
  int m = static_cast<int>(std::ceil(std::log(tol * (1.0 - rho) / scale) / std::log(rho))) - 2;
  m = std::max(m, 0);
  // The logarithms can land one off either way.
  while (m > 0 && scale * geometric_tail(rho, m - 1, -1) <= tol) --m;
  while (scale * geometric_tail(rho, m, -1) > tol) ++m;
  return m;
}

}  // namespace kfn
