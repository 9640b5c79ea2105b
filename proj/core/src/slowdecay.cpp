#include "kfn/slowdecay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "kfn/error.hpp"
#include "kfn/parallel.hpp"

namespace kfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_sup(const SpaceSpec& s) { return s.kind() == SpaceKind::sup; }
bool is_lq(const SpaceSpec& s, double q) { return s.kind() == SpaceKind::lq && s.q() == q; }

// Smallest level M >= 0 with sum_k (a_k - M)_+ <= delta, a_k >= 0.
double water_level(std::vector<double> a, double delta) {
  std::sort(a.begin(), a.end(), std::greater<>());
  double prefix = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    prefix += a[j];
    // Entries 0..j above the level: sum (a_i - M) = delta.
    const double level = (prefix - delta) / static_cast<double>(j + 1);
    const double next = j + 1 < a.size() ? a[j + 1] : 0.0;
    if (level >= next) return std::max(0.0, level);
  }
  return 0.0;
}

}  // namespace

double min_y_norm_on_ball(const Element& x, double delta, const SpaceSpec& y_space,
                          const SpaceSpec& x_space) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    detail::fail_domain("ball radius must be finite and positive");
  }
  const bool sup_lq = is_sup(x_space) && y_space.kind() == SpaceKind::lq;
  const bool sup_lip = is_sup(x_space) && y_space.kind() == SpaceKind::lip_grid;
  const bool l1_sup = is_lq(x_space, 1.0) && is_sup(y_space);
  if (!sup_lq && !sup_lip && !l1_sup) {
    detail::fail_domain("min_y_norm_on_ball: unsupported pair X=" +
                        std::string(to_string(x_space.kind())) +
                        ", Y=" + std::string(to_string(y_space.kind())));
  }
  if (sup_lip && !std::holds_alternative<GridFunction>(x)) {
    detail::fail_domain("min_y_norm_on_ball: a lip_grid Y needs a grid function");
  }
  if (delta >= norm(x_space, x)) return 0.0;

  const auto v = samples_of(x).entries();
  if (sup_lq) {
    // Shrinking every coordinate toward 0 by delta is optimal coordinate-wise.
    std::vector<double> shrunk(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) shrunk[k] = std::max(0.0, std::abs(v[k]) - delta);
    return detail::norm_of(y_space, shrunk, 0.0);
  }
  if (sup_lip) {
    // |g(s) - g(u)| >= |f(s) - f(u)| - 2 delta bounds the slope from below, and
    // the midpoint of the Lipschitz envelopes attains the largest such chord.
    const double h = std::get<GridFunction>(x).spacing();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        const double excess = std::abs(v[j] - v[i]) - 2.0 * delta;
        if (excess > 0.0) best = std::max(best, excess / (static_cast<double>(j - i) * h));
      }
    }
    return best;
  }
  std::vector<double> a(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) a[k] = std::abs(v[k]);
  return water_level(std::move(a), delta);
}

namespace {

Witness certify(Witness w, const std::optional<SpaceSpec>& certify_in) {
  const double nx = norm(w.x_space, w.element);
  if (std::abs(nx - 1.0) > 1e-12) {
    detail::fail_check("witness " + std::to_string(w.n) + ": ||x||_X = " + std::to_string(nx) +
                       ", expected 1");
  }
  if (!(w.delta > 0.0 && w.delta < 1.0)) {
    detail::fail_domain("witness delta must lie in (0, 1)");
  }
  if (!(w.b > 0.0) || !std::isfinite(w.b)) detail::fail_domain("witness b must be positive");
  const double radius = w.delta * (1.0 - kBallShrink);
  const SpaceSpec& ball = certify_in ? *certify_in : w.x_space;
  w.certified_b = min_y_norm_on_ball(w.element, radius, w.y_space, ball);
  w.certified_via = certify_in ? "exact minimum over the larger " +
                                     std::string(to_string(ball.kind())) + " ball"
                               : "exact minimum over the X ball";
  if (w.certified_b < w.b) {
    detail::fail_check("witness " + std::to_string(w.n) + " refused: certified Y-norm level " +
                       std::to_string(w.certified_b) + " < b = " + std::to_string(w.b));
  }
  return w;
}

}  // namespace

Witness make_witness(int n, Element element, SpaceSpec x_space, SpaceSpec y_space, double delta,
                     double b) {
  return certify(Witness{n, std::move(element), std::move(x_space), std::move(y_space), delta, b,
                         0.0, {}, std::nullopt, std::nullopt},
                 std::nullopt);
}

Witness witness_lqlp(int n, double p, double q) {
  if (n < 1) detail::fail_domain("witness_lqlp: n must be >= 1");
  if (!(p > 0.0) || !std::isfinite(p)) detail::fail_domain("witness_lqlp: p must be positive");
  if (!(q > 0.0)) detail::fail_domain("witness_lqlp: q must be positive or +inf");
  const auto dim = static_cast<std::size_t>(2 * n);
  const double raw_b = std::pow(2.0, -1.0 + 1.0 / p) * std::pow(static_cast<double>(n), 1.0 / p);
  if (std::isinf(q)) {
    return make_witness(n, Vector::constant(dim, 1.0), SpaceSpec::sup(), SpaceSpec::lq(p), 0.5,
                        raw_b);
  }
  const double s = std::pow(static_cast<double>(dim), -1.0 / q);
  Witness w{n,   Vector::constant(dim, s), SpaceSpec::lq(q), SpaceSpec::lq(p), 0.5 * s,
            raw_b * s, 0.0, {}, 0.5, raw_b};
  // Every coordinate of v is at most ||v||_q, so the l_q ball lies in the
  // sup ball of the same radius.
  return certify(std::move(w), SpaceSpec::sup());
}

Witness witness_c1(int n, const GridFunction& grid) {
  if (n < 1) detail::fail_domain("witness_c1: n must be >= 1");
  const double a = grid.a();
  const double b = grid.b();
  const double h = grid.spacing();
  if (b - a < 1.0 / n) {
    detail::fail_domain("witness_c1: interval shorter than the ramp width 1/n");
  }
  if (h > 1.0 / (2.0 * n)) {
    detail::fail_domain("witness_c1: grid too coarse: spacing " + std::to_string(h) +
                        " exceeds 1/(2n) = " + std::to_string(1.0 / (2.0 * n)));
  }
  // Node positions of alpha = mid - 1/(2n) and beta = mid + 1/(2n) in units of
  // h; integers within rounding are taken as exact.
  const double intervals = static_cast<double>(grid.nodes() - 1);
  const double half_width = intervals / (2.0 * n * (b - a));
  const auto snap = [](double pos, bool up) {
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9) return static_cast<long long>(r);
    return static_cast<long long>(up ? std::ceil(pos) : std::floor(pos));
  };
  const long long lo = snap(0.5 * intervals - half_width, true);
  const long long hi = snap(0.5 * intervals + half_width, false);
  if (hi <= lo) detail::fail_domain("witness_c1: grid too coarse to hold the ramp");

  std::vector<double> values(grid.nodes());
  for (long long i = 0; i < static_cast<long long>(values.size()); ++i) {
    if (i <= lo) {
      values[i] = -1.0;
    } else if (i >= hi) {
      values[i] = 1.0;
    } else {
      values[i] = -1.0 + 2.0 * static_cast<double>(i - lo) / static_cast<double>(hi - lo);
    }
  }
  return make_witness(n, grid.with_values(Vector(std::move(values))), SpaceSpec::sup(),
                      SpaceSpec::lip_grid(), 0.5, static_cast<double>(n));
}

SlowDecayCertificate certify_slow_decay(const WitnessFamily& family, const CoupleSpec& couple,
                                        int big_n, const SolveOptions& opts) {
  if (big_n < 1) detail::fail_domain("certify_slow_decay: N must be >= 1");
  const auto count = static_cast<std::size_t>(big_n);
  std::vector<std::optional<Witness>> witnesses(count);
  parallel_for(count, [&](std::size_t i) { witnesses[i] = family(static_cast<int>(i) + 1); });

  for (const auto& w : witnesses) {
    if (!(w->x_space == couple.x_space()) || !(w->y_space == couple.y_space())) {
      detail::fail_domain("certify_slow_decay: witness " + std::to_string(w->n) +
                          " is for a different couple");
    }
  }

  SlowDecayCertificate cert;
  cert.c = witnesses.front()->delta;
  bool uniform_delta = true;
  for (const auto& w : witnesses) {
    cert.c = std::min(cert.c, w->delta);
    if (w->delta != witnesses.front()->delta) uniform_delta = false;
  }

  cert.entries.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const Witness& w = *witnesses[i];
    CertificateEntry& e = cert.entries[i];
    e.n = w.n;
    e.b = w.b;
    e.t = 1.0 / w.b;
    e.k_lower = w.delta * (1.0 - kBallShrink);
    if (solver_applicable(couple, w.element)) {
      const KResult r = solve(couple, w.element, e.t, opts);
      e.k_solver = r.value;
      e.k_solver_error = r.error_bound;
    }
  });
  for (const CertificateEntry& e : cert.entries) {
    if (e.k_solver && *e.k_solver + *e.k_solver_error < cert.c - 1e-9) {
      detail::fail_check("certificate refused: direct K(x_" + std::to_string(e.n) + ", " +
                         std::to_string(e.t) + ") = " + std::to_string(*e.k_solver) +
                         " is below c = " + std::to_string(cert.c));
    }
  }

  const double first = cert.entries.front().b;
  const double last = cert.entries.back().b;
  cert.b_ratio = last / first;
  bool monotone = true;
  for (std::size_t i = 1; i < count; ++i) {
    if (cert.entries[i].b < cert.entries[i - 1].b) monotone = false;
  }
  cert.slow_decay = monotone && cert.b_ratio >= 2.0 && uniform_delta;
  if (cert.slow_decay) {
    cert.note = "b_n grows; K stays >= c while t_n = 1/b_n shrinks";
  } else if (!uniform_delta) {
    cert.note = "not a slow-decay certificate: delta varies with n, so no uniform c";
  } else {
    cert.note = "not a slow-decay certificate: b_n does not grow, t_n stays away from 0";
  }
  return cert;
}

std::optional<int> refute_uniform_rate(const SlowDecayCertificate& cert,
                                       const std::vector<double>& eps, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) detail::fail_domain("m must be finite and positive");
  const std::size_t count = std::min(eps.size(), cert.entries.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (cert.entries[i].k_lower > m * eps[i]) return cert.entries[i].n;
  }
  return std::nullopt;
}

TransferReport transfer_lower_bound(const Element& x, double t, double m,
                                    const CoupleSpec& couple_xy, const CoupleSpec& couple_xz,
                                    const std::vector<Element>& probes,
                                    const SolveOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) detail::fail_domain("t must be a finite positive number");
  if (!(m > 0.0) || !std::isfinite(m)) detail::fail_domain("M must be a finite positive number");
  if (!(couple_xy.x_space() == couple_xz.x_space())) {
    detail::fail_domain("transfer_lower_bound: the two couples must share X");
  }
  const SpaceSpec& ys = couple_xy.y_space();
  const SpaceSpec& zs = couple_xz.y_space();

  TransferReport rep;
  const auto ratio = [&](const Element& e) {
    const double ny = norm(ys, e);
    const double nz = norm(zs, e);
    if (nz == 0.0) return 0.0;
    return ny == 0.0 ? kInf : nz / ny;
  };
  const std::size_t dim = samples_of(x).size();
  for (std::size_t k = 0; k < dim; ++k) {
    rep.domination_ratio =
        std::max(rep.domination_ratio, ratio(with_samples(x, Vector::basis(dim, k))));
  }
  for (const Element& e : probes) rep.domination_ratio = std::max(rep.domination_ratio, ratio(e));
  if (rep.domination_ratio > m * (1.0 + 1e-12)) {
    detail::fail_domain("transfer_lower_bound: ||y||_Z <= M ||y||_Y fails (ratio " +
                        std::to_string(rep.domination_ratio) + " > M = " + std::to_string(m) +
                        ")");
  }

  const KResult l = solve(couple_xy, x, t * m, opts);
  const KResult r = solve(couple_xz, x, t, opts);
  rep.lhs = l.value;
  rep.rhs = r.value;
  rep.tolerance = l.error_bound + r.error_bound + 1e-12 * (1.0 + norm(couple_xy.x_space(), x));
  rep.holds = rep.lhs >= rep.rhs - rep.tolerance;
  return rep;
}

SandwichReport renorm_sandwich_check(const CoupleSpec& k_star, const CoupleSpec& k,
                                     const NormEquivalence& eq,
                                     const std::vector<Element>& samples,
                                     const std::vector<double>& t_grid,
                                     const SolveOptions& opts) {
  for (double c : {eq.x_lower, eq.x_upper, eq.y_lower, eq.y_upper}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      detail::fail_domain("norm equivalence constants must be finite and positive");
    }
  }
  if (eq.x_lower > eq.x_upper || eq.y_lower > eq.y_upper) {
    detail::fail_domain("norm equivalence: lower constant exceeds upper constant");
  }
  if (samples.empty() || t_grid.empty()) {
    detail::fail_domain("renorm_sandwich_check: needs samples and a t grid");
  }

  SandwichReport rep;
  rep.declared_m = std::min(eq.x_lower, eq.y_lower);
  rep.declared_n = std::max(eq.x_upper, eq.y_upper);
  rep.m = kInf;
  rep.n = 0.0;

  const std::size_t total = samples.size() * t_grid.size();
  std::vector<KResult> ks(total);
  std::vector<KResult> kstars(total);
  parallel_for(total, [&](std::size_t i) {
    const Element& x = samples[i / t_grid.size()];
    const double t = t_grid[i % t_grid.size()];
    ks[i] = solve(k, x, t, opts);
    kstars[i] = solve(k_star, x, t, opts);
  });

  for (std::size_t i = 0; i < total; ++i) {
    const double kv = ks[i].value;
    const double kstar = kstars[i].value;
    if (kstar == 0.0) {
      if (kv > ks[i].error_bound + kstars[i].error_bound) {
        detail::fail_check("renorm sandwich: K* = 0 < K for sample " +
                           std::to_string(i / t_grid.size()));
      }
      continue;
    }
    const double rho = kv / kstar;
    const double slack = 1e-12 + (ks[i].error_bound + kstars[i].error_bound) / kstar;
    rep.m = std::min(rep.m, rho);
    rep.n = std::max(rep.n, rho);
    if (rho < rep.declared_m - slack || rho > rep.declared_n + slack) {
      detail::fail_check("renorm sandwich: K / K* = " + std::to_string(rho) +
                         " outside the declared [" + std::to_string(rep.declared_m) + ", " +
                         std::to_string(rep.declared_n) + "]");
    }
  }
  if (rep.n == 0.0 && std::isinf(rep.m)) {
    detail::fail_domain("renorm_sandwich_check: every sample has K* = 0");
  }
  return rep;
}

}  // namespace kfn
