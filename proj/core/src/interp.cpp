#include "kfn/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "kfn/error.hpp"
#include "kfn/parallel.hpp"

namespace kfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// l_q (quasi-)norm of nonnegative terms, q = inf for the max.
double lq_of(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : terms) m = std::max(m, v);
    return m;
  }
  double m = 0.0;
  for (double v : terms) m = std::max(m, v);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : terms) s += std::pow(v / m, q);
  return m * std::pow(s, 1.0 / q);
}

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    detail::fail_domain(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

void check_exponent(double q, const char* name) {
  if (!(q > 0.0) || std::isnan(q)) {
    detail::fail_domain(std::string(name) + " must be positive or +inf");
  }
}

}  // namespace

void validate(const InterpParams& p) {
  check_unit_open(p.theta, "theta");
  check_exponent(p.q, "q");
}

double InterpNormResult::total_upper() const {
  if (!tail_bound) return kInf;
  if (std::isinf(q)) return std::max(value, *tail_bound);
  return std::pow(std::pow(value, q) + std::pow(*tail_bound, q), 1.0 / q);
}

InterpNormResult discrete_interp_norm(const Element& x, const CoupleSpec& couple,
                                      const InterpParams& params, int k_max,
                                      const SolveOptions& opts) {
  validate(params);
  if (k_max < 0) detail::fail_domain("k_max must be nonnegative");
  if (!solver_applicable(couple, x)) {
    solve(couple, x, 1.0, opts);  // throws with the reason
  }

  const auto count = static_cast<std::size_t>(k_max) + 1;
  std::vector<double> k_values(count);
  std::vector<double> errors(count);
  parallel_for(count, [&](std::size_t k) {
    const KResult r = solve(couple, x, std::ldexp(1.0, -static_cast<int>(k)), opts);
    k_values[k] = r.value;
    errors[k] = r.error_bound;
  });

  InterpNormResult res;
  res.k_max = k_max;
  res.q = params.q;
  res.terms.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    res.terms[k] = std::pow(2.0, params.theta * static_cast<double>(k)) * k_values[k];
    res.solver_error = std::max(res.solver_error, errors[k]);
  }
  res.value = lq_of(res.terms, params.q);

  // Terms past k_max are at most 2^{(theta - 1) k} ||x||_Y.
  const double y_norm = norm(couple.y_space(), x);
  const double ratio_exp = params.theta - 1.0;
  const double first = static_cast<double>(k_max + 1);
  if (std::isinf(params.q)) {
    res.tail_bound = std::pow(2.0, ratio_exp * first) * y_norm;
  } else {
    const double q = params.q;
    const double sum = std::pow(2.0, ratio_exp * q * first) / (1.0 - std::pow(2.0, ratio_exp * q));
    res.tail_bound = y_norm * std::pow(sum, 1.0 / q);
  }
  return res;
}

double strict_bound(double theta, double q, int n0) {
  check_unit_open(theta, "theta");
  if (!(q > 0.0) || !std::isfinite(q)) detail::fail_domain("q must be finite and positive");
  if (n0 < 0) detail::fail_domain("N0 must be nonnegative");
  const double n = static_cast<double>(n0);
  const double tq = theta * q;
  const double dq = (theta - 1.0) * q;
  const double head = std::pow(2.0, dq * n) * std::pow(2.0, tq) / (std::pow(2.0, tq) - 1.0);
  const double tail = std::pow(2.0, dq * (n + 1.0)) / (1.0 - std::pow(2.0, dq));
  return std::pow(head + tail, 1.0 / q);
}

ApproxNormResult approx_space_norm(const std::vector<double>& errors, double alpha, double q) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) detail::fail_domain("alpha must be positive");
  check_exponent(q, "q");
  ApproxNormResult res;
  std::vector<double> terms(errors.size());
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double e = errors[k];
    if (!(e >= 0.0) || !std::isfinite(e)) {
      detail::fail_domain("approximation error " + std::to_string(k) +
                          " must be finite and nonnegative");
    }
    if (k > 0 && e > errors[k - 1]) res.non_increasing = false;
    terms[k] = std::pow(2.0, alpha * static_cast<double>(k)) * e;
  }
  res.value = lq_of(terms, q);
  return res;
}

JacksonBernsteinReport jackson_bernstein_check(const CoupleSpec& couple,
                                               const std::vector<Vector>& y_samples,
                                               const std::vector<int>& levels,
                                               const BestErrorFn& best_error,
                                               const std::vector<LevelSamples>& a_samples,
                                               double r, std::optional<double> declared_jackson,
                                               std::optional<double> declared_bernstein) {
  if (!(r > 0.0) || !std::isfinite(r)) detail::fail_domain("r must be finite and positive");
  if (y_samples.empty() || levels.empty()) {
    detail::fail_domain("jackson check needs at least one sample and one level");
  }
  if (a_samples.empty()) detail::fail_domain("bernstein check needs at least one level sample");
  for (int n : levels) {
    if (n < 1) detail::fail_domain("levels must be >= 1");
  }

  JacksonBernsteinReport rep;
  for (std::size_t i = 0; i < y_samples.size(); ++i) {
    const Vector& y = y_samples[i];
    if (y.is_zero()) detail::fail_domain("jackson sample " + std::to_string(i) + " is zero");
    const double ny = norm(couple.y_space(), y);
    for (int n : levels) {
      const double e = best_error(y, n);
      if (e == 0.0) continue;
      if (ny == 0.0) {
        rep.violations.push_back("jackson: sample " + std::to_string(i) + " level " +
                                 std::to_string(n) + " has E > 0 but ||y||_Y = 0");
        continue;
      }
      const double c = e * std::pow(static_cast<double>(n), r) / ny;
      rep.c_jackson = std::max(rep.c_jackson, c);
      if (declared_jackson && c > *declared_jackson * (1.0 + 1e-12)) {
        rep.violations.push_back("jackson: sample " + std::to_string(i) + " level " +
                                 std::to_string(n) + " needs C = " + std::to_string(c));
      }
    }
  }
  for (const LevelSamples& lvl : a_samples) {
    if (lvl.n < 1) detail::fail_domain("levels must be >= 1");
    for (std::size_t i = 0; i < lvl.elements.size(); ++i) {
      const Vector& a = lvl.elements[i];
      if (a.is_zero()) detail::fail_domain("bernstein sample is zero");
      const double ny = norm(couple.y_space(), a);
      const double nx = norm(couple.x_space(), a);
      if (nx == 0.0) {
        if (ny > 0.0) {
          rep.violations.push_back("bernstein: level " + std::to_string(lvl.n) + " sample " +
                                   std::to_string(i) + " has ||a||_X = 0 < ||a||_Y");
        }
        continue;
      }
      const double c = ny / (std::pow(static_cast<double>(lvl.n), r) * nx);
      rep.c_bernstein = std::max(rep.c_bernstein, c);
      if (declared_bernstein && c > *declared_bernstein * (1.0 + 1e-12)) {
        rep.violations.push_back("bernstein: level " + std::to_string(lvl.n) + " sample " +
                                 std::to_string(i) + " needs C = " + std::to_string(c));
      }
    }
  }
  return rep;
}

double compose_theta(double alpha, double theta) {
  check_unit_open(alpha, "alpha");
  check_unit_open(theta, "theta");
  return alpha * theta;
}

double harmonic_exponent(double eta, double p, double q) {
  if (!(eta >= 0.0 && eta <= 1.0)) detail::fail_domain("eta must lie in [0, 1]");
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (eta == 0.0) return p;
  if (eta == 1.0) return q;
  const double inv = (1.0 - eta) / p + eta / q;  // 1/inf == 0
  return inv == 0.0 ? kInf : 1.0 / inv;
}

EquivalenceReport equivalence_ratio(const NormFn& norm_a, const NormFn& norm_b,
                                    const std::vector<Element>& samples) {
  if (samples.empty()) detail::fail_domain("equivalence_ratio: empty sample list");
  EquivalenceReport rep;
  rep.rho_min = kInf;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = norm_a(samples[i]);
    const double b = norm_b(samples[i]);
    if (b == 0.0) {
      rep.zero_denominator.push_back(i);
      continue;
    }
    const double rho = a / b;
    rep.rho_min = std::min(rep.rho_min, rho);
    rep.rho_max = std::max(rep.rho_max, rho);
    ++rep.used;
  }
  if (rep.used == 0) detail::fail_domain("equivalence_ratio: every sample has norm_b = 0");
  rep.spread = rep.rho_min > 0.0 ? rep.rho_max / rep.rho_min : kInf;
  return rep;
}

SpaceSpec interp_space_as_weighted(const Vector& weights, double theta, int k_max) {
  check_unit_open(theta, "theta");
  if (k_max < 0) detail::fail_domain("k_max must be nonnegative");
  std::vector<double> big(weights.size(), 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (int j = 0; j <= k_max; ++j) {
      big[k] += std::pow(2.0, theta * j) * std::min(1.0, std::ldexp(weights[k], -j));
    }
  }
  return SpaceSpec::weighted_l1(Vector(std::move(big)));
}

EquivalenceReport reiteration_equivalence(const Vector& weights, double theta, double alpha,
                                          double q, int k_max,
                                          const std::vector<Element>& samples) {
  const CoupleSpec direct = CoupleSpec::weighted(weights);
  const CoupleSpec iterated(SpaceSpec::lq(1.0), interp_space_as_weighted(weights, theta, k_max),
                            SolverKind::weighted_closed_form);
  const InterpParams outer{alpha, q};
  const InterpParams composed{compose_theta(alpha, theta), q};
  return equivalence_ratio(
      [&](const Element& x) { return discrete_interp_norm(x, iterated, outer, k_max).value; },
      [&](const Element& x) { return discrete_interp_norm(x, direct, composed, k_max).value; },
      samples);
}

std::vector<Element> sparse_samples(std::size_t dim, std::size_t count, std::size_t nnz,
                                    std::uint64_t seed) {
  if (dim == 0 || nnz == 0 || nnz > dim) {
    detail::fail_domain("sparse_samples: need 1 <= nnz <= dim");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.05, 1.0);
  std::bernoulli_distribution negative(0.5);
  std::vector<std::size_t> idx(dim);
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> v(dim, 0.0);
    for (std::size_t j = 0; j < nnz; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, dim - 1);
      std::swap(idx[j], idx[pick(rng)]);
      v[idx[j]] = negative(rng) ? -mag(rng) : mag(rng);
    }
    out.emplace_back(Vector(std::move(v)));
  }
  return out;
}

}  // namespace kfn
