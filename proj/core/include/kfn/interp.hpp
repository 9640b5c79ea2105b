#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kfn/ksolve.hpp"
#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn {

/// (theta, q) of a real interpolation space; q = +inf selects the sup.
struct InterpParams {
  double theta = 0.5;
  double q = 1.0;
};

/// Throws DomainError unless 0 < theta < 1 and q > 0 (q = +inf allowed).
void validate(const InterpParams& p);

struct InterpNormResult {
  /// ( sum_{k=0}^{k_max} (2^{theta k} K(x, 2^{-k}))^q )^{1/q}.
  double value = 0.0;
  int k_max = 0;
  /// The second index the value was computed with.
  double q = 1.0;
  /// Upper bound for the l_q norm of the discarded terms k > k_max, from
  /// K(x, t) <= t ||x||_Y. Empty when ||x||_Y is not available, in which case
  /// value is only a lower bound for the full norm.
  std::optional<double> tail_bound;
  /// Largest per-term solver error bound.
  double solver_error = 0.0;
  std::vector<double> terms;

  /// Upper bound for the untruncated norm; +inf when the tail is unknown.
  double total_upper() const;
};

/// Discrete interpolation quasi-norm of x in (X, Y)_{theta, q}, truncated at
/// k_max. Every truncated element lies in Y, so the tail bound is filled in
/// from the couple's Y norm.
InterpNormResult discrete_interp_norm(const Element& x, const CoupleSpec& couple,
                                      const InterpParams& params, int k_max = 32,
                                      const SolveOptions& opts = {});

/// Closed-form upper bound for ||y||_{theta, q} when ||y||_Y = 1 and
/// ||y||_X <= 2^{-N0}:
///   [2^{(theta-1) q N0} 2^{theta q} / (2^{theta q} - 1)
///    + 2^{(theta-1) q (N0+1)} / (1 - 2^{(theta-1) q})]^{1/q}.
double strict_bound(double theta, double q, int n0);

struct ApproxNormResult {
  double value = 0.0;
  /// False when E increases somewhere, which best-approximation errors of a
  /// nested family never do.
  bool non_increasing = true;
};

/// l_q norm of {2^{alpha k} E_k}_{k=0..}.
ApproxNormResult approx_space_norm(const std::vector<double>& errors, double alpha, double q);

/// Best-approximation error E(x, A_n).
using BestErrorFn = std::function<double(const Vector& x, int n)>;

/// Elements of A_n for one level n.
struct LevelSamples {
  int n = 1;
  std::vector<Vector> elements;
};

struct JacksonBernsteinReport {
  /// Smallest C with E(y, A_n) <= C n^{-r} ||y||_Y on the samples.
  double c_jackson = 0.0;
  /// Smallest C with ||a||_Y <= C n^r ||a||_X on the samples.
  double c_bernstein = 0.0;
  std::vector<std::string> violations;
};

/// Empirical Jackson and Bernstein constants. These are lower bounds for
/// the true constants. A sample whose inequality cannot hold for any finite
/// C (zero right-hand side, positive left-hand side) is listed in
/// `violations`, as is any excess over the optional declared constants.
JacksonBernsteinReport jackson_bernstein_check(const CoupleSpec& couple,
                                               const std::vector<Vector>& y_samples,
                                               const std::vector<int>& levels,
                                               const BestErrorFn& best_error,
                                               const std::vector<LevelSamples>& a_samples,
                                               double r,
                                               std::optional<double> declared_jackson = {},
                                               std::optional<double> declared_bernstein = {});

/// theta of (X, (X, Y)_{theta, .})_{alpha, .} = (X, Y)_{alpha theta, .}.
double compose_theta(double alpha, double theta);

/// r with 1/r = (1 - eta)/p + eta/q; p, q may be +inf, eta in [0, 1].
double harmonic_exponent(double eta, double p, double q);

using NormFn = std::function<double(const Element&)>;

struct EquivalenceReport {
  double rho_min = 0.0;
  double rho_max = 0.0;
  /// rho_max / rho_min. Sample evidence only, not a proof of equivalence.
  double spread = 0.0;
  std::size_t used = 0;
  /// Samples where norm_b vanished.
  std::vector<std::size_t> zero_denominator;
};

EquivalenceReport equivalence_ratio(const NormFn& norm_a, const NormFn& norm_b,
                                    const std::vector<Element>& samples);

/// For the weighted couple (l_1, sum w_k |x_k|), the space (X, Y)_{theta, 1}
/// with its discrete norm truncated at k_max is itself weighted l_1 with
///   W_k = sum_{j=0}^{k_max} 2^{theta j} min(1, 2^{-j} w_k).
/// Only the second index 1 linearizes this way.
SpaceSpec interp_space_as_weighted(const Vector& weights, double theta, int k_max = 32);

/// Compares the iterated norm of (X, (X, Y)_{theta, 1})_{alpha, q} with the
/// direct norm of (X, Y)_{alpha theta, q} for the weighted couple with
/// `weights`, both truncated at k_max. rho = iterated / direct.
EquivalenceReport reiteration_equivalence(const Vector& weights, double theta, double alpha,
                                          double q, int k_max,
                                          const std::vector<Element>& samples);

/// `count` vectors of dimension `dim` with `nnz` nonzero entries each, at
/// distinct random positions with values uniform in [-1, 1] away from 0.
/// Deterministic for a given seed.
std::vector<Element> sparse_samples(std::size_t dim, std::size_t count, std::size_t nnz,
                                    std::uint64_t seed);

}  // namespace kfn
