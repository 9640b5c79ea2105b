#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kfn/ksolve.hpp"
#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn {

/// Radius factor for certification: the closed ball of radius
/// delta * (1 - kBallShrink) stands in for the open ball of radius delta.
inline constexpr double kBallShrink = 1e-9;

/// inf { ||y||_Y : ||x - y||_X <= delta }, exact for the supported pairs:
///   X = sup,   Y = l_p (any p > 0):  ( sum_k (|x_k| - delta)_+^p )^{1/p}
///   X = sup,   Y = lip_grid:         max_{s<u} (|x(s) - x(u)| - 2 delta)_+ / (u - s)
///   X = l_1,   Y = sup:              smallest M with sum_k (|x_k| - M)_+ <= delta
/// Returns 0 when delta >= ||x||_X. Throws DomainError for other pairs.
double min_y_norm_on_ball(const Element& x, double delta, const SpaceSpec& y_space,
                          const SpaceSpec& x_space);

/// A unit element whose delta-ball meets Y only at Y-norm >= b.
struct Witness {
  int n = 0;
  Element element;
  SpaceSpec x_space;
  SpaceSpec y_space;
  double delta = 0.0;
  double b = 0.0;
  /// Lower bound for min ||y||_Y over the closed X-ball of radius
  /// delta (1 - kBallShrink), computed exactly (or through a ball inclusion,
  /// see `certified_via`). Always >= b for a returned witness.
  double certified_b = 0.0;
  std::string certified_via;
  /// The unnormalized form when the element was rescaled to unit X-norm.
  std::optional<double> raw_delta;
  std::optional<double> raw_b;
};

/// Indicator of the first 2n coordinates (dimension 2n) against Y = l_p,
/// delta = 1/2, b = 2^{-1+1/p} n^{1/p}. With finite q the element is scaled
/// to unit l_q norm and delta, b by the same factor; the sup-norm ball of a
/// radius contains the l_q ball, so the sup formula certifies it.
Witness witness_lqlp(int n, double p, double q = std::numeric_limits<double>::infinity());

/// -1 up to the ramp start, linear, then 1, sampled on `grid` (only its
/// interval and node count are used). The ramp has width 1/n centred at the
/// midpoint; its ends are moved inward to the nearest nodes, which only
/// steepens it. delta = 1/2, b = n. Throws DomainError when the node
/// spacing exceeds 1/(2n) or the interval is shorter than 1/n.
Witness witness_c1(int n, const GridFunction& grid);

/// Checks ||element||_X = 1 and fills certified_b; throws CheckFailure when
/// certified_b < b.
Witness make_witness(int n, Element element, SpaceSpec x_space, SpaceSpec y_space, double delta,
                     double b);

using WitnessFamily = std::function<Witness(int n)>;

struct CertificateEntry {
  int n = 0;
  double b = 0.0;
  double t = 0.0;        ///< 1 / b
  double k_lower = 0.0;  ///< delta (1 - kBallShrink), implied by the witness
  std::optional<double> k_solver;
  std::optional<double> k_solver_error;
};

struct SlowDecayCertificate {
  double c = 0.0;
  std::vector<CertificateEntry> entries;
  /// b_last / b_first.
  double b_ratio = 0.0;
  /// True when b is non-decreasing with b_last >= 2 b_first and delta is the
  /// same for every witness, so t_n = 1/b_n heads to 0 with K bounded below.
  bool slow_decay = false;
  std::string note;
};

/// Runs the family for n = 1..N against `couple`. K(x_n, 1/b_n) >= delta is
/// implied by the witness: a smaller value would give y with
/// ||x_n - y||_X < delta and ||y||_Y < delta b_n < b_n. Where the couple's
/// solver applies, K is also evaluated directly; a direct value below
/// c - 1e-9 throws CheckFailure.
SlowDecayCertificate certify_slow_decay(const WitnessFamily& family, const CoupleSpec& couple,
                                        int big_n, const SolveOptions& opts = {});

/// First n with k_lower > m * eps[n-1]: the witness that refutes the claim
/// K(x, t_n) <= m eps_n for every unit x. Empty when no entry refutes it.
std::optional<int> refute_uniform_rate(const SlowDecayCertificate& cert,
                                       const std::vector<double>& eps, double m);

struct TransferReport {
  double lhs = 0.0;  ///< K(x, t M, X, Y)
  double rhs = 0.0;  ///< K(x, t, X, Z)
  double tolerance = 0.0;
  double domination_ratio = 0.0;  ///< max ||y||_Z / ||y||_Y over probes
  bool holds = false;
};

/// K(x, t M, X, Y) >= K(x, t, X, Z) given ||y||_Z <= M ||y||_Y. The
/// domination is checked on the canonical basis and on `probes`; for
/// weighted spaces the basis check is exact. Throws DomainError when it fails
/// or the couples have different X.
TransferReport transfer_lower_bound(const Element& x, double t, double m,
                                    const CoupleSpec& couple_xy, const CoupleSpec& couple_xz,
                                    const std::vector<Element>& probes = {},
                                    const SolveOptions& opts = {});

/// Equivalence constants a ||.||* <= ||.|| <= A ||.||* for X, and b, B for Y.
/// They give min(a, b) K* <= K <= max(A, B) K*.
struct NormEquivalence {
  double x_lower = 1.0;
  double x_upper = 1.0;
  double y_lower = 1.0;
  double y_upper = 1.0;
};

struct SandwichReport {
  double m = 0.0;  ///< min K / K*
  double n = 0.0;  ///< max K / K*
  double declared_m = 0.0;
  double declared_n = 0.0;
};

/// Tightest M, N with M K* <= K <= N K* over samples x t_grid. Throws
/// CheckFailure when they fall outside the declared constants.
SandwichReport renorm_sandwich_check(const CoupleSpec& k_star, const CoupleSpec& k,
                                     const NormEquivalence& eq,
                                     const std::vector<Element>& samples,
                                     const std::vector<double>& t_grid,
                                     const SolveOptions& opts = {});

}  // namespace kfn
