#pragma once

#include <cstddef>
#include <vector>

#include "kfn/kcurve.hpp"
#include "kfn/space.hpp"
#include "kfn/vector.hpp"

namespace kfn {

/// Envelope model of a compactly embedded space Z: the unit ball is
/// {z : |z_k| <= sigma_k}, so ||z||_Z = max_k |z_k| / sigma_k.
class CompactModelSpec {
public:
  /// sigma strictly positive and non-increasing.
  explicit CompactModelSpec(Vector sigma);

  const Vector& sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return sigma_.size(); }
  double z_norm(const Vector& z) const;

private:
  Vector sigma_;
};

/// phi(t) = K(S(Z), t) for the weighted couple. K is coordinate-wise
/// monotone in |z_k| there, so the sup over the Z ball sits at z = sigma:
/// phi(t) = sum_k sigma_k min(1, t w_k), exact, error bounds 0.
KCurve phi_profile(const CompactModelSpec& z, const CoupleSpec& weighted_couple,
                   const std::vector<double>& t_grid);

struct UniformViolation {
  std::size_t sample = 0;
  double t = 0.0;
  double k = 0.0;
  double bound = 0.0;
};

struct UniformBoundReport {
  std::size_t checks = 0;
  /// Largest K(z, t) / (||z||_Z phi(t)) over checks with phi(t) > 0.
  double max_ratio = 0.0;
  std::vector<UniformViolation> violations;
};

/// K(z, t) <= ||z||_Z phi(t) for every sample and grid point. The same
/// comparison covers K(z, t, Z*, Y) with Z* = Z under the X norm, since that
/// K coincides with K(z, t, X, Y).
UniformBoundReport uniform_bound_check(const std::vector<Vector>& samples,
                                       const CompactModelSpec& z, const CoupleSpec& weighted_couple,
                                       const std::vector<double>& t_grid);

}  // namespace kfn
