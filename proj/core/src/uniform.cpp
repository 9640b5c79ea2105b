#include "kfn/uniform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfn/error.hpp"
#include "kfn/ksolve.hpp"
#include "kfn/parallel.hpp"

namespace kfn {

CompactModelSpec::CompactModelSpec(Vector sigma) : sigma_(std::move(sigma)) {
  for (std::size_t k = 0; k < sigma_.size(); ++k) {
    if (!(sigma_[k] > 0.0)) detail::fail_domain("sigma must be strictly positive");
    if (k > 0 && sigma_[k] > sigma_[k - 1]) detail::fail_domain("sigma must be non-increasing");
  }
}

double CompactModelSpec::z_norm(const Vector& z) const {
  if (z.size() != sigma_.size()) {
    detail::fail_domain("Z norm: dim(z) = " + std::to_string(z.size()) + " but dim(sigma) = " +
                        std::to_string(sigma_.size()));
  }
  double m = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) m = std::max(m, std::abs(z[k]) / sigma_[k]);
  return m;
}

namespace {

const Vector& weights_of(const CoupleSpec& c, std::size_t dim) {
  if (c.solver() != SolverKind::weighted_closed_form) {
    detail::fail_domain("the uniform-decay model needs the weighted couple");
  }
  const Vector& w = *c.y_space().weights();
  if (w.size() != dim) {
    detail::fail_domain("dim(sigma) = " + std::to_string(dim) + " but the weights have length " +
                        std::to_string(w.size()));
  }
  return w;
}

}  // namespace

KCurve phi_profile(const CompactModelSpec& z, const CoupleSpec& weighted_couple,
                   const std::vector<double>& t_grid) {
  weights_of(weighted_couple, z.size());
  return k_curve(Element{z.sigma()}, weighted_couple, t_grid);
}

UniformBoundReport uniform_bound_check(const std::vector<Vector>& samples,
                                       const CompactModelSpec& z, const CoupleSpec& weighted_couple,
                                       const std::vector<double>& t_grid) {
  weights_of(weighted_couple, z.size());
  if (samples.empty()) detail::fail_domain("uniform_bound_check: empty sample list");
  std::vector<double> norms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    norms[i] = z.z_norm(samples[i]);
    if (norms[i] == 0.0) {
      detail::fail_domain("uniform_bound_check: sample " + std::to_string(i) + " is zero in Z");
    }
  }
  const KCurve phi = phi_profile(z, weighted_couple, t_grid);

  const std::size_t cols = t_grid.size();
  std::vector<double> ks(samples.size() * cols);
  parallel_for(ks.size(), [&](std::size_t i) {
    ks[i] = solve(weighted_couple, Element{samples[i / cols]}, t_grid[i % cols]).value;
  });

  UniformBoundReport rep;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::size_t s = i / cols;
    const std::size_t j = i % cols;
    const double bound = norms[s] * phi.k_values[j];
    ++rep.checks;
    if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, ks[i] / bound);
    if (ks[i] > bound * (1.0 + 1e-12) + 1e-300) {
      rep.violations.push_back({s, t_grid[j], ks[i], bound});
    }
  }
  return rep;
}

}  // namespace kfn
