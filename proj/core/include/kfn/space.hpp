#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kfn/vector.hpp"

namespace kfn {

enum class SpaceKind { lq, weighted_l1, sup, lip_grid };

std::string_view to_string(SpaceKind kind);

/// A (quasi-semi-)norm on finite sequences or grid functions, together with
/// the exponent p for which it is p-normed: ||u+v||^p <= ||u||^p + ||v||^p.
class SpaceSpec {
public:
  /// l_q, 0 < q < inf. p-normed with p = min(q, 1).
  static SpaceSpec lq(double q);
  /// sum_k w_k |v_k| with strictly positive weights.
  static SpaceSpec weighted_l1(Vector weights);
  static SpaceSpec sup();
  /// Largest adjacent-node difference quotient of a grid function. This is a
  /// seminorm: it vanishes on constants.
  static SpaceSpec lip_grid();

  SpaceKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  double p_exponent() const noexcept { return p_; }
  const std::optional<Vector>& weights() const noexcept { return weights_; }

  /// True when |u_k| <= |v_k| for all k implies ||u|| <= ||v||.
  bool is_lattice() const noexcept { return kind_ != SpaceKind::lip_grid; }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

private:
  SpaceSpec(SpaceKind kind, double q, double p, std::optional<Vector> weights)
      : kind_(kind), q_(q), p_(p), weights_(std::move(weights)) {}

  SpaceKind kind_;
  double q_;
  double p_;
  std::optional<Vector> weights_;
};

double norm(const SpaceSpec& space, const Vector& v);
double norm(const SpaceSpec& space, const GridFunction& f);
double norm(const SpaceSpec& space, const Element& e);

namespace detail {
/// Norm of raw samples; grid_spacing is only read by lip_grid.
double norm_of(const SpaceSpec& space, std::span<const double> v, double grid_spacing);
}  // namespace detail

/// Smallest C with ||u + v|| <= C (||u|| + ||v||), i.e. max(1, 2^{1/p - 1}).
double quasi_norm_constant(const SpaceSpec& space);

enum class SolverKind { weighted_closed_form, clip_l1_sup, lip_grid, numeric_lq_lp, brute_force };

std::string_view to_string(SolverKind kind);

/// Ordered couple (X, Y) with Y continuously embedded in X, plus the solver
/// used for its K-functional.
class CoupleSpec {
public:
  CoupleSpec(SpaceSpec x_space, SpaceSpec y_space, SolverKind solver,
             std::optional<double> embedding_constant = std::nullopt);

  /// (l_1, weighted l_1 with weights w).
  static CoupleSpec weighted(Vector weights);
  /// (l_1, sup): the finitely supported sequences with the sup norm.
  static CoupleSpec clip();
  /// (sup, grid Lipschitz seminorm) on grid functions.
  static CoupleSpec lip();
  /// (l_q, l_p) with q, p >= 1; q = +inf selects the sup norm for X.
  static CoupleSpec numeric(double q, double p);

  const SpaceSpec& x_space() const noexcept { return x_; }
  const SpaceSpec& y_space() const noexcept { return y_; }
  SolverKind solver() const noexcept { return solver_; }
  const std::optional<double>& embedding_constant() const noexcept { return embedding_constant_; }

  /// min(p_X, p_Y): both spaces are p-normed for this exponent.
  double common_p() const noexcept;

  friend bool operator==(const CoupleSpec&, const CoupleSpec&) = default;

private:
  SpaceSpec x_;
  SpaceSpec y_;
  SolverKind solver_;
  std::optional<double> embedding_constant_;
};

struct ProbeRatio {
  std::size_t index;
  double x_norm;
  double y_norm;
  std::optional<double> ratio;  ///< empty when ||v||_Y = 0
};

struct EmbeddingReport {
  std::vector<ProbeRatio> probes;
  /// max ||v||_X / ||v||_Y over probes with nonzero Y norm.
  double max_ratio = 0.0;
  /// Probes with ||v||_Y = 0 < ||v||_X. Legal for seminormed Y.
  std::vector<std::size_t> not_embedding_witnesses;
  /// The same ratio on the canonical basis of the probe dimension.
  std::optional<double> basis_max_ratio;
  /// Dimension-free constant for the couple's structure, when one exists.
  std::optional<double> uniform_constant;
  bool declared_constant_violated = false;
  std::string note;
};

EmbeddingReport validate_couple(const CoupleSpec& couple, const std::vector<Element>& probes);

}  // namespace kfn
