#include "kfn/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kfn/error.hpp"

namespace kfn {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::lq: return "lq";
    case SpaceKind::weighted_l1: return "weighted_l1";
    case SpaceKind::sup: return "sup";
    case SpaceKind::lip_grid: return "lip_grid";
  }
  return "?";
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::weighted_closed_form: return "weighted_closed_form";
    case SolverKind::clip_l1_sup: return "clip_l1_sup";
    case SolverKind::lip_grid: return "lip_grid";
    case SolverKind::numeric_lq_lp: return "numeric_lq_lp";
    case SolverKind::brute_force: return "brute_force";
  }
  return "?";
}

SpaceSpec SpaceSpec::lq(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    detail::fail_domain("lq exponent must be a finite positive number (use sup for q = inf)");
  }
  return SpaceSpec(SpaceKind::lq, q, std::min(q, 1.0), std::nullopt);
}

SpaceSpec SpaceSpec::weighted_l1(Vector weights) {
  for (double w : weights.entries()) {
    if (!(w > 0.0)) detail::fail_domain("weights must be strictly positive");
  }
  return SpaceSpec(SpaceKind::weighted_l1, 1.0, 1.0, std::move(weights));
}

SpaceSpec SpaceSpec::sup() {
  return SpaceSpec(SpaceKind::sup, std::numeric_limits<double>::infinity(), 1.0, std::nullopt);
}

SpaceSpec SpaceSpec::lip_grid() {
  return SpaceSpec(SpaceKind::lip_grid, std::numeric_limits<double>::infinity(), 1.0,
                   std::nullopt);
}

namespace {

double lq_norm(std::span<const double> v, double q) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  if (q == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  // Scale by the largest entry so that neither tiny q nor large entries
  // overflow the power sum.
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, q);
  return m * std::pow(s, 1.0 / q);
}

}  // namespace

namespace detail {

double norm_of(const SpaceSpec& space, std::span<const double> e, double grid_spacing) {
  switch (space.kind()) {
    case SpaceKind::lq: return lq_norm(e, space.q());
    case SpaceKind::weighted_l1: {
      const Vector& w = *space.weights();
      if (w.size() != e.size()) {
        fail_domain("weighted norm: weights have length " + std::to_string(w.size()) +
                    " but vector has dimension " + std::to_string(e.size()));
      }
      double s = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) s += w[k] * std::abs(e[k]);
      return s;
    }
    case SpaceKind::sup: {
      double m = 0.0;
      for (double x : e) m = std::max(m, std::abs(x));
      return m;
    }
    case SpaceKind::lip_grid: {
      if (!(grid_spacing > 0.0)) {
        fail_domain("lip_grid seminorm needs a grid function, not a bare vector");
      }
      double m = 0.0;
      for (std::size_t i = 1; i < e.size(); ++i) {
        m = std::max(m, std::abs(e[i] - e[i - 1]) / grid_spacing);
      }
      return m;
    }
  }
  return 0.0;
}

}  // namespace detail

double norm(const SpaceSpec& space, const Vector& v) {
  return detail::norm_of(space, v.entries(), 0.0);
}

double norm(const SpaceSpec& space, const GridFunction& f) {
  return detail::norm_of(space, f.values().entries(), f.spacing());
}

double norm(const SpaceSpec& space, const Element& e) {
  return std::visit([&](const auto& x) { return norm(space, x); }, e);
}

double quasi_norm_constant(const SpaceSpec& space) {
  return std::max(1.0, std::pow(2.0, 1.0 / space.p_exponent() - 1.0));
}

CoupleSpec::CoupleSpec(SpaceSpec x_space, SpaceSpec y_space, SolverKind solver,
                       std::optional<double> embedding_constant)
    : x_(std::move(x_space)),
      y_(std::move(y_space)),
      solver_(solver),
      embedding_constant_(embedding_constant) {
  if (embedding_constant_ && !(*embedding_constant_ >= 0.0 && std::isfinite(*embedding_constant_))) {
    detail::fail_domain("embedding_constant must be a finite nonnegative number");
  }
  if (x_.kind() == SpaceKind::lip_grid) {
    detail::fail_domain("X space must be a quasi-norm; lip_grid is only allowed as Y");
  }
  const auto mismatch = [&](std::string_view need) {
    detail::fail_domain(std::string("solver ") + std::string(to_string(solver_)) + " needs " +
                        std::string(need) + ", got X=" + std::string(to_string(x_.kind())) +
                        ", Y=" + std::string(to_string(y_.kind())));
  };
  const bool x_is_l1 = x_.kind() == SpaceKind::lq && x_.q() == 1.0;
  switch (solver_) {
    case SolverKind::weighted_closed_form: {
      if (!x_is_l1 || y_.kind() != SpaceKind::weighted_l1) mismatch("X=lq(1), Y=weighted_l1");
      const auto w = y_.weights()->entries();
      if (!std::is_sorted(w.begin(), w.end())) {
        detail::fail_domain("weighted couple: Y weights must be non-decreasing");
      }
      break;
    }
    case SolverKind::clip_l1_sup:
      if (!x_is_l1 || y_.kind() != SpaceKind::sup) mismatch("X=lq(1), Y=sup");
      break;
    case SolverKind::lip_grid:
      if (x_.kind() != SpaceKind::sup || y_.kind() != SpaceKind::lip_grid) {
        mismatch("X=sup, Y=lip_grid");
      }
      break;
    case SolverKind::numeric_lq_lp: {
      const bool x_ok = x_.kind() == SpaceKind::sup || (x_.kind() == SpaceKind::lq && x_.q() >= 1.0);
      const bool y_ok = y_.kind() == SpaceKind::lq && y_.q() >= 1.0;
      if (!x_ok || !y_ok) {
        detail::fail_domain(
            "numeric couple refused: needs X=lq(q) or sup and Y=lq(p) with q, p >= 1 "
            "(non-convex quasi-norm couples are not supported by the numeric solver)");
      }
      break;
    }
    case SolverKind::brute_force:
      break;
  }
}

CoupleSpec CoupleSpec::weighted(Vector weights) {
  return {SpaceSpec::lq(1.0), SpaceSpec::weighted_l1(std::move(weights)),
          SolverKind::weighted_closed_form};
}

CoupleSpec CoupleSpec::clip() {
  return {SpaceSpec::lq(1.0), SpaceSpec::sup(), SolverKind::clip_l1_sup};
}

CoupleSpec CoupleSpec::lip() {
  return {SpaceSpec::sup(), SpaceSpec::lip_grid(), SolverKind::lip_grid};
}

CoupleSpec CoupleSpec::numeric(double q, double p) {
  SpaceSpec x = std::isinf(q) && q > 0 ? SpaceSpec::sup() : SpaceSpec::lq(q);
  return {std::move(x), SpaceSpec::lq(p), SolverKind::numeric_lq_lp};
}

double CoupleSpec::common_p() const noexcept { return std::min(x_.p_exponent(), y_.p_exponent()); }

namespace {

std::optional<double> structural_constant(const CoupleSpec& c, std::string& note) {
  const SpaceSpec& x = c.x_space();
  const SpaceSpec& y = c.y_space();
  if (x == y) return 1.0;
  if (y.kind() == SpaceKind::lip_grid) {
    note = "Y is a seminorm vanishing on constants: no uniform embedding constant";
    return std::nullopt;
  }
  if (y.kind() == SpaceKind::weighted_l1 && x.kind() == SpaceKind::lq && x.q() == 1.0) {
    const auto w = y.weights()->entries();
    return 1.0 / *std::min_element(w.begin(), w.end());
  }
  const double qx = x.kind() == SpaceKind::sup ? std::numeric_limits<double>::infinity() : x.q();
  const double qy = y.kind() == SpaceKind::sup ? std::numeric_limits<double>::infinity() : y.q();
  const bool both_lq = x.kind() != SpaceKind::weighted_l1 && y.kind() != SpaceKind::weighted_l1;
  if (both_lq && qx >= qy) return 1.0;
  note = "no uniform embedding constant: the ratio grows with the truncation dimension";
  return std::nullopt;
}

Element basis_like(const Element& like, std::size_t k) {
  const std::size_t dim = samples_of(like).size();
  return with_samples(like, Vector::basis(dim, k));
}

}  // namespace

EmbeddingReport validate_couple(const CoupleSpec& couple, const std::vector<Element>& probes) {
  EmbeddingReport report;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (samples_of(probes[i]).is_zero()) {
      detail::fail_domain("probe " + std::to_string(i) + " is the zero vector");
    }
    ProbeRatio pr{i, norm(couple.x_space(), probes[i]), norm(couple.y_space(), probes[i]), {}};
    if (pr.y_norm > 0.0) {
      pr.ratio = pr.x_norm / pr.y_norm;
      report.max_ratio = std::max(report.max_ratio, *pr.ratio);
    } else if (pr.x_norm > 0.0) {
      report.not_embedding_witnesses.push_back(i);
    }
    report.probes.push_back(pr);
  }

  if (!probes.empty()) {
    const std::size_t dim = samples_of(probes.front()).size();
    double basis_max = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < dim; ++k) {
      const Element e = basis_like(probes.front(), k);
      const double ny = norm(couple.y_space(), e);
      if (ny > 0.0) {
        basis_max = std::max(basis_max, norm(couple.x_space(), e) / ny);
        any = true;
      }
    }
    if (any) report.basis_max_ratio = basis_max;
  }

  report.uniform_constant = structural_constant(couple, report.note);

  if (const auto& m = couple.embedding_constant()) {
    const double slack = *m * (1.0 + 1e-12);
    report.declared_constant_violated =
        report.max_ratio > slack || (report.basis_max_ratio && *report.basis_max_ratio > slack);
  }
  return report;
}

}  // namespace kfn
