#pragma once

#include <optional>
#include <string>

#include "kfn/decompose.hpp"
#include "kfn/interp.hpp"
#include "kfn/kcurve.hpp"
#include "kfn/slowdecay.hpp"
#include "kfn/uniform.hpp"

namespace kfn::cli {

/// printf("%.17g"): round-trips every double.
std::string fmt17(double v);

/// Header t,K,err.
std::string kcurve_csv(const KCurve& curve);

/// Header t,phi,linear_bound,saturation where linear_bound = t sum sigma_k w_k
/// and saturation = sum sigma_k.
std::string phi_csv(const KCurve& phi, const Vector& sigma, const Vector& weights);

/// {c, slow_decay, b_ratio, note, entries: [{n, b_n, t_n, k_lower, k_solver}]}.
std::string certificate_json(const SlowDecayCertificate& cert);

/// Per-step norms and their ratios to the geometric bounds.
std::string trace_json(const DecompositionTrace& trace, const std::optional<CauchyReport>& cauchy);

std::string interp_json(const InterpNormResult& res, double theta);

}  // namespace kfn::cli
