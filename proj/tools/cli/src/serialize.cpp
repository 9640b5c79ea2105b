#include "kfn/cli/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace kfn::cli {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string kcurve_csv(const KCurve& curve) {
  std::string out = "t,K,err\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += fmt17(curve.t_values[i]) + "," + fmt17(curve.k_values[i]) + "," +
           fmt17(curve.error_bounds[i]) + "\n";
  }
  return out;
}

std::string phi_csv(const KCurve& phi, const Vector& sigma, const Vector& weights) {
  double saturation = 0.0;
  double slope = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    saturation += sigma[k];
    slope += sigma[k] * weights[k];
  }
  std::string out = "t,phi,linear_bound,saturation\n";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out += fmt17(phi.t_values[i]) + "," + fmt17(phi.k_values[i]) + "," +
           fmt17(phi.t_values[i] * slope) + "," + fmt17(saturation) + "\n";
  }
  return out;
}

std::string certificate_json(const SlowDecayCertificate& cert) {
  json entries = json::array();
  for (const CertificateEntry& e : cert.entries) {
    json j = {{"n", e.n}, {"b_n", e.b}, {"t_n", e.t}, {"k_lower", e.k_lower}};
    j["k_solver"] = e.k_solver ? json(*e.k_solver) : json(nullptr);
    j["k_solver_error"] = e.k_solver_error ? json(*e.k_solver_error) : json(nullptr);
    entries.push_back(std::move(j));
  }
  json root = {{"c", cert.c},
               {"slow_decay", cert.slow_decay},
               {"b_ratio", cert.b_ratio},
               {"note", cert.note},
               {"entries", std::move(entries)}};
  return root.dump(2) + "\n";
}

std::string trace_json(const DecompositionTrace& trace, const std::optional<CauchyReport>& cauchy) {
  const double factor = std::pow(trace.rho, 1.0 / trace.p);
  double level = trace.x_norm;
  json steps = json::array();
  for (std::size_t m = 0; m < trace.steps.size(); ++m) {
    level *= factor;
    const DecompositionStep& s = trace.steps[m];
    steps.push_back({{"m", m},
                     {"x_norm", s.x_norm},
                     {"y_norm", s.y_norm},
                     {"x_bound_ratio", level > 0.0 ? s.x_norm / level : 0.0},
                     {"y_bound_ratio", level > 0.0 ? s.y_norm * trace.t0 / level : 0.0}});
  }
  json root = {{"t0", trace.t0},
               {"rho", trace.rho},
               {"p", trace.p},
               {"x_norm", trace.x_norm},
               {"stopped_early", trace.stopped_early},
               {"failure", trace.failure ? json(*trace.failure) : json(nullptr)},
               {"steps", std::move(steps)},
               {"z_final", trace.z_final.data()}};
  if (cauchy) {
    root["cauchy"] = {{"pairs_checked", cauchy->pairs_checked},
                      {"worst_triangle_ratio", cauchy->worst_triangle_ratio},
                      {"final_tail_bound", cauchy->final_tail_bound},
                      {"tail_below_tol", cauchy->tail_below_tol}};
  }
  return root.dump(2) + "\n";
}

std::string interp_json(const InterpNormResult& res, double theta) {
  json root = {{"theta", theta},
               {"q", std::isinf(res.q) ? json("inf") : json(res.q)},
               {"k_max", res.k_max},
               {"value", res.value},
               {"tail_bound", res.tail_bound ? json(*res.tail_bound) : json("unknown")},
               {"total_upper", res.tail_bound ? json(res.total_upper()) : json(nullptr)},
               {"solver_error", res.solver_error},
               {"terms", res.terms}};
  return root.dump(2) + "\n";
}

}  // namespace kfn::cli
