#include "kfn/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "kfn/error.hpp"
#include "kfn/slowdecay.hpp"

namespace kfn::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  detail::fail_domain("config " + path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) schema_error(path + "." + k, "unknown key");
  }
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema_error(path + "." + key, "missing required key");
  return obj.at(key);
}

// Number, or the string "inf" when allow_inf is set.
double number(const json& v, const std::string& path, bool allow_inf = false) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(path, "must be finite");
    return d;
  }
  if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return kInf;
  schema_error(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

std::string string_of(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return v.get<std::string>();
}

Vector number_array(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema_error(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return Vector(std::move(out));
}

Vector weights_of(const json& obj, const std::string& path) {
  const bool has_w = obj.contains("weights");
  const bool has_geo = obj.contains("dim") || obj.contains("ratio");
  if (has_w == has_geo) schema_error(path, "give either \"weights\" or \"dim\" with \"ratio\"");
  if (has_w) return number_array(obj.at("weights"), path + ".weights");
  const double dim = number(required(obj, path, "dim"), path + ".dim");
  const double ratio = number(required(obj, path, "ratio"), path + ".ratio");
  if (dim < 1 || dim != std::floor(dim) || dim > 1e6) {
    schema_error(path + ".dim", "must be a positive integer");
  }
  if (!(ratio > 0.0)) schema_error(path + ".ratio", "must be positive");
  std::vector<double> w(static_cast<std::size_t>(dim));
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::pow(ratio, static_cast<double>(k));
  return Vector(std::move(w));
}

void check_declared_p(const json& obj, const std::string& path, double expected) {
  if (!obj.contains("p")) return;
  const double p = number(obj.at("p"), path + ".p");
  if (p != expected) {
    schema_error(path + ".p", "declares p = " + std::to_string(p) + " but this space is " +
                                  std::to_string(expected) + "-normed");
  }
}

std::optional<double> embedding_of(const json& obj, const std::string& path) {
  if (!obj.contains("embedding_constant")) return std::nullopt;
  const double m = number(obj.at("embedding_constant"), path + ".embedding_constant");
  if (m < 0.0) schema_error(path + ".embedding_constant", "must be nonnegative");
  return m;
}

SpaceSpec parse_space(const json& obj, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const std::string kind = string_of(required(obj, path, "kind"), path + ".kind");
  if (kind == "lq") {
    only_keys(obj, path, {"kind", "q", "p"});
    const double q = number(required(obj, path, "q"), path + ".q", true);
    if (!(q > 0.0)) schema_error(path + ".q", "must be positive");
    SpaceSpec s = std::isinf(q) ? SpaceSpec::sup() : SpaceSpec::lq(q);
    check_declared_p(obj, path, s.p_exponent());
    return s;
  }
  if (kind == "weighted_l1") {
    only_keys(obj, path, {"kind", "weights", "dim", "ratio", "p"});
    check_declared_p(obj, path, 1.0);
    return SpaceSpec::weighted_l1(weights_of(obj, path));
  }
  if (kind == "sup") {
    only_keys(obj, path, {"kind", "p"});
    check_declared_p(obj, path, 1.0);
    return SpaceSpec::sup();
  }
  if (kind == "lip_grid") {
    only_keys(obj, path, {"kind", "p"});
    check_declared_p(obj, path, 1.0);
    return SpaceSpec::lip_grid();
  }
  schema_error(path + ".kind", "unknown space kind \"" + kind + "\"");
}

SolverKind parse_solver(const std::string& name, const std::string& path) {
  for (SolverKind k : {SolverKind::weighted_closed_form, SolverKind::clip_l1_sup,
                       SolverKind::lip_grid, SolverKind::numeric_lq_lp, SolverKind::brute_force}) {
    if (to_string(k) == name) return k;
  }
  schema_error(path, "unknown solver \"" + name + "\"");
}

CoupleSpec with_embedding(CoupleSpec c, std::optional<double> m) {
  return CoupleSpec(c.x_space(), c.y_space(), c.solver(), m);
}

json space_json(const SpaceSpec& s) {
  json j;
  switch (s.kind()) {
    case SpaceKind::lq:
      j = {{"kind", "lq"}, {"q", s.q()}};
      break;
    case SpaceKind::weighted_l1:
      j = {{"kind", "weighted_l1"}, {"weights", s.weights()->data()}};
      break;
    case SpaceKind::sup:
      j = {{"kind", "sup"}};
      break;
    case SpaceKind::lip_grid:
      j = {{"kind", "lip_grid"}};
      break;
  }
  j["p"] = s.p_exponent();
  return j;
}

}  // namespace

CoupleSpec parse_couple_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    detail::fail_domain(std::string("config: malformed JSON: ") + e.what());
  }
  const std::string path = "$";
  if (!root.is_object()) schema_error(path, "expected an object");

  try {
    if (root.contains("kind")) {
      const std::string kind = string_of(root.at("kind"), path + ".kind");
      if (kind == "weighted_l1") {
        only_keys(root, path, {"kind", "weights", "dim", "ratio", "p", "embedding_constant"});
        check_declared_p(root, path, 1.0);
        return with_embedding(CoupleSpec::weighted(weights_of(root, path)),
                              embedding_of(root, path));
      }
      if (kind == "clip") {
        only_keys(root, path, {"kind", "embedding_constant"});
        return with_embedding(CoupleSpec::clip(), embedding_of(root, path));
      }
      if (kind == "lip_grid") {
        only_keys(root, path, {"kind", "embedding_constant"});
        return with_embedding(CoupleSpec::lip(), embedding_of(root, path));
      }
      if (kind == "lq_lp") {
        only_keys(root, path, {"kind", "q", "p", "embedding_constant"});
        const double q = number(required(root, path, "q"), path + ".q", true);
        const double p = number(required(root, path, "p"), path + ".p");
        if (q < 1.0 || p < 1.0) {
          schema_error(path, "lq_lp needs q, p >= 1: the numeric solver refuses non-convex "
                             "quasi-norm couples");
        }
        return with_embedding(CoupleSpec::numeric(q, p), embedding_of(root, path));
      }
      schema_error(path + ".kind", "unknown couple kind \"" + kind + "\"");
    }
    only_keys(root, path, {"x", "y", "solver", "embedding_constant"});
    SpaceSpec xs = parse_space(required(root, path, "x"), path + ".x");
    SpaceSpec ys = parse_space(required(root, path, "y"), path + ".y");
    const SolverKind solver =
        parse_solver(string_of(required(root, path, "solver"), path + ".solver"), path + ".solver");
    return CoupleSpec(std::move(xs), std::move(ys), solver, embedding_of(root, path));
  } catch (const json::exception& e) {
    detail::fail_domain(std::string("config: ") + e.what());
  }
}

std::string couple_to_json(const CoupleSpec& couple) {
  json j = {{"x", space_json(couple.x_space())},
            {"y", space_json(couple.y_space())},
            {"solver", std::string(to_string(couple.solver()))}};
  if (couple.embedding_constant()) j["embedding_constant"] = *couple.embedding_constant();
  return j.dump();
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    detail::fail_domain("--x: bad number \"" + std::string(s) + "\" in " + std::string(what));
  }
  return v;
}

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    detail::fail_domain("--x: bad integer \"" + std::string(s) + "\" in " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (std::string_view part : split(s, ',')) out.push_back(parse_double(part, what));
  return out;
}

}  // namespace

Element parse_element(std::string_view spec, const std::optional<CoupleSpec>& couple) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    detail::fail_domain("--x: expected FORM:ARGS, got \"" + std::string(spec) + "\"");
  }
  const std::string_view form = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);

  if (form == "values") return Vector(parse_list(args, "values"));
  if (form == "grid") {
    std::vector<double> v = parse_list(args, "grid");
    if (v.size() < 2) detail::fail_domain("--x: a grid function needs at least 2 nodes");
    return GridFunction(0.0, 1.0, Vector(std::move(v)));
  }
  if (form == "ones") {
    const std::size_t n = parse_count(args, "ones");
    if (n == 0) detail::fail_domain("--x: ones:N needs N >= 1");
    return Vector::constant(n, 1.0);
  }
  if (form == "basis") {
    const auto parts = split(args, ':');
    if (parts.size() > 2) detail::fail_domain("--x: basis:K[:DIM]");
    const std::size_t k = parse_count(parts[0], "basis");
    std::size_t dim = 0;
    if (parts.size() == 2) {
      dim = parse_count(parts[1], "basis");
    } else if (couple && couple->y_space().weights()) {
      dim = couple->y_space().weights()->size();
    } else {
      detail::fail_domain("--x: basis:K needs :DIM unless the couple has weights");
    }
    if (k >= dim) {
      detail::fail_domain("--x: basis index " + std::to_string(k) + " out of range for dim " +
                          std::to_string(dim));
    }
    return Vector::basis(dim, k);
  }
  if (form == "c1") {
    const auto parts = split(args, ':');
    if (parts.size() > 2) detail::fail_domain("--x: c1:N[:NODES]");
    const std::size_t n = parse_count(parts[0], "c1");
    const std::size_t nodes = parts.size() == 2 ? parse_count(parts[1], "c1") : 1001;
    if (n == 0 || nodes < 2 || n > 1000000 || nodes > 10000000) {
      detail::fail_domain("--x: c1:N[:NODES] needs N >= 1 and NODES >= 2");
    }
    return witness_c1(static_cast<int>(n), GridFunction(0.0, 1.0, Vector::zeros(nodes))).element;
  }
  detail::fail_domain("--x: unknown form \"" + std::string(form) + "\"");
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    detail::fail_domain(std::string("config: malformed JSON: ") + e.what());
  }
  const std::string path = "$";
  only_keys(root, path, {"command", "couple", "params", "output_path"});
  ExperimentConfig cfg;
  cfg.command = string_of(required(root, path, "command"), path + ".command");
  if (root.contains("couple")) {
    const json& c = root.at("couple");
    if (!c.is_object()) schema_error(path + ".couple", "expected an object");
    cfg.couple_json = c.dump();
  }
  if (root.contains("params")) {
    const json& p = root.at("params");
    if (!p.is_object()) schema_error(path + ".params", "expected an object");
    for (const auto& [k, v] : p.items()) {
      const std::string kp = path + ".params." + k;
      if (k == "out" || k == "couple" || k == "config") {
        schema_error(kp, "set this through the top-level keys instead");
      }
      if (v.is_string()) {
        cfg.params.emplace_back(k, v.get<std::string>());
      } else if (v.is_number_integer()) {
        cfg.params.emplace_back(k, std::to_string(v.get<long long>()));
      } else if (v.is_number()) {
        cfg.params.emplace_back(k, v.dump());
      } else {
        schema_error(kp, "expected a string or a number");
      }
    }
  }
  if (root.contains("output_path")) {
    cfg.output_path = string_of(root.at("output_path"), path + ".output_path");
  }
  return cfg;
}

std::vector<std::string> to_args(const ExperimentConfig& config) {
  std::vector<std::string> args{config.command};
  if (config.couple_json) {
    args.push_back("--couple-json");
    args.push_back(*config.couple_json);
  }
  for (const auto& [k, v] : config.params) {
    args.push_back("--" + k);
    args.push_back(v);
  }
  if (config.output_path) {
    args.push_back("--out");
    args.push_back(*config.output_path);
  }
  return args;
}

}  // namespace kfn::cli
