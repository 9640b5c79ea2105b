#include "kfn/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kfn/cli/config.hpp"
#include "kfn/cli/serialize.hpp"
#include "kfn/decompose.hpp"
#include "kfn/error.hpp"
#include "kfn/interp.hpp"
#include "kfn/kcurve.hpp"
#include "kfn/slowdecay.hpp"
#include "kfn/uniform.hpp"

namespace kfn::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised after a failed check when the diagnostics carry more than a
/// message, e.g. the partial decomposition trace.
struct CheckFailureWithDetail {
  std::string message;
  json detail;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail_domain("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_q(const std::string& s, const char* flag) {
  if (s == "inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  detail::fail_domain(std::string(flag) + ": expected a number or 'inf', got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      detail::fail_domain(std::string(flag) + ": bad entry '" + item + "'");
    }
  }
  if (out.empty()) detail::fail_domain(std::string(flag) + ": empty list");
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) detail::fail_domain(what);
}

/// Fails before any computation when the destination directory is missing.
void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::path(path).parent_path();
  require(parent.empty() || std::filesystem::is_directory(parent),
          "--out: directory " + parent.string() + " does not exist");
}

/// Writes through a temporary file so a reader never sees a partial output.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) {
      std::filesystem::remove(tmp);
      detail::fail_domain("cannot write " + path);
    }
  }
  std::filesystem::rename(tmp, path);
}

struct CoupleSource {
  std::string file;
  std::string json_text;

  void add_to(CLI::App* sub) {
    sub->add_option("--couple", file, "Couple JSON file");
    sub->add_option("--couple-json", json_text, "Couple JSON given inline");
  }

  CoupleSpec load() const {
    require(file.empty() != json_text.empty(), "give exactly one of --couple and --couple-json");
    return parse_couple_config(file.empty() ? json_text : read_file(file));
  }
};

/// A declared embedding constant must hold on the element itself and on the
/// canonical basis of its dimension.
void check_declared_embedding(const CoupleSpec& couple, const Element& x) {
  if (!couple.embedding_constant()) return;
  const EmbeddingReport rep = validate_couple(couple, {x});
  if (rep.declared_constant_violated) {
    detail::fail_domain("declared embedding_constant " + fmt17(*couple.embedding_constant()) +
                        " is violated: observed ratio " +
                        fmt17(std::max(rep.max_ratio, rep.basis_max_ratio.value_or(0.0))));
  }
}

SolveOptions solve_options(double grid_step, double tol) {
  require(grid_step > 0.0 && grid_step < 1.0, "--grid-step must lie in (0, 1)");
  require(tol > 0.0, "--tol must be positive");
  SolveOptions o;
  o.grid_step = grid_step;
  o.numeric_tol = tol;
  return o;
}

std::vector<double> t_grid(double tmin, double tmax, int points) {
  require(std::isfinite(tmin) && tmin > 0.0, "--tmin must be finite and positive");
  require(std::isfinite(tmax) && tmax >= tmin, "--tmax must be finite and >= --tmin");
  require(points >= 1, "--points must be at least 1");
  require(points > 1 || tmin == tmax, "--points 1 needs --tmin equal to --tmax");
  return log_grid(tmin, tmax, static_cast<std::size_t>(points));
}

// ---------------------------------------------------------------------------

struct KcurveCmd {
  CoupleSource couple;
  std::string x;
  double tmin = 1e-6;
  double tmax = 1.0;
  int points = 60;
  double grid_step = 1e-3;
  double tol = 1e-10;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("kcurve", "Sample t -> K(x, t) on a log grid (CSV)");
    couple.add_to(sub);
    sub->add_option("--x", x, "Element, e.g. basis:5 or values:1,2")->required();
    sub->add_option("--tmin", tmin);
    sub->add_option("--tmax", tmax);
    sub->add_option("--points", points);
    sub->add_option("--grid-step", grid_step, "Brute-force lattice step");
    sub->add_option("--tol", tol, "Numeric solver gap tolerance");
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    const CoupleSpec c = couple.load();
    const Element e = parse_element(x, c);
    const std::vector<double> grid = t_grid(tmin, tmax, points);
    const SolveOptions opts = solve_options(grid_step, tol);
    check_output_path(out_path);
    check_declared_embedding(c, e);
    require(solver_applicable(c, e), "the couple's solver cannot evaluate this element");
    emit(out_path, kcurve_csv(k_curve(e, c, grid, opts)), out);
  }
};

struct CertifyCmd {
  std::string family;
  double p = 1.0;
  std::string q = "inf";
  int big_n = 8;
  int nodes = 1001;
  double grid_step = 1e-3;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("certify", "Slow-decay certificate for a witness family");
    sub->add_option("--family", family, "lqlp, c1 or clip-constant")->required();
    sub->add_option("--p", p, "lqlp: exponent of Y = l_p");
    sub->add_option("--q", q, "lqlp: exponent of X = l_q, or inf");
    sub->add_option("--N", big_n, "Witnesses n = 1..N");
    sub->add_option("--nodes", nodes, "c1: grid nodes on [0, 1]");
    sub->add_option("--grid-step", grid_step, "Brute-force lattice step for p < 1");
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    require(big_n >= 1 && big_n <= 4096, "--N must lie in [1, 4096]");
    const SolveOptions opts = solve_options(grid_step, 1e-10);
    check_output_path(out_path);

    if (family == "lqlp") {
      const double qv = parse_q(q, "--q");
      require(std::isfinite(p) && p > 0.0, "--p must be positive");
      require(qv > 0.0, "--q must be positive");
      const SpaceSpec xs = std::isinf(qv) ? SpaceSpec::sup() : SpaceSpec::lq(qv);
      const CoupleSpec c = (p >= 1.0 && qv >= 1.0)
                               ? CoupleSpec::numeric(qv, p)
                               : CoupleSpec(xs, SpaceSpec::lq(p), SolverKind::brute_force);
      const auto fam = [&](int n) { return witness_lqlp(n, p, qv); };
      emit(out_path, certificate_json(certify_slow_decay(fam, c, big_n, opts)), out);
    } else if (family == "c1") {
      require(nodes >= 2, "--nodes must be at least 2");
      const GridFunction grid(0.0, 1.0, Vector::zeros(static_cast<std::size_t>(nodes)));
      const auto fam = [&](int n) { return witness_c1(n, grid); };
      emit(out_path, certificate_json(certify_slow_decay(fam, CoupleSpec::lip(), big_n, opts)),
           out);
    } else if (family == "clip-constant") {
      // e_1 in dimension n: every y with ||e_1 - y||_1 < 1/2 has ||y||_sup > 1/2,
      // and no better b exists, so t_n = 2 for every n.
      const auto fam = [](int n) {
        return make_witness(n, Vector::basis(static_cast<std::size_t>(n), 0), SpaceSpec::lq(1.0),
                            SpaceSpec::sup(), 0.5, 0.5);
      };
      emit(out_path, certificate_json(certify_slow_decay(fam, CoupleSpec::clip(), big_n, opts)),
           out);
    } else {
      detail::fail_domain("--family must be lqlp, c1 or clip-constant");
    }
  }
};

struct InterpCmd {
  CoupleSource couple;
  std::string x;
  double theta = 0.5;
  std::string q = "1";
  int k_max = 32;
  double grid_step = 1e-3;
  double tol = 1e-10;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("interpnorm", "Discrete (theta, q) interpolation norm");
    couple.add_to(sub);
    sub->add_option("--x", x)->required();
    sub->add_option("--theta", theta);
    sub->add_option("--q", q, "Number or inf");
    sub->add_option("--kmax", k_max);
    sub->add_option("--grid-step", grid_step);
    sub->add_option("--tol", tol);
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    const CoupleSpec c = couple.load();
    const Element e = parse_element(x, c);
    const InterpParams params{theta, parse_q(q, "--q")};
    validate(params);
    require(k_max >= 0 && k_max <= 1000, "--kmax must lie in [0, 1000]");
    const SolveOptions opts = solve_options(grid_step, tol);
    check_output_path(out_path);
    check_declared_embedding(c, e);
    require(solver_applicable(c, e), "the couple's solver cannot evaluate this element");
    emit(out_path, interp_json(discrete_interp_norm(e, c, params, k_max, opts), theta), out);
  }
};

struct StrictCmd {
  double theta = 0.5;
  std::string q = "1";
  int n0 = 1;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("strictbound", "Closed-form strict-inclusion bound");
    sub->add_option("--theta", theta);
    sub->add_option("--q", q);
    sub->add_option("--N0", n0);
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    const double qv = parse_q(q, "--q");
    require(std::isfinite(qv), "--q must be finite");
    check_output_path(out_path);
    emit(out_path, fmt17(strict_bound(theta, qv, n0)) + "\n", out);
  }
};

struct DecomposeCmd {
  CoupleSource couple;
  std::string x;
  double t0 = 0.0;
  double rho = 0.0;
  double p = 0.0;
  int m = 20;
  double tol = 1e-6;
  double grid_step = 1e-3;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("decompose", "Iterated near-optimal splitting (JSON trace)");
    couple.add_to(sub);
    sub->add_option("--x", x)->required();
    sub->add_option("--t0", t0)->required();
    sub->add_option("--rho", rho)->required();
    sub->add_option("--p", p, "Defaults to the couple's common exponent");
    sub->add_option("--m", m, "Steps 0..m");
    sub->add_option("--tol", tol, "Target for the Cauchy tail bound");
    sub->add_option("--grid-step", grid_step);
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    const CoupleSpec c = couple.load();
    const Element e = parse_element(x, c);
    require(std::holds_alternative<Vector>(e), "--x must be a vector for decompose");
    require(m >= 0 && m <= 10000, "--m must lie in [0, 10000]");
    const double pv = p > 0.0 ? p : c.common_p();
    const SolveOptions opts = solve_options(grid_step, 1e-12);
    check_output_path(out_path);
    check_declared_embedding(c, e);

    const DecompositionTrace tr =
        iterate_decomposition(std::get<Vector>(e), t0, rho, pv, m, c, opts);
    if (tr.failure) {
      throw CheckFailureWithDetail{*tr.failure, json::parse(trace_json(tr, std::nullopt))};
    }
    CauchyReport cauchy;
    try {
      cauchy = verify_cauchy_in_y(tr, c, tol);
    } catch (const CheckFailure& f) {
      throw CheckFailureWithDetail{f.what(), json::parse(trace_json(tr, std::nullopt))};
    }
    emit(out_path, trace_json(tr, cauchy), out);
  }
};

struct PhiCmd {
  int dim = 20;
  std::string sigma;
  std::string weights;
  double tmin = 1e-6;
  double tmax = 1.0;
  int points = 60;
  int samples = 0;
  std::optional<std::uint64_t> seed;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("phi", "Uniform decay profile of an envelope model (CSV)");
    sub->add_option("--dim", dim);
    sub->add_option("--sigma", sigma, "Envelope, default 2^-k");
    sub->add_option("--weights", weights, "Y weights, default 2^k");
    sub->add_option("--tmin", tmin);
    sub->add_option("--tmax", tmax);
    sub->add_option("--points", points);
    sub->add_option("--samples", samples, "Also check K(z, t) <= ||z||_Z phi(t) on this many");
    sub->add_option("--seed", seed, "Required with --samples");
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    require(dim >= 1 && dim <= 1000, "--dim must lie in [1, 1000]");
    auto dyadic = [&](int sign) {
      std::vector<double> v(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = std::ldexp(1.0, sign * k);
      return v;
    };
    const Vector s(sigma.empty() ? dyadic(-1) : parse_list(sigma, "--sigma"));
    const Vector w(weights.empty() ? dyadic(1) : parse_list(weights, "--weights"));
    require(s.size() == static_cast<std::size_t>(dim) && w.size() == s.size(),
            "--sigma and --weights must have --dim entries");
    require(samples >= 0, "--samples must be nonnegative");
    require(samples == 0 || seed.has_value(), "--samples needs --seed");
    const std::vector<double> grid = t_grid(tmin, tmax, points);
    check_output_path(out_path);

    const CompactModelSpec z(s);
    const CoupleSpec c = CoupleSpec::weighted(w);
    const KCurve phi = phi_profile(z, c, grid);
    if (samples > 0) {
      std::mt19937_64 rng(*seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<Vector> zs;
      for (int i = 0; i < samples; ++i) {
        std::vector<double> v(s.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = s[k] * u(rng);
        zs.emplace_back(std::move(v));
      }
      const UniformBoundReport rep = uniform_bound_check(zs, z, c, grid);
      if (!rep.violations.empty()) {
        json d = json::array();
        for (const UniformViolation& v : rep.violations) {
          d.push_back({{"sample", v.sample}, {"t", v.t}, {"K", v.k}, {"bound", v.bound}});
        }
        throw CheckFailureWithDetail{"uniform bound violated", {{"violations", d}}};
      }
    }
    emit(out_path, phi_csv(phi, s, w), out);
  }
};

struct ReiterCmd {
  std::optional<std::uint64_t> seed;
  int dim = 32;
  int k_max = 32;
  int samples = 100;
  int nnz = 3;
  double theta = 0.6;
  double alpha = 0.5;
  double p = 1.0;
  double q = 2.0;
  std::string out_path;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand(
        "reiter-check", "Empirical iterated vs direct interpolation norm ratio (JSON)");
    sub->add_option("--seed", seed)->required();
    sub->add_option("--dim", dim);
    sub->add_option("--kmax", k_max);
    sub->add_option("--samples", samples);
    sub->add_option("--nnz", nnz, "Nonzeros per random vector");
    sub->add_option("--theta", theta);
    sub->add_option("--alpha", alpha);
    sub->add_option("--p", p, "Inner second index; only 1 is supported");
    sub->add_option("--q", q);
    sub->add_option("--out", out_path);
  }

  void run(std::ostream& out) const {
    require(dim >= 1 && dim <= 60, "--dim must lie in [1, 60]");
    require(k_max >= 0 && k_max <= 200, "--kmax must lie in [0, 200]");
    require(samples >= 1 && samples <= 100000, "--samples must lie in [1, 100000]");
    require(nnz >= 1 && nnz <= dim, "--nnz must lie in [1, --dim]");
    require(p == 1.0, "--p: the iterated norm is only available for an inner index of 1");
    validate(InterpParams{theta, 1.0});
    validate(InterpParams{alpha, q});
    require(std::isfinite(q), "--q must be finite");
    check_output_path(out_path);

    std::vector<double> wv(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) wv[static_cast<std::size_t>(k)] = std::ldexp(1.0, k);
    const Vector w(std::move(wv));
    const auto n = static_cast<std::size_t>(samples);
    // The first `samples` draws of the doubled run are the base run.
    const std::vector<Element> all =
        sparse_samples(w.size(), 2 * n, static_cast<std::size_t>(nnz), *seed);
    const std::vector<Element> base(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    const EquivalenceReport r1 = reiteration_equivalence(w, theta, alpha, q, k_max, base);
    const EquivalenceReport r2 = reiteration_equivalence(w, theta, alpha, q, k_max, all);

    auto section = [](const EquivalenceReport& r, std::size_t count) {
      return json{{"samples", count},     {"used", r.used},
                  {"rho_min", r.rho_min}, {"rho_max", r.rho_max},
                  {"spread", r.spread},   {"zero_denominator", r.zero_denominator}};
    };
    json j;
    j["label"] = "empirical";
    j["seed"] = *seed;
    j["dim"] = dim;
    j["k_max"] = k_max;
    j["nnz"] = nnz;
    j["theta"] = theta;
    j["alpha"] = alpha;
    j["p"] = p;
    j["q"] = q;
    j["composed_theta"] = compose_theta(alpha, theta);
    j["base"] = section(r1, n);
    j["doubled"] = section(r2, 2 * n);
    j["spread_growth"] = r2.spread / r1.spread;
    emit(out_path, j.dump(2) + "\n", out);
  }
};

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               bool allow_config) {
  CLI::App app{"K-functional toolkit", "kfn"};
  app.require_subcommand(0, 1);
  std::string config_path;
  if (allow_config) app.add_option("--config", config_path, "Experiment config JSON");

  KcurveCmd kcurve;
  CertifyCmd certify;
  InterpCmd interp;
  StrictCmd strict;
  DecomposeCmd decompose;
  PhiCmd phi;
  ReiterCmd reiter;
  kcurve.add(app);
  certify.add(app);
  interp.add(app);
  strict.add(app);
  decompose.add(app);
  phi.add(app);
  reiter.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto subs = app.get_subcommands();
  if (!config_path.empty()) {
    if (!subs.empty()) detail::fail_domain("--config cannot be combined with a subcommand");
    const ExperimentConfig cfg = parse_experiment_config(read_file(config_path));
    return run_parsed(to_args(cfg), out, err, false);
  }
  if (subs.empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return 2;
  }
  const std::string name = subs.front()->get_name();
  if (name == "kcurve") kcurve.run(out);
  else if (name == "certify") certify.run(out);
  else if (name == "interpnorm") interp.run(out);
  else if (name == "strictbound") strict.run(out);
  else if (name == "decompose") decompose.run(out);
  else if (name == "phi") phi.run(out);
  else reiter.run(out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_parsed(args, out, err, true);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailureWithDetail& e) {
    err << json{{"error", "check_failure"}, {"message", e.message}, {"detail", e.detail}}.dump(2)
        << "\n";
    return 1;
  } catch (const CheckFailure& e) {
    err << json{{"error", "check_failure"}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  }
}

}  // namespace kfn::cli
