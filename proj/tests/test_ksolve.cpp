#include <cmath>
#include <random>

#include "doctest.h"
#include "kfn/error.hpp"
#include "kfn/ksolve.hpp"
#include "oracles.hpp"

using namespace kfn;

namespace {

double objective_of(const CoupleSpec& c, const Element& x, const KResult& r, double t) {
  REQUIRE(r.minimizer.has_value());
  return k_objective(c, x, *r.minimizer, t);
}

}  // namespace

TEST_CASE("closed-form examples") {
  CHECK(k_weighted(Vector{1.0, 1.0}, 0.5, Vector{1.0, 4.0}).value == doctest::Approx(1.5));
  CHECK(k_clip(Vector{1.0, 1.0}, 1.0).value == doctest::Approx(1.0));
  CHECK(k_clip(Vector{1.0, 1.0}, 0.5).value == doctest::Approx(0.5));
  CHECK(k_clip(Vector{3.0, 1.0}, 0.25).value == doctest::Approx(0.75));
  const GridFunction ramp(0.0, 1.0, Vector{0.0, 1.0});
  CHECK(k_lip(ramp, 0.1).value == doctest::Approx(0.1));
  CHECK(k_lip(ramp, 1.0).value == doctest::Approx(0.5));
}

TEST_CASE("clip ties resolve to the smallest level") {
  // For a = (2, 1) and t = 1 every level M in [1, 2] is optimal.
  const KResult r = k_clip(Vector{2.0, 1.0}, 1.0);
  REQUIRE(r.minimizer);
  const Vector& y = std::get<Vector>(*r.minimizer);
  CHECK(y == Vector{1.0, 1.0});
  CHECK(r.error_bound == 0.0);
}

TEST_CASE("structured solvers match independent oracles") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logt(-8.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 7);
    const double t = std::exp(logt(rng));
    const auto a = oracle::uniform_vec(rng, n, -2, 2);
    const auto w = oracle::weights(rng, n, 0.1, 10);

    const KResult kw = k_weighted(Vector(a), t, Vector(w));
    CHECK(kw.value == doctest::Approx(oracle::weighted(a, t, w)).epsilon(1e-12));
    CHECK(objective_of(CoupleSpec::weighted(Vector(w)), Vector(a), kw, t) ==
          doctest::Approx(kw.value).epsilon(1e-12));

    const KResult kc = k_clip(Vector(a), t);
    CHECK(kc.value == doctest::Approx(oracle::clip(a, t)).epsilon(1e-9));
    CHECK(objective_of(CoupleSpec::clip(), Vector(a), kc, t) ==
          doctest::Approx(kc.value).epsilon(1e-12));

    const std::size_t nodes = n + 1;
    const GridFunction f(0.0, 1.0, Vector(oracle::uniform_vec(rng, nodes, -1, 1)));
    const KResult kl = k_lip(f, t);
    CHECK(kl.value == doctest::Approx(oracle::lip(f.values().data(), f.spacing(), t)).epsilon(1e-9));
    CHECK(objective_of(CoupleSpec::lip(), f, kl, t) == doctest::Approx(kl.value).epsilon(1e-12));
  }
}

TEST_CASE("numeric solver certifies its gap") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logt(-6.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 12);
    const auto x = oracle::uniform_vec(rng, n, -3, 3);
    const double t = std::exp(logt(rng));
    const KResult r = k_numeric(Vector(x), t, 2.0, 1.0, 1e-10);
    CHECK(std::abs(r.value - oracle::l2_l1(x, t)) <= r.error_bound + 1e-10);
    CHECK(r.error_bound <= 1e-9 * (1.0 + r.value));
    CHECK(objective_of(CoupleSpec::numeric(2.0, 1.0), Vector(x), r, t) <=
          r.value + r.error_bound + 1e-12);
  }
}

TEST_CASE("numeric solver agrees with brute force across exponents") {
  std::mt19937_64 rng(8);
  for (double q : {1.0, 1.5, 2.0, 3.0, HUGE_VAL}) {
    for (double p : {1.0, 2.0, 4.0}) {
      const CoupleSpec c = CoupleSpec::numeric(q, p);
      for (int i = 0; i < 6; ++i) {
        const Vector x(oracle::uniform_vec(rng, 2, -1, 1));
        const double t = std::exp(std::uniform_real_distribution<double>(-3.0, 1.0)(rng));
        const KResult num = solve(c, x, t);
        const KResult bf = k_bruteforce(x, t, c, 1e-3);
        CAPTURE(q);
        CAPTURE(p);
        CHECK(std::abs(num.value - bf.value) <= num.error_bound + bf.error_bound);
      }
    }
  }
}

TEST_CASE("K is bounded by ||x||_X and t ||x||_Y, monotone and concave in t") {
  std::mt19937_64 rng(9);
  const auto w = oracle::weights(rng, 6, 0.5, 4);
  const std::vector<CoupleSpec> couples{CoupleSpec::weighted(Vector(w)), CoupleSpec::clip(),
                                        CoupleSpec::numeric(2.0, 1.0),
                                        CoupleSpec::numeric(HUGE_VAL, 2.0)};
  const auto grid = log_grid(1e-4, 10.0, 40);
  for (const CoupleSpec& c : couples) {
    for (int i = 0; i < 10; ++i) {
      const Vector x(oracle::uniform_vec(rng, 6, -1, 1));
      const KCurve curve = k_curve(x, c, grid);
      for (std::size_t j = 0; j < curve.size(); ++j) {
        const double slack = curve.error_bounds[j] + 1e-12;
        CHECK(curve.k_values[j] <= norm(c.x_space(), x) + slack);
        CHECK(curve.k_values[j] <= grid[j] * norm(c.y_space(), x) + slack);
        if (j >= 2) {
          const double t1 = grid[j - 2], t2 = grid[j - 1], t3 = grid[j];
          const double lin = curve.k_values[j - 2] +
                             (curve.k_values[j] - curve.k_values[j - 2]) * (t2 - t1) / (t3 - t1);
          const double tol = curve.error_bounds[j] + curve.error_bounds[j - 1] +
                             curve.error_bounds[j - 2] + 1e-12;
          CHECK(curve.k_values[j - 1] >= lin - tol);
        }
      }
    }
  }
}

TEST_CASE("K scales linearly in x") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const Vector x(oracle::uniform_vec(rng, 4, -1, 1));
    const double s = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    CHECK(k_clip(s * x, 0.3).value == doctest::Approx(s * k_clip(x, 0.3).value).epsilon(1e-12));
  }
}

TEST_CASE("brute force refuses large problems and mismatched elements") {
  CHECK_THROWS_AS(k_bruteforce(Vector::constant(5, 1.0), 1.0, CoupleSpec::clip(), 1e-3),
                  DomainError);
  CHECK_THROWS_AS(k_bruteforce(Vector{1.0, 1.0}, 1.0, CoupleSpec::lip(), 1e-3), DomainError);
  CHECK_THROWS_AS(k_clip(Vector{1.0}, 0.0), DomainError);
}

TEST_CASE("k_sup over normalized basis vectors in the dyadic weighted model") {
  for (int d = 1; d <= 12; ++d) {
    const CoupleSpec c = CoupleSpec::weighted(Vector(oracle::dyadic(d, 1)));
    std::vector<Element> basis;
    for (int k = 0; k < d; ++k) {
      basis.emplace_back(Vector::basis(static_cast<std::size_t>(d), static_cast<std::size_t>(k), 3.0));
    }
    for (int m = 0; m <= 16; ++m) {
      const double t = std::ldexp(1.0, -m);
      CHECK(k_sup(basis, t, c, true) == doctest::Approx(std::min(1.0, t * std::ldexp(1.0, d - 1))));
    }
  }
  CHECK_THROWS_AS(k_sup({}, 1.0, CoupleSpec::clip()), DomainError);
}

TEST_CASE("dispatch refuses elements the solver cannot take") {
  CHECK_FALSE(solver_applicable(CoupleSpec::lip(), Vector{1.0, 2.0}));
  CHECK_FALSE(solver_applicable(CoupleSpec::weighted(Vector{1.0, 2.0}), Vector{1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(solve(CoupleSpec::lip(), Vector{1.0, 2.0}, 1.0), DomainError);
}
