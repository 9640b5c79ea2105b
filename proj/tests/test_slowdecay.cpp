#include <cmath>
#include <random>

#include "doctest.h"
#include "kfn/error.hpp"
#include "kfn/slowdecay.hpp"
#include "oracles.hpp"

using namespace kfn;

namespace {

/// Ones on the first 2n coordinates.
Vector indicator(int n) { return Vector::constant(static_cast<std::size_t>(2 * n), 1.0); }

}  // namespace

TEST_CASE("shrinkage formula for the sup ball against l_p") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    for (int n = 1; n <= 16; ++n) {
      const double got = min_y_norm_on_ball(indicator(n), 0.5, SpaceSpec::lq(p), SpaceSpec::sup());
      const double want = std::pow(2.0, -1.0 + 1.0 / p) * std::pow(n, 1.0 / p);
      CHECK(std::abs(got - want) <= 1e-12 * want);
    }
  }
  CHECK(min_y_norm_on_ball(indicator(2), 1.0, SpaceSpec::lq(1.0), SpaceSpec::sup()) == 0.0);
}

TEST_CASE("ball minimum is a lower bound for every point of the ball") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const Vector x(oracle::uniform_vec(rng, 5, -1, 1));
    const double delta = std::uniform_real_distribution<double>(0.01, 0.6)(rng);
    const double m1 = min_y_norm_on_ball(x, delta, SpaceSpec::lq(1.0), SpaceSpec::sup());
    const double msup = min_y_norm_on_ball(x, delta, SpaceSpec::sup(), SpaceSpec::lq(1.0));
    for (int j = 0; j < 20; ++j) {
      // A random point of the ball: a perturbation scaled inside it.
      const auto d = oracle::uniform_vec(rng, 5, -1, 1);
      double dsup = 0.0, d1 = 0.0;
      for (double v : d) {
        dsup = std::max(dsup, std::abs(v));
        d1 += std::abs(v);
      }
      const Vector ys = x + Vector(d) * (delta / dsup);
      const Vector y1 = x + Vector(d) * (delta / d1);
      CHECK(norm(SpaceSpec::lq(1.0), ys) >= m1 - 1e-12);
      CHECK(norm(SpaceSpec::sup(), y1) >= msup - 1e-12);
    }
  }
}

TEST_CASE("water-filling level for the l_1 ball against sup") {
  // x = (3, 1): removing 1 from the top entry levels it at 2.
  CHECK(min_y_norm_on_ball(Vector{3.0, 1.0}, 1.0, SpaceSpec::sup(), SpaceSpec::lq(1.0)) ==
        doctest::Approx(2.0));
  // Removing 3 levels both at 0.5.
  CHECK(min_y_norm_on_ball(Vector{3.0, 1.0}, 3.0, SpaceSpec::sup(), SpaceSpec::lq(1.0)) ==
        doctest::Approx(0.5));
}

TEST_CASE("chord bound for the sup ball against the grid Lipschitz seminorm") {
  const GridFunction f(0.0, 1.0, Vector{0.0, 0.0, 1.0, 1.0});
  // Nodes 1 and 2 are 1/3 apart with a jump of 1: (1 - 2 delta) / (1/3).
  CHECK(min_y_norm_on_ball(f, 0.25, SpaceSpec::lip_grid(), SpaceSpec::sup()) ==
        doctest::Approx(1.5));
  CHECK_THROWS_AS(min_y_norm_on_ball(Vector{1.0}, 0.1, SpaceSpec::lq(2.0), SpaceSpec::lq(2.0)),
                  DomainError);
}

TEST_CASE("witness families") {
  SUBCASE("l_q/l_p indicators") {
    for (double p : {0.5, 1.0, 2.0}) {
      const Witness w = witness_lqlp(5, p);
      CHECK(w.delta == 0.5);
      CHECK(w.b == doctest::Approx(std::pow(2.0, -1.0 + 1.0 / p) * std::pow(5.0, 1.0 / p)));
      CHECK(w.certified_b >= w.b);
    }
    const Witness fq = witness_lqlp(3, 1.0, 2.0);
    CHECK(norm(fq.x_space, fq.element) == doctest::Approx(1.0));
    CHECK(fq.raw_delta.has_value());
    CHECK(fq.certified_b >= fq.b);
  }
  SUBCASE("ramps on a grid") {
    const GridFunction grid(0.0, 1.0, Vector::zeros(1001));
    for (int n = 1; n <= 10; ++n) {
      const Witness w = witness_c1(n, grid);
      CHECK(w.delta == 0.5);
      CHECK(w.b == n);
      CHECK(w.certified_b >= n);
      CHECK(norm(SpaceSpec::sup(), w.element) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(witness_c1(600, grid), DomainError);
  }
  SUBCASE("claims the ball does not support are refused") {
    CHECK_THROWS_AS(make_witness(1, Vector::basis(2, 0), SpaceSpec::lq(1.0), SpaceSpec::sup(), 0.5,
                                 0.75),
                    CheckFailure);
    CHECK_THROWS_AS(make_witness(1, Vector{2.0}, SpaceSpec::lq(1.0), SpaceSpec::sup(), 0.5, 0.5),
                    CheckFailure);
  }
}

TEST_CASE("certificates") {
  SUBCASE("l_inf/l_1 decays slowly and the solver agrees") {
    const SlowDecayCertificate c =
        certify_slow_decay([](int n) { return witness_lqlp(n, 1.0); }, CoupleSpec::numeric(HUGE_VAL, 1.0), 8);
    CHECK(c.c == doctest::Approx(0.5));
    CHECK(c.slow_decay);
    REQUIRE(c.entries.size() == 8);
    for (const CertificateEntry& e : c.entries) {
      CHECK(e.t == doctest::Approx(1.0 / e.n));
      REQUIRE(e.k_solver.has_value());
      CHECK(*e.k_solver + *e.k_solver_error >= e.k_lower);
    }
  }
  SUBCASE("constant b is flagged") {
    const auto fam = [](int n) {
      return make_witness(n, Vector::basis(static_cast<std::size_t>(n), 0), SpaceSpec::lq(1.0),
                          SpaceSpec::sup(), 0.5, 0.5);
    };
    const SlowDecayCertificate c = certify_slow_decay(fam, CoupleSpec::clip(), 6);
    CHECK_FALSE(c.slow_decay);
    CHECK(c.b_ratio == doctest::Approx(1.0));
    CHECK_FALSE(c.note.empty());
  }
  SUBCASE("finite q scales delta with n") {
    const SlowDecayCertificate c = certify_slow_decay(
        [](int n) { return witness_lqlp(n, 1.0, 2.0); }, CoupleSpec::numeric(2.0, 1.0), 4);
    CHECK_FALSE(c.slow_decay);
  }
  SUBCASE("spaces must match the couple") {
    CHECK_THROWS_AS(certify_slow_decay([](int n) { return witness_lqlp(n, 2.0); },
                                       CoupleSpec::numeric(HUGE_VAL, 1.0), 2),
                    DomainError);
  }
}

TEST_CASE("refuting a uniform rate") {
  const SlowDecayCertificate c = certify_slow_decay([](int n) { return witness_lqlp(n, 1.0); },
                                                    CoupleSpec::numeric(HUGE_VAL, 1.0), 8);
  std::vector<double> eps;
  for (int n = 1; n <= 8; ++n) eps.push_back(1.0 / n);
  const auto hit = refute_uniform_rate(c, eps, 1.0);
  REQUIRE(hit.has_value());
  CHECK(*hit == 3);
  CHECK_FALSE(refute_uniform_rate(c, std::vector<double>(8, 1.0), 1.0).has_value());
}

TEST_CASE("transfer inequality between weighted couples") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto w = oracle::weights(rng, 6, 0.5, 8);
    const auto factor = oracle::weights(rng, 6, 0.1, 1.0);
    auto z = w;
    for (std::size_t k = 0; k < z.size(); ++k) z[k] *= factor[k];
    const double m = 1.0;
    const Vector x(oracle::uniform_vec(rng, 6, -1, 1));
    const double t = std::exp(std::uniform_real_distribution<double>(-6, 1)(rng));
    const TransferReport r =
        transfer_lower_bound(x, t, m, CoupleSpec::weighted(Vector(w)), CoupleSpec::weighted(Vector(z)));
    CHECK(r.holds);
    CHECK(r.domination_ratio <= m + 1e-12);
  }
  CHECK_THROWS_AS(transfer_lower_bound(Vector{1.0, 1.0}, 0.5, 1.0,
                                       CoupleSpec::weighted(Vector{1.0, 1.0}),
                                       CoupleSpec::weighted(Vector{3.0, 1.0})),
                  DomainError);
}

TEST_CASE("renorming sandwich") {
  std::mt19937_64 rng(41);
  const auto w = oracle::dyadic(6, 1);
  auto w2 = w;
  for (double& v : w2) v *= 2.0;
  std::vector<Element> xs;
  for (int i = 0; i < 30; ++i) xs.emplace_back(Vector(oracle::uniform_vec(rng, 6, -1, 1)));
  const SandwichReport r =
      renorm_sandwich_check(CoupleSpec::weighted(Vector(w)), CoupleSpec::weighted(Vector(w2)),
                            {1.0, 1.0, 2.0, 2.0}, xs, log_grid(1e-3, 4.0, 25));
  CHECK(r.m >= 1.0 - 1e-12);
  CHECK(r.n <= 2.0 + 1e-12);
  CHECK(r.declared_m == 1.0);
  CHECK(r.declared_n == 2.0);
  CHECK_THROWS_AS(
      renorm_sandwich_check(CoupleSpec::weighted(Vector(w)), CoupleSpec::weighted(Vector(w2)),
                            {1.0, 1.0, 1.0, 1.5}, xs, log_grid(1e-3, 4.0, 25)),
      CheckFailure);
}
