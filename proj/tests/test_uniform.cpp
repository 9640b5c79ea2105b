#include <cmath>
#include <random>

#include "doctest.h"
#include "kfn/error.hpp"
#include "kfn/uniform.hpp"
#include "oracles.hpp"

using namespace kfn;

TEST_CASE("envelope model validation") {
  CHECK_THROWS_AS(CompactModelSpec(Vector{1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(CompactModelSpec(Vector{1.0, 0.0}), DomainError);
  const CompactModelSpec z(Vector{1.0, 0.5});
  CHECK(z.z_norm(Vector{0.5, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("phi matches direct summation") {
  const auto s = oracle::dyadic(20, -1);
  const auto w = oracle::dyadic(20, 1);
  const CompactModelSpec z{Vector(s)};
  const auto grid = log_grid(1e-7, 2.0, 50);
  const KCurve phi = phi_profile(z, CoupleSpec::weighted(Vector(w)), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(phi.k_values[i] == doctest::Approx(oracle::phi(s, w, grid[i])).epsilon(1e-13));
    if (i > 0) CHECK(phi.k_values[i] >= phi.k_values[i - 1]);
  }
}

TEST_CASE("uniform bound holds with equality at the envelope") {
  const auto s = oracle::dyadic(12, -1);
  const auto w = oracle::dyadic(12, 1);
  const CompactModelSpec z{Vector(s)};
  const CoupleSpec c = CoupleSpec::weighted(Vector(w));
  std::mt19937_64 rng(61);
  std::vector<Vector> samples{Vector(s)};
  for (int i = 0; i < 50; ++i) {
    auto v = oracle::uniform_vec(rng, 12, -1, 1);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= s[k] * 3.0;
    samples.emplace_back(std::move(v));
  }
  const UniformBoundReport r = uniform_bound_check(samples, z, c, dyadic_grid(20));
  CHECK(r.violations.empty());
  CHECK(r.max_ratio == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a couple without the model's structure is refused") {
  const CompactModelSpec z(Vector{1.0, 0.5});
  CHECK_THROWS_AS(phi_profile(z, CoupleSpec::clip(), {0.5}), DomainError);
  CHECK_THROWS_AS(phi_profile(z, CoupleSpec::weighted(Vector{1.0, 2.0, 4.0}), {0.5}), DomainError);
}
