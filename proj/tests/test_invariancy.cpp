#include <doctest.h>

#include "gen.hpp"
#include "sdopart/invariancy.hpp"

using namespace sdopart;
using sdopart::testing::Gen;

TEST_CASE("invariancy interval on elliptope-cut") {
  const InvariancyResult r = invariancy_interval(builtin("elliptope-cut"), 1.75);
  CHECK(r.interval);
  CHECK(r.alpha == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(r.beta == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.ranks == RankPair{2, 2});
  CHECK(r.q_n.cols() == r.ranks.s);
}

TEST_CASE("invariancy interval on circle-line") {
  const InvariancyResult r = invariancy_interval(builtin("circle-line"), 1.1);
  CHECK(r.interval);
  CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.beta == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(r.ranks == RankPair{2, 3});
}

TEST_CASE("points of a nonlinearity interval are not invariancy intervals") {
  const InvariancyResult r = invariancy_interval(builtin("elliptope"), 0.25);
  CHECK_FALSE(r.interval);
  CHECK(std::abs(r.alpha - 0.25) <= 1e-6);
  CHECK(std::abs(r.beta - 0.25) <= 1e-6);
  CHECK(r.ranks == RankPair{2, 1});
}

TEST_CASE("invariancy results are idempotent inside an interval") {
  const ParametricSDO p = builtin("elliptope-cut");
  const InvariancyResult a = invariancy_interval(p, -0.9), b = invariancy_interval(p, -0.6);
  REQUIRE(a.interval);
  REQUIRE(b.interval);
  CHECK(std::abs(a.alpha - b.alpha) <= 1e-5);
  CHECK(std::abs(a.beta - b.beta) <= 1e-5);
  CHECK(a.ranks == b.ranks);
  CHECK(a.beta == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("sandwich and clipping on random queries") {
  Gen g(41);
  for (const auto& name : builtin_names()) {
    const ParametricSDO p = builtin(name);
    for (int k = 0; k < 4; ++k) {
      const double e = g.uniform(p.lo + 0.02, p.hi - 0.02);
      const InvariancyResult r = invariancy_interval(p, e);
      CAPTURE(name);
      CAPTURE(e);
      CHECK(r.alpha <= e);
      CHECK(r.beta >= e);
      CHECK(r.alpha >= p.lo);
      CHECK(r.beta <= p.hi);
      CHECK(r.interval == (r.alpha < e - 1e-6 && r.beta > e + 1e-6));
    }
  }
}

TEST_CASE("solver failures carry eps") {
  try {
    invariancy_interval(builtin("elliptope"), 5.0);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find('5') != std::string::npos);
  }
}
