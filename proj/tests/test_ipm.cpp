#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "oracles.hpp"
#include "sdopart/invariancy.hpp"
#include "sdopart/ipm.hpp"

using namespace sdopart;
using sdopart::testing::Gen;

TEST_CASE("solve_conic on a one-variable LP") {
  ConicProgram cp;
  cp.cone = {0, 1};
  cp.A = Matrix::Ones(1, 1);
  cp.b = Vector::Ones(1);
  cp.c = Vector::Ones(1);
  const IPMSolution s = solve_conic(cp);
  CHECK(s.status == IPMStatus::Optimal);
  CHECK(s.x(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.primal_obj == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve_conic on a 2x2 trace minimization") {
  ConicProgram cp;
  cp.cone = {2, 0};
  cp.A = Matrix::Zero(2, 3);
  cp.A(0, 0) = 1.0;
  cp.A(1, 2) = 1.0;
  cp.b = Vector::Ones(2);
  cp.c = svec(SymMatd::identity(2));
  const IPMSolution s = solve_conic(cp);
  CHECK(s.status == IPMStatus::Optimal);
  CHECK(s.primal_obj == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.dual_obj == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("solve_conic reports infeasibility") {
  ConicProgram cp;
  cp.cone = {0, 1};
  cp.A = Matrix::Ones(1, 1);
  cp.b = -Vector::Ones(1);
  cp.c = Vector::Ones(1);
  CHECK(solve_conic(cp).status == IPMStatus::InfeasibleOrUnbounded);
}

TEST_CASE("ConicProgram::check rejects dependent rows") {
  ConicProgram cp;
  cp.cone = {0, 2};
  cp.A = Matrix::Ones(2, 2);
  cp.b = Vector::Ones(2);
  cp.c = Vector::Ones(2);
  CHECK_THROWS_AS(cp.check(), LinearDependenceError);
}

TEST_CASE("solve_fixed on the elliptope matches the closed form") {
  const ParametricSDO p = builtin("elliptope");
  IPMSolution info;
  const KKTPoint v = solve_fixed(p, 0.25, {}, &info);
  CHECK(info.status == IPMStatus::Optimal);
  const KKTPoint ex = testing::elliptope_exact(0.25);
  CHECK((v.X().matrix() - ex.X().matrix()).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(ranks_of(v, 1e-7) == RankPair{2, 1});

  const KKTPoint w = solve_fixed(p, 1.5);
  const KKTPoint at = testing::elliptope_at_three_halves();
  CHECK((w.X().matrix() - at.X().matrix()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(ranks_of(w, 1e-7) == RankPair{1, 1});
}

TEST_CASE("solve_fixed on ellipse-circle at 1/2") {
  CHECK(ranks_of(solve_fixed(builtin("ellipse-circle"), 0.5), 1e-7) == RankPair{5, 1});
}

TEST_CASE("solve_fixed rejects eps outside the domain") {
  CHECK_THROWS_AS(solve_fixed(builtin("elliptope"), 2.5), DomainError);
}

TEST_CASE("solve_fixed property suite on the builtins") {
  Gen g(31);
  for (const auto& name : builtin_names()) {
    const ParametricSDO p = builtin(name);
    const KktMap map(p);
    const double scale = p.data_scale();
    for (int k = 0; k < 5; ++k) {
      const double e = g.uniform(p.lo + 0.01, p.hi - 0.01);
      IPMSolution info;
      const KKTPoint v = solve_fixed(p, e, {}, &info);
      CAPTURE(name);
      CAPTURE(e);
      CHECK(info.iterations <= 50);
      CHECK(kkt_residual(p, v, e).head(p.m).norm() <= 1e-9 * scale);
      CHECK(kkt_residual(p, v, e).segment(p.m, tri(p.n)).norm() <= 1e-9 * scale);
      CHECK(std::abs(objective_value(p, v, e) - dual_value(p, v)) <= 1e-9 * scale);
      CHECK(std::abs((v.X().matrix() * v.S().matrix()).trace()) <= 1e-8 * scale);
      CHECK(min_eig_upper(v.X().matrix()) >= -1e-9);
      CHECK(min_eig_upper(v.S().matrix()) >= -1e-9);
      if (min_singular_value(map.jacobian(v.stacked(), e)) > 1e-5) {
        const RankPair r = ranks_of(v, 1e-7);
        CHECK(r.x + r.s == p.n);
      }
    }
  }
}

TEST_CASE("solve_aux on known intervals") {
  {
    const ParametricSDO p = builtin("elliptope-cut");
    const KKTPoint v = solve_fixed(p, 1.75);
    const Matrix q = col_space_basis(v.S(), 1e-7);
    CHECK(solve_aux(p, q, AuxSense::Inf) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(solve_aux(p, q, AuxSense::Sup) == doctest::Approx(2.0).epsilon(1e-6));
  }
  {
    const ParametricSDO p = builtin("circle-line");
    const KKTPoint v = solve_fixed(p, -0.1);
    const Matrix q = col_space_basis(v.S(), 1e-7);
    CHECK(std::abs(solve_aux(p, q, AuxSense::Inf) + 0.25) < 1e-6);
    CHECK(std::abs(solve_aux(p, q, AuxSense::Sup)) < 1e-6);
  }
  {
    const ParametricSDO p = builtin("elliptope");
    const KKTPoint v = solve_fixed(p, 0.25);
    const Matrix q = col_space_basis(v.S(), 1e-7);
    CHECK(std::abs(solve_aux(p, q, AuxSense::Inf) - 0.25) < 1e-6);
    CHECK(std::abs(solve_aux(p, q, AuxSense::Sup) - 0.25) < 1e-6);
  }
}

TEST_CASE("solve_aux brackets the query point") {
  Gen g(32);
  for (const auto& name : builtin_names()) {
    const ParametricSDO p = builtin(name);
    for (int k = 0; k < 3; ++k) {
      const double e = g.uniform(p.lo + 0.05, p.hi - 0.05);
      const Matrix q = col_space_basis(solve_fixed(p, e).S(), 1e-7);
      const double lo = solve_aux(p, q, AuxSense::Inf), hi = solve_aux(p, q, AuxSense::Sup);
      CAPTURE(name);
      CAPTURE(e);
      CHECK(lo <= e + 1e-7);
      CHECK(hi >= e - 1e-7);
      CHECK(lo >= p.lo);
      CHECK(hi <= p.hi);
    }
  }
}
