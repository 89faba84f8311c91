#pragma once

#include <string>

#include "sdopart/model.hpp"

namespace sdopart {

/// One PSD block of order psd_dim times a nonnegative orthant of length nonneg_dim.
struct ConeSpec {
  Index psd_dim = 0;
  Index nonneg_dim = 0;

  Index psd_len() const { return tri(psd_dim); }
  Index cone_len() const { return tri(psd_dim) + nonneg_dim; }
  /// Barrier degree.
  Index degree() const { return psd_dim + nonneg_dim; }
};

/// min c^T x  s.t.  A x = b, with x = (svec psd block; nonneg block; free).
/// Dual: max b^T y  s.t.  A^T y + z = c, z in the cone (z = 0 on free columns).
struct ConicProgram {
  ConeSpec cone;
  Index num_free = 0;
  Matrix A;
  Vector b;
  Vector c;

  Index num_vars() const { return cone.cone_len() + num_free; }
  void check() const;
};

struct IPMSettings {
  double tol_gap = 1e-10;
  double tol_feas = 1e-10;
  int max_iters = 100;
  /// Starting point is init_scale times the cone identity.
  double init_scale = 1.0;
};

enum class IPMStatus { Optimal, MaxIters, NumericalFailure, InfeasibleOrUnbounded };

std::string to_string(IPMStatus s);

struct IPMSolution {
  Vector x;  // primal variables (cone then free)
  Vector y;  // equality multipliers
  Vector z;  // dual slack on the cone part
  IPMStatus status = IPMStatus::NumericalFailure;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  int iterations = 0;
};

IPMSolution solve_conic(const ConicProgram& cp, const IPMSettings& settings = {});

/// Solves the primal-dual pair at fixed eps. Throws SolverError on a non-optimal status
/// and DomainError when eps is outside the domain.
KKTPoint solve_fixed(const ParametricSDO& prob, double eps, const IPMSettings& settings = {},
                     IPMSolution* info = nullptr);

/// Newton refinement of a near-optimal point on F(., eps) = 0. Steps are kept only
/// while they reduce the residual and keep X and S psd up to roundoff.
KKTPoint polish(const ParametricSDO& prob, const KKTPoint& v, double eps, int max_iters = 8);

enum class AuxSense { Inf, Sup };

/// Optimal eps of the auxiliary problem
///   inf/sup eps  s.t.  sum y_i A_i + Q_N U Q_N^T = C + eps Cbar, U psd, lo <= eps <= hi.
double solve_aux(const ParametricSDO& prob, const Matrix& q_n, AuxSense sense,
                 const IPMSettings& settings = {});

}  // namespace sdopart
