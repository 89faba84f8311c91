#pragma once

#include "sdopart/ipm.hpp"

namespace sdopart {

struct RankPair {
  Index x = 0;  // rank X*
  Index s = 0;  // rank S*
  friend bool operator==(const RankPair&, const RankPair&) = default;
};

RankPair ranks_of(const KKTPoint& v, double rank_tol);

struct InvariancySettings {
  IPMSettings ipm;
  double rank_tol = 1e-7;
  double tau_int = 1e-6;
};

struct InvariancyResult {
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  RankPair ranks;
  Matrix q_n;        // orthonormal basis of the column space of S*(eps)
  KKTPoint solution;
  bool interval = false;
};

/// Solves at eps, then the auxiliary pair on the column space of S*(eps).
/// Solver failures are rethrown as SolverError with eps in the message.
InvariancyResult invariancy_interval(const ParametricSDO& prob, double eps,
                                     const InvariancySettings& settings = {});

}  // namespace sdopart
