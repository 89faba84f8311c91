#include "sdopart/invariancy.hpp"

#include <algorithm>

namespace sdopart {

RankPair ranks_of(const KKTPoint& v, double rank_tol) {
  return {numerical_rank(v.X(), rank_tol), numerical_rank(v.S(), rank_tol)};
}

InvariancyResult invariancy_interval(const ParametricSDO& prob, double eps,
                                     const InvariancySettings& st) {
  InvariancyResult res;
  res.eps = eps;
  try {
    res.solution = solve_fixed(prob, eps, st.ipm);
    res.ranks = ranks_of(res.solution, st.rank_tol);
    res.q_n = col_space_basis(res.solution.S(), st.rank_tol);
    res.alpha = solve_aux(prob, res.q_n, AuxSense::Inf, st.ipm);
    res.beta = solve_aux(prob, res.q_n, AuxSense::Sup, st.ipm);
  } catch (const SolverError& e) {
    throw SolverError(std::string("invariancy query at eps = ") + std::to_string(eps) + ": " +
                      e.what());
  }
  // eps itself is feasible for the auxiliary problem; clamp solver noise.
  res.alpha = std::clamp(std::min(res.alpha, eps), prob.lo, prob.hi);
  res.beta = std::clamp(std::max(res.beta, eps), prob.lo, prob.hi);
  res.interval = res.alpha < eps - st.tau_int && res.beta > eps + st.tau_int;
  return res;
}

}  // namespace sdopart
