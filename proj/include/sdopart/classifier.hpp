#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdopart/invariancy.hpp"
#include "sdopart/model.hpp"

namespace sdopart {

enum class Classification { Transition, NonTransition, Unresolved };
std::string to_string(Classification c);

struct ClassifierSettings {
  int probes = 16;
  /// Probe offset is eta_rel * (1 + ||V||).
  double eta_rel = 1e-3;
  std::uint64_t seed = 1;
  /// Relative singular-value cut for the Jacobian null space.
  double null_tol = 1e-6;
  int gn_max_iters = 100;
  /// Gauss-Newton stops at ||F|| <= gn_tol * (1 + scale).
  double gn_tol = 1e-12;
  /// Most negative eigenvalue of X or S accepted on a probe point (times scale).
  double psd_slack = 1e-9;
  double rank_tol = 1e-7;
  std::vector<double> rank_sweep{1e-5, 1e-7, 1e-9};
};

/// Dimension of the numerical null space of J(v, eps).
Index local_null_dim(const DifferentiableMap& map, const Vector& v, double eps, double tau);

struct ProbeResult {
  Index null_dim = 0;
  int attempted = 0;
  int converged = 0;
  /// Converged points farther than eta / 2 from the base point (and cone-feasible for KKT maps).
  std::vector<Vector> distinct;
  /// Rank of the distinct displacements, capped by null_dim; 0 means every probe collapsed.
  Index effective_dim = 0;
  double eta = 0.0;
};

/// Gauss-Newton projections onto F(., eps) = 0 from v + eta * u for random unit u
/// in the Jacobian null space.
ProbeResult probe_component(const DifferentiableMap& map, const Vector& v, double eps,
                            const ClassifierSettings& settings);

struct Surrogate {
  Vector v;
  RankPair ranks;
  size_t index = 0;
};

/// True when ranks_of(p, tau) == r for every tau in sweep.
bool ranks_stable_over(const KKTPoint& p, const RankPair& r, const std::vector<double>& sweep);

/// Candidate with the largest rank X + rank S. Among ties a candidate whose ranks are
/// stable over sweep wins, otherwise the earlier one.
Surrogate surrogate_max_complementary(const std::vector<Vector>& candidates, Index n, Index m,
                                      double rank_tol, const std::vector<double>& sweep = {});

struct SingularRecord {
  double eps_hat = 0.0;
  Vector v_accum;
  std::optional<RankPair> left;
  std::optional<RankPair> right;
  RankPair accum_ranks;
  RankPair point_ranks;
  bool ranks_stable = true;
  Classification classification = Classification::Unresolved;
  // evidence
  Index null_dim = 0;
  Index effective_dim = 0;
  int probes_converged = 0;
  int probes_distinct = 0;
  double order = 0.0;
  std::string note;
};

/// Fills the local-dimension and at-point rank evidence of a record at (eps_hat, v_accum).
SingularRecord analyze_singular(const KktMap& map, double eps_hat, const Vector& v_accum,
                                const ClassifierSettings& settings);

/// Transition iff the effective local dimension is 0, the side ranks differ, or the
/// at-point ranks differ from the common side ranks. Unresolved when the at-point
/// ranks were not stable across the tolerance sweep.
Classification classify(const SingularRecord& record);

}  // namespace sdopart
