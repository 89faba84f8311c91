#include "sdopart/classifier.hpp"

#include <cmath>
#include <random>

namespace sdopart {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Transition: return "transition";
    case Classification::NonTransition: return "non-transition";
    case Classification::Unresolved: return "unresolved";
  }
  return "unknown";
}

Index local_null_dim(const DifferentiableMap& map, const Vector& v, double eps, double tau) {
  return null_space_basis(map.jacobian(v, eps), tau).cols();
}

namespace {

// Gauss-Newton with a truncated pseudo-inverse; nullopt if it does not reach tol.
std::optional<Vector> gauss_newton(const DifferentiableMap& map, Vector v, double eps, double tol,
                                   double cut, int max_iters) {
  Vector r = map.residual(v, eps);
  for (int k = 0; k < max_iters; ++k) {
    if (r.norm() <= tol) return v;
    Eigen::JacobiSVD<Matrix> svd(map.jacobian(v, eps), Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(cut);
    const Vector dv = svd.solve(-r);
    if (!dv.allFinite()) return std::nullopt;
    v += dv;
    r = map.residual(v, eps);
    if (!r.allFinite()) return std::nullopt;
  }
  if (r.norm() <= tol) return v;
  return std::nullopt;
}

}  // namespace

ProbeResult probe_component(const DifferentiableMap& map, const Vector& v, double eps,
                            const ClassifierSettings& st) {
  ProbeResult out;
  const Matrix basis = null_space_basis(map.jacobian(v, eps), st.null_tol);
  out.null_dim = basis.cols();
  out.eta = st.eta_rel * (1.0 + v.norm());
  if (out.null_dim == 0) return out;

  const double tol = st.gn_tol * (1.0 + map.scale());
  const double floor = -st.psd_slack * map.scale();
  std::mt19937_64 rng(st.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < st.probes; ++k) {
    Vector c(out.null_dim);
    for (Index i = 0; i < c.size(); ++i) c(i) = gauss(rng);
    const Vector u = basis * c.normalized();
    ++out.attempted;
    const auto p = gauss_newton(map, v + out.eta * u, eps, tol, st.null_tol, st.gn_max_iters);
    if (!p) continue;
    ++out.converged;
    if ((*p - v).norm() <= 0.5 * out.eta) continue;
    const auto info = map.info(*p, eps);
    if (info.min_eig_x < floor || info.min_eig_s < floor) continue;
    out.distinct.push_back(*p);
  }
  if (!out.distinct.empty()) {
    Matrix disp(v.size(), static_cast<Index>(out.distinct.size()));
    for (size_t j = 0; j < out.distinct.size(); ++j)
      disp.col(static_cast<Index>(j)) = out.distinct[j] - v;
    Eigen::JacobiSVD<Matrix> svd(disp);
    const auto& s = svd.singularValues();
    Index r = 0;
    while (r < s.size() && s(r) > 0.1 * s(0)) ++r;
    out.effective_dim = std::min(r, out.null_dim);
  }
  return out;
}

bool ranks_stable_over(const KKTPoint& p, const RankPair& r, const std::vector<double>& sweep) {
  for (double tau : sweep)
    if (!(ranks_of(p, tau) == r)) return false;
  return true;
}

Surrogate surrogate_max_complementary(const std::vector<Vector>& candidates, Index n, Index m,
                                      double rank_tol, const std::vector<double>& sweep) {
  if (candidates.empty()) throw DomainError("surrogate: empty candidate list");
  Surrogate best;
  Index best_sum = -1;
  bool best_stable = false;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const KKTPoint p = KKTPoint::unstack(candidates[i], n, m);
    const RankPair r = ranks_of(p, rank_tol);
    const bool stable = ranks_stable_over(p, r, sweep);
    if (r.x + r.s > best_sum || (r.x + r.s == best_sum && stable && !best_stable)) {
      best_sum = r.x + r.s;
      best_stable = stable;
      best = {candidates[i], r, i};
    }
  }
  return best;
}

SingularRecord analyze_singular(const KktMap& map, double eps_hat, const Vector& v_accum,
                                const ClassifierSettings& st) {
  const Index n = map.problem().n, m = map.problem().m;
  SingularRecord rec;
  rec.eps_hat = eps_hat;
  rec.v_accum = v_accum;
  rec.accum_ranks = ranks_of(KKTPoint::unstack(v_accum, n, m), st.rank_tol);

  const ProbeResult pr = probe_component(map, v_accum, eps_hat, st);
  rec.null_dim = pr.null_dim;
  rec.effective_dim = pr.effective_dim;
  rec.probes_converged = pr.converged;
  rec.probes_distinct = static_cast<int>(pr.distinct.size());

  std::vector<Vector> candidates{v_accum};
  candidates.insert(candidates.end(), pr.distinct.begin(), pr.distinct.end());
  const Surrogate sur = surrogate_max_complementary(candidates, n, m, st.rank_tol, st.rank_sweep);
  rec.point_ranks = sur.ranks;
  rec.ranks_stable = ranks_stable_over(KKTPoint::unstack(sur.v, n, m), sur.ranks, st.rank_sweep);
  return rec;
}

Classification classify(const SingularRecord& r) {
  if (r.left && r.right && !(*r.left == *r.right)) return Classification::Transition;
  if (r.effective_dim == 0) return Classification::Transition;
  if (!r.ranks_stable) return Classification::Unresolved;
  const std::optional<RankPair> side = r.left ? r.left : r.right;
  if (!side) return Classification::Unresolved;
  return *side == r.point_ranks ? Classification::NonTransition : Classification::Transition;
}

}  // namespace sdopart
