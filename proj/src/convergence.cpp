#include "sdopart/convergence.hpp"

#include <cmath>
#include <ctime>
#include <limits>

#include "sdopart/ipm.hpp"
namespace sdopart {

std::optional<Oracle> x12_oracle(const std::string& problem) {
  if (problem == "elliptope") return Oracle([](double e) { return 0.5 - e; });
  if (problem == "circle-line")
    return Oracle([](double e) { return e / std::sqrt(e * e + (1.0 - e) * (1.0 - e)); });
  return std::nullopt;
}

double x12_of(const Vector& v, Index n, Index m) {
  return KKTPoint::unstack(v, n, m).X().matrix()(0, 1);
}

std::vector<ConvergenceRow> convergence_study(const ParametricSDO& prob, const Oracle& oracle,
                                              const ConvergenceSettings& st, const IPMSettings& ipm) {
  if (st.levels < 0) throw DomainError("convergence: levels must be nonnegative");
  if (!(st.delta_base > 0.0)) throw DomainError("convergence: delta_base must be positive");
  if (st.target == st.eps_init) throw DomainError("convergence: target equals eps_init");
  const KktMap map(prob);
  const Vector v0 = solve_fixed(prob, st.eps_init, ipm).stacked();
  const double dir = st.target > st.eps_init ? 1.0 : -1.0;

  std::vector<ConvergenceRow> rows;
  for (int j = 0; j <= st.levels; ++j) {
    ConvergenceRow row;
    row.j = j;
    row.delta = st.delta_base * std::ldexp(1.0, -j);
    TrackSettings ts = st.track;
    ts.delta_eps = dir * row.delta;
    ts.correct = false;
    ts.sharpen = false;
    ts.psd_slack = st.psd_slack;

    const std::clock_t c0 = std::clock();
    const TrackResult r = track(map, v0, st.eps_init, st.target, ts);
    row.cpu_seconds = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;

    double sum = 0.0;
    for (size_t k = 1; k < r.samples.size(); ++k)
      sum += std::abs(x12_of(r.samples[k].v, prob.n, prob.m) - oracle(r.samples[k].eps));
    row.err = row.delta * sum;
    row.samples = r.samples.size();
    if (r.status == TrackStatus::ReachedBound)
      row.approx_singular = r.samples.back().eps;
    else
      row.approx_singular = r.fired == Criterion::JacobianSingular ? r.bracket_bad : r.bracket_good;
    row.rho = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : std::log2(rows.back().err / row.err);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sdopart
