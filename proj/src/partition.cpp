#include "sdopart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sdopart {

std::string to_string(SegmentKind k) {
  return k == SegmentKind::Invariancy ? "invariancy" : "nonlinearity";
}

void PartitionSettings::check() const {
  track.check();
  if (!(merge_tol > 0.0)) throw DomainError("partition: merge_tol must be positive");
  if (!(invariancy.rank_tol > 0.0) || !(invariancy.tau_int > 0.0))
    throw DomainError("partition: rank_tol and tau_int must be positive");
  if (classifier.probes < 1) throw DomainError("partition: at least one probe is required");
}

std::vector<Segment> PartitionReport::of_kind(SegmentKind k) const {
  std::vector<Segment> out;
  for (const auto& s : segments)
    if (s.kind == k) out.push_back(s);
  return out;
}

int PartitionReport::unresolved() const {
  int n = 0;
  for (const auto& r : singular_records)
    if (r.classification == Classification::Unresolved) ++n;
  return n;
}

std::vector<Segment> assemble_nonlinearity(double lo, double hi, const std::vector<Segment>& inv,
                                           const std::vector<double>& transitions, double tol) {
  std::vector<Segment> sorted = inv;
  std::sort(sorted.begin(), sorted.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi - tol)
      throw Error("assemble_nonlinearity: invariancy segments overlap");
  for (double t : transitions)
    for (const auto& s : sorted)
      if (t > s.lo + tol && t < s.hi - tol)
        throw Error("assemble_nonlinearity: transition point inside an invariancy segment");

  std::vector<double> cuts{lo, hi};
  for (const auto& s : sorted) {
    cuts.push_back(s.lo);
    cuts.push_back(s.hi);
  }
  for (double t : transitions) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Segment> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], lo), b = std::min(cuts[i + 1], hi);
    if (b - a <= tol) continue;
    const double mid = 0.5 * (a + b);
    const bool covered = std::any_of(sorted.begin(), sorted.end(), [&](const Segment& s) {
      return mid > s.lo && mid < s.hi;
    });
    if (covered) continue;
    Segment seg;
    seg.lo = a;
    seg.hi = b;
    seg.kind = SegmentKind::Nonlinearity;
    out.push_back(seg);
  }
  return out;
}

double concavity_violation(const std::vector<Sample>& samples) {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto &a = samples[i - 1], &b = samples[i], &c = samples[i + 1];
    const double w = c.eps - a.eps;
    if (!(w > 0.0)) continue;
    const double chord = ((c.eps - b.eps) * a.objective + (b.eps - a.eps) * c.objective) / w;
    worst = std::max(worst, 2.0 * (chord - b.objective));
  }
  return samples.size() < 3 ? 0.0 : worst;
}

namespace {

struct Pending {
  double eps_hat;
  Vector v_accum;
  double order;
  bool failed;
};

struct Sweep {
  std::vector<Segment> inv;
  std::vector<double> boundaries;
  std::vector<Pending> singular;
  std::vector<Sample> samples;
};

bool inside(double e, double lo, double hi, double tol) { return e > lo + tol && e < hi - tol; }

void run_sweep(const ParametricSDO& prob, const KktMap& map, double eps_init, int dir,
               const PartitionSettings& st, Sweep& out, PartitionDiagnostics& diag) {
  const double h = dir * std::abs(st.track.delta_eps);
  const double bound = dir > 0 ? prob.hi : prob.lo;
  const auto before_bound = [&](double e) { return dir > 0 ? e < prob.hi : e > prob.lo; };

  double eps = eps_init;
  bool first = true;
  while (before_bound(eps)) {
    const InvariancyResult inv = invariancy_interval(prob, eps, st.invariancy);
    ++diag.invariancy_queries;
    if (inv.interval) {
      const double a_end = inv.alpha - prob.lo <= st.merge_tol ? prob.lo : inv.alpha;
      const double b_end = prob.hi - inv.beta <= st.merge_tol ? prob.hi : inv.beta;
      out.inv.push_back({a_end, b_end, SegmentKind::Invariancy, inv.ranks, true});
      const double b = dir > 0 ? b_end : a_end;
      if (inside(b, prob.lo, prob.hi, st.merge_tol)) out.boundaries.push_back(b);
      eps = b + h;
      first = false;
      continue;
    }

    TrackSettings ts = st.track;
    ts.delta_eps = h;
    const Vector v0 = inv.solution.stacked();
    TrackResult r = track(map, v0, eps, bound, ts);
    ++diag.tracks;
    if (r.status == TrackStatus::Singular && r.samples.size() == 1) {
      if (first)
        throw SingularStartError("partition: the Jacobian at epsilon_init = " + std::to_string(eps) +
                                 " is singular; perturb epsilon_init");
      ++diag.skips;
      eps += h;
      continue;
    }
    first = false;
    if (r.status == TrackStatus::CorrectorFailure) {
      ++diag.retries;
      ts.delta_eps = h / 5.0;
      r = track(map, v0, eps, bound, ts);
      ++diag.tracks;
    }
    out.samples.insert(out.samples.end(), r.samples.begin(), r.samples.end());
    if (r.status == TrackStatus::ReachedBound) break;
    if (r.status == TrackStatus::CorrectorFailure) {
      ++diag.corrector_failures;
      out.singular.push_back({r.bracket_good, r.v_accum, 0.0, true});
      eps = r.bracket_bad + h;
      continue;
    }
    out.singular.push_back({r.eps_hat, r.v_accum, r.order, false});
    eps = r.eps_hat + h;
  }
}

RankPair sample_ranks(const Sample& s, Index n, Index m, double tol) {
  return ranks_of(KKTPoint::unstack(s.v, n, m), tol);
}

// Most frequent rank pair of the samples strictly inside (a, b); ties go to the earliest.
std::optional<RankPair> vote(const std::vector<Sample>& samples, double a, double b, Index n,
                             Index m, double tol, bool* uniform = nullptr) {
  std::map<std::pair<Index, Index>, int> count;
  std::vector<std::pair<Index, Index>> order;
  for (const auto& s : samples) {
    if (!(s.eps > a && s.eps < b)) continue;
    const RankPair r = sample_ranks(s, n, m, tol);
    const auto key = std::make_pair(r.x, r.s);
    if (count[key]++ == 0) order.push_back(key);
  }
  if (uniform) *uniform = order.size() <= 1;
  if (order.empty()) return std::nullopt;
  auto best = order.front();
  for (const auto& k : order)
    if (count[k] > count[best]) best = k;
  return RankPair{best.first, best.second};
}

}  // namespace

PartitionReport partition(const ParametricSDO& prob, double eps_init, const PartitionSettings& st) {
  st.check();
  validate(prob);
  if (!(eps_init > prob.lo && eps_init < prob.hi))
    throw DomainError("partition: epsilon_init must lie inside the domain");
  const KktMap map(prob);
  const Index n = prob.n, m = prob.m;
  const double tol = st.merge_tol;

  PartitionReport rep;
  rep.problem = prob.name;
  rep.lo = prob.lo;
  rep.hi = prob.hi;
  rep.eps_init = eps_init;
  rep.settings = st;

  Sweep fwd, bwd;
  run_sweep(prob, map, eps_init, +1, st, fwd, rep.diagnostics);
  run_sweep(prob, map, eps_init, -1, st, bwd, rep.diagnostics);

  // Invariancy segments, deduplicated.
  std::vector<Segment> inv;
  for (const Sweep* sw : {&fwd, &bwd})
    for (const auto& s : sw->inv) {
      const bool dup = std::any_of(inv.begin(), inv.end(), [&](const Segment& t) {
        return std::abs(t.lo - s.lo) <= tol && std::abs(t.hi - s.hi) <= tol;
      });
      if (!dup) inv.push_back(s);
    }
  std::sort(inv.begin(), inv.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });

  // Samples, sorted with duplicates of the shared start removed.
  for (const Sweep* sw : {&fwd, &bwd})
    rep.samples.insert(rep.samples.end(), sw->samples.begin(), sw->samples.end());
  std::stable_sort(rep.samples.begin(), rep.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.eps < b.eps; });
  rep.samples.erase(std::unique(rep.samples.begin(), rep.samples.end(),
                                [](const Sample& a, const Sample& b) { return a.eps == b.eps; }),
                    rep.samples.end());

  std::vector<Pending> pend;
  for (const Sweep* sw : {&fwd, &bwd})
    for (const auto& p : sw->singular) {
      const bool dup = std::any_of(pend.begin(), pend.end(), [&](const Pending& q) {
        return std::abs(q.eps_hat - p.eps_hat) <= tol;
      });
      if (!dup) pend.push_back(p);
    }
  std::sort(pend.begin(), pend.end(), [](const Pending& a, const Pending& b) { return a.eps_hat < b.eps_hat; });

  // Breakpoints used to delimit the side intervals of each singular point.
  std::vector<double> breaks{prob.lo, prob.hi};
  for (const auto& s : inv) {
    breaks.push_back(s.lo);
    breaks.push_back(s.hi);
  }
  for (const auto& p : pend) breaks.push_back(p.eps_hat);
  std::sort(breaks.begin(), breaks.end());

  const double rank_tol = st.invariancy.rank_tol;
  const auto side_ranks = [&](double a, double b) -> std::optional<RankPair> {
    if (b - a <= tol) return std::nullopt;
    for (const auto& s : inv)
      if (s.lo <= a + tol && s.hi >= b - tol) return s.ranks;
    if (auto r = vote(rep.samples, a, b, n, m, rank_tol)) return r;
    return ranks_of(solve_fixed(prob, 0.5 * (a + b), st.invariancy.ipm), rank_tol);
  };

  for (const auto& p : pend) {
    SingularRecord rec;
    if (p.failed) {
      rec.eps_hat = p.eps_hat;
      rec.v_accum = p.v_accum;
      rec.accum_ranks = rec.point_ranks = ranks_of(KKTPoint::unstack(p.v_accum, n, m), rank_tol);
      rec.classification = Classification::Unresolved;
      rec.note = "corrector failure after retry";
      rep.singular_records.push_back(std::move(rec));
      continue;
    }
    rec = analyze_singular(map, p.eps_hat, p.v_accum, st.classifier);
    rec.order = p.order;
    double left = prob.lo, right = prob.hi;
    for (double b : breaks) {
      if (b < p.eps_hat - tol) left = std::max(left, b);
      if (b > p.eps_hat + tol) right = std::min(right, b);
    }
    rec.left = side_ranks(left, p.eps_hat);
    rec.right = side_ranks(p.eps_hat, right);
    rec.classification = classify(rec);
    if (rec.classification == Classification::Unresolved) rec.note = "ranks unstable across the tolerance sweep";
    rep.singular_records.push_back(std::move(rec));
  }

  // Transition points: invariancy boundaries first, then classified singular points.
  std::vector<double> trans;
  const auto add_point = [&](double t) {
    if (!inside(t, prob.lo, prob.hi, tol)) return;
    for (double u : trans)
      if (std::abs(u - t) <= tol) return;
    trans.push_back(t);
  };
  for (const Sweep* sw : {&fwd, &bwd})
    for (double b : sw->boundaries) add_point(b);
  for (const auto& r : rep.singular_records)
    if (r.classification == Classification::Transition) add_point(r.eps_hat);
  std::sort(trans.begin(), trans.end());
  rep.transition_points = trans;

  std::vector<Segment> non = assemble_nonlinearity(prob.lo, prob.hi, inv, trans, tol);
  for (auto& s : non) {
    bool uniform = true;
    if (auto r = vote(rep.samples, s.lo, s.hi, n, m, rank_tol, &uniform)) {
      s.ranks = *r;
      s.ranks_uniform = uniform;
    } else {
      s.ranks = ranks_of(solve_fixed(prob, 0.5 * (s.lo + s.hi), st.invariancy.ipm), rank_tol);
    }
  }
  rep.segments = inv;
  rep.segments.insert(rep.segments.end(), non.begin(), non.end());
  std::sort(rep.segments.begin(), rep.segments.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });

  rep.concavity_max = concavity_violation(rep.samples);
  rep.concave = rep.concavity_max <= 1e-6 * prob.data_scale();
  rep.complete = rep.diagnostics.corrector_failures == 0 && rep.unresolved() == 0;
  return rep;
}

}  // namespace sdopart
