#include "sdopart/tracker.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sdopart {

void TrackSettings::check() const {
  if (!(delta_eps != 0.0) || !std::isfinite(delta_eps))
    throw DomainError("track: delta_eps must be finite and nonzero");
  if (!(sing_threshold > 0.0) || !(newton_tol > 0.0) || newton_max_iters < 1 ||
      !(sharpen_tol > 0.0))
    throw DomainError("track: thresholds and iteration limits must be positive");
  if (!(psd_slack <= 0.0)) throw DomainError("track: psd_slack must be nonpositive");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::None: return "none";
    case Criterion::JacobianSingular: return "jacobian-singular";
    case Criterion::ConeViolation: return "cone-violation";
    case Criterion::CorrectorFailure: return "corrector-failure";
  }
  return "unknown";
}

std::string to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::ReachedBound: return "reached-bound";
    case TrackStatus::Singular: return "singular";
    case TrackStatus::CorrectorFailure: return "corrector-failure";
  }
  return "unknown";
}

std::optional<Vector> davidenko_rhs(const DifferentiableMap& map, const Vector& v, double eps,
                                    double sing_threshold) {
  const Matrix J = map.jacobian(v, eps);
  Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin >= sing_threshold) || !(smin > 1e-14 * s(0))) return std::nullopt;
  Vector d = svd.solve(-map.deps(v, eps));
  if (!d.allFinite()) return std::nullopt;
  return d;
}

std::optional<Vector> newton_correct(const DifferentiableMap& map, const Vector& v0, double eps,
                                     const TrackSettings& st) {
  const double tol = st.newton_tol * (1.0 + map.scale());
  Vector v = v0;
  Vector r = map.residual(v, eps);
  for (int k = 0; k < st.newton_max_iters; ++k) {
    if (r.norm() <= tol) return v;
    Eigen::PartialPivLU<Matrix> lu(map.jacobian(v, eps));
    const Vector dv = lu.solve(-r);
    if (!dv.allFinite()) return std::nullopt;
    v += dv;
    r = map.residual(v, eps);
    if (!r.allFinite()) return std::nullopt;
  }
  if (r.norm() <= tol) return v;
  return std::nullopt;
}

namespace {

StepResult step_impl(const DifferentiableMap& map, const Vector& v, double eps, double h,
                     const TrackSettings& st, double stage_threshold) {
  StepResult out;
  if (h == 0.0) {
    out.v = v;
    return out;
  }
  const auto k1 = davidenko_rhs(map, v, eps, stage_threshold);
  if (!k1) return {std::nullopt, Criterion::JacobianSingular};
  const auto k2 = davidenko_rhs(map, v + 0.5 * h * *k1, eps + 0.5 * h, stage_threshold);
  if (!k2) return {std::nullopt, Criterion::JacobianSingular};
  const auto k3 = davidenko_rhs(map, v + 0.5 * h * *k2, eps + 0.5 * h, stage_threshold);
  if (!k3) return {std::nullopt, Criterion::JacobianSingular};
  const auto k4 = davidenko_rhs(map, v + h * *k3, eps + h, stage_threshold);
  if (!k4) return {std::nullopt, Criterion::JacobianSingular};
  Vector pred = v + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  if (!st.correct) {
    out.v = std::move(pred);
    return out;
  }
  out.v = newton_correct(map, pred, eps + h, st);
  if (!out.v) out.failure = Criterion::CorrectorFailure;
  return out;
}

double jac_min_sv(const DifferentiableMap& map, const Vector& v, double eps) {
  Eigen::JacobiSVD<Matrix> svd(map.jacobian(v, eps));
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

}  // namespace

StepResult step(const DifferentiableMap& map, const Vector& v, double eps, double h,
                const TrackSettings& st) {
  return step_impl(map, v, eps, h, st, st.sing_threshold);
}

Sample make_sample(const DifferentiableMap& map, const Vector& v, double eps) {
  const auto info = map.info(v, eps);
  return {eps, v, info.objective, info.min_eig_x, info.min_eig_s, jac_min_sv(map, v, eps)};
}

Criterion check_sample(const Sample& s, const TrackSettings& st) {
  if (!(s.jac_min_sv >= st.sing_threshold)) return Criterion::JacobianSingular;
  if (s.min_eig_x < st.psd_slack || s.min_eig_s < st.psd_slack) return Criterion::ConeViolation;
  return Criterion::None;
}

TrackResult track(const DifferentiableMap& map, const Vector& v0, double eps0, double bound,
                  const TrackSettings& st) {
  st.check();
  if (v0.size() != map.dim()) throw DimensionError("track: start point has the wrong length");
  const double h = st.delta_eps;
  if ((bound - eps0) * h < 0.0) throw DomainError("track: delta_eps points away from the bound");

  TrackResult res;
  res.samples.push_back(make_sample(map, v0, eps0));
  const Criterion first = check_sample(res.samples.back(), st);
  if (first != Criterion::None) {
    res.status = TrackStatus::Singular;
    res.fired = first;
    res.bracket_good = res.bracket_bad = res.eps_hat = eps0;
    res.v_accum = v0;
    return res;
  }

  for (long k = 1;; ++k) {
    const double e = eps0 + static_cast<double>(k) * h;
    if (h > 0.0 ? e >= bound : e <= bound) {
      res.status = TrackStatus::ReachedBound;
      return res;
    }
    const Sample& last = res.samples.back();
    const StepResult sr = step(map, last.v, last.eps, e - last.eps, st);
    Criterion fired = sr.failure;
    Sample next;
    if (sr.v) {
      next = make_sample(map, *sr.v, e);
      fired = check_sample(next, st);
    }
    if (fired == Criterion::None) {
      res.samples.push_back(std::move(next));
      continue;
    }
    res.fired = fired;
    res.bracket_good = last.eps;
    res.bracket_bad = e;
    if (fired == Criterion::CorrectorFailure) {
      res.status = TrackStatus::CorrectorFailure;
      res.eps_hat = last.eps;
      res.v_accum = last.v;
      return res;
    }
    res.status = TrackStatus::Singular;
    if (st.sharpen) {
      const SharpenResult sh = sharpen(map, last.eps, e, last.v, st);
      res.eps_hat = sh.eps_hat;
      res.v_accum = sh.v_accum;
      res.order = sh.order;
    } else {
      res.eps_hat = last.eps;
      res.v_accum = last.v;
    }
    return res;
  }
}

namespace {

// Exact fit of ln sigma = ln c + p ln d, d = dir * (e* - e), through three
// points ordered along dir. Returns false when sigma does not decay like a power.
bool fit_power(const double (&u)[3], const double (&lg)[3], double& ustar, double& order) {
  const double d10 = lg[1] - lg[0], d21 = lg[2] - lg[1];
  if (!(d10 < 0.0) || !(d21 < 0.0)) return false;
  const double r = d21 / d10;
  auto phi = [&](double U) {
    return std::log((U - u[2]) / (U - u[1])) - r * std::log((U - u[1]) / (U - u[0]));
  };
  const double span = u[2] - u[0];
  double lo = u[2], hi = u[2] + span;
  while (phi(hi) <= 0.0) {
    lo = hi;
    hi = u[2] + 2.0 * (hi - u[2]);
    if (hi - u[2] > 1e8 * span) return false;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? hi : lo) = mid;
  }
  ustar = 0.5 * (lo + hi);
  order = d10 / std::log((ustar - u[1]) / (ustar - u[0]));
  return std::isfinite(ustar) && order > 0.0;
}

}  // namespace

// sigma_min(J) along the branch behaves like c |e - e*|^p near a singular point.
// Starting from the threshold crossing, fit (e*, p) through the last three branch
// points and move halfway towards the estimate until sigma reaches the roundoff
// floor or the estimate settles.
static void endgame(const DifferentiableMap& map, double dir, double width, const TrackSettings& st,
             SharpenResult& out) {
  struct Pt {
    double u, lg;
    Vector v;
  };
  TrackSettings relaxed = st;
  relaxed.correct = true;
  auto eval = [&](const Pt& from, double u, Pt& to) {
    const StepResult sr = step_impl(map, from.v, dir * from.u, dir * (u - from.u), relaxed, 0.0);
    if (!sr.v) return false;
    Eigen::JacobiSVD<Matrix> svd(map.jacobian(*sr.v, dir * u));
    const auto& s = svd.singularValues();
    to = {u, std::log(s(s.size() - 1)), *sr.v};
    return std::isfinite(to.lg);
  };

  Eigen::JacobiSVD<Matrix> svd0(map.jacobian(out.v_accum, out.eps_hat));
  const auto& s0 = svd0.singularValues();
  const double floor_lg = std::log(1e-12 * s0(0));
  std::vector<Pt> pts{{dir * out.eps_hat, std::log(s0(s0.size() - 1)), out.v_accum}};

  // Local log-derivative; p >= 1 bounds the distance from below by 1 / |L'|.
  double eta = 1e-4 * width;
  Pt p1;
  for (int tries = 0;; ++tries) {
    if (tries > 6) return;
    if (eval(pts[0], pts[0].u + eta, p1) && p1.lg < pts[0].lg) break;
    eta *= 0.1;
  }
  pts.push_back(p1);
  const double slope = (p1.lg - pts[0].lg) / eta;
  Pt p2;
  if (!eval(p1, p1.u + 0.5 / std::abs(slope), p2)) return;
  pts.push_back(p2);

  double est = 0.0, order = 0.0, prev = std::numeric_limits<double>::quiet_NaN();
  double last_diff = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 80; ++it) {
    const size_t k = pts.size();
    const double u[3] = {pts[k - 3].u, pts[k - 2].u, pts[k - 1].u};
    const double lg[3] = {pts[k - 3].lg, pts[k - 2].lg, pts[k - 1].lg};
    double ustar = 0.0, p = 0.0;
    if (!fit_power(u, lg, ustar, p)) break;
    // Estimates converge geometrically while sigma is above roundoff; once
    // they start to wander, keep the last one made before that.
    const double diff = std::abs(ustar - est);
    if (it > 1 && diff > last_diff) break;
    if (it > 0) last_diff = diff;
    prev = est;
    est = ustar;
    order = p;
    if (std::abs(est - prev) <= st.sharpen_tol || pts.back().lg < floor_lg) break;
    Pt next;
    double theta = 0.5;
    bool ok = false;
    for (int tries = 0; tries < 4 && !ok; ++tries, theta *= 0.5)
      ok = eval(pts.back(), pts.back().u + theta * (est - pts.back().u), next) &&
           next.lg < pts.back().lg;
    if (!ok) break;
    pts.push_back(std::move(next));
  }
  if (!(order > 0.0)) return;
  out.order = order;
  out.eps_hat = dir * est;
  Pt at;
  out.v_accum = eval(pts.back(), est, at) ? at.v : pts.back().v;
}

SharpenResult sharpen(const DifferentiableMap& map, double eps_good, double eps_bad,
                      const Vector& v_good, const TrackSettings& st) {
  SharpenResult out;
  double a = eps_good, b = eps_bad;
  Vector va = v_good;
  // Bisection on the tracking criteria.
  for (int it = 0; it < 200 && std::abs(b - a) > st.sharpen_tol; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const StepResult sr = step(map, va, a, mid - a, st);
    if (sr.v && check_sample(make_sample(map, *sr.v, mid), st) == Criterion::None) {
      a = mid;
      va = *sr.v;
    } else {
      b = mid;
    }
  }
  out.eps_threshold = a;

  out.v_accum = va;
  out.eps_hat = a;
  if (std::abs(eps_bad - eps_good) <= st.sharpen_tol) return out;
  endgame(map, eps_bad > eps_good ? 1.0 : -1.0, std::abs(eps_bad - eps_good), st, out);
  return out;
}

}  // namespace sdopart
