#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdopart/model.hpp"

namespace sdopart {

struct TrackSettings {
  double delta_eps = 0.01;
  double sing_threshold = 1e-5;
  double newton_tol = 1e-12;
  int newton_max_iters = 20;
  double sharpen_tol = 1e-10;
  double psd_slack = -1e-9;
  /// Newton correction after each predictor step. Off only for predictor-only studies.
  bool correct = true;
  /// Sharpen the bracket when a criterion fires.
  bool sharpen = true;

  void check() const;
};

struct Sample {
  double eps = 0.0;
  Vector v;
  double objective = 0.0;
  double min_eig_x = 0.0;
  double min_eig_s = 0.0;
  double jac_min_sv = 0.0;
};

enum class Criterion { None, JacobianSingular, ConeViolation, CorrectorFailure };
std::string to_string(Criterion c);

enum class TrackStatus { ReachedBound, Singular, CorrectorFailure };
std::string to_string(TrackStatus s);

struct TrackResult {
  std::vector<Sample> samples;
  TrackStatus status = TrackStatus::ReachedBound;
  Criterion fired = Criterion::None;
  /// Mesh bracket [last good, first bad] in tracking order.
  double bracket_good = 0.0;
  double bracket_bad = 0.0;
  double eps_hat = 0.0;
  Vector v_accum;
  /// Fitted vanishing order of sigma_min(J) at eps_hat (0 when unavailable).
  double order = 0.0;
};

/// -J^{-1} dF/deps, or nullopt when sigma_min(J) < sing_threshold.
std::optional<Vector> davidenko_rhs(const DifferentiableMap& map, const Vector& v, double eps,
                                    double sing_threshold);

/// Newton on F(., eps) = 0. Returns nullopt when it does not reach
/// ||F|| <= newton_tol * (1 + scale) within newton_max_iters.
std::optional<Vector> newton_correct(const DifferentiableMap& map, const Vector& v, double eps,
                                     const TrackSettings& settings);

struct StepResult {
  std::optional<Vector> v;
  Criterion failure = Criterion::None;
};

/// RK4 over [eps, eps + h] followed by Newton correction at eps + h (when enabled).
StepResult step(const DifferentiableMap& map, const Vector& v, double eps, double h,
                const TrackSettings& settings);

Sample make_sample(const DifferentiableMap& map, const Vector& v, double eps);

/// Which criterion a corrected sample violates, if any.
Criterion check_sample(const Sample& s, const TrackSettings& settings);

/// Advances on the mesh eps0 + k * delta_eps while the mesh point lies strictly
/// between eps0 and bound.
TrackResult track(const DifferentiableMap& map, const Vector& v0, double eps0, double bound,
                  const TrackSettings& settings);

struct SharpenResult {
  double eps_hat = 0.0;
  Vector v_accum;
  /// End of the criterion bisection, where the tracking criteria stop holding.
  double eps_threshold = 0.0;
  /// Fitted vanishing order of sigma_min(J) at eps_hat; 0 when no fit was possible.
  double order = 0.0;
};

/// Bisection on the tracking criteria between eps_good and eps_bad, then an
/// extrapolation of the zero of sigma_min(J) along the corrected branch.
SharpenResult sharpen(const DifferentiableMap& map, double eps_good, double eps_bad,
                      const Vector& v_good, const TrackSettings& settings);

}  // namespace sdopart
