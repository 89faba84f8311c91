#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdopart/ipm.hpp"
#include "sdopart/tracker.hpp"

namespace sdopart {

/// Closed-form value of X(0, 1) on the tracked nonlinearity interval.
using Oracle = std::function<double(double)>;

/// Oracle for elliptope and circle-line; nullopt for other problems.
std::optional<Oracle> x12_oracle(const std::string& problem);

/// X(0, 1) read from a stacked KKT vector.
double x12_of(const Vector& v, Index n, Index m);

struct ConvergenceSettings {
  double eps_init = 0.75;
  double delta_base = 0.05;
  /// Rows j = 0..levels with delta_j = delta_base * 2^-j.
  int levels = 4;
  /// Tracking target; its side of eps_init fixes the direction.
  double target = 1.5;
  /// Cone criterion for uncorrected samples, which drift off the zero eigenvalues.
  double psd_slack = -1e-6;
  /// Jacobian threshold for the criteria; correction and sharpening are always off here.
  TrackSettings track;
};

struct ConvergenceRow {
  int j = 0;
  double delta = 0.0;
  /// First mesh point with a singular Jacobian, else the last mesh point before the
  /// cone criterion fired or the bound was reached.
  double approx_singular = 0.0;
  double err = 0.0;
  /// log2(err_{j-1} / err_j); NaN on the first row.
  double rho = 0.0;
  double cpu_seconds = 0.0;
  size_t samples = 0;
};

/// Predictor-only tracking on a sequence of halved meshes with the L1 error
/// delta * sum |x12 - oracle| over the tracked mesh points.
std::vector<ConvergenceRow> convergence_study(const ParametricSDO& prob, const Oracle& oracle,
                                              const ConvergenceSettings& settings,
                                              const IPMSettings& ipm = {});

}  // namespace sdopart
