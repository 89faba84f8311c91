#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdopart/classifier.hpp"
#include "sdopart/invariancy.hpp"
#include "sdopart/tracker.hpp"

namespace sdopart {

enum class SegmentKind { Invariancy, Nonlinearity };
std::string to_string(SegmentKind k);

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  SegmentKind kind = SegmentKind::Nonlinearity;
  RankPair ranks;
  /// False when tracked samples inside the segment disagree on the rank pair.
  bool ranks_uniform = true;
};

struct PartitionSettings {
  InvariancySettings invariancy;
  /// delta_eps is the mesh magnitude; sweeps pick its sign.
  TrackSettings track;
  ClassifierSettings classifier;
  /// Points closer than this are merged and gaps narrower than this are dropped.
  double merge_tol = 1e-5;

  void check() const;
};

struct PartitionDiagnostics {
  int invariancy_queries = 0;
  int tracks = 0;
  int retries = 0;
  /// Mesh points skipped because the restart after a singular point was itself singular.
  int skips = 0;
  int corrector_failures = 0;
};

struct PartitionReport {
  std::string problem;
  double lo = 0.0;
  double hi = 0.0;
  double eps_init = 0.0;
  PartitionSettings settings;
  std::vector<Segment> segments;
  std::vector<double> transition_points;
  std::vector<SingularRecord> singular_records;
  /// Tracked samples from both sweeps, sorted by eps.
  std::vector<Sample> samples;
  PartitionDiagnostics diagnostics;
  /// Largest violation of concavity over consecutive sample triples.
  double concavity_max = 0.0;
  bool concave = true;
  /// Both sweeps reached the domain ends with no corrector failures and no unresolved records.
  bool complete = true;

  std::vector<Segment> of_kind(SegmentKind k) const;
  int unresolved() const;
};

/// Open complement of the invariancy segments and transition points in (lo, hi).
/// Gaps no wider than tol are dropped. Throws Error when inputs overlap.
std::vector<Segment> assemble_nonlinearity(double lo, double hi, const std::vector<Segment>& inv,
                                           const std::vector<double>& transitions, double tol);

/// Largest value of the chord-minus-value test over consecutive triples, i.e. the
/// worst local convexity; <= 0 for a concave sequence.
double concavity_violation(const std::vector<Sample>& samples);

/// Forward and backward sweeps from eps_init, then classification and assembly.
/// Throws SingularStartError when eps_init needs tracking and its Jacobian is singular.
PartitionReport partition(const ParametricSDO& prob, double eps_init,
                          const PartitionSettings& settings = {});

}  // namespace sdopart
