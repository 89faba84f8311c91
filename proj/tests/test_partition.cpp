#include <doctest.h>

#include <algorithm>

#include "gen.hpp"
#include "sdopart/partition.hpp"

using namespace sdopart;
using sdopart::testing::Gen;

namespace {

Segment inv(double lo, double hi) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.kind = SegmentKind::Invariancy;
  return s;
}

std::vector<Sample> samples_of(double (*f)(double), double a, double h, int k) {
  std::vector<Sample> out;
  for (int i = 0; i < k; ++i) {
    Sample s;
    s.eps = a + h * i;
    s.objective = f(s.eps);
    out.push_back(s);
  }
  return out;
}

void check_cover(const PartitionReport& r) {
  REQUIRE_FALSE(r.segments.empty());
  CHECK(r.segments.front().lo == r.lo);
  CHECK(r.segments.back().hi == r.hi);
  for (size_t k = 0; k + 1 < r.segments.size(); ++k) {
    CHECK(r.segments[k].lo < r.segments[k].hi);
    CHECK(std::abs(r.segments[k].hi - r.segments[k + 1].lo) <= 1e-5);
  }
  for (double t : r.transition_points) {
    const bool at_boundary = std::any_of(r.segments.begin(), r.segments.end(), [&](const Segment& s) {
      return std::abs(s.lo - t) <= 1e-5 || std::abs(s.hi - t) <= 1e-5;
    });
    CHECK(at_boundary);
  }
  CHECK(std::is_sorted(r.samples.begin(), r.samples.end(),
                       [](const Sample& a, const Sample& b) { return a.eps < b.eps; }));
}

}  // namespace

TEST_CASE("assemble_nonlinearity") {
  auto nl = assemble_nonlinearity(-1, 2, {inv(-1, -0.5), inv(1.5, 2)}, {-0.5, 1.5}, 1e-5);
  REQUIRE(nl.size() == 1);
  CHECK(nl[0].lo == -0.5);
  CHECK(nl[0].hi == 1.5);
  CHECK(nl[0].kind == SegmentKind::Nonlinearity);

  nl = assemble_nonlinearity(-1, 1.5, {}, {0.0}, 1e-5);
  REQUIRE(nl.size() == 2);
  CHECK(nl[0].hi == 0.0);
  CHECK(nl[1].lo == 0.0);

  nl = assemble_nonlinearity(0, 1, {}, {}, 1e-5);
  REQUIRE(nl.size() == 1);
  CHECK(nl[0].lo == 0.0);
  CHECK(nl[0].hi == 1.0);

  nl = assemble_nonlinearity(0, 1, {inv(0, 0.5), inv(0.5 + 1e-7, 1)}, {}, 1e-5);
  CHECK(nl.empty());

  CHECK_THROWS_AS(assemble_nonlinearity(0, 1, {inv(0, 0.6), inv(0.4, 1)}, {}, 1e-5), Error);
  CHECK_THROWS_AS(assemble_nonlinearity(0, 1, {inv(0, 0.6)}, {0.3}, 1e-5), Error);
}

TEST_CASE("assemble_nonlinearity covers the complement") {
  Gen g(61);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> cuts;
    for (int i = 0; i < 6; ++i) cuts.push_back(g.uniform(0, 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Segment> iv{inv(cuts[0], cuts[1]), inv(cuts[3], cuts[4])};
    const std::vector<double> tr{cuts[2], cuts[5]};
    const auto nl = assemble_nonlinearity(0, 1, iv, tr, 1e-9);
    double covered = 0.0;
    for (const Segment& s : nl) covered += s.hi - s.lo;
    for (const Segment& s : iv) covered += s.hi - s.lo;
    CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));
    for (const Segment& s : nl) {
      for (double t : tr) CHECK_FALSE((s.lo < t && t < s.hi));
      for (const Segment& i : iv) CHECK((s.hi <= i.lo || s.lo >= i.hi));
    }
  }
}

TEST_CASE("concavity_violation") {
  const auto lin = samples_of([](double x) { return 2 * x - 1; }, 0, 0.1, 10);
  CHECK(std::abs(concavity_violation(lin)) < 1e-12);
  const auto cave = samples_of([](double x) { return -x * x; }, 0, 0.1, 10);
  CHECK(concavity_violation(cave) <= 0.0);
  const auto vex = samples_of([](double x) { return x * x; }, 0, 0.1, 10);
  CHECK(concavity_violation(vex) > 0.0);
  CHECK(concavity_violation(samples_of([](double x) { return x; }, 0, 1, 2)) == 0.0);
}

TEST_CASE("partition of elliptope-cut") {
  PartitionSettings st;
  st.track.delta_eps = 0.005;
  const PartitionReport r = partition(builtin("elliptope-cut"), 0.0, st);
  check_cover(r);
  const auto iv = r.of_kind(SegmentKind::Invariancy);
  REQUIRE(iv.size() == 2);
  CHECK(std::abs(iv[0].hi + 0.5) < 1e-6);
  CHECK(std::abs(iv[1].lo - 1.5) < 1e-6);
  CHECK(iv[1].ranks == RankPair{2, 2});
  const auto nl = r.of_kind(SegmentKind::Nonlinearity);
  REQUIRE(nl.size() == 1);
  CHECK(nl[0].ranks == RankPair{3, 1});
  REQUIRE(r.transition_points.size() == 2);
  CHECK(std::abs(r.transition_points[0] + 0.5) < 1e-6);
  CHECK(std::abs(r.transition_points[1] - 1.5) < 1e-6);
  const bool half = std::any_of(r.singular_records.begin(), r.singular_records.end(), [](const SingularRecord& s) {
    return std::abs(s.eps_hat - 0.5) < 1e-6 && s.classification == Classification::NonTransition;
  });
  CHECK(half);
  CHECK(r.concave);
  CHECK(r.complete);
  CHECK(r.unresolved() == 0);
}

TEST_CASE("partition of circle-line") {
  const PartitionReport r = partition(builtin("circle-line"), 0.25);
  check_cover(r);
  const auto iv = r.of_kind(SegmentKind::Invariancy);
  REQUIRE(iv.size() == 2);
  CHECK(std::abs(iv[0].hi) < 1e-6);
  CHECK(iv[0].ranks == RankPair{3, 2});
  CHECK(std::abs(iv[1].lo - 1.0) < 1e-6);
  CHECK(iv[1].ranks == RankPair{2, 3});
  const auto nl = r.of_kind(SegmentKind::Nonlinearity);
  REQUIRE(nl.size() == 1);
  CHECK(nl[0].ranks == RankPair{4, 1});
  CHECK(r.transition_points.size() == 2);
  CHECK(r.concave);
  CHECK(r.complete);
}

TEST_CASE("partition of ellipse-circle") {
  const PartitionReport r = partition(builtin("ellipse-circle"), 0.5);
  check_cover(r);
  CHECK(r.of_kind(SegmentKind::Invariancy).empty());
  const auto nl = r.of_kind(SegmentKind::Nonlinearity);
  REQUIRE(nl.size() == 2);
  for (const Segment& s : nl) CHECK(s.ranks == RankPair{5, 1});
  REQUIRE(r.transition_points.size() == 1);
  CHECK(std::abs(r.transition_points[0]) < 1e-6);
  REQUIRE(r.singular_records.size() == 1);
  const SingularRecord& rec = r.singular_records[0];
  CHECK(rec.classification == Classification::Transition);
  CHECK(rec.point_ranks == RankPair{4, 2});
  CHECK(r.concave);
  CHECK(r.complete);
}

TEST_CASE("partition refuses a singular start") {
  CHECK_THROWS_AS(partition(builtin("elliptope"), 0.5), SingularStartError);
  CHECK_THROWS_AS(partition(builtin("elliptope"), 3.0), DomainError);
}

TEST_CASE("partition is deterministic") {
  const ParametricSDO p = builtin("circle-line");
  const PartitionReport a = partition(p, 0.6), b = partition(p, 0.6);
  REQUIRE(a.segments.size() == b.segments.size());
  for (size_t k = 0; k < a.segments.size(); ++k) {
    CHECK(a.segments[k].lo == b.segments[k].lo);
    CHECK(a.segments[k].hi == b.segments[k].hi);
  }
  CHECK(a.transition_points == b.transition_points);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t k = 0; k < a.samples.size(); ++k) CHECK(a.samples[k].v == b.samples[k].v);
}

TEST_CASE("PartitionSettings::check") {
  PartitionSettings st;
  CHECK_NOTHROW(st.check());
  st.merge_tol = -1.0;
  CHECK_THROWS_AS(st.check(), Error);
}
