#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ptkr/errors.hpp"
#include "ptkr/phase.hpp"

namespace {

ptkr::PointSummary summary(double norm, double diffusion, double width_ratio) {
  ptkr::PointSummary s;
  s.averages.norm = norm;
  s.diffusion_indicator = diffusion;
  s.width_ratio = width_ratio;
  return s;
}

TEST(Classifier, FourPhases) {
  EXPECT_EQ(ptkr::classify_phase(summary(1.0, 0.01, 1.0)).phase, ptkr::Phase::Localized);
  EXPECT_EQ(ptkr::classify_phase(summary(1.05, 0.9, 2.0)).phase, ptkr::Phase::ChaoticDiffusion);
  EXPECT_EQ(ptkr::classify_phase(summary(5.0, 0.9, 1.05)).phase, ptkr::Phase::BallisticSoliton);
  EXPECT_EQ(ptkr::classify_phase(summary(5.0, 0.9, 2.0)).phase, ptkr::Phase::DirectedMbd);
}

TEST(Classifier, ThresholdsAreConfigurable) {
  ptkr::ClassifierThresholds th;
  th.norm_margin = 1e-3;
  const auto p = ptkr::classify_phase(summary(1.01, 0.01, 2.0), th);
  EXPECT_TRUE(p.pt_broken);
  EXPECT_EQ(p.phase, ptkr::Phase::DirectedMbd);
  EXPECT_FALSE(ptkr::classify_phase(summary(1.01, 0.01, 2.0)).pt_broken);
}

TEST(Classifier, RejectsNonFiniteSummary) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ptkr::classify_phase(summary(nan, 0.0, 1.0)), ptkr::InconsistentFits);
  EXPECT_THROW(ptkr::classify_phase(summary(1.0, nan, 1.0)), ptkr::InconsistentFits);
}

TEST(Classifier, RomanLabels) {
  EXPECT_EQ(ptkr::roman(ptkr::Phase::Localized), "I");
  EXPECT_EQ(ptkr::roman(ptkr::Phase::DirectedMbd), "IV");
  EXPECT_EQ(ptkr::roman(ptkr::Phase::Undetermined), "?");
}

ptkr::AnalysisOptions quick_options() {
  ptkr::AnalysisOptions o;
  o.evolve.schedule.entropy_every = 2;
  return o;
}

ptkr::SimParams quick_params() {
  ptkr::SimParams p;
  p.lattice_size = 32;
  p.n_kicks = 40;
  return p;
}

TEST(AnalyzePoint, StrongGainBreaksSymmetry) {
  auto p = quick_params();
  p.lambda = 0.5;
  p.epsilon = 1.0;
  const auto r = ptkr::analyze_point(p, quick_options(), true);
  ASSERT_FALSE(r.point.error) << *r.point.error;
  EXPECT_TRUE(r.point.pt_broken);
  ASSERT_TRUE(r.trajectory);
  EXPECT_EQ(r.trajectory->records.size(), 41u);
}

TEST(AnalyzePoint, ErrorsAreRecordedNotThrown) {
  auto p = quick_params();
  p.n_kicks = 5;  // too short for any fit window
  const auto r = ptkr::analyze_point(p, quick_options(), true);
  ASSERT_TRUE(r.point.error);
  EXPECT_EQ(r.point.phase, ptkr::Phase::Undetermined);
  EXPECT_TRUE(r.trajectory);  // the evolution itself succeeded
}

TEST(ResolveWindow, ExplicitBoundsOverrideFraction) {
  ptkr::TrajectoryRecord traj;
  for (long t = 0; t <= 100; ++t) {
    ptkr::ObservableRecord r;
    r.kick_index = t;
    traj.records.push_back(r);
  }
  ptkr::AnalysisOptions o;
  o.window_fraction = 0.2;
  EXPECT_EQ(ptkr::resolve_window(traj, o).t_start, 80);
  o.window_start = 10;
  o.window_end = 500;
  const auto w = ptkr::resolve_window(traj, o);
  EXPECT_EQ(w.t_start, 10);
  EXPECT_EQ(w.t_end, 100);
}

TEST(Sweep, OrderedAndIndependentOfWorkers) {
  std::vector<ptkr::GridPoint> grid;
  for (double l : {0.2, 0.0, 0.05})
    for (double e : {1.0, 0.0}) grid.push_back({l, e});
  const auto one = ptkr::sweep_phase_diagram(grid, quick_params(), quick_options(), 1);
  const auto four = ptkr::sweep_phase_diagram(grid, quick_params(), quick_options(), 4);
  ASSERT_EQ(one.size(), 6u);
  EXPECT_EQ(one.front().point.lambda, 0.0);
  EXPECT_EQ(one.front().point.epsilon, 0.0);
  EXPECT_EQ(one.back().point.lambda, 0.2);
  EXPECT_EQ(one.back().point.epsilon, 1.0);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].point.lambda, four[i].point.lambda);
    EXPECT_EQ(one[i].point.epsilon, four[i].point.epsilon);
    EXPECT_EQ(one[i].point.norm_time_avg, four[i].point.norm_time_avg);
    EXPECT_EQ(one[i].point.entropy_time_avg, four[i].point.entropy_time_avg);
    EXPECT_EQ(one[i].point.phase, four[i].point.phase);
  }
}

TEST(Sweep, EmptyGridIsRejected) {
  EXPECT_THROW(ptkr::sweep_phase_diagram({}, quick_params(), quick_options()), ptkr::ValidationError);
}

}  // namespace
