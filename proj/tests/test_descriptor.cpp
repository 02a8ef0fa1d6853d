/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "core/descriptor.hpp"
#include "core/errors.hpp"
#include "test_util.hpp"

using namespace dtexnet;

namespace {

ExtractionConfig ucla_config(uint64_t seed = 1) {
  ExtractionConfig cfg;
  cfg.radii = {1, 2, 3};
  cfg.thresholds = {8, 96, 2};
  cfg.walk = {50, 1000, seed};
  return cfg;
}

double vec_l1(const std::vector<double>& a, const std::vector<double>& b) {
  double l1 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
  return l1;
}

std::vector<double> unit_mass(std::vector<double> v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
  return v;
}

}  // namespace

TEST_CASE("feature dimensions for the published parameter presets") {
  CHECK(feature_dimension({1, 2}, {2, 48, 4}) == 140);
  CHECK(feature_dimension({1, 2, 3}, {8, 96, 2}) == 168);
  CHECK(feature_dimension({1, 2, 3, 4, 5}, {4, 110, 1}) == 296);
  CHECK(feature_dimension({1}, {100, 1, 0}) == 8);
}

TEST_CASE("layout orders radii, then parts, then thresholds") {
  const FeatureLayout layout = feature_layout({1, 2}, {10, 50, 1});
  REQUIRE(layout.segments.size() == 8);
  CHECK(layout.dimension == 2 * (8 + 20));
  // Radius 1: spatial tau 10, 60, then temporal tau 10, 60.
  CHECK(layout.segments[0].r2 == 1);
  CHECK(layout.segments[0].tau == 10);
  CHECK(layout.segments[0].part == HistogramPart::spatial);
  CHECK(layout.segments[0].bins == 5);
  CHECK(layout.segments[1].tau == 60);
  CHECK(layout.segments[2].part == HistogramPart::temporal);
  CHECK(layout.segments[2].bins == 3);
  CHECK(layout.segments[4].r2 == 2);
  // Offsets are contiguous.
  size_t expect = 0;
  for (const LayoutSegment& s : layout.segments) {
    CHECK(s.offset == expect);
    expect += s.bins;
  }
  CHECK(expect == layout.dimension);
}

TEST_CASE("config validation rejects bad radii lists") {
  ExtractionConfig cfg = ucla_config();
  cfg.radii = {};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.radii = {2, 2};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.radii = {3, 1};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.radii = {0};
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("joint distribution of the two-pixel chain") {
  const Video v(2, 1, 1, {200, 150});
  const OffsetTable table = neighborhood_offsets(1);
  const ActivityField activity =
      estimate_activity(v, table, 255, WalkConfig{50, 1000, 1});
  const DegreeField degrees = in_degree_field(v, table, 255);
  const JointDistribution joint =
      joint_distribution(activity, degrees, table, 50);
  CHECK(joint.s_bins == 5);
  CHECK(joint.t_bins == 3);
  for (size_t s = 0; s < joint.s_bins; ++s) {
    for (size_t t = 0; t < joint.t_bins; ++t) {
      CHECK(joint.at(s, t) == (s == 1 && t == 0 ? 0.5 : 0.0));
    }
  }

  const ActivityHistograms h = activity_histograms(joint);
  CHECK(h.spatial == std::vector<double>{0.0, 0.5, 0.0, 0.0, 0.0});
  CHECK(h.temporal == std::vector<double>{0.5, 0.0, 0.0});
}

TEST_CASE("joint distribution matches an independent group-by recount") {
  const Video v = testutil::random_video(4, 4, 3, 515);
  const OffsetTable table = neighborhood_offsets(2);
  const int tau = 128;
  const uint32_t walks = 20;
  const ActivityField activity =
      estimate_activity(v, table, tau, WalkConfig{walks, 100, 5});
  const DegreeField degrees = in_degree_field(v, table, tau);
  const JointDistribution joint =
      joint_distribution(activity, degrees, table, walks);

  // Independent pass: group raw counts, then normalize.
  const double denom = double(v.vertex_count()) * double(walks);
  std::vector<uint64_t> cells(joint.s_bins * joint.t_bins, 0);
  for (size_t i = 0; i < v.vertex_count(); ++i) {
    cells[degrees.spatial_in[i] * joint.t_bins + degrees.temporal_in[i]] +=
        activity.visits[i];
  }
  for (size_t c = 0; c < cells.size(); ++c) {
    CHECK(joint.mass[c] == double(cells[c]) / denom);
  }
}

TEST_CASE("histograms are exactly the marginals of the joint distribution") {
  const Video v = testutil::random_video(5, 4, 3, 9001);
  const OffsetTable table = neighborhood_offsets(3);
  const ActivityField activity =
      estimate_activity(v, table, 100, WalkConfig{30, 100, 2});
  const DegreeField degrees = in_degree_field(v, table, 100);
  const JointDistribution joint =
      joint_distribution(activity, degrees, table, 30);
  const ActivityHistograms h = activity_histograms(joint);

  for (size_t s = 0; s < joint.s_bins; ++s) {
    double acc = 0.0;
    for (size_t t = 0; t < joint.t_bins; ++t) acc += joint.at(s, t);
    CHECK(h.spatial[s] == acc);  // bit-exact
  }
  for (size_t t = 0; t < joint.t_bins; ++t) {
    double acc = 0.0;
    for (size_t s = 0; s < joint.s_bins; ++s) acc += joint.at(s, t);
    CHECK(h.temporal[t] == acc);
  }
  const double hs = std::accumulate(h.spatial.begin(), h.spatial.end(), 0.0);
  const double ht = std::accumulate(h.temporal.begin(), h.temporal.end(), 0.0);
  CHECK(hs == doctest::Approx(ht).epsilon(1e-12));
}

TEST_CASE("constant videos produce all-zero descriptors") {
  const Video v = Video::filled(10, 8, 4, 77);
  const struct {
    std::vector<int> radii;
    ThresholdSchedule sched;
  } presets[] = {
      {{1, 2}, {2, 48, 4}},
      {{1, 2, 3}, {8, 96, 2}},
      {{1, 2, 3, 4, 5}, {4, 110, 1}},
  };
  for (const auto& p : presets) {
    ExtractionConfig cfg;
    cfg.radii = p.radii;
    cfg.thresholds = p.sched;
    cfg.walk = {10, 100, 3};
    const DescriptorResult r = extract_descriptor(v, cfg);
    CHECK(r.values.size() == feature_dimension(p.radii, p.sched));
    for (const double x : r.values) CHECK(x == 0.0);
    CHECK(r.stats.total_steps == 0);
  }
}

TEST_CASE("descriptor length always matches feature_dimension") {
  const Video v = testutil::random_video(6, 6, 3, 11);
  ExtractionConfig cfg;
  cfg.radii = {1, 3};
  cfg.thresholds = {30, 100, 1};
  cfg.walk = {10, 50, 4};
  const DescriptorResult r = extract_descriptor(v, cfg);
  CHECK(r.values.size() == feature_dimension(cfg.radii, cfg.thresholds));
  CHECK(r.stats.total_walks ==
        uint64_t(v.vertex_count()) * cfg.walk.walks * 4);  // 2 radii x 2 taus
}

TEST_CASE("descriptor concatenation is additive over the schedule") {
  const Video v = testutil::random_video(6, 5, 4, 21);
  ExtractionConfig both;
  both.radii = {1, 2};
  both.thresholds = {20, 60, 1};  // taus 20, 80
  both.walk = {15, 100, 99};
  const DescriptorResult two = extract_descriptor(v, both);

  ExtractionConfig lo = both;
  lo.thresholds = {20, 1, 0};
  ExtractionConfig hi = both;
  hi.thresholds = {80, 1, 0};
  const DescriptorResult a = extract_descriptor(v, lo);
  const DescriptorResult b = extract_descriptor(v, hi);

  // Interleave the single-threshold layouts per the two-threshold layout.
  const FeatureLayout layout2 = feature_layout(both.radii, both.thresholds);
  const FeatureLayout layout1 = feature_layout(lo.radii, lo.thresholds);
  std::vector<double> expected(two.values.size());
  for (size_t seg1 = 0; seg1 < layout1.segments.size(); ++seg1) {
    const LayoutSegment& s1 = layout1.segments[seg1];
    for (const int tau : {20, 80}) {
      const std::vector<double>& src = tau == 20 ? a.values : b.values;
      for (const LayoutSegment& s2 : layout2.segments) {
        if (s2.r2 == s1.r2 && s2.part == s1.part && s2.tau == tau) {
          for (size_t bin = 0; bin < s1.bins; ++bin) {
            expected[s2.offset + bin] = src[s1.offset + bin];
          }
        }
      }
    }
  }
  CHECK(two.values == expected);
}

TEST_CASE("exact descriptors are bit-identical under rotation") {
  const Video v = testutil::random_video(6, 6, 4, 31337);
  ExtractionConfig cfg = ucla_config(55);
  const std::vector<double> base = extract_descriptor_exact(v, cfg);
  CHECK(base.size() == 168);
  for (int q = 1; q <= 3; ++q) {
    const std::vector<double> rot =
        extract_descriptor_exact(rotate90(v, q), cfg);
    CHECK(rot == base);
  }
}

TEST_CASE("Monte Carlo descriptor tracks the exact descriptor") {
  const Video v = testutil::random_video(6, 6, 4, 40);
  ExtractionConfig cfg = ucla_config(123);
  cfg.walk.walks = 500;
  const DescriptorResult mc = extract_descriptor(v, cfg);
  const std::vector<double> exact = extract_descriptor_exact(v, cfg);
  CHECK(vec_l1(unit_mass(mc.values), unit_mass(exact)) <= 0.15);
}

TEST_CASE("total descriptor mass equals steps over N*M per network") {
  const Video v = testutil::random_video(5, 5, 3, 2718);
  ExtractionConfig cfg;
  cfg.radii = {2};
  cfg.thresholds = {128, 1, 0};
  cfg.walk = {25, 60, 12};
  const DescriptorResult r = extract_descriptor(v, cfg);
  const double mass =
      std::accumulate(r.values.begin(), r.values.end(), 0.0);
  const double expect = 2.0 * double(r.stats.total_steps) /
                        (double(v.vertex_count()) * cfg.walk.walks);
  CHECK(mass == doctest::Approx(expect).epsilon(1e-9));
  CHECK(mass <= 2.0 * cfg.walk.max_steps);
}
