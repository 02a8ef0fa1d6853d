/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/diffusion.hpp"
#include "core/network.hpp"
#include "core/video.hpp"

namespace dtexnet {

enum class HistogramPart { spatial, temporal };

struct LayoutSegment {
  int r2 = 1;
  int tau = 1;
  HistogramPart part = HistogramPart::spatial;
  size_t bins = 0;
  size_t offset = 0;  // position of the segment inside the feature vector
};

/// Feature vector layout: for each radius (ascending), the spatial histogram
/// for every threshold (ascending), then the temporal histogram for every
/// threshold (ascending).
struct FeatureLayout {
  std::vector<LayoutSegment> segments;
  size_t dimension = 0;
};

/// Activity mass by (spatial in-degree, temporal in-degree) cell, normalized
/// by vertex count times walks per vertex.
struct JointDistribution {
  size_t s_bins = 0;
  size_t t_bins = 0;
  std::vector<double> mass;  // row-major, mass[s * t_bins + t]

  double at(size_t s, size_t t) const { return mass[s * t_bins + t]; }
};

struct ActivityHistograms {
  std::vector<double> spatial;
  std::vector<double> temporal;
};

struct ExtractionConfig {
  std::vector<int> radii;  // squared radii, strictly ascending
  ThresholdSchedule thresholds;
  WalkConfig walk;
  unsigned workers = 1;
  bool self_check = true;  // verify conservation + marginal invariants

  void validate() const;
};

size_t feature_dimension(const std::vector<int>& radii,
                         const ThresholdSchedule& thresholds);

FeatureLayout feature_layout(const std::vector<int>& radii,
                             const ThresholdSchedule& thresholds);

JointDistribution joint_distribution(const ActivityField& activity,
                                     const DegreeField& degrees,
                                     const OffsetTable& offsets,
                                     uint32_t walks_per_vertex);

/// Real-valued variant for expectation fields. Bin contents are summed in
/// value order, so permutation-related fields produce bit-identical cells.
JointDistribution joint_distribution(const RealActivityField& activity,
                                     const DegreeField& degrees,
                                     const OffsetTable& offsets,
                                     uint32_t walks_per_vertex);

/// Marginals of the joint distribution: spatial[j] sums row j over ascending
/// temporal bins, temporal[j] sums column j over ascending spatial bins.
ActivityHistograms activity_histograms(const JointDistribution& joint);

ActivityHistograms activity_histograms(const ActivityField& activity,
                                       const DegreeField& degrees,
                                       const OffsetTable& offsets,
                                       uint32_t walks_per_vertex);

struct DescriptorResult {
  std::vector<double> values;
  WalkStats stats;
};

/// Full multi-scale descriptor: per (radius, threshold) network, estimate
/// activity by Monte Carlo walks (sub-seeded from walk.seed, r2 and tau),
/// histogram it against the in-degree field, and concatenate per the layout.
DescriptorResult extract_descriptor(const Video& v,
                                    const ExtractionConfig& cfg);

/// Same layout, but driven by the exact expectation oracle. Subject to the
/// oracle's volume guard; bit-exactly invariant under frame rotation.
std::vector<double> extract_descriptor_exact(const Video& v,
                                             const ExtractionConfig& cfg);

const char* part_name(HistogramPart part);

}  // namespace dtexnet
