/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace dtexnet {

void ExtractionConfig::validate() const {
  if (radii.empty()) throw config_error("radii list must not be empty");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1) throw config_error("squared radii must be >= 1");
    if (i > 0 && radii[i] <= radii[i - 1]) {
      throw config_error("squared radii must be strictly ascending");
    }
  }
  thresholds.validate();
  walk.validate();
}

size_t feature_dimension(const std::vector<int>& radii,
                         const ThresholdSchedule& thresholds) {
  return feature_layout(radii, thresholds).dimension;
}

FeatureLayout feature_layout(const std::vector<int>& radii,
                             const ThresholdSchedule& thresholds) {
  ExtractionConfig probe;
  probe.radii = radii;
  probe.thresholds = thresholds;
  probe.validate();

  const std::vector<int> taus = thresholds.values();
  FeatureLayout layout;
  size_t offset = 0;
  for (const int r2 : radii) {
    const OffsetTable table = neighborhood_offsets(r2);
    for (const int tau : taus) {
      layout.segments.push_back(
          {r2, tau, HistogramPart::spatial, table.spatial_bins(), offset});
      offset += table.spatial_bins();
    }
    for (const int tau : taus) {
      layout.segments.push_back(
          {r2, tau, HistogramPart::temporal, table.temporal_bins(), offset});
      offset += table.temporal_bins();
    }
  }
  layout.dimension = offset;
  return layout;
}

namespace {

void check_bins(size_t n, const DegreeField& degrees, size_t s_bins,
                size_t t_bins) {
  if (degrees.spatial_in.size() != n || degrees.temporal_in.size() != n) {
    throw config_error("activity and degree fields disagree in size");
  }
  for (size_t i = 0; i < n; ++i) {
    if (degrees.spatial_in[i] >= s_bins || degrees.temporal_in[i] >= t_bins) {
      throw config_error("degree exceeds the offset-table bin range");
    }
  }
}

}  // namespace

JointDistribution joint_distribution(const ActivityField& activity,
                                     const DegreeField& degrees,
                                     const OffsetTable& offsets,
                                     uint32_t walks_per_vertex) {
  const size_t n = activity.visits.size();
  JointDistribution joint;
  joint.s_bins = offsets.spatial_bins();
  joint.t_bins = offsets.temporal_bins();
  check_bins(n, degrees, joint.s_bins, joint.t_bins);

  std::vector<uint64_t> cells(joint.s_bins * joint.t_bins, 0);
  for (size_t i = 0; i < n; ++i) {
    cells[size_t(degrees.spatial_in[i]) * joint.t_bins +
          degrees.temporal_in[i]] += activity.visits[i];
  }
  const double denom = double(n) * double(walks_per_vertex);
  joint.mass.resize(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    joint.mass[c] = double(cells[c]) / denom;
  }
  return joint;
}

JointDistribution joint_distribution(const RealActivityField& activity,
                                     const DegreeField& degrees,
                                     const OffsetTable& offsets,
                                     uint32_t walks_per_vertex) {
  const size_t n = activity.visits.size();
  JointDistribution joint;
  joint.s_bins = offsets.spatial_bins();
  joint.t_bins = offsets.temporal_bins();
  check_bins(n, degrees, joint.s_bins, joint.t_bins);

  // Bucket the per-vertex values by cell, then sum each bucket in value
  // order: cell contents are then independent of vertex enumeration order.
  std::vector<std::vector<double>> cells(joint.s_bins * joint.t_bins);
  for (size_t i = 0; i < n; ++i) {
    cells[size_t(degrees.spatial_in[i]) * joint.t_bins + degrees.temporal_in[i]]
        .push_back(activity.visits[i]);
  }
  const double denom = double(n) * double(walks_per_vertex);
  joint.mass.resize(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    std::sort(cells[c].begin(), cells[c].end());
    double acc = 0.0;
    for (const double v : cells[c]) acc += v;
    joint.mass[c] = acc / denom;
  }
  return joint;
}

ActivityHistograms activity_histograms(const JointDistribution& joint) {
  ActivityHistograms h;
  h.spatial.assign(joint.s_bins, 0.0);
  h.temporal.assign(joint.t_bins, 0.0);
  for (size_t s = 0; s < joint.s_bins; ++s) {
    double acc = 0.0;
    for (size_t t = 0; t < joint.t_bins; ++t) acc += joint.at(s, t);
    h.spatial[s] = acc;
  }
  for (size_t t = 0; t < joint.t_bins; ++t) {
    double acc = 0.0;
    for (size_t s = 0; s < joint.s_bins; ++s) acc += joint.at(s, t);
    h.temporal[t] = acc;
  }
  return h;
}

ActivityHistograms activity_histograms(const ActivityField& activity,
                                       const DegreeField& degrees,
                                       const OffsetTable& offsets,
                                       uint32_t walks_per_vertex) {
  return activity_histograms(
      joint_distribution(activity, degrees, offsets, walks_per_vertex));
}

namespace {

uint64_t network_seed(uint64_t master, int r2, int tau) {
  return derive_seed(derive_seed(master, uint64_t(r2)), uint64_t(tau));
}

void self_check_network(const ActivityField& activity, const WalkStats& stats,
                        const JointDistribution& joint,
                        const ActivityHistograms& h) {
  uint64_t visit_sum = 0;
  for (const uint64_t a : activity.visits) visit_sum += a;
  if (visit_sum != stats.total_steps) {
    throw std::logic_error("activity conservation violated");
  }
  double hs = 0.0, ht = 0.0, sj = 0.0;
  for (const double v : h.spatial) hs += v;
  for (const double v : h.temporal) ht += v;
  for (const double v : joint.mass) sj += v;
  const double scale = std::max(1.0, sj);
  if (std::abs(hs - ht) > 1e-9 * scale || std::abs(hs - sj) > 1e-9 * scale) {
    throw std::logic_error("histogram mass does not match the joint mass");
  }
}

template <typename ActivityFn>
std::vector<double> assemble(const ExtractionConfig& cfg,
                             ActivityFn&& per_network) {
  cfg.validate();
  const FeatureLayout layout = feature_layout(cfg.radii, cfg.thresholds);
  std::vector<double> values(layout.dimension, 0.0);
  const std::vector<int> taus = cfg.thresholds.values();

  size_t seg = 0;
  for (const int r2 : cfg.radii) {
    const OffsetTable table = neighborhood_offsets(r2);
    std::vector<ActivityHistograms> per_tau(taus.size());
    for (size_t ti = 0; ti < taus.size(); ++ti) {
      per_tau[ti] = per_network(table, r2, taus[ti]);
    }
    for (size_t ti = 0; ti < taus.size(); ++ti, ++seg) {
      std::copy(per_tau[ti].spatial.begin(), per_tau[ti].spatial.end(),
                values.begin() + long(layout.segments[seg].offset));
    }
    for (size_t ti = 0; ti < taus.size(); ++ti, ++seg) {
      std::copy(per_tau[ti].temporal.begin(), per_tau[ti].temporal.end(),
                values.begin() + long(layout.segments[seg].offset));
    }
  }
  return values;
}

}  // namespace

DescriptorResult extract_descriptor(const Video& v,
                                    const ExtractionConfig& cfg) {
  DescriptorResult result;
  result.values = assemble(
      cfg,
      [&](const OffsetTable& table, int r2, int tau) -> ActivityHistograms {
        WalkConfig net = cfg.walk;
        net.seed = network_seed(cfg.walk.seed, r2, tau);
        WalkStats stats;
        const ActivityField activity =
            estimate_activity(v, table, tau, net, &stats, cfg.workers);
        const DegreeField degrees = in_degree_field(v, table, tau);
        const JointDistribution joint =
            joint_distribution(activity, degrees, table, net.walks);
        const ActivityHistograms h = activity_histograms(joint);
        if (cfg.self_check) self_check_network(activity, stats, joint, h);
        result.stats.merge(stats);
        return h;
      });
  return result;
}

std::vector<double> extract_descriptor_exact(const Video& v,
                                             const ExtractionConfig& cfg) {
  return assemble(
      cfg,
      [&](const OffsetTable& table, int r2, int tau) -> ActivityHistograms {
        WalkConfig net = cfg.walk;
        net.seed = network_seed(cfg.walk.seed, r2, tau);
        const RealActivityField activity =
            exact_expected_activity(v, table, tau, net);
        const DegreeField degrees = in_degree_field(v, table, tau);
        return activity_histograms(
            joint_distribution(activity, degrees, table, net.walks));
      });
}

const char* part_name(HistogramPart part) {
  return part == HistogramPart::spatial ? "spatial" : "temporal";
}

}  // namespace dtexnet
