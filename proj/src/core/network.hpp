/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core/video.hpp"

namespace dtexnet {

// The video network is implicit: vertices are pixels, and a directed edge
// i -> j exists exactly when j lies within the connection radius of i and
// I(i) > I(j); its weight is the intensity drop I(i) - I(j). Thresholding at
// tau keeps edges with weight in (0, tau]. Nothing is ever materialized;
// every query recomputes from the offset table and the intensities.

struct Offset {
  int dx = 0;
  int dy = 0;
  int dt = 0;
};

/// All nonzero lattice offsets with dx^2+dy^2+dt^2 <= r2, split into
/// same-frame (spatial) and cross-frame (temporal) groups. Both groups are
/// closed under negation.
struct OffsetTable {
  int r2 = 1;
  std::vector<Offset> spatial;   // dt == 0
  std::vector<Offset> temporal;  // dt != 0
  std::vector<Offset> all;       // spatial then temporal, enumeration order

  size_t spatial_bins() const { return spatial.size() + 1; }
  size_t temporal_bins() const { return temporal.size() + 1; }
};

OffsetTable neighborhood_offsets(int r2);

/// Thresholds tau0 + k*taui for k = 0..nf.
struct ThresholdSchedule {
  int tau0 = 1;
  int taui = 1;
  int nf = 0;

  void validate() const;
  std::vector<int> values() const;
};

/// Per-vertex counts of surviving incoming edges, split by the same-frame /
/// cross-frame origin of the edge.
struct DegreeField {
  std::vector<uint16_t> spatial_in;
  std::vector<uint16_t> temporal_in;
};

/// Weight of the directed edge i -> j, if it exists. The caller is
/// responsible for j - i being a table offset.
inline std::optional<int> edge_weight(const Video& v, size_t i, size_t j) {
  const int d = int(v[i]) - int(v[j]);
  if (d > 0) return d;
  return std::nullopt;
}

/// Surviving out-edges of `vertex` at threshold tau: (target index, weight).
std::vector<std::pair<size_t, int>> out_edges(const Video& v, size_t vertex,
                                              const OffsetTable& offsets,
                                              int tau);

DegreeField in_degree_field(const Video& v, const OffsetTable& offsets,
                            int tau);

/// Total number of surviving directed edges at threshold tau.
uint64_t surviving_edge_count(const Video& v, const OffsetTable& offsets,
                              int tau);

}  // namespace dtexnet
