/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/network.hpp"
#include "core/video.hpp"

namespace dtexnet {

struct WalkConfig {
  uint32_t walks = 50;       // walks started per vertex
  uint32_t max_steps = 1000; // step cap per walk
  uint64_t seed = 1;

  void validate() const;
};

struct WalkStats {
  uint64_t total_walks = 0;
  uint64_t total_steps = 0;
  uint32_t max_length = 0;

  double mean_length() const {
    return total_walks ? double(total_steps) / double(total_walks) : 0.0;
  }
  void merge(const WalkStats& other) {
    total_walks += other.total_walks;
    total_steps += other.total_steps;
    max_length = std::max(max_length, other.max_length);
  }
};

/// Per-vertex visit counts from Monte Carlo walks.
struct ActivityField {
  std::vector<uint64_t> visits;
};

/// Per-vertex expected visit counts (deterministic oracle).
struct RealActivityField {
  std::vector<double> visits;
};

/// Transition probabilities out of `vertex`: weight-proportional over the
/// surviving out-edges. Empty when the vertex is absorbing.
std::vector<std::pair<size_t, double>> step_distribution(
    const Video& v, size_t vertex, const OffsetTable& offsets, int tau);

/// Runs cfg.walks capped random walks from every vertex. A walk repeatedly
/// samples the next vertex from the weight-proportional distribution; every
/// arrival counts one visit (the starting placement does not). The walk ends
/// on arrival at a vertex with no surviving out-edges or after cfg.max_steps
/// steps. Output is identical for a given seed at any worker count.
ActivityField estimate_activity(const Video& v, const OffsetTable& offsets,
                                int tau, const WalkConfig& cfg,
                                WalkStats* stats = nullptr,
                                unsigned workers = 1);

/// Deterministic expectation of estimate_activity: iterates a row vector of
/// ones through the row-substochastic transition operator, accumulating
/// expected arrivals for up to cfg.max_steps levels, with early exit once the
/// in-flight mass drops below 1e-12. All reductions use value-sorted
/// summation, so the field is bit-exactly equivariant under frame rotation.
/// Guarded to volumes of at most 4096 vertices.
RealActivityField exact_expected_activity(const Video& v,
                                          const OffsetTable& offsets, int tau,
                                          const WalkConfig& cfg);

}  // namespace dtexnet
