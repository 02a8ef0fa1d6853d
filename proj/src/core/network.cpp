/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/network.hpp"

#include <algorithm>
#include <cstdlib>

#include "core/errors.hpp"

namespace dtexnet {

OffsetTable neighborhood_offsets(int r2) {
  if (r2 < 1) throw config_error("squared radius must be >= 1");
  int m = 0;
  while ((m + 1) * (m + 1) <= r2) ++m;

  OffsetTable table;
  table.r2 = r2;
  for (int dt = -m; dt <= m; ++dt) {
    for (int dy = -m; dy <= m; ++dy) {
      for (int dx = -m; dx <= m; ++dx) {
        const int d2 = dx * dx + dy * dy + dt * dt;
        if (d2 == 0 || d2 > r2) continue;
        if (dt == 0) {
          table.spatial.push_back({dx, dy, dt});
        } else {
          table.temporal.push_back({dx, dy, dt});
        }
      }
    }
  }
  table.all = table.spatial;
  table.all.insert(table.all.end(), table.temporal.begin(),
                   table.temporal.end());
  return table;
}

void ThresholdSchedule::validate() const {
  if (tau0 < 1 || tau0 > 255) throw config_error("tau0 must be in [1, 255]");
  if (taui < 1) throw config_error("taui must be >= 1");
  if (nf < 0) throw config_error("nf must be >= 0");
}

std::vector<int> ThresholdSchedule::values() const {
  validate();
  std::vector<int> taus(size_t(nf) + 1);
  for (int k = 0; k <= nf; ++k) taus[size_t(k)] = tau0 + k * taui;
  return taus;
}

std::vector<std::pair<size_t, int>> out_edges(const Video& v, size_t vertex,
                                              const OffsetTable& offsets,
                                              int tau) {
  const int w = int(v.width()), h = int(v.height()), f = int(v.frames());
  const int x = int(vertex % v.width());
  const int y = int((vertex / v.width()) % v.height());
  const int t = int(vertex / (size_t(v.width()) * v.height()));
  const int iv = v[vertex];

  std::vector<std::pair<size_t, int>> edges;
  for (const Offset& o : offsets.all) {
    const int nx = x + o.dx, ny = y + o.dy, nt = t + o.dt;
    if (nx < 0 || nx >= w || ny < 0 || ny >= h || nt < 0 || nt >= f) continue;
    const size_t j = v.index(uint32_t(nx), uint32_t(ny), uint32_t(nt));
    const int d = iv - int(v[j]);
    if (d > 0 && d <= tau) edges.emplace_back(j, d);
  }
  return edges;
}

namespace {

struct FlatOffsets {
  std::vector<int64_t> flat;
  std::vector<Offset> offs;
  int mx = 0, my = 0, mt = 0;  // interior margins

  FlatOffsets(const Video& v, const std::vector<Offset>& group) {
    offs = group;
    flat.reserve(group.size());
    for (const Offset& o : group) {
      flat.push_back(int64_t(o.dx) + int64_t(v.width()) * o.dy +
                     int64_t(v.width()) * v.height() * o.dt);
      mx = std::max(mx, std::abs(o.dx));
      my = std::max(my, std::abs(o.dy));
      mt = std::max(mt, std::abs(o.dt));
    }
  }
};

}  // namespace

DegreeField in_degree_field(const Video& v, const OffsetTable& offsets,
                            int tau) {
  const size_t n = v.vertex_count();
  DegreeField field;
  field.spatial_in.assign(n, 0);
  field.temporal_in.assign(n, 0);

  const FlatOffsets sp(v, offsets.spatial);
  const FlatOffsets tp(v, offsets.temporal);
  const uint8_t* intensity = v.data();
  const int w = int(v.width()), h = int(v.height()), f = int(v.frames());

  size_t idx = 0;
  for (int t = 0; t < f; ++t) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x, ++idx) {
        const int ij = intensity[idx];
        const unsigned range = unsigned(tau - 1);
        uint16_t ks = 0, kt = 0;
        const bool interior_sp = x >= sp.mx && x < w - sp.mx && y >= sp.my &&
                                 y < h - sp.my;
        // An incoming edge u -> j has weight I(u) - I(j); u = j + offset.
        if (interior_sp) {
          for (const int64_t fo : sp.flat) {
            const int d = int(intensity[idx + fo]) - ij;
            ks += unsigned(d - 1) <= range;
          }
        } else {
          for (size_t k = 0; k < sp.offs.size(); ++k) {
            const Offset& o = sp.offs[k];
            const int nx = x + o.dx, ny = y + o.dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const int d = int(intensity[idx + sp.flat[k]]) - ij;
            ks += (d > 0 && d <= tau);
          }
        }
        const bool interior_tp = x >= tp.mx && x < w - tp.mx && y >= tp.my &&
                                 y < h - tp.my && t >= tp.mt && t < f - tp.mt;
        if (interior_tp) {
          for (const int64_t fo : tp.flat) {
            const int d = int(intensity[idx + fo]) - ij;
            kt += unsigned(d - 1) <= range;
          }
        } else {
          for (size_t k = 0; k < tp.offs.size(); ++k) {
            const Offset& o = tp.offs[k];
            const int nx = x + o.dx, ny = y + o.dy, nt = t + o.dt;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h || nt < 0 || nt >= f) {
              continue;
            }
            const int d = int(intensity[idx + tp.flat[k]]) - ij;
            kt += (d > 0 && d <= tau);
          }
        }
        field.spatial_in[idx] = ks;
        field.temporal_in[idx] = kt;
      }
    }
  }
  return field;
}

uint64_t surviving_edge_count(const Video& v, const OffsetTable& offsets,
                              int tau) {
  const DegreeField field = in_degree_field(v, offsets, tau);
  uint64_t total = 0;
  for (size_t i = 0; i < field.spatial_in.size(); ++i) {
    total += field.spatial_in[i];
    total += field.temporal_in[i];
  }
  return total;
}

}  // namespace dtexnet
