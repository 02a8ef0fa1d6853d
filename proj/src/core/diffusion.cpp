/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace dtexnet {

void WalkConfig::validate() const {
  if (walks < 1) throw config_error("walks per vertex must be >= 1");
  if (max_steps < 1) throw config_error("walk step cap must be >= 1");
}

namespace {

// Flattened neighborhood for the walk inner loop. Interior vertices skip all
// border tests; the margins give the interior box per axis.
struct WalkKernel {
  const uint8_t* intensity;
  int w, h, f;
  int tau;
  int nk;
  std::vector<int64_t> flat;
  std::vector<int> dx, dy, dt;
  int mx = 0, my = 0, mt = 0;

  WalkKernel(const Video& v, const OffsetTable& offsets, int tau_in)
      : intensity(v.data()), w(int(v.width())), h(int(v.height())),
        f(int(v.frames())), tau(tau_in), nk(int(offsets.all.size())) {
    flat.reserve(offsets.all.size());
    for (const Offset& o : offsets.all) {
      flat.push_back(int64_t(o.dx) + int64_t(w) * o.dy + int64_t(w) * h * o.dt);
      dx.push_back(o.dx);
      dy.push_back(o.dy);
      dt.push_back(o.dt);
      mx = std::max(mx, std::abs(o.dx));
      my = std::max(my, std::abs(o.dy));
      mt = std::max(mt, std::abs(o.dt));
    }
  }

  bool interior(int x, int y, int t) const {
    return x >= mx && x < w - mx && y >= my && y < h - my && t >= mt &&
           t < f - mt;
  }

  // Writes the running cumulative weight of the surviving out-edges of `idx`
  // into cum[0..nk); entry k repeats the previous value when offset k yields
  // no edge. Returns the total weight (0 marks an absorbing vertex). The
  // weight test is a single unsigned range check and every store is
  // unconditional, so the loop carries no data-dependent branches. With a
  // compile-time NK the loop fully unrolls; NK == 0 is the dynamic fallback.
  template <int NK = 0>
  uint32_t gather(size_t idx, int x, int y, int t, uint32_t* cum) const {
    const int count = NK ? NK : nk;
    const uint8_t* iptr = intensity;
    const int64_t* fptr = flat.data();
    const int iv = iptr[idx];
    const unsigned range = unsigned(tau - 1);
    uint32_t acc = 0;
    if (interior(x, y, t)) {
      for (int k = 0; k < count; ++k) {
        const int d = iv - int(iptr[size_t(int64_t(idx) + fptr[k])]);
        acc += uint32_t(d) * (unsigned(d - 1) <= range);  // 1 <= d <= tau
        cum[k] = acc;
      }
    } else {
      for (int k = 0; k < count; ++k) {
        const int nx = x + dx[k], ny = y + dy[k], nt = t + dt[k];
        if (unsigned(nx) >= unsigned(w) || unsigned(ny) >= unsigned(h) ||
            unsigned(nt) >= unsigned(f)) {
          cum[k] = acc;
          continue;
        }
        const int d = iv - int(iptr[size_t(int64_t(idx) + fptr[k])]);
        acc += uint32_t(d) * (unsigned(d - 1) <= range);
        cum[k] = acc;
      }
    }
    return acc;
  }

  // First offset index whose cumulative weight exceeds the draw. The running
  // total only increases at surviving edges, so the result is always one of
  // them. Counting compares instead of scanning keeps the loop branch-free.
  template <int NK = 0>
  int pick(const uint32_t* cum, uint32_t draw) const {
    const int count = NK ? NK : nk;
    int k = 0;
    for (int i = 0; i < count; ++i) k += (cum[i] <= draw);
    return k;
  }
};

struct WorkerResult {
  std::vector<uint32_t> visits;
  uint64_t steps = 0;
  uint32_t max_length = 0;
};

struct WalkJob {
  const WalkKernel& kernel;
  size_t n;
  uint32_t walks;
  uint32_t cap;
  uint64_t seed;
  std::atomic<size_t>& next_block;
};

constexpr size_t kWalkBlock = 4096;

template <int NK>
void run_walks(const WalkJob& job, WorkerResult& res) {
  const WalkKernel& kernel = job.kernel;
  const int w = kernel.w, h = kernel.h;
  res.visits.assign(job.n, 0);
  std::vector<uint32_t> start_buf(size_t(kernel.nk));
  std::vector<uint32_t> step_buf(size_t(kernel.nk));

  for (;;) {
    const size_t begin = job.next_block.fetch_add(kWalkBlock);
    if (begin >= job.n) break;
    const size_t end = std::min(job.n, begin + kWalkBlock);

    int x = int(begin % size_t(w));
    int y = int((begin / size_t(w)) % size_t(h));
    int t = int(begin / (size_t(w) * size_t(h)));
    for (size_t s = begin; s < end; ++s) {
      const uint32_t tot0 = kernel.gather<NK>(s, x, y, t, start_buf.data());
      if (tot0 > 0) {
        const uint64_t vkey = derive_seed(job.seed, uint64_t(s));
        for (uint32_t m = 0; m < job.walks; ++m) {
          SplitMix64 rng(derive_seed(vkey, m));
          // First hop reuses the start vertex's gathered edges.
          int k = kernel.pick<NK>(
              start_buf.data(),
              uint32_t((static_cast<unsigned __int128>(rng.next()) * tot0) >>
                       64));
          size_t cur = size_t(int64_t(s) + kernel.flat[k]);
          int cx = x + kernel.dx[k];
          int cy = y + kernel.dy[k];
          int ct = t + kernel.dt[k];
          res.visits[cur]++;
          uint32_t len = 1;
          while (len < job.cap) {
            const uint32_t tot =
                kernel.gather<NK>(cur, cx, cy, ct, step_buf.data());
            if (tot == 0) break;
            k = kernel.pick<NK>(
                step_buf.data(),
                uint32_t((static_cast<unsigned __int128>(rng.next()) * tot) >>
                         64));
            cur = size_t(int64_t(cur) + kernel.flat[k]);
            cx += kernel.dx[k];
            cy += kernel.dy[k];
            ct += kernel.dt[k];
            res.visits[cur]++;
            ++len;
          }
          res.steps += len;
          res.max_length = std::max(res.max_length, len);
        }
      }
      if (++x == w) {
        x = 0;
        if (++y == h) {
          y = 0;
          ++t;
        }
      }
    }
  }
}

using WalkRunFn = void (*)(const WalkJob&, WorkerResult&);

WalkRunFn select_walk_run(int nk) {
  switch (nk) {
    case 6: return run_walks<6>;    // r2 = 1
    case 18: return run_walks<18>;  // r2 = 2
    case 26: return run_walks<26>;  // r2 = 3
    case 32: return run_walks<32>;  // r2 = 4
    case 56: return run_walks<56>;  // r2 = 5
    default: return run_walks<0>;
  }
}

}  // namespace

std::vector<std::pair<size_t, double>> step_distribution(
    const Video& v, size_t vertex, const OffsetTable& offsets, int tau) {
  const auto edges = out_edges(v, vertex, offsets, tau);
  uint64_t total = 0;
  for (const auto& [j, wgt] : edges) total += uint64_t(wgt);
  std::vector<std::pair<size_t, double>> dist;
  dist.reserve(edges.size());
  for (const auto& [j, wgt] : edges) {
    dist.emplace_back(j, double(wgt) / double(total));
  }
  return dist;
}

ActivityField estimate_activity(const Video& v, const OffsetTable& offsets,
                                int tau, const WalkConfig& cfg,
                                WalkStats* stats, unsigned workers) {
  cfg.validate();
  if (tau < 1) throw config_error("threshold must be >= 1");

  const size_t n = v.vertex_count();
  const WalkKernel kernel(v, offsets, tau);

  if (workers < 1) workers = 1;
  workers = unsigned(std::min<size_t>(workers, 64));

  std::atomic<size_t> next_block{0};
  std::vector<WorkerResult> results(workers);
  const WalkJob job{kernel, n, cfg.walks, cfg.max_steps, cfg.seed, next_block};
  const WalkRunFn run = select_walk_run(kernel.nk);

  if (workers == 1) {
    run(job, results[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned wi = 0; wi < workers; ++wi) {
      pool.emplace_back(run, std::cref(job), std::ref(results[wi]));
    }
    for (auto& th : pool) th.join();
  }

  ActivityField field;
  field.visits.assign(n, 0);
  WalkStats st;
  st.total_walks = uint64_t(n) * cfg.walks;
  for (const WorkerResult& res : results) {
    for (size_t i = 0; i < n; ++i) field.visits[i] += res.visits[i];
    st.total_steps += res.steps;
    st.max_length = std::max(st.max_length, res.max_length);
  }
  if (stats) *stats = st;
  return field;
}

namespace {

// Order-canonical sum: sort the addends by value first. Fields related by a
// vertex permutation then reduce to bit-identical results.
double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double acc = 0.0;
  for (const double v : values) acc += v;
  return acc;
}

}  // namespace

RealActivityField exact_expected_activity(const Video& v,
                                          const OffsetTable& offsets, int tau,
                                          const WalkConfig& cfg) {
  cfg.validate();
  if (tau < 1) throw config_error("threshold must be >= 1");
  const size_t n = v.vertex_count();
  if (n > 4096) {
    throw config_error(
        "exact_expected_activity is limited to volumes of 4096 vertices");
  }

  const WalkKernel kernel(v, offsets, tau);
  std::vector<uint32_t> buf(size_t(kernel.nk));

  // Total out-weight per vertex; zero marks an absorbing vertex.
  std::vector<uint32_t> out_sum(n, 0);
  {
    size_t idx = 0;
    for (int t = 0; t < kernel.f; ++t) {
      for (int y = 0; y < kernel.h; ++y) {
        for (int x = 0; x < kernel.w; ++x, ++idx) {
          out_sum[idx] = kernel.gather(idx, x, y, t, buf.data());
        }
      }
    }
  }

  std::vector<double> mass(n, 1.0);
  std::vector<double> next(n, 0.0);
  std::vector<double> expected(n, 0.0);
  std::vector<double> contribs;
  contribs.reserve(size_t(kernel.nk));
  std::vector<double> level(n);

  for (uint32_t l = 0; l < cfg.max_steps; ++l) {
    size_t idx = 0;
    for (int t = 0; t < kernel.f; ++t) {
      for (int y = 0; y < kernel.h; ++y) {
        for (int x = 0; x < kernel.w; ++x, ++idx) {
          // Pull incoming mass: u = idx + offset (the table is closed under
          // negation), edge u -> idx with weight I(u) - I(idx).
          contribs.clear();
          const int iv = kernel.intensity[idx];
          const bool inside = kernel.interior(x, y, t);
          for (int k = 0; k < kernel.nk; ++k) {
            if (!inside) {
              const int nx = x + kernel.dx[k], ny = y + kernel.dy[k],
                        nt = t + kernel.dt[k];
              if (nx < 0 || nx >= kernel.w || ny < 0 || ny >= kernel.h ||
                  nt < 0 || nt >= kernel.f) {
                continue;
              }
            }
            const size_t u = size_t(int64_t(idx) + kernel.flat[k]);
            const int d = int(kernel.intensity[u]) - iv;
            if (d > 0 && d <= tau && mass[u] != 0.0) {
              contribs.push_back(mass[u] * (double(d) / double(out_sum[u])));
            }
          }
          next[idx] = sorted_sum(contribs);
        }
      }
    }
    for (size_t i = 0; i < n; ++i) expected[i] += next[i];
    level.assign(next.begin(), next.end());
    const double remaining = sorted_sum(level);
    mass.swap(next);
    if (remaining < 1e-12) break;
  }

  RealActivityField field;
  field.visits.resize(n);
  const double m = double(cfg.walks);
  for (size_t i = 0; i < n; ++i) field.visits[i] = m * expected[i];
  return field;
}

}  // namespace dtexnet
