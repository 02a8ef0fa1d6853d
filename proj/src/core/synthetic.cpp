/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/video_io.hpp"

namespace fs = std::filesystem;

namespace dtexnet {

const char* motion_name(MotionClass m) {
  switch (m) {
    case MotionClass::circular: return "circular";
    case MotionClass::linear: return "linear";
    case MotionClass::random_walk: return "random";
    case MotionClass::none: return "none";
  }
  return "none";
}

MotionClass motion_from_name(const std::string& name) {
  if (name == "circular") return MotionClass::circular;
  if (name == "linear") return MotionClass::linear;
  if (name == "random") return MotionClass::random_walk;
  if (name == "none") return MotionClass::none;
  throw config_error("unknown motion class: " + name);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double reflect_into(double c, double lo, double hi) {
  // Specular reflection keeps the patch center inside [lo, hi].
  while (c < lo || c > hi) {
    if (c < lo) c = 2.0 * lo - c;
    if (c > hi) c = 2.0 * hi - c;
  }
  return c;
}

// One wave family serves the whole corpus: videos differ in phase, small
// direction jitter and the noise realization, not in wave geometry, so the
// background contributes a near-constant histogram floor to every class.
struct WaveBackground {
  double kx1, ky1, w1, p1, a1;
  double kx2, ky2, w2, p2, a2;
  int noise_amp;

  explicit WaveBackground(SplitMix64& rng) {
    const double th1 = 30.0 * kPi / 180.0;
    const double lam1 = 11.0;
    kx1 = 2.0 * kPi / lam1 * std::cos(th1);
    ky1 = 2.0 * kPi / lam1 * std::sin(th1);
    w1 = 0.35;
    p1 = 2.0 * kPi * rng.next_unit();
    a1 = 34.0;
    const double th2 = 120.0 * kPi / 180.0;
    const double lam2 = 6.5;
    kx2 = 2.0 * kPi / lam2 * std::cos(th2);
    ky2 = 2.0 * kPi / lam2 * std::sin(th2);
    w2 = 0.62;
    p2 = 2.0 * kPi * rng.next_unit();
    a2 = 16.0;
    noise_amp = 10;
  }
};

uint8_t clamp_byte(double v) {
  const long r = std::lround(v);
  return uint8_t(std::clamp(r, 0L, 255L));
}

// Background intensities snap to 12-level steps. Flat plateaus separate the
// smooth waves from the full-contrast patch: equal neighbors carry no edge,
// so small-threshold networks are driven by the patch texture.
uint8_t quantize_background(double v) {
  const long r = std::lround(v / 12.0) * 12;
  return uint8_t(std::clamp(r, 0L, 252L));
}

}  // namespace

Video gen_motion_video(const MotionSpec& spec, uint32_t width, uint32_t height,
                       uint32_t frames) {
  const int w = int(width), h = int(height), tf = int(frames);
  const int patch = spec.patch_size;
  if (patch < 3) throw config_error("patch size must be >= 3");
  const double margin = patch / 2 + 2;
  const double lo_x = margin, hi_x = w - 1 - margin;
  const double lo_y = margin, hi_y = h - 1 - margin;
  if (lo_x >= hi_x || lo_y >= hi_y) {
    throw config_error("patch does not fit inside the frame");
  }
  const bool moving = spec.motion != MotionClass::none;
  if (moving && spec.speed <= 0.0) {
    throw config_error("speed must be positive for moving classes");
  }

  SplitMix64 setup(derive_seed(spec.seed, 0x5E70));
  const WaveBackground bg(setup);

  // Per-frame patch centers; sweep holds the orbit angle travelled since the
  // first frame (circular motion carries its texture around with it).
  std::vector<double> cx(frames), cy(frames), sweep(frames, 0.0);
  SplitMix64 place(derive_seed(spec.seed, 0x905E));
  switch (spec.motion) {
    case MotionClass::none: {
      const double px = lo_x + (hi_x - lo_x) * place.next_unit();
      const double py = lo_y + (hi_y - lo_y) * place.next_unit();
      for (uint32_t t = 0; t < frames; ++t) {
        cx[t] = px;
        cy[t] = py;
      }
      break;
    }
    case MotionClass::linear: {
      double px = lo_x + (hi_x - lo_x) * place.next_unit();
      double py = lo_y + (hi_y - lo_y) * place.next_unit();
      const double rad = spec.angle_deg * kPi / 180.0;
      double vx = spec.speed * std::cos(rad);
      double vy = spec.speed * std::sin(rad);
      for (uint32_t t = 0; t < frames; ++t) {
        cx[t] = px;
        cy[t] = py;
        px += vx;
        py += vy;
        if (px < lo_x || px > hi_x) {
          px = reflect_into(px, lo_x, hi_x);
          vx = -vx;
        }
        if (py < lo_y || py > hi_y) {
          py = reflect_into(py, lo_y, hi_y);
          vy = -vy;
        }
      }
      break;
    }
    case MotionClass::circular: {
      const double r = spec.orbit_radius;
      if (r <= 0.0) throw config_error("orbit radius must be positive");
      if (lo_x + r > hi_x - r || lo_y + r > hi_y - r) {
        throw config_error("patch orbit does not fit inside the frame");
      }
      const double ox = (lo_x + r) + (hi_x - lo_x - 2.0 * r) * place.next_unit();
      const double oy = (lo_y + r) + (hi_y - lo_y - 2.0 * r) * place.next_unit();
      const double theta0 = 2.0 * kPi * place.next_unit();
      const double omega = spec.speed / r;  // tangential speed -> angular
      for (uint32_t t = 0; t < frames; ++t) {
        cx[t] = ox + r * std::cos(theta0 + omega * t);
        cy[t] = oy + r * std::sin(theta0 + omega * t);
        // The texture turns with the orbit, tidally locked; the rim shear
        // separates orbiting from plain translation at the same speed.
        sweep[t] = omega * t;
      }
      break;
    }
    case MotionClass::random_walk: {
      double px = lo_x + (hi_x - lo_x) * place.next_unit();
      double py = lo_y + (hi_y - lo_y) * place.next_unit();
      for (uint32_t t = 0; t < frames; ++t) {
        cx[t] = px;
        cy[t] = py;
        const double dir = 2.0 * kPi * place.next_unit();
        px = reflect_into(px + spec.speed * std::cos(dir), lo_x, hi_x);
        py = reflect_into(py + spec.speed * std::sin(dir), lo_y, hi_y);
      }
      break;
    }
  }

  // The patch carries a persistent full-contrast noise texture: pixel values
  // come from a fixed lattice noise field sampled in patch coordinates, so
  // the texture travels rigidly with the motion (and turns with the orbit
  // for circular motion) instead of re-rolling every frame.
  const uint64_t patch_key = derive_seed(spec.seed, 0x9A7C);
  auto patch_texture = [patch_key](long qx, long qy) -> uint8_t {
    return uint8_t(derive_seed(derive_seed(patch_key, uint64_t(qx)),
                               uint64_t(qy)) &
                   0xFF);
  };

  std::vector<uint8_t> samples(size_t(w) * h * tf);
  for (int t = 0; t < tf; ++t) {
    uint8_t* frame = samples.data() + size_t(t) * w * h;
    SplitMix64 bg_noise(derive_seed(derive_seed(spec.seed, 0xB6), uint64_t(t)));
    const double ph1 = bg.w1 * t + bg.p1;
    const double ph2 = bg.w2 * t + bg.p2;
    size_t o = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x, ++o) {
        const double v = 128.0 +
                         bg.a1 * std::sin(bg.kx1 * x + bg.ky1 * y + ph1) +
                         bg.a2 * std::sin(bg.kx2 * x + bg.ky2 * y + ph2);
        const int noise = int(bg_noise.next_below(uint32_t(2 * bg.noise_amp + 1))) -
                          bg.noise_amp;
        frame[o] = quantize_background(v + noise);
      }
    }
    const double cxt = cx[size_t(t)], cyt = cy[size_t(t)];
    const double cosr = std::cos(-sweep[size_t(t)]);
    const double sinr = std::sin(-sweep[size_t(t)]);
    const int tlx = int(std::lround(cxt)) - patch / 2;
    const int tly = int(std::lround(cyt)) - patch / 2;
    for (int py = 0; py < patch; ++py) {
      uint8_t* row = frame + size_t(tly + py) * w + tlx;
      const double ry = (tly + py) - cyt;
      for (int px = 0; px < patch; ++px) {
        const double rx = (tlx + px) - cxt;
        const double qx = cosr * rx - sinr * ry;
        const double qy = sinr * rx + cosr * ry;
        row[px] = patch_texture(std::lround(qx), std::lround(qy));
      }
    }
  }
  return Video(width, height, frames, std::move(samples));
}

std::vector<CorpusEntry> gen_corpus(const CorpusParams& params) {
  if (params.per_class < 1) throw config_error("per_class must be >= 1");
  const uint32_t dim_min = std::min(params.width, params.height);
  int base_patch = params.patch_size;
  if (base_patch == 0) {
    base_patch = std::max(7, int(std::lround(0.21 * dim_min)) | 1);
  }

  const fs::path out_dir(params.out_dir);
  const fs::path video_dir = out_dir / "videos";
  std::error_code ec;
  fs::create_directories(video_dir, ec);
  if (ec) throw io_error("cannot create corpus directory: " + params.out_dir);

  const MotionClass classes[4] = {MotionClass::circular, MotionClass::linear,
                                  MotionClass::random_walk, MotionClass::none};
  std::vector<CorpusEntry> entries;
  entries.reserve(size_t(params.per_class) * 4);

  uint32_t index = 0;
  for (const MotionClass cls : classes) {
    for (uint32_t j = 0; j < params.per_class; ++j, ++index) {
      const uint64_t vid_seed = derive_seed(params.seed, index);
      SplitMix64 jitter(derive_seed(vid_seed, 0x7177E7));

      MotionSpec spec;
      spec.motion = cls;
      spec.seed = vid_seed;
      spec.patch_size =
          std::max(5, int(std::lround(base_patch * (0.95 + 0.10 * jitter.next_unit()))) | 1);
      // Speed regimes per class: slow coherent translation for linear,
      // medium orbital speed (plus the locked turn of the patch texture) for
      // circular, large direction-changing jumps for the random walk, rest
      // for none. The bands do not overlap, so each motion law lives in its
      // own coherence regime of the one-frame network.
      switch (cls) {
        case MotionClass::linear:
          spec.speed = 0.45 + 0.20 * jitter.next_unit();
          break;
        case MotionClass::circular:
          spec.speed = 1.00 + 0.20 * jitter.next_unit();
          break;
        case MotionClass::random_walk:
          spec.speed = 2.60 + 0.60 * jitter.next_unit();
          break;
        case MotionClass::none:
          spec.speed = 0.0;
          break;
      }
      spec.angle_deg = 360.0 * jitter.next_unit();
      const double max_orbit =
          0.5 * (dim_min - 1.0) - (spec.patch_size / 2 + 2) - 1.0;
      // Small orbits complete at least one revolution per clip, so every
      // heading contributes and the start angle stops mattering.
      spec.orbit_radius =
          std::min((0.09 + 0.02 * jitter.next_unit()) * dim_min, max_orbit);
      if (cls == MotionClass::circular && spec.orbit_radius <= 0.0) {
        throw config_error("frame too small for a circular orbit");
      }

      const Video video =
          gen_motion_video(spec, params.width, params.height, params.frames);

      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03u.dt3d", motion_name(cls), j);
      const std::string rel = std::string("videos/") + name;
      save_raw_gray3d(video, (out_dir / rel).string());
      entries.push_back({rel, motion_name(cls), spec});
    }
  }

  nlohmann::json manifest = nlohmann::json::array();
  for (const CorpusEntry& e : entries) {
    nlohmann::json item;
    item["path"] = e.path;
    item["label"] = e.label;
    item["motion"] = {
        {"class", motion_name(e.spec.motion)},
        {"patch_size", e.spec.patch_size},
        {"speed", e.spec.speed},
        {"angle_deg", e.spec.angle_deg},
        {"orbit_radius", e.spec.orbit_radius},
        {"seed", e.spec.seed},
    };
    manifest.push_back(item);
  }
  std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
  if (!out) throw io_error("cannot write corpus manifest");
  out << manifest.dump(2) << "\n";
  return entries;
}

}  // namespace dtexnet
