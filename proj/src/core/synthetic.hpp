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

#include "core/video.hpp"

namespace dtexnet {

enum class MotionClass { circular, linear, random_walk, none };

const char* motion_name(MotionClass m);
MotionClass motion_from_name(const std::string& name);

/// A moving high-frequency noise patch over an animated wave background.
/// Start positions, orbit centers and texture noise all derive from `seed`.
struct MotionSpec {
  MotionClass motion = MotionClass::none;
  int patch_size = 13;        // odd sizes keep the patch center on the grid
  double speed = 2.0;         // pixels per frame (moving classes)
  double angle_deg = 0.0;     // heading for linear motion, 0 = +x
  double orbit_radius = 30.0; // pixels (circular)
  uint64_t seed = 1;
};

/// Renders one synthetic motion video. The patch follows the motion law of
/// spec.motion: fixed position (none), constant velocity with specular border
/// reflection (linear), a circular orbit traversed at `speed` (circular), or
/// a seeded random step of magnitude `speed` per frame (random).
Video gen_motion_video(const MotionSpec& spec, uint32_t width, uint32_t height,
                       uint32_t frames);

struct CorpusParams {
  std::string out_dir;
  uint32_t per_class = 30;
  uint32_t width = 220;
  uint32_t height = 180;
  uint32_t frames = 60;
  int patch_size = 0;  // 0 = pick from the frame size
  uint64_t seed = 1;
};

struct CorpusEntry {
  std::string path;  // relative to the manifest
  std::string label;
  MotionSpec spec;
};

/// Generates per_class videos for each of the four motion classes, writes
/// them as raw_gray3d under <out_dir>/videos/, and writes
/// <out_dir>/manifest.json. Bit-reproducible for a fixed seed.
std::vector<CorpusEntry> gen_corpus(const CorpusParams& params);

}  // namespace dtexnet
