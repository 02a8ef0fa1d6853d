/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string>

#include "core/video.hpp"

namespace dtexnet {

enum class VideoFormat {
  auto_detect,  // directory -> frame_dir, file -> raw_gray3d
  raw_gray3d,
  frame_dir,
};

/// Loads a video volume.
///
/// frame_dir: a directory of PNG/PGM images of identical dimensions, one per
/// frame, ordered byte-wise lexicographically by filename. RGB images are
/// converted to 8-bit luminance with round(0.299 R + 0.587 G + 0.114 B).
///
/// raw_gray3d: magic "DT3D", then width/height/frames as little-endian
/// uint32, then W*H*T intensity bytes (x fastest, then y, then t).
Video load_video(const std::string& path,
                 VideoFormat format = VideoFormat::auto_detect);

void save_raw_gray3d(const Video& v, const std::string& path);

/// Writes one 8-bit grayscale frame as binary PGM (P5).
void save_pgm(const uint8_t* pixels, uint32_t width, uint32_t height,
              const std::string& path);

/// 8-bit luminance of an RGB triple; identical for identical inputs.
inline uint8_t rgb_to_gray(uint8_t r, uint8_t g, uint8_t b) {
  return static_cast<uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

}  // namespace dtexnet
