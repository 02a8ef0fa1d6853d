/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dtexnet {

/// Grayscale video volume. Samples are stored x-fastest, then y, then t, so
/// frame t occupies the contiguous range [t*W*H, (t+1)*W*H).
class Video {
 public:
  Video(uint32_t width, uint32_t height, uint32_t frames,
        std::vector<uint8_t> samples);

  static Video filled(uint32_t width, uint32_t height, uint32_t frames,
                      uint8_t value);

  uint32_t width() const { return width_; }
  uint32_t height() const { return height_; }
  uint32_t frames() const { return frames_; }
  size_t vertex_count() const { return samples_.size(); }

  size_t index(uint32_t x, uint32_t y, uint32_t t) const {
    return x + size_t(width_) * (y + size_t(height_) * t);
  }
  uint8_t at(uint32_t x, uint32_t y, uint32_t t) const {
    return samples_[index(x, y, t)];
  }
  uint8_t operator[](size_t i) const { return samples_[i]; }

  const std::vector<uint8_t>& samples() const { return samples_; }
  const uint8_t* data() const { return samples_.data(); }

 private:
  uint32_t width_;
  uint32_t height_;
  uint32_t frames_;
  std::vector<uint8_t> samples_;
};

/// Rotates every frame by quarter_turns * 90 degrees. One turn maps the input
/// sample (x, y, t) to (H-1-y, x, t) of an H x W output frame, so four turns
/// reproduce the input exactly.
Video rotate90(const Video& v, int quarter_turns);

/// Flat index that input sample `idx` of a WxH video occupies after
/// rotate90(., quarter_turns). Used to permute per-vertex fields.
size_t rotate90_index(uint32_t width, uint32_t height, int quarter_turns,
                      size_t idx);

}  // namespace dtexnet
