/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/video.hpp"

#include "core/errors.hpp"

namespace dtexnet {

Video::Video(uint32_t width, uint32_t height, uint32_t frames,
             std::vector<uint8_t> samples)
    : width_(width), height_(height), frames_(frames),
      samples_(std::move(samples)) {
  if (width_ < 1 || height_ < 1 || frames_ < 1) {
    throw config_error("video dimensions must be at least 1x1x1");
  }
  const size_t expected = size_t(width_) * height_ * frames_;
  if (samples_.size() != expected) {
    throw config_error("video sample count does not match dimensions");
  }
}

Video Video::filled(uint32_t width, uint32_t height, uint32_t frames,
                    uint8_t value) {
  return Video(width, height, frames,
               std::vector<uint8_t>(size_t(width) * height * frames, value));
}

namespace {

Video rotate_once(const Video& v) {
  const uint32_t w = v.width(), h = v.height(), t = v.frames();
  std::vector<uint8_t> out(v.vertex_count());
  // Output frame is h x w: out(x', y', t) = in(y', h-1-x', t).
  size_t o = 0;
  for (uint32_t f = 0; f < t; ++f) {
    for (uint32_t yo = 0; yo < w; ++yo) {
      for (uint32_t xo = 0; xo < h; ++xo) {
        out[o++] = v.at(yo, h - 1 - xo, f);
      }
    }
  }
  return Video(h, w, t, std::move(out));
}

}  // namespace

Video rotate90(const Video& v, int quarter_turns) {
  int q = ((quarter_turns % 4) + 4) % 4;
  Video out = v;
  for (; q > 0; --q) out = rotate_once(out);
  return out;
}

size_t rotate90_index(uint32_t width, uint32_t height, int quarter_turns,
                      size_t idx) {
  uint32_t w = width, h = height;
  uint32_t x = uint32_t(idx % w);
  uint32_t y = uint32_t((idx / w) % h);
  const size_t f = idx / (size_t(w) * h);
  int q = ((quarter_turns % 4) + 4) % 4;
  for (; q > 0; --q) {
    const uint32_t nx = h - 1 - y;
    const uint32_t ny = x;
    x = nx;
    y = ny;
    std::swap(w, h);
  }
  return x + size_t(w) * (y + size_t(h) * f);
}

}  // namespace dtexnet
