/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/video_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include "core/errors.hpp"

namespace fs = std::filesystem;

namespace dtexnet {
namespace {

struct Frame {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> gray;
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

Frame load_png(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw io_error("cannot open image: " + path);

  png_byte header[8] = {0};
  if (std::fread(header, 1, 8, fp.get()) != 8 ||
      png_sig_cmp(header, 0, 8) != 0) {
    throw io_error("not a PNG file: " + path);
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw io_error("libpng init failed");
  }

  std::vector<uint8_t> interleaved;
  uint32_t width = 0, height = 0;
  int channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("corrupt PNG file: " + path);
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);

  png_read_update_info(png, info);
  channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("unsupported PNG channel layout in " + path);
  }

  const size_t rowbytes = png_get_rowbytes(png, info);
  interleaved.resize(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (uint32_t y = 0; y < height; ++y) {
    rows[y] = interleaved.data() + size_t(y) * rowbytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Frame frame;
  frame.width = width;
  frame.height = height;
  frame.gray.resize(size_t(width) * height);
  if (channels == 1) {
    for (uint32_t y = 0; y < height; ++y) {
      std::memcpy(&frame.gray[size_t(y) * width],
                  &interleaved[size_t(y) * rowbytes], width);
    }
  } else {
    for (uint32_t y = 0; y < height; ++y) {
      const uint8_t* src = &interleaved[size_t(y) * rowbytes];
      uint8_t* dst = &frame.gray[size_t(y) * width];
      for (uint32_t x = 0; x < width; ++x) {
        dst[x] = rgb_to_gray(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
      }
    }
  }
  return frame;
}

int pgm_next_token(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  return c;
}

unsigned pgm_read_uint(std::istream& in, const std::string& path) {
  int c = pgm_next_token(in);
  if (c == EOF || !std::isdigit(c)) throw io_error("malformed PGM: " + path);
  unsigned value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + unsigned(c - '0');
    c = in.get();
  }
  return value;
}

Frame load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open image: " + path);
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || (m1 != '5' && m1 != '2')) {
    throw io_error("not a PGM file: " + path);
  }
  const bool binary = (m1 == '5');
  Frame frame;
  frame.width = pgm_read_uint(in, path);
  frame.height = pgm_read_uint(in, path);
  const unsigned maxval = pgm_read_uint(in, path);
  if (frame.width == 0 || frame.height == 0 || maxval == 0 || maxval > 255) {
    throw io_error("unsupported PGM header in " + path);
  }
  const size_t n = size_t(frame.width) * frame.height;
  frame.gray.resize(n);
  if (binary) {
    // Header ends with exactly one whitespace byte, already consumed by the
    // maxval scan above.
    in.read(reinterpret_cast<char*>(frame.gray.data()),
            std::streamsize(n));
    if (size_t(in.gcount()) != n) throw io_error("truncated PGM: " + path);
  } else {
    for (size_t i = 0; i < n; ++i) {
      const unsigned v = pgm_read_uint(in, path);
      if (v > maxval) throw io_error("PGM sample out of range: " + path);
      frame.gray[i] = uint8_t(v);
    }
  }
  return frame;
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return e;
}

Video load_frame_dir(const std::string& path) {
  if (!fs::is_directory(path)) {
    throw io_error("frame directory not found: " + path);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower_ext(entry.path());
    if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
  }
  // Byte-wise lexicographic order on the filename fixes the frame order.
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (files.empty()) {
    throw io_error("no PNG/PGM frames in directory: " + path);
  }

  std::vector<uint8_t> samples;
  uint32_t width = 0, height = 0;
  for (size_t t = 0; t < files.size(); ++t) {
    const std::string file = files[t].string();
    Frame frame = (lower_ext(files[t]) == ".png") ? load_png(file)
                                                  : load_pgm(file);
    if (t == 0) {
      width = frame.width;
      height = frame.height;
      samples.reserve(size_t(width) * height * files.size());
    } else if (frame.width != width || frame.height != height) {
      throw io_error("frame dimension mismatch in " + path + " at " + file);
    }
    samples.insert(samples.end(), frame.gray.begin(), frame.gray.end());
  }
  return Video(width, height, uint32_t(files.size()), std::move(samples));
}

constexpr char kRawMagic[4] = {'D', 'T', '3', 'D'};

uint32_t read_le32(const uint8_t* p) {
  return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
         (uint32_t(p[3]) << 24);
}

void write_le32(std::ostream& out, uint32_t v) {
  const uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16),
                        uint8_t(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

Video load_raw_gray3d(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open video: " + path);
  uint8_t header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (in.gcount() != 16 || std::memcmp(header, kRawMagic, 4) != 0) {
    throw io_error("not a raw_gray3d file: " + path);
  }
  const uint32_t w = read_le32(header + 4);
  const uint32_t h = read_le32(header + 8);
  const uint32_t t = read_le32(header + 12);
  if (w < 1 || h < 1 || t < 1) {
    throw io_error("invalid raw_gray3d dimensions in " + path);
  }
  const uint64_t n64 = uint64_t(w) * h * t;
  if (n64 > (uint64_t(1) << 34)) {
    throw io_error("raw_gray3d volume too large in " + path);
  }
  std::vector<uint8_t> samples(static_cast<size_t>(n64));
  in.read(reinterpret_cast<char*>(samples.data()), std::streamsize(n64));
  if (uint64_t(in.gcount()) != n64) {
    throw io_error("truncated raw_gray3d file: " + path);
  }
  return Video(w, h, t, std::move(samples));
}

}  // namespace

Video load_video(const std::string& path, VideoFormat format) {
  if (format == VideoFormat::auto_detect) {
    format = fs::is_directory(path) ? VideoFormat::frame_dir
                                    : VideoFormat::raw_gray3d;
  }
  if (format == VideoFormat::frame_dir) return load_frame_dir(path);
  return load_raw_gray3d(path);
}

void save_raw_gray3d(const Video& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write video: " + path);
  out.write(kRawMagic, 4);
  write_le32(out, v.width());
  write_le32(out, v.height());
  write_le32(out, v.frames());
  out.write(reinterpret_cast<const char*>(v.data()),
            std::streamsize(v.vertex_count()));
  if (!out) throw io_error("write failed: " + path);
}

void save_pgm(const uint8_t* pixels, uint32_t width, uint32_t height,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write image: " + path);
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels),
            std::streamsize(size_t(width) * height));
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace dtexnet
