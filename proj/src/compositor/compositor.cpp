// Copyright 2026 The UVGPT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uvgpt/compositor/compositor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>

namespace uvgpt {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw RasterError(RasterErrc::TruncatedData, "PPM header ends early");
    long long v = 0;
    const auto start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1 << 24)) throw RasterError(RasterErrc::UnsupportedFormat, std::string(what) + " too large");
    }
    if (pos_ == start) {
      throw RasterError(RasterErrc::UnsupportedFormat, std::string("bad PPM ") + what);
    }
    return static_cast<int>(v);
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t blend_channel(std::uint8_t src, std::uint8_t dst, double alpha) {
  const double v = (1.0 - alpha) * src + alpha * dst;
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

RasterImage decode_ppm(std::string_view bytes) {
  if (bytes.size() < 2) throw RasterError(RasterErrc::TruncatedData, "PPM data too short");
  if (bytes[0] != 'P' || bytes[1] != '6') {
    throw RasterError(RasterErrc::UnsupportedFormat, "only binary P6 PPM is supported");
  }
  HeaderReader reader(bytes);
  reader.advance(2);
  const int width = reader.number("width");
  const int height = reader.number("height");
  const int maxval = reader.number("maxval");
  if (maxval != 255) throw RasterError(RasterErrc::UnsupportedFormat, "PPM maxval must be 255");
  if (width <= 0 || height <= 0) throw RasterError(RasterErrc::UnsupportedFormat, "empty PPM");
  if (reader.pos() >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[reader.pos()]))) {
    throw RasterError(RasterErrc::TruncatedData, "PPM header ends early");
  }
  reader.advance(1);

  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - reader.pos() < need) {
    throw RasterError(RasterErrc::TruncatedData, "PPM pixel data is truncated");
  }
  RasterImage img;
  img.width = width;
  img.height = height;
  const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data() + reader.pos());
  img.pixels.assign(data, data + need);
  return img;
}

std::string encode_ppm(const RasterImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

RasterImage read_ppm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RasterError(RasterErrc::TruncatedData, "cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

RasterImage draw_box(const RasterImage& image, const BBox& box, Rgb color, int stroke) {
  RasterImage out = image;
  const auto b = clamp_box(box, image.width, image.height);
  if (!b || stroke <= 0) return out;
  for (int y = b->y; y < b->y + b->h; ++y) {
    const bool edge_row = y < b->y + stroke || y >= b->y + b->h - stroke;
    for (int x = b->x; x < b->x + b->w; ++x) {
      if (edge_row || x < b->x + stroke || x >= b->x + b->w - stroke) out.set(x, y, color);
    }
  }
  return out;
}

RasterImage blend_mask(const RasterImage& image, const InstanceMask& mask, Rgb color,
                       double alpha) {
  if (mask.width() != image.width || mask.height() != image.height) {
    throw RasterError(RasterErrc::FrameMismatch, "mask frame differs from image");
  }
  RasterImage out = image;
  std::size_t pixel = 0;
  bool foreground = false;
  for (auto run : mask.runs()) {
    if (foreground) {
      for (std::size_t p = pixel; p < pixel + run; ++p) {
        out.pixels[p * 3] = blend_channel(image.pixels[p * 3], color.r, alpha);
        out.pixels[p * 3 + 1] = blend_channel(image.pixels[p * 3 + 1], color.g, alpha);
        out.pixels[p * 3 + 2] = blend_channel(image.pixels[p * 3 + 2], color.b, alpha);
      }
    }
    pixel += run;
    foreground = !foreground;
  }
  return out;
}

RasterImage integrate(std::span<const RasterImage> images) {
  if (images.empty()) throw RasterError(RasterErrc::EmptyList, "nothing to integrate");
  int width = 0;
  int height = 0;
  for (const auto& img : images) {
    width += img.width;
    height = std::max(height, img.height);
  }
  RasterImage out(width, height);
  int x0 = 0;
  for (const auto& img : images) {
    for (int y = 0; y < img.height; ++y) {
      const auto* src = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
      auto* dst = out.pixels.data() + (static_cast<std::size_t>(y) * width + x0) * 3;
      std::copy_n(src, static_cast<std::size_t>(img.width) * 3, dst);
    }
    x0 += img.width;
  }
  return out;
}

Rgb hsv_to_rgb(double hue_degrees, double saturation, double value) {
  const double h = std::fmod(std::fmod(hue_degrees, 360.0) + 360.0, 360.0);
  const double c = value * saturation;
  const double x = c * (1.0 - std::fabs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = value - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

Rgb palette_color(int instance_id) {
  return hsv_to_rgb(std::fmod(instance_id * 137.508, 360.0), 1.0, 1.0);
}

RasterImage render_annotations(const RasterImage& base, std::span<const Detection> boxed,
                               std::span<const InstanceMask> masks) {
  std::vector<const InstanceMask*> ordered;
  for (const auto& m : masks) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->instance_id() < b->instance_id();
  });
  RasterImage out = base;
  for (const auto* m : ordered) out = blend_mask(out, *m, palette_color(m->instance_id()));
  for (const auto& d : boxed) out = draw_box(out, d.bbox, palette_color(d.instance_id));
  return out;
}

}  // namespace uvgpt
