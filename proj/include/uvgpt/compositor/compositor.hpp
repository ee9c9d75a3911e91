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

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uvgpt/core/raster.hpp"
#include "uvgpt/core/types.hpp"

namespace uvgpt {

enum class RasterErrc { UnsupportedFormat, TruncatedData, FrameMismatch, EmptyList };

class RasterError : public std::runtime_error {
 public:
  RasterError(RasterErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  RasterErrc code() const noexcept { return code_; }

 private:
  RasterErrc code_;
};

/// Binary P6 with maxval 255. Comments in the header are accepted.
RasterImage decode_ppm(std::string_view bytes);
/// "P6\n<w> <h>\n255\n" followed by the raw RGB triples.
std::string encode_ppm(const RasterImage& image);

RasterImage read_ppm_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

inline constexpr int kDefaultStroke = 3;
inline constexpr double kDefaultAlpha = 0.5;

/// Outline of `stroke` pixels drawn inside the (clamped) box.
RasterImage draw_box(const RasterImage& image, const BBox& box, Rgb color,
                     int stroke = kDefaultStroke);

/// out = round_half_up((1 - alpha) * src + alpha * color) on foreground
/// pixels; all other pixels are copied unchanged.
RasterImage blend_mask(const RasterImage& image, const InstanceMask& mask, Rgb color,
                       double alpha = kDefaultAlpha);

/// Side-by-side concatenation in input order, bottom-padded with black.
RasterImage integrate(std::span<const RasterImage> images);

Rgb hsv_to_rgb(double hue_degrees, double saturation, double value);

/// Golden-angle palette: hue = (i * 137.508) mod 360 at full saturation and value.
Rgb palette_color(int instance_id);

/// Masks blended in ascending instance id, then boxes outlined, each in its
/// instance's palette color.
RasterImage render_annotations(const RasterImage& base, std::span<const Detection> boxed,
                               std::span<const InstanceMask> masks);

}  // namespace uvgpt
