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

#include "uvgpt/core/mask.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "uvgpt/core/types.hpp"

namespace uvgpt {

namespace {

struct RunViolation {
  CoreErrc code;
  std::string message;
};

std::optional<RunViolation> find_violation(std::span<const std::uint32_t> runs, int width,
                                           int height) {
  if (width <= 0 || height <= 0) {
    return RunViolation{CoreErrc::SizeMismatch, "mask frame must be positive"};
  }
  std::uint64_t total = 0;
  std::uint64_t foreground = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i > 0 && runs[i] == 0) {
      return RunViolation{CoreErrc::InvalidRuns,
                          "run " + std::to_string(i) + " is zero-length"};
    }
    total += runs[i];
    if (i % 2 == 1) foreground += runs[i];
  }
  const auto expected = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (total != expected) {
    return RunViolation{CoreErrc::LengthMismatch, "runs sum to " + std::to_string(total) +
                                                      ", frame has " + std::to_string(expected)};
  }
  if (foreground == 0) return RunViolation{CoreErrc::EmptyMask, "mask has no foreground"};
  return std::nullopt;
}

std::uint64_t intersection_count(const std::vector<std::uint8_t>& a,
                                 const std::vector<std::uint8_t>& b) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] && b[i]) ? 1 : 0;
  return n;
}

std::uint64_t count_set(const std::vector<std::uint8_t>& a) {
  return static_cast<std::uint64_t>(std::count_if(a.begin(), a.end(), [](auto v) { return v != 0; }));
}

double ratio(std::uint64_t inter, std::uint64_t uni) {
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

InstanceMask::InstanceMask(int instance_id, int width, int height,
                           std::vector<std::uint32_t> runs)
    : instance_id_(instance_id), width_(width), height_(height), runs_(std::move(runs)) {
  if (auto v = find_violation(runs_, width_, height_)) throw CoreError(v->code, v->message);
}

std::int64_t InstanceMask::foreground_count() const {
  std::int64_t n = 0;
  for (std::size_t i = 1; i < runs_.size(); i += 2) n += runs_[i];
  return n;
}

InstanceMask InstanceMask::with_id(int instance_id) const {
  InstanceMask copy = *this;
  copy.instance_id_ = instance_id;
  return copy;
}

std::string check_runs(std::span<const std::uint32_t> runs, int width, int height) {
  auto v = find_violation(runs, width, height);
  return v ? v->message : std::string{};
}

InstanceMask rle_encode(std::span<const std::uint8_t> bitmap, int width, int height,
                        int instance_id) {
  if (width <= 0 || height <= 0 ||
      bitmap.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw CoreError(CoreErrc::SizeMismatch, "bitmap length does not match " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
  }
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  bool any_foreground = false;
  for (auto px : bitmap) {
    const std::uint8_t v = px ? 1 : 0;
    any_foreground |= v != 0;
    if (v == current) {
      ++length;
    } else {
      runs.push_back(length);
      current = v;
      length = 1;
    }
  }
  runs.push_back(length);
  if (!any_foreground) throw CoreError(CoreErrc::EmptyMask, "bitmap has no foreground pixel");
  return InstanceMask(instance_id, width, height, std::move(runs));
}

std::vector<std::uint8_t> decode_runs(std::span<const std::uint32_t> runs, int width,
                                      int height) {
  const auto expected = static_cast<std::uint64_t>(std::max(width, 0)) *
                        static_cast<std::uint64_t>(std::max(height, 0));
  std::uint64_t total = 0;
  for (auto r : runs) total += r;
  if (total != expected) {
    throw CoreError(CoreErrc::LengthMismatch, "runs sum to " + std::to_string(total) +
                                                  ", frame has " + std::to_string(expected));
  }
  std::vector<std::uint8_t> out;
  out.reserve(expected);
  std::uint8_t value = 0;
  for (auto r : runs) {
    out.insert(out.end(), r, value);
    value ^= 1;
  }
  return out;
}

std::vector<std::uint8_t> rle_decode(const InstanceMask& mask) {
  return decode_runs(mask.runs(), mask.width(), mask.height());
}

InstanceMask box_mask(const BBox& box, int width, int height, int instance_id) {
  std::vector<std::uint8_t> bitmap(static_cast<std::size_t>(width) * height, 0);
  if (auto clipped = clamp_box(box, width, height)) {
    for (int y = clipped->y; y < clipped->y + clipped->h; ++y) {
      std::fill_n(bitmap.begin() + static_cast<std::ptrdiff_t>(y) * width + clipped->x,
                  clipped->w, std::uint8_t{1});
    }
  }
  return rle_encode(bitmap, width, height, instance_id);
}

double mask_iou(const InstanceMask& a, const InstanceMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw CoreError(CoreErrc::FrameMismatch, "masks have different frames");
  }
  const auto da = rle_decode(a);
  const auto db = rle_decode(b);
  const auto inter = intersection_count(da, db);
  return ratio(inter, count_set(da) + count_set(db) - inter);
}

double mask_iou(const InstanceMask& mask, const BBox& box) {
  const auto bits = rle_decode(mask);
  const auto clipped = clamp_box(box, mask.width(), mask.height());
  std::uint64_t inter = 0;
  std::uint64_t box_pixels = 0;
  if (clipped) {
    box_pixels = static_cast<std::uint64_t>(clipped->area());
    for (int y = clipped->y; y < clipped->y + clipped->h; ++y) {
      for (int x = clipped->x; x < clipped->x + clipped->w; ++x) {
        inter += bits[static_cast<std::size_t>(y) * mask.width() + x] ? 1 : 0;
      }
    }
  }
  return ratio(inter, count_set(bits) + box_pixels - inter);
}

double mask_iou(const BBox& box, const InstanceMask& mask) { return mask_iou(mask, box); }

double mask_iou(const BBox& a, const BBox& b) {
  const std::int64_t ix0 = std::max(a.x, b.x);
  const std::int64_t iy0 = std::max(a.y, b.y);
  const std::int64_t ix1 = std::min<std::int64_t>(std::int64_t{a.x} + a.w, std::int64_t{b.x} + b.w);
  const std::int64_t iy1 = std::min<std::int64_t>(std::int64_t{a.y} + a.h, std::int64_t{b.y} + b.h);
  const std::int64_t inter = std::max<std::int64_t>(0, ix1 - ix0) * std::max<std::int64_t>(0, iy1 - iy0);
  const std::int64_t uni = std::max<std::int64_t>(a.area(), 0) + std::max<std::int64_t>(b.area(), 0) - inter;
  return ratio(static_cast<std::uint64_t>(inter), static_cast<std::uint64_t>(std::max<std::int64_t>(uni, 0)));
}

}  // namespace uvgpt
