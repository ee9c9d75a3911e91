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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uvgpt {

enum class CoreErrc {
  EmptyMask,
  SizeMismatch,
  LengthMismatch,
  InvalidRuns,
  FrameMismatch,
  InvalidBox,
  InvalidInstruction,
};

class CoreError : public std::runtime_error {
 public:
  CoreError(CoreErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  CoreErrc code() const noexcept { return code_; }

 private:
  CoreErrc code_;
};

/// Axis-aligned box, top-left origin, integer pixels.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  bool operator==(const BBox&) const = default;
};

/// Run-length encoded binary mask. Runs are row-major and alternate
/// background/foreground starting with background; only the first run may
/// be zero. Construction validates the invariants.
class InstanceMask {
 public:
  InstanceMask(int instance_id, int width, int height, std::vector<std::uint32_t> runs);

  int instance_id() const noexcept { return instance_id_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<std::uint32_t>& runs() const noexcept { return runs_; }
  std::int64_t foreground_count() const;

  InstanceMask with_id(int instance_id) const;

  bool operator==(const InstanceMask&) const = default;

 private:
  int instance_id_;
  int width_;
  int height_;
  std::vector<std::uint32_t> runs_;
};

/// Empty string when `runs` satisfies the mask invariants for the frame,
/// otherwise a description of the first violation.
std::string check_runs(std::span<const std::uint32_t> runs, int width, int height);

InstanceMask rle_encode(std::span<const std::uint8_t> bitmap, int width, int height,
                        int instance_id = 0);

std::vector<std::uint8_t> rle_decode(const InstanceMask& mask);

/// Decodes raw runs without the non-empty requirement. Throws LengthMismatch
/// when the runs do not cover the frame exactly.
std::vector<std::uint8_t> decode_runs(std::span<const std::uint32_t> runs, int width,
                                      int height);

/// Filled rectangle mask; the box is clipped to the frame first.
InstanceMask box_mask(const BBox& box, int width, int height, int instance_id = 0);

double mask_iou(const InstanceMask& a, const InstanceMask& b);
/// The box is clipped to the mask frame.
double mask_iou(const InstanceMask& mask, const BBox& box);
double mask_iou(const BBox& box, const InstanceMask& mask);
double mask_iou(const BBox& a, const BBox& b);

}  // namespace uvgpt
