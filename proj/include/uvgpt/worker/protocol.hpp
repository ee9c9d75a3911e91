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

// Worker wire protocol (JSON over HTTP):
//
//   GET  /v1/capabilities -> ModelDescriptor
//   POST /v1/detect  {"image": ImagePayload, "classes": [..], "conf_threshold": x}
//                 -> {"detections": [{"instance_id", "class", "bbox", "confidence"}]}
//   POST /v1/segment {"image": ImagePayload, "boxes": [[x,y,w,h], ..], "prompt": s?}
//                 -> {"masks": [{"instance_id", "width", "height", "rle"}]}
//
// Errors come back as {"error": {"code": string, "message": string}}.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvgpt/core/json.hpp"
#include "uvgpt/core/types.hpp"

namespace uvgpt {

enum class WorkerErrc {
  Unreachable,
  Timeout,
  MalformedResponse,
  DescriptorMismatch,
  MaskFrameMismatch,
  BadRequest,
};

std::string to_string(WorkerErrc code);

class WorkerError : public std::runtime_error {
 public:
  WorkerError(WorkerErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  WorkerErrc code() const noexcept { return code_; }

 private:
  WorkerErrc code_;
};

/// Images travel by reference (`path`) or inline as base64 (`b64`).
struct ImagePayload {
  std::string path;
  std::string b64;
  int width = 0;
  int height = 0;

  static ImagePayload from(const ImageRef& ref) { return {ref.path, {}, ref.width, ref.height}; }
  bool operator==(const ImagePayload&) const = default;
};

struct DetectRequest {
  ImagePayload image;
  std::vector<std::string> classes;  // empty: open-vocabulary pass
  double conf_threshold = 0.25;

  bool operator==(const DetectRequest&) const = default;
};

struct DetectResponse {
  std::vector<Detection> detections;

  bool operator==(const DetectResponse&) const = default;
};

/// Mask as it arrives over the wire; not yet validated.
struct MaskPayload {
  int instance_id = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> rle;

  static MaskPayload from(const InstanceMask& m) {
    return {m.instance_id(), m.width(), m.height(), m.runs()};
  }
  bool operator==(const MaskPayload&) const = default;
};

struct SegmentRequest {
  ImagePayload image;
  std::vector<BBox> boxes;
  std::optional<std::string> prompt;

  bool operator==(const SegmentRequest&) const = default;
};

struct SegmentResponse {
  std::vector<MaskPayload> masks;

  bool operator==(const SegmentResponse&) const = default;
};

void to_json(Json& j, const ImagePayload& p);
void from_json(const Json& j, ImagePayload& p);
void to_json(Json& j, const DetectRequest& r);
void from_json(const Json& j, DetectRequest& r);
void to_json(Json& j, const DetectResponse& r);
void from_json(const Json& j, DetectResponse& r);
void to_json(Json& j, const MaskPayload& m);
void from_json(const Json& j, MaskPayload& m);
void to_json(Json& j, const SegmentRequest& r);
void from_json(const Json& j, SegmentRequest& r);
void to_json(Json& j, const SegmentResponse& r);
void from_json(const Json& j, SegmentResponse& r);

Json error_body(WorkerErrc code, const std::string& message);

/// Throws MaskFrameMismatch when a returned mask does not match the image.
void validate_mask_frames(const SegmentRequest& request, const SegmentResponse& response);

// --- truth fixtures --------------------------------------------------------

struct TruthObject {
  std::string class_label;
  BBox bbox;
  double confidence = 1.0;
  std::optional<std::vector<std::uint32_t>> mask_rle;

  bool operator==(const TruthObject&) const = default;
};

/// `<image-stem>.truth.json` = {"objects": [{"class", "bbox", "confidence", "mask_rle"?}]}
struct TruthFixture {
  std::vector<TruthObject> objects;

  bool operator==(const TruthFixture&) const = default;
};

Json truth_to_json(const TruthFixture& f);
TruthFixture truth_from_json(const Json& j);

/// Checks boxes and masks against the image frame; empty when valid.
std::string truth_problem(const TruthFixture& f, int width, int height);

/// "<dir>/<stem>.truth.json" for an image path.
std::string truth_path_for(const std::string& image_path, const std::string& fixtures_dir = {});

}  // namespace uvgpt
