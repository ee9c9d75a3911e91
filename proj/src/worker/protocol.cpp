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

#include "uvgpt/worker/protocol.hpp"

#include <filesystem>

#include "uvgpt/worker/backend.hpp"

namespace uvgpt {

std::string to_string(WorkerErrc code) {
  switch (code) {
    case WorkerErrc::Unreachable: return "unreachable";
    case WorkerErrc::Timeout: return "timeout";
    case WorkerErrc::MalformedResponse: return "malformed_response";
    case WorkerErrc::DescriptorMismatch: return "descriptor_mismatch";
    case WorkerErrc::MaskFrameMismatch: return "mask_frame_mismatch";
    case WorkerErrc::BadRequest: return "bad_request";
  }
  return "error";
}

void to_json(Json& j, const ImagePayload& p) {
  j = {{"width", p.width}, {"height", p.height}};
  if (!p.path.empty()) {
    j["path"] = p.path;
  } else {
    j["b64"] = p.b64;
  }
}

void from_json(const Json& j, ImagePayload& p) {
  p = ImagePayload{};
  p.path = j.value("path", std::string{});
  p.b64 = j.value("b64", std::string{});
  p.width = j.at("width").get<int>();
  p.height = j.at("height").get<int>();
}

void to_json(Json& j, const DetectRequest& r) {
  j = {{"image", r.image}, {"classes", r.classes}, {"conf_threshold", r.conf_threshold}};
}

void from_json(const Json& j, DetectRequest& r) {
  r.image = j.at("image").get<ImagePayload>();
  r.classes = j.value("classes", std::vector<std::string>{});
  r.conf_threshold = j.value("conf_threshold", 0.25);
}

void to_json(Json& j, const DetectResponse& r) { j = {{"detections", r.detections}}; }

void from_json(const Json& j, DetectResponse& r) {
  r.detections = j.at("detections").get<std::vector<Detection>>();
}

void to_json(Json& j, const MaskPayload& m) {
  j = {{"instance_id", m.instance_id}, {"width", m.width}, {"height", m.height}, {"rle", m.rle}};
}

void from_json(const Json& j, MaskPayload& m) {
  m.instance_id = j.at("instance_id").get<int>();
  m.width = j.at("width").get<int>();
  m.height = j.at("height").get<int>();
  m.rle = j.at("rle").get<std::vector<std::uint32_t>>();
}

void to_json(Json& j, const SegmentRequest& r) {
  j = {{"image", r.image}, {"boxes", r.boxes}};
  if (r.prompt) j["prompt"] = *r.prompt;
}

void from_json(const Json& j, SegmentRequest& r) {
  r.image = j.at("image").get<ImagePayload>();
  r.boxes = j.value("boxes", std::vector<BBox>{});
  r.prompt.reset();
  if (j.contains("prompt") && !j["prompt"].is_null()) r.prompt = j["prompt"].get<std::string>();
}

void to_json(Json& j, const SegmentResponse& r) { j = {{"masks", r.masks}}; }

void from_json(const Json& j, SegmentResponse& r) {
  r.masks = j.at("masks").get<std::vector<MaskPayload>>();
}

Json error_body(WorkerErrc code, const std::string& message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

void validate_mask_frames(const SegmentRequest& request, const SegmentResponse& response) {
  for (const auto& m : response.masks) {
    if (m.width != request.image.width || m.height != request.image.height) {
      throw WorkerError(WorkerErrc::MaskFrameMismatch,
                        "mask " + std::to_string(m.instance_id) + " is " +
                            std::to_string(m.width) + "x" + std::to_string(m.height) +
                            ", image is " + std::to_string(request.image.width) + "x" +
                            std::to_string(request.image.height));
    }
  }
}

Json truth_to_json(const TruthFixture& f) {
  Json objects = Json::array();
  for (const auto& o : f.objects) {
    Json j = {{"class", o.class_label}, {"bbox", o.bbox}, {"confidence", o.confidence}};
    if (o.mask_rle) j["mask_rle"] = *o.mask_rle;
    objects.push_back(std::move(j));
  }
  return {{"objects", objects}};
}

TruthFixture truth_from_json(const Json& j) {
  TruthFixture f;
  for (const auto& o : j.at("objects")) {
    TruthObject t;
    t.class_label = normalize_label(o.at("class").get<std::string>());
    t.bbox = o.at("bbox").get<BBox>();
    t.confidence = o.value("confidence", 1.0);
    if (o.contains("mask_rle") && !o["mask_rle"].is_null()) {
      t.mask_rle = o["mask_rle"].get<std::vector<std::uint32_t>>();
    }
    f.objects.push_back(std::move(t));
  }
  return f;
}

std::string truth_problem(const TruthFixture& f, int width, int height) {
  for (std::size_t i = 0; i < f.objects.size(); ++i) {
    const auto& o = f.objects[i];
    const auto& b = o.bbox;
    if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > width || b.y + b.h > height) {
      return "object " + std::to_string(i) + " box is outside the image";
    }
    if (o.confidence < 0.0 || o.confidence > 1.0) {
      return "object " + std::to_string(i) + " confidence outside [0, 1]";
    }
    if (o.mask_rle) {
      if (auto p = check_runs(*o.mask_rle, width, height); !p.empty()) {
        return "object " + std::to_string(i) + " mask: " + p;
      }
    }
  }
  return {};
}

std::string truth_path_for(const std::string& image_path, const std::string& fixtures_dir) {
  const std::filesystem::path p(image_path);
  const auto dir = fixtures_dir.empty() ? p.parent_path() : std::filesystem::path(fixtures_dir);
  return (dir / (p.stem().string() + ".truth.json")).string();
}

ModelDescriptor check_capabilities(WorkerBackend& backend, const Registry& registry) {
  const auto reported = backend.capabilities();
  if (auto problem = descriptor_problem(reported); !problem.empty()) {
    throw WorkerError(WorkerErrc::DescriptorMismatch, problem);
  }
  const auto registered = registry.find(reported.name);
  if (!registered) {
    throw WorkerError(WorkerErrc::DescriptorMismatch,
                      "worker '" + reported.name + "' is not in the registry");
  }
  if (*registered != reported) {
    throw WorkerError(WorkerErrc::DescriptorMismatch,
                      "worker '" + reported.name + "' disagrees with its registry entry");
  }
  return reported;
}

}  // namespace uvgpt
