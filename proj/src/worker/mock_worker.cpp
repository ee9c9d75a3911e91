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

#include "uvgpt/worker/mock_worker.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace uvgpt {

FixtureStore::FixtureStore(std::string fixtures_dir) : fixtures_dir_(std::move(fixtures_dir)) {}

TruthFixture FixtureStore::lookup(const ImagePayload& image) const {
  if (image.path.empty()) {
    throw WorkerError(WorkerErrc::BadRequest, "mock workers need images by path");
  }
  const auto key = truth_path_for(image.path, fixtures_dir_);
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  std::ifstream in(key);
  if (!in) throw WorkerError(WorkerErrc::BadRequest, "no truth fixture at " + key);
  TruthFixture fixture;
  try {
    fixture = truth_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw WorkerError(WorkerErrc::BadRequest, key + ": " + e.what());
  }
  if (auto problem = truth_problem(fixture, image.width, image.height); !problem.empty()) {
    throw WorkerError(WorkerErrc::BadRequest, key + ": " + problem);
  }
  return cache_.emplace(key, std::move(fixture)).first->second;
}

void FixtureStore::put(const std::string& image_path, TruthFixture fixture) {
  std::lock_guard lock(mutex_);
  cache_[truth_path_for(image_path, fixtures_dir_)] = std::move(fixture);
}

FaultMode fault_mode_from_env(const std::string& model_name) {
  const char* env = std::getenv("UVGPT_MOCK_FAULTY");
  if (!env) return FaultMode::None;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == model_name) return FaultMode::EmptyDetections;
  }
  return FaultMode::None;
}

MockWorker::MockWorker(ModelDescriptor descriptor, std::shared_ptr<const FixtureStore> fixtures,
                       FaultMode fault)
    : descriptor_(std::move(descriptor)), fixtures_(std::move(fixtures)), fault_(fault) {}

bool MockWorker::visible(const std::string& cls) const {
  return descriptor_.vocabulary.open || descriptor_.vocabulary.classes.contains(cls);
}

DetectResponse MockWorker::detect(const DetectRequest& request) {
  if (!descriptor_.can(Capability::Detect)) {
    throw WorkerError(WorkerErrc::BadRequest, descriptor_.name + " cannot detect");
  }
  if (request.conf_threshold < 0.0 || request.conf_threshold > 1.0) {
    throw WorkerError(WorkerErrc::BadRequest, "conf_threshold outside [0, 1]");
  }
  const auto fixture = fixtures_->lookup(request.image);
  DetectResponse out;
  if (fault_ == FaultMode::EmptyDetections) return out;

  std::vector<std::string> filter;
  for (const auto& c : request.classes) filter.push_back(normalize_label(c));
  for (std::size_t i = 0; i < fixture.objects.size(); ++i) {
    const auto& o = fixture.objects[i];
    if (!visible(o.class_label)) continue;
    if (!filter.empty() && std::find(filter.begin(), filter.end(), o.class_label) == filter.end()) {
      continue;
    }
    if (o.confidence < request.conf_threshold) continue;
    out.detections.push_back({static_cast<int>(i), o.class_label, o.bbox, o.confidence});
  }
  return out;
}

SegmentResponse MockWorker::segment(const SegmentRequest& request) {
  const bool boxes = !request.boxes.empty();
  if (boxes && !descriptor_.can(Capability::Segment)) {
    throw WorkerError(WorkerErrc::BadRequest, descriptor_.name + " does not take box prompts");
  }
  if (!boxes && !(request.prompt && !request.prompt->empty())) {
    throw WorkerError(WorkerErrc::BadRequest, "segment needs boxes or a prompt");
  }
  if (!boxes && !descriptor_.can(Capability::PromptSegment)) {
    throw WorkerError(WorkerErrc::BadRequest, descriptor_.name + " does not take text prompts");
  }
  const auto fixture = fixtures_->lookup(request.image);
  const int w = request.image.width;
  const int h = request.image.height;

  auto mask_for = [&](const BBox& box, int id) -> MaskPayload {
    if (fault_ == FaultMode::MisalignedMasks) {
      BBox shifted = box;
      shifted.x = box.x + box.w + box.w <= w ? box.x + box.w : box.x - box.w;
      if (!clamp_box(shifted, w, h)) shifted = {0, 0, 1, 1};
      return MaskPayload::from(box_mask(shifted, w, h, id));
    }
    auto it = std::find_if(fixture.objects.begin(), fixture.objects.end(),
                           [&](const TruthObject& o) { return o.bbox == box && o.mask_rle; });
    if (it != fixture.objects.end()) return {id, w, h, *it->mask_rle};
    return MaskPayload::from(box_mask(box, w, h, id));
  };

  SegmentResponse out;
  if (boxes) {
    for (std::size_t k = 0; k < request.boxes.size(); ++k) {
      out.masks.push_back(mask_for(request.boxes[k], static_cast<int>(k)));
    }
    return out;
  }
  const auto cls = normalize_label(*request.prompt);
  for (std::size_t i = 0; i < fixture.objects.size(); ++i) {
    const auto& o = fixture.objects[i];
    if (o.class_label == cls && visible(cls)) {
      out.masks.push_back(mask_for(o.bbox, static_cast<int>(i)));
    }
  }
  return out;
}

}  // namespace uvgpt
