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

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "uvgpt/worker/backend.hpp"

namespace uvgpt {

/// Loads `<stem>.truth.json` sidecars, either next to the image or from a
/// fixed directory, and caches them. Fixtures can also be added in memory.
class FixtureStore {
 public:
  explicit FixtureStore(std::string fixtures_dir = {});

  /// Throws WorkerError(BadRequest) when no fixture exists for the image.
  TruthFixture lookup(const ImagePayload& image) const;

  void put(const std::string& image_path, TruthFixture fixture);

 private:
  std::string fixtures_dir_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, TruthFixture> cache_;
};

enum class FaultMode {
  None,
  EmptyDetections,  // detect always returns []
  MisalignedMasks,  // segment returns each box shifted by its own width
};

/// UVGPT_MOCK_FAULTY is a comma-separated list of model names that run in
/// EmptyDetections mode.
FaultMode fault_mode_from_env(const std::string& model_name);

/// Deterministic stand-in for a detection/segmentation model, driven by
/// truth fixtures. Identical requests give identical responses.
///
/// detect: fixture objects visible to the model's vocabulary, filtered by the
///   requested classes and the confidence threshold; instance ids are the
///   fixture indices.
/// segment: one mask per requested box, the fixture mask for an object with
///   exactly that box when present, otherwise the filled box. With only a
///   prompt, masks for every fixture object of that class.
class MockWorker final : public WorkerBackend {
 public:
  MockWorker(ModelDescriptor descriptor, std::shared_ptr<const FixtureStore> fixtures,
             FaultMode fault = FaultMode::None);

  std::string name() const override { return descriptor_.name; }
  ModelDescriptor capabilities() override { return descriptor_; }
  DetectResponse detect(const DetectRequest& request) override;
  SegmentResponse segment(const SegmentRequest& request) override;

  FaultMode fault() const noexcept { return fault_; }

 private:
  bool visible(const std::string& cls) const;

  ModelDescriptor descriptor_;
  std::shared_ptr<const FixtureStore> fixtures_;
  FaultMode fault_;
};

}  // namespace uvgpt
