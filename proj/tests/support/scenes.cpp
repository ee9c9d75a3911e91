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


#include "scenes.hpp"

#include <filesystem>
#include <stdexcept>

#include "uvgpt/compositor/compositor.hpp"

namespace uvgpt::testing {

namespace fs = std::filesystem;

RasterImage render_scene(const Scene& scene) {
  RasterImage img(scene.width, scene.height, Rgb{40, 60, 40});
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& b = scene.objects[i].box;
    const Rgb c{static_cast<std::uint8_t>(80 + 30 * i % 170),
                static_cast<std::uint8_t>(200 - 20 * i % 150), 120};
    for (int y = std::max(0, b.y); y < std::min(scene.height, b.y + b.h); ++y) {
      for (int x = std::max(0, b.x); x < std::min(scene.width, b.x + b.w); ++x) img.set(x, y, c);
    }
  }
  return img;
}

InstanceMask ellipse_mask(const BBox& box, int width, int height, int instance_id) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height, 0);
  const double cx = box.x + box.w / 2.0;
  const double cy = box.y + box.h / 2.0;
  const double rx = box.w / 2.0;
  const double ry = box.h / 2.0;
  for (int y = std::max(0, box.y); y < std::min(height, box.y + box.h); ++y) {
    for (int x = std::max(0, box.x); x < std::min(width, box.x + box.w); ++x) {
      const double dx = (x + 0.5 - cx) / rx;
      const double dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) bits[static_cast<std::size_t>(y) * width + x] = 1;
    }
  }
  return rle_encode(bits, width, height, instance_id);
}

TruthFixture scene_truth(const Scene& scene) {
  TruthFixture f;
  for (const auto& o : scene.objects) {
    f.objects.push_back({o.cls, o.box, o.confidence,
                         ellipse_mask(o.box, scene.width, scene.height).runs()});
  }
  return f;
}

std::string write_scene(const Scene& scene, const std::string& dir) {
  fs::create_directories(dir);
  const auto image = (fs::path(dir) / (scene.stem + ".ppm")).string();
  write_file(image, encode_ppm(render_scene(scene)));
  write_file((fs::path(dir) / (scene.stem + ".truth.json")).string(),
             truth_to_json(scene_truth(scene)).dump(2));
  return image;
}

std::string fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("uvgpt-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::vector<Scene> scenario_scenes() {
  return {
      {"guitar", 96, 64, {{"guitar", {10, 8, 30, 48}, 0.93}, {"person", {50, 4, 36, 56}, 0.88}}},
      {"flowers", 96, 64, {{"yellow flower", {12, 12, 24, 24}, 0.81}, {"leaf", {50, 30, 30, 20}, 0.7}}},
      {"cat", 96, 64, {{"cat", {8, 20, 34, 30}, 0.9}, {"person", {52, 2, 30, 60}, 0.92}}},
      {"frogs", 96, 64,
       {{"frog", {4, 30, 20, 16}, 0.91}, {"frog", {34, 28, 22, 18}, 0.87}, {"frog", {66, 32, 20, 14}, 0.8}}},
      {"bridge", 96, 64, {{"bridge", {0, 10, 90, 30}, 0.85}, {"boat", {30, 44, 24, 14}, 0.9}}},
      {"bird", 96, 64, {{"bird", {40, 10, 20, 16}, 0.88}, {"tree", {4, 4, 24, 56}, 0.6}}},
      {"no_bird", 96, 64, {{"dog", {20, 20, 30, 30}, 0.9}}},
      {"house", 96, 64, {{"house", {10, 6, 40, 40}, 0.86}, {"car", {60, 40, 28, 16}, 0.9}}},
      {"dogs_cat", 96, 64,
       {{"dog", {2, 10, 20, 20}, 0.9}, {"dog", {26, 12, 20, 20}, 0.9}, {"dog", {50, 8, 20, 20}, 0.9},
        {"cat", {74, 30, 18, 18}, 0.85}}},
      {"cars_bus", 96, 64,
       {{"car", {2, 40, 20, 14}, 0.9}, {"car", {26, 40, 20, 14}, 0.88}, {"car", {50, 40, 20, 14}, 0.86},
        {"bus", {30, 4, 40, 24}, 0.8}}},
      {"sheep_cow", 96, 64,
       {{"sheep", {2, 4, 16, 14}, 0.9}, {"sheep", {22, 4, 16, 14}, 0.9}, {"sheep", {42, 4, 16, 14}, 0.9},
        {"sheep", {62, 4, 16, 14}, 0.9}, {"sheep", {2, 24, 16, 14}, 0.9}, {"cow", {40, 30, 30, 26}, 0.82}}},
  };
}

const Scene& scene_named(const std::string& stem) {
  static const auto scenes = scenario_scenes();
  for (const auto& s : scenes) {
    if (s.stem == stem) return s;
  }
  throw std::out_of_range("no scene " + stem);
}

std::vector<ScenarioCase> scenario_cases() {
  return {
      {1, "find the guitar and segment it", "guitar", true, {}},
      {2, "find the yellow flower and segment it", "flowers", true, {}},
      {3, "find an animal and mask it", "cat", true, {}},
      {4, "detect frog and then highlight it with masking", "frogs", true, {}},
      {5, "highlight all frogs by masking them", "frogs", true, {}},
      {6, "mask out the main object in the image", "bridge", true, {}},
      {7, "Can you see a bird? Please mask it if so.", "bird", true, {}},
      {7, "Can you see a bird? Please mask it if so.", "no_bird", false, {TargetSpec::named("bird")}},
      {8, "Detect and segment the bird using more than one foundation models.", "bird", true, {}},
      {9, "Mask any building in the image.", "house", true, {}},
      {10, "identify any anomaly object and segment it if have", "dogs_cat", true, {}},
      {11, "find any anomaly object and detect/segment it", "cars_bus", true, {}},
      {12, "find a different animal and segment it", "sheep_cow", true, {}},
  };
}

}  // namespace uvgpt::testing
