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


#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "uvgpt/core/json.hpp"
#include "uvgpt/core/mask.hpp"
#include "uvgpt/core/types.hpp"

namespace uvgpt {
namespace {

using testing::box_bitmap;
using testing::naive_runs;
using testing::pixel_iou;
using testing::random_bitmap;

TEST(Rle, AllForegroundHasLeadingZeroRun) {
  const std::vector<std::uint8_t> bits{1, 1, 1, 1};
  EXPECT_EQ(rle_encode(bits, 2, 2).runs(), (std::vector<std::uint32_t>{0, 4}));
}

TEST(Rle, AlternatingPixels) {
  const std::vector<std::uint8_t> bits{0, 1, 0, 1};
  EXPECT_EQ(rle_encode(bits, 2, 2).runs(), (std::vector<std::uint32_t>{1, 1, 1, 1}));
}

TEST(Rle, DecodeAllForeground) {
  const InstanceMask m(0, 2, 2, {0, 4});
  EXPECT_EQ(rle_decode(m), (std::vector<std::uint8_t>{1, 1, 1, 1}));
}

TEST(Rle, AllBackgroundIsRejected) {
  const auto bits = decode_runs(std::vector<std::uint32_t>{4}, 2, 2);
  EXPECT_EQ(bits, (std::vector<std::uint8_t>{0, 0, 0, 0}));
  try {
    rle_encode(bits, 2, 2);
    FAIL() << "expected EmptyMask";
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::EmptyMask);
  }
  try {
    InstanceMask(0, 2, 2, {4});
    FAIL() << "expected EmptyMask";
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::EmptyMask);
  }
}

TEST(Rle, SizeMismatch) {
  const std::vector<std::uint8_t> bits{1, 0, 1};
  try {
    rle_encode(bits, 2, 2);
    FAIL();
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::SizeMismatch);
  }
}

TEST(Rle, LengthMismatchOnDecode) {
  try {
    decode_runs(std::vector<std::uint32_t>{1, 2}, 2, 2);
    FAIL();
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::LengthMismatch);
  }
  try {
    InstanceMask(0, 2, 2, {1, 5});
    FAIL();
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::LengthMismatch);
  }
}

TEST(Rle, InnerZeroRunRejected) {
  EXPECT_FALSE(check_runs(std::vector<std::uint32_t>{1, 0, 1, 2}, 2, 2).empty());
  EXPECT_TRUE(check_runs(std::vector<std::uint32_t>{0, 1, 3}, 2, 2).empty());
}

TEST(Rle, RandomRoundTripMatchesNaiveEncoder) {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 16);
    const int h = 1 + static_cast<int>(rng() % 16);
    const auto bits = random_bitmap(rng, w, h, (rng() % 100) / 100.0);
    const auto m = rle_encode(bits, w, h, i);
    ASSERT_EQ(m.runs(), naive_runs(bits)) << "case " << i;
    ASSERT_EQ(rle_decode(m), bits) << "case " << i;
    std::uint64_t sum = 0;
    for (auto r : m.runs()) sum += r;
    ASSERT_EQ(sum, static_cast<std::uint64_t>(w) * h);
    ASSERT_EQ(m.foreground_count(), std::count(bits.begin(), bits.end(), 1));
  }
}

TEST(Iou, IdenticalMasks) {
  const auto m = box_mask({1, 1, 3, 3}, 8, 8);
  EXPECT_EQ(mask_iou(m, m), 1.0);
}

TEST(Iou, DisjointBoxes) {
  EXPECT_EQ(mask_iou(BBox{0, 0, 2, 2}, BBox{10, 10, 2, 2}), 0.0);
  const auto a = box_mask({0, 0, 2, 2}, 32, 32);
  const auto b = box_mask({10, 10, 2, 2}, 32, 32);
  EXPECT_EQ(mask_iou(a, b), 0.0);
}

TEST(Iou, HalfOverlapIsOneThird) {
  EXPECT_DOUBLE_EQ(mask_iou(BBox{0, 0, 4, 4}, BBox{2, 0, 4, 4}), 1.0 / 3.0);
  const auto a = box_mask({0, 0, 4, 4}, 8, 8);
  EXPECT_DOUBLE_EQ(mask_iou(a, BBox{2, 0, 4, 4}), 1.0 / 3.0);
  EXPECT_EQ(pixel_iou(box_bitmap({0, 0, 4, 4}, 8, 8), box_bitmap({2, 0, 4, 4}, 8, 8)), 1.0 / 3.0);
}

TEST(Iou, FrameMismatch) {
  try {
    mask_iou(box_mask({0, 0, 2, 2}, 4, 4), box_mask({0, 0, 2, 2}, 4, 5));
    FAIL();
  } catch (const CoreError& e) {
    EXPECT_EQ(e.code(), CoreErrc::FrameMismatch);
  }
}

TEST(Iou, MatchesPixelCountOracleExactly) {
  std::mt19937 rng(11);
  for (int i = 0; i < 400; ++i) {
    const int w = 1 + static_cast<int>(rng() % 64);
    const int h = 1 + static_cast<int>(rng() % 64);
    const auto ab = random_bitmap(rng, w, h, 0.3);
    const auto bb = random_bitmap(rng, w, h, 0.3);
    const auto a = rle_encode(ab, w, h);
    const auto b = rle_encode(bb, w, h);
    const double v = mask_iou(a, b);
    ASSERT_EQ(v, pixel_iou(ab, bb)) << "case " << i;
    ASSERT_EQ(v, mask_iou(b, a));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_EQ(mask_iou(a, a), 1.0);
    ASSERT_EQ(v == 1.0, ab == bb);

    const BBox box{static_cast<int>(rng() % w) - 2, static_cast<int>(rng() % h) - 2,
                   1 + static_cast<int>(rng() % w), 1 + static_cast<int>(rng() % h)};
    ASSERT_EQ(mask_iou(a, box), pixel_iou(ab, box_bitmap(box, w, h))) << "case " << i;
    ASSERT_EQ(mask_iou(box, a), mask_iou(a, box));
  }
}

TEST(BoxMask, FilledRectangle) {
  const auto m = box_mask({2, 2, 4, 4}, 16, 16, 3);
  EXPECT_EQ(m.foreground_count(), 16);
  EXPECT_EQ(m.instance_id(), 3);
  EXPECT_EQ(rle_decode(m), box_bitmap({2, 2, 4, 4}, 16, 16));
}

TEST(Labels, NormalizeSingularizes) {
  EXPECT_EQ(normalize_label("Dogs"), "dog");
  EXPECT_EQ(normalize_label("frogs"), "frog");
  EXPECT_EQ(normalize_label("bus"), "bus");
  EXPECT_EQ(normalize_label("glass"), "glass");
  EXPECT_EQ(normalize_label("Yellow Flowers"), "yellow flower");
  EXPECT_EQ(normalize_label("sheep"), "sheep");
  EXPECT_EQ(normalize_label("s"), "s");
}

TEST(Boxes, ClampIntoFrame) {
  EXPECT_EQ(clamp_box({-2, -2, 6, 6}, 10, 10), (BBox{0, 0, 4, 4}));
  EXPECT_EQ(clamp_box({8, 8, 6, 6}, 10, 10), (BBox{8, 8, 2, 2}));
  EXPECT_FALSE(clamp_box({10, 0, 4, 4}, 10, 10).has_value());
  EXPECT_FALSE(clamp_box({2, 2, 0, 4}, 10, 10).has_value());
}

TEST(Instruction, Validation) {
  EXPECT_NO_THROW(validate_instruction({"find dogs", {}}));
  EXPECT_THROW(validate_instruction({"   ", {}}), CoreError);
  EXPECT_THROW(validate_instruction({"find dogs", {{"a", "a.ppm", 0, 4}}}), CoreError);
}

TEST(Json, DetectionAndMaskRoundTrip) {
  const Detection d{3, "dog", {1, 2, 3, 4}, 0.75};
  const Json j = d;
  EXPECT_EQ(j.dump(), R"({"bbox":[1,2,3,4],"class":"dog","confidence":0.75,"instance_id":3})");
  EXPECT_EQ(j.get<Detection>(), d);

  const auto m = box_mask({0, 0, 2, 1}, 4, 2, 5);
  const Json mj = m;
  EXPECT_EQ(mask_from_json(mj), m);
}

TEST(Json, TargetsRoundTrip) {
  for (const auto& t : {TargetSpec::named("dog"), TargetSpec::category("animal"),
                        TargetSpec::anomaly(), TargetSpec::main_object()}) {
    EXPECT_EQ(Json(t).get<TargetSpec>(), t);
  }
}

TEST(Json, PlanRoundTrip) {
  TaskPlan plan;
  VisionTask d;
  d.id = 0;
  d.target = TargetSpec::named("bird");
  d.image = 0;
  d.conditional = true;
  d.draw_boxes = true;
  VisionTask s = d;
  s.id = 1;
  s.verb = Verb::Segment;
  s.depends_on = {0};
  s.draw_boxes = false;
  s.constraints = {Constraint::DistinctModels};
  VisionTask r;
  r.id = 2;
  r.verb = Verb::Render;
  r.image = 0;
  r.depends_on = {0, 1};
  plan.tasks = {d, s, r};
  const auto back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(back.tasks, plan.tasks);
}

TEST(Trace, StepsForTask) {
  ExecutionTrace t;
  t.steps.push_back({0, "a", 1, {}, 1.0});
  t.steps.push_back({1, "b", 1, {}, 1.0});
  t.steps.push_back({1, "c", 2, {}, 1.0});
  EXPECT_EQ(t.steps_for(1).size(), 2u);
  EXPECT_EQ(trace_to_json(t, false)[0].contains("elapsed_ms"), false);
  EXPECT_EQ(trace_to_json(t, true)[0].contains("elapsed_ms"), true);
  const auto lines = trace_to_jsonl(t);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 3);
}

}  // namespace
}  // namespace uvgpt
