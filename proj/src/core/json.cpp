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

#include "uvgpt/core/json.hpp"

namespace uvgpt {

namespace {

Verb verb_from_string(const std::string& s) {
  if (s == "detect") return Verb::Detect;
  if (s == "segment") return Verb::Segment;
  if (s == "render") return Verb::Render;
  if (s == "integrate") return Verb::Integrate;
  throw Json::other_error::create(501, "unknown verb '" + s + "'", nullptr);
}

}  // namespace

void to_json(Json& j, const TargetSpec& t) {
  switch (t.kind) {
    case TargetSpec::Kind::Named: j = {{"kind", "named"}, {"class", t.name}}; break;
    case TargetSpec::Kind::Category: j = {{"kind", "category"}, {"class", t.name}}; break;
    case TargetSpec::Kind::Anomaly: j = {{"kind", "anomaly"}}; break;
    case TargetSpec::Kind::MainObject: j = {{"kind", "main_object"}}; break;
  }
}

void from_json(const Json& j, TargetSpec& t) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "named") {
    t = TargetSpec::named(j.at("class").get<std::string>());
  } else if (kind == "category") {
    t = TargetSpec::category(j.at("class").get<std::string>());
  } else if (kind == "anomaly") {
    t = TargetSpec::anomaly();
  } else if (kind == "main_object") {
    t = TargetSpec::main_object();
  } else {
    throw Json::other_error::create(501, "unknown target kind '" + kind + "'", &j);
  }
}

void to_json(Json& j, const BBox& b) { j = Json::array({b.x, b.y, b.w, b.h}); }

void from_json(const Json& j, BBox& b) {
  if (!j.is_array() || j.size() != 4) {
    throw Json::type_error::create(302, "bbox must be [x, y, w, h]", &j);
  }
  b = {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

void to_json(Json& j, const Detection& d) {
  j = {{"instance_id", d.instance_id},
       {"class", d.class_label},
       {"bbox", d.bbox},
       {"confidence", d.confidence}};
}

void from_json(const Json& j, Detection& d) {
  d.instance_id = j.at("instance_id").get<int>();
  d.class_label = j.at("class").get<std::string>();
  d.bbox = j.at("bbox").get<BBox>();
  d.confidence = j.at("confidence").get<double>();
}

void to_json(Json& j, const InstanceMask& m) {
  j = {{"instance_id", m.instance_id()},
       {"width", m.width()},
       {"height", m.height()},
       {"rle", m.runs()}};
}

InstanceMask mask_from_json(const Json& j) {
  return InstanceMask(j.at("instance_id").get<int>(), j.at("width").get<int>(),
                      j.at("height").get<int>(), j.at("rle").get<std::vector<std::uint32_t>>());
}

void to_json(Json& j, const VisionTask& t) {
  j = {{"id", t.id},
       {"verb", to_string(t.verb)},
       {"target", t.target ? Json(*t.target) : Json(nullptr)},
       {"image", t.image ? Json(*t.image) : Json(nullptr)},
       {"depends_on", t.depends_on},
       {"quantifier", to_string(t.quantifier)},
       {"conditional", t.conditional},
       {"constraints", Json::array()}};
  if (t.constraints.contains(Constraint::DistinctModels)) {
    j["constraints"].push_back("distinct_models");
  }
  if (t.verb == Verb::Detect) j["draw_boxes"] = t.draw_boxes;
}

void from_json(const Json& j, VisionTask& t) {
  t = VisionTask{};
  t.id = j.at("id").get<int>();
  t.verb = verb_from_string(j.at("verb").get<std::string>());
  if (j.contains("target") && !j["target"].is_null()) t.target = j["target"].get<TargetSpec>();
  if (j.contains("image") && !j["image"].is_null()) t.image = j["image"].get<int>();
  t.depends_on = j.value("depends_on", std::set<int>{});
  t.quantifier = j.value("quantifier", std::string("first")) == "all" ? Quantifier::All
                                                                      : Quantifier::First;
  t.conditional = j.value("conditional", false);
  for (const auto& c : j.value("constraints", Json::array())) {
    if (c.get<std::string>() == "distinct_models") t.constraints.insert(Constraint::DistinctModels);
  }
  t.draw_boxes = j.value("draw_boxes", false);
}

Json plan_to_json(const TaskPlan& plan) { return {{"tasks", plan.tasks}}; }

TaskPlan plan_from_json(const Json& j) {
  TaskPlan plan;
  plan.tasks = j.at("tasks").get<std::vector<VisionTask>>();
  return plan;
}

void to_json(Json& j, const Check& c) {
  j = {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
}

void to_json(Json& j, const VerificationReport& r) {
  j = {{"checks", r.checks}, {"verdict", to_string(r.verdict)}};
}

Json step_to_json(const TraceStep& step, bool with_timing) {
  Json j = {{"task_id", step.task_id},
            {"model", step.model_name},
            {"attempt", step.attempt},
            {"verification", step.verification}};
  if (with_timing) j["elapsed_ms"] = step.elapsed_ms;
  return j;
}

Json trace_to_json(const ExecutionTrace& trace, bool with_timing) {
  Json out = Json::array();
  for (const auto& s : trace.steps) out.push_back(step_to_json(s, with_timing));
  return out;
}

std::string trace_to_jsonl(const ExecutionTrace& trace) {
  std::string out;
  for (const auto& s : trace.steps) {
    out += step_to_json(s).dump();
    out += '\n';
  }
  return out;
}

Json image_result_to_json(const ImageResult& r) {
  return {{"image", r.image.id},
          {"detections", r.detections},
          {"masks", r.masks},
          {"not_found", r.not_found}};
}

Json scene_to_json(const SceneResult& scene) {
  Json out = Json::array();
  for (const auto& r : scene.images) out.push_back(image_result_to_json(r));
  return out;
}

}  // namespace uvgpt
