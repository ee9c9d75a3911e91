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

#include "uvgpt/core/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace uvgpt {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

void validate_instruction(const Instruction& instruction) {
  if (is_blank(instruction.text)) {
    throw CoreError(CoreErrc::InvalidInstruction, "instruction text is empty");
  }
  for (const auto& img : instruction.images) {
    if (img.width <= 0 || img.height <= 0) {
      throw CoreError(CoreErrc::InvalidInstruction, "image '" + img.id + "' has no pixels");
    }
  }
}

std::string to_string(const TargetSpec& target) {
  switch (target.kind) {
    case TargetSpec::Kind::Named: return target.name;
    case TargetSpec::Kind::Category: return "category:" + target.name;
    case TargetSpec::Kind::Anomaly: return "anomaly";
    case TargetSpec::Kind::MainObject: return "main_object";
  }
  return {};
}

std::string to_string(Action action) {
  return action == Action::Detect ? "detect" : "segment";
}

std::string to_string(Quantifier quantifier) {
  return quantifier == Quantifier::All ? "all" : "first";
}

std::string to_string(Verb verb) {
  switch (verb) {
    case Verb::Detect: return "detect";
    case Verb::Segment: return "segment";
    case Verb::Render: return "render";
    case Verb::Integrate: return "integrate";
  }
  return {};
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotFoundOk: return "not_found_ok";
  }
  return {};
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<TraceStep> ExecutionTrace::steps_for(int task_id) const {
  std::vector<TraceStep> out;
  std::copy_if(steps.begin(), steps.end(), std::back_inserter(out),
               [task_id](const TraceStep& s) { return s.task_id == task_id; });
  return out;
}

std::string normalize_label(std::string_view label) {
  static constexpr std::array<std::string_view, 4> kKeepTrailingS = {"glass", "grass", "bus",
                                                                     "dress"};
  std::string out;
  out.reserve(label.size());
  for (unsigned char c : label) out.push_back(static_cast<char>(std::tolower(c)));

  const auto last_start = out.find_last_of(' ') == std::string::npos ? 0 : out.find_last_of(' ') + 1;
  const std::string_view last_word = std::string_view(out).substr(last_start);
  if (last_word.size() > 1 && last_word.back() == 's' &&
      std::find(kKeepTrailingS.begin(), kKeepTrailingS.end(), last_word) == kKeepTrailingS.end()) {
    out.pop_back();
  }
  return out;
}

std::optional<BBox> clamp_box(const BBox& box, int width, int height) {
  const std::int64_t x0 = std::clamp<std::int64_t>(box.x, 0, width);
  const std::int64_t y0 = std::clamp<std::int64_t>(box.y, 0, height);
  const std::int64_t x1 = std::clamp<std::int64_t>(std::int64_t{box.x} + box.w, 0, width);
  const std::int64_t y1 = std::clamp<std::int64_t>(std::int64_t{box.y} + box.h, 0, height);
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return BBox{static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0),
              static_cast<int>(y1 - y0)};
}

}  // namespace uvgpt
