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

#include "uvgpt/engine/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace uvgpt {

namespace {

const SemanticResolver& resolver_or_default(const VerifyContext& ctx) {
  return ctx.resolver ? *ctx.resolver : *default_resolver();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Verdict verdict_for(const VisionTask& task, const std::vector<Check>& checks) {
  bool all = true;
  bool only_coverage = true;
  for (const auto& c : checks) {
    if (c.pass) continue;
    all = false;
    if (c.name != "coverage") only_coverage = false;
  }
  if (all) return Verdict::Pass;
  if (task.conditional && only_coverage) return Verdict::NotFoundOk;
  return Verdict::Fail;
}

}  // namespace

std::vector<Detection> resolve_target(const TargetSpec& target,
                                      const std::vector<Detection>& detections,
                                      const SemanticResolver& resolver) {
  if (detections.empty()) throw ResolveError(ResolveErrc::EmptyScene, "no detections");
  std::vector<Detection> out;
  switch (target.kind) {
    case TargetSpec::Kind::Named:
      for (const auto& d : detections) {
        if (d.class_label == target.name) out.push_back(d);
      }
      break;
    case TargetSpec::Kind::Category: {
      const auto members = resolver.expand(target.name);
      for (const auto& d : detections) {
        if (members.contains(d.class_label)) out.push_back(d);
      }
      break;
    }
    case TargetSpec::Kind::Anomaly: {
      std::map<std::string, int> counts;
      for (const auto& d : detections) ++counts[d.class_label];
      if (counts.size() < 2) {
        throw ResolveError(ResolveErrc::NoAnomaly, "every detection is a " + counts.begin()->first);
      }
      // map order gives the lexicographic tie-break for free
      auto rarest = counts.begin();
      for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second < rarest->second) rarest = it;
      }
      for (const auto& d : detections) {
        if (d.class_label == rarest->first) out.push_back(d);
      }
      break;
    }
    case TargetSpec::Kind::MainObject: {
      const auto best = std::min_element(detections.begin(), detections.end(),
                                         [](const Detection& a, const Detection& b) {
                                           if (a.bbox.area() != b.bbox.area())
                                             return a.bbox.area() > b.bbox.area();
                                           if (a.confidence != b.confidence)
                                             return a.confidence > b.confidence;
                                           return a.instance_id < b.instance_id;
                                         });
      out.push_back(*best);
      break;
    }
  }
  if (out.empty()) {
    throw ResolveError(ResolveErrc::TargetNotFound, "no instance of " + to_string(target));
  }
  return out;
}

std::vector<Detection> apply_quantifier(std::vector<Detection> instances, Quantifier q) {
  if (q == Quantifier::All || instances.size() <= 1) return instances;
  const auto best = std::min_element(instances.begin(), instances.end(),
                                     [](const Detection& a, const Detection& b) {
                                       if (a.confidence != b.confidence)
                                         return a.confidence > b.confidence;
                                       return a.instance_id < b.instance_id;
                                     });
  return {*best};
}

std::vector<std::string> class_filter(const TargetSpec& target, const SemanticResolver& resolver) {
  switch (target.kind) {
    case TargetSpec::Kind::Named:
      return {target.name};
    case TargetSpec::Kind::Category: {
      const auto members = resolver.expand(target.name);
      return {members.begin(), members.end()};
    }
    default:
      return {};
  }
}

DetectVerification verify_detect(const VisionTask& task, const std::vector<Detection>& raw,
                                 const VerifyContext& context) {
  DetectVerification out;
  auto& checks = out.report.checks;
  const TargetSpec target = task.target.value_or(TargetSpec::main_object());

  Check conf{"confidence", true, {}};
  for (const auto& d : raw) {
    if (d.confidence < context.thresholds.min_confidence) {
      conf.pass = false;
      conf.detail = "instance " + std::to_string(d.instance_id) + " at " + fmt(d.confidence) +
                    " < " + fmt(context.thresholds.min_confidence);
      break;
    }
  }

  Check bounds{"bounds", true, {}};
  std::vector<Detection> clamped;
  for (const auto& d : raw) {
    auto b = clamp_box(d.bbox, context.image_width, context.image_height);
    if (!b || d.bbox.w <= 0 || d.bbox.h <= 0) {
      bounds.pass = false;
      bounds.detail = "instance " + std::to_string(d.instance_id) + " box lies outside the image";
      continue;
    }
    Detection c = d;
    c.bbox = *b;
    clamped.push_back(std::move(c));
  }

  Check coverage{"coverage", true, {}};
  std::vector<Detection> resolved;
  try {
    resolved = resolve_target(target, clamped, resolver_or_default(context));
    coverage.detail = std::to_string(resolved.size()) + " instance(s) of " + to_string(target);
  } catch (const ResolveError& e) {
    coverage.pass = false;
    coverage.detail = e.what();
  }

  checks = {coverage, conf, bounds};
  out.report.verdict = verdict_for(task, checks);
  if (out.report.verdict == Verdict::Pass) {
    out.selected = apply_quantifier(std::move(resolved), task.quantifier);
  }
  return out;
}

VerificationReport verify(const VisionTask& task, const TaskOutputView& output,
                          const VerifyContext& context) {
  if (const auto* det = std::get_if<DetectOutput>(&output)) {
    return verify_detect(task, det->detections, context).report;
  }
  const auto& seg = std::get<SegmentOutput>(output);
  VerificationReport report;

  Check count{"mask_count", seg.masks.size() == seg.boxes.size(),
              std::to_string(seg.masks.size()) + " mask(s) for " +
                  std::to_string(seg.boxes.size()) + " box(es)"};

  Check valid{"mask_valid", true, {}};
  Check iou{"mask_box_iou", true, {}};
  double worst = 1.0;
  const auto n = std::min(seg.masks.size(), seg.boxes.size());
  for (std::size_t k = 0; k < seg.masks.size(); ++k) {
    const auto& m = seg.masks[k];
    std::string problem;
    if (m.width != context.image_width || m.height != context.image_height) {
      problem = "frame " + std::to_string(m.width) + "x" + std::to_string(m.height);
    } else {
      problem = check_runs(m.rle, m.width, m.height);
    }
    if (!problem.empty()) {
      if (valid.pass) valid.detail = "mask " + std::to_string(k) + ": " + problem;
      valid.pass = false;
      continue;
    }
    if (k >= n) continue;
    const InstanceMask mask(m.instance_id, m.width, m.height, m.rle);
    const double v = mask_iou(mask, seg.boxes[k]);
    worst = std::min(worst, v);
    if (v < context.thresholds.min_mask_iou && iou.pass) {
      iou.pass = false;
      iou.detail = "mask " + std::to_string(k) + " IoU " + fmt(v) + " < " +
                   fmt(context.thresholds.min_mask_iou);
    }
  }
  if (iou.pass) iou.detail = "min IoU " + fmt(worst);

  report.checks = {count, valid, iou};
  report.verdict = verdict_for(task, report.checks);
  // A conditional Segment still needs masks; "not found" only applies to detection.
  if (report.verdict == Verdict::NotFoundOk) report.verdict = Verdict::Fail;
  return report;
}

}  // namespace uvgpt
