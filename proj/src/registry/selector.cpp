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

#include "uvgpt/registry/selector.hpp"

#include <algorithm>
#include <cmath>

namespace uvgpt {

namespace {

bool vocabulary_covers(const TargetSpec& target, const Vocabulary& vocab,
                       const SemanticResolver* resolver) {
  if (vocab.open) return true;
  switch (target.kind) {
    case TargetSpec::Kind::Named:
      return vocab.classes.contains(target.name);
    case TargetSpec::Kind::Category: {
      if (!resolver) return false;
      const auto members = resolver->expand(target.name);
      return std::any_of(members.begin(), members.end(),
                         [&](const auto& m) { return vocab.classes.contains(m); });
    }
    case TargetSpec::Kind::Anomaly:
    case TargetSpec::Kind::MainObject:
      // Resolved from an open pass over whatever the model can see.
      return true;
  }
  return false;
}

bool constrained(const VisionTask& t) { return t.constraints.contains(Constraint::DistinctModels); }

struct Ranked {
  std::string name;
  double cost;
};

std::vector<Ranked> ranked(const VisionTask& task, const std::vector<ModelDescriptor>& models,
                           const SelectorWeights& w, const SemanticResolver* resolver) {
  std::vector<Ranked> out;
  for (const auto& m : models) {
    const double c = task_cost(task, m, w, resolver);
    if (std::isfinite(c)) out.push_back({m.name, c});
  }
  std::stable_sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.name < b.name;
  });
  return out;
}

[[noreturn]] void infeasible(const VisionTask& t, const std::string& why) {
  throw RegistryError(RegistryErrc::Infeasible, "task " + std::to_string(t.id) + ": " + why);
}

}  // namespace

bool needs_model(const VisionTask& task) {
  return task.verb == Verb::Detect || task.verb == Verb::Segment;
}

bool capable(const VisionTask& task, const ModelDescriptor& m) {
  switch (task.verb) {
    case Verb::Detect: return m.can(Capability::Detect);
    case Verb::Segment: return m.can(Capability::Segment) || m.can(Capability::PromptSegment);
    default: return false;
  }
}

double task_cost(const VisionTask& task, const ModelDescriptor& m, const SelectorWeights& w,
                 const SemanticResolver* resolver) {
  if (!capable(task, m)) return kInfeasibleCost;
  double c = 0.0;
  if (task.target && !vocabulary_covers(*task.target, m.vocabulary, resolver)) {
    if (!m.can(Capability::PromptSegment)) return kInfeasibleCost;
    c += 1.0;
  }
  return c + w.mu * m.latency_cost + w.nu * (1.0 - m.reliability);
}

std::vector<ModelDescriptor> candidates(const VisionTask& task, const Registry& registry,
                                        const SelectorWeights& w,
                                        const SemanticResolver* resolver) {
  const auto models = registry.snapshot();
  std::vector<ModelDescriptor> out;
  for (const auto& r : ranked(task, models, w, resolver)) {
    out.push_back(*std::find_if(models.begin(), models.end(),
                                [&](const auto& m) { return m.name == r.name; }));
  }
  if (out.empty()) {
    throw RegistryError(RegistryErrc::NoCapableModel,
                        "no model can " + to_string(task.verb) +
                            (task.target ? " " + to_string(*task.target) : std::string{}));
  }
  return out;
}

Selection select(const TaskPlan& plan, const Registry& registry, const SelectorWeights& w,
                 const SemanticResolver* resolver) {
  const auto models = registry.snapshot();
  Selection out;
  std::map<int, double> cost;

  // Detect id -> Segment ids that must not share its model.
  std::map<int, std::vector<int>> coupled;
  for (const auto& t : plan.tasks) {
    if (t.verb != Verb::Segment || t.depends_on.empty()) continue;
    const int d = *t.depends_on.begin();
    if (constrained(t) || constrained(plan.tasks.at(d))) coupled[d].push_back(t.id);
  }

  std::map<int, std::vector<Ranked>> options;
  for (const auto& t : plan.tasks) {
    if (!needs_model(t)) {
      out.assignment.models[t.id] = kCompositor;
      cost[t.id] = 0.0;
      continue;
    }
    options[t.id] = ranked(t, models, w, resolver);
    if (options[t.id].empty()) infeasible(t, "no capable model");
  }

  std::set<int> settled;
  for (const auto& [detect_id, segments] : coupled) {
    const auto& detect_options = options.at(detect_id);
    double best = kInfeasibleCost;
    std::map<int, const Ranked*> best_pick;
    for (const auto& md : detect_options) {
      double total = md.cost;
      std::map<int, const Ranked*> pick;
      pick[detect_id] = &md;
      for (int s : segments) {
        const auto& seg_options = options.at(s);
        auto it = std::find_if(seg_options.begin(), seg_options.end(),
                               [&](const Ranked& r) { return r.name != md.name; });
        if (it == seg_options.end()) {
          total = kInfeasibleCost;
          break;
        }
        total += it->cost;
        pick[s] = &*it;
      }
      if (total < best) {
        best = total;
        best_pick = std::move(pick);
      }
    }
    if (!std::isfinite(best)) {
      infeasible(plan.tasks.at(detect_id),
                 "DistinctModels needs two different capable models for detect and segment");
    }
    for (const auto& [id, r] : best_pick) {
      out.assignment.models[id] = r->name;
      cost[id] = r->cost;
      settled.insert(id);
    }
  }

  for (const auto& [id, opts] : options) {
    if (settled.contains(id)) continue;
    out.assignment.models[id] = opts.front().name;
    cost[id] = opts.front().cost;
  }

  for (const auto& t : plan.tasks) out.score.mismatch += cost.at(t.id);
  out.score.regularizer = w.lambda * static_cast<double>(plan.tasks.size());
  return out;
}

PlanScore score_assignment(const TaskPlan& plan, const Assignment& assignment,
                           const Registry& registry, const SelectorWeights& w,
                           const SemanticResolver* resolver) {
  PlanScore score;
  for (const auto& t : plan.tasks) {
    if (!needs_model(t)) continue;
    auto it = assignment.models.find(t.id);
    const auto model = it == assignment.models.end() ? std::nullopt : registry.find(it->second);
    score.mismatch += model ? task_cost(t, *model, w, resolver) : kInfeasibleCost;
  }
  score.regularizer = w.lambda * static_cast<double>(plan.tasks.size());
  return score;
}

Json assignment_to_json(const Assignment& a) {
  Json j = Json::object();
  for (const auto& [id, name] : a.models) j[std::to_string(id)] = name;
  return j;
}

}  // namespace uvgpt
