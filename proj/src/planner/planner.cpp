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

#include "uvgpt/planner/planner.hpp"

#include <algorithm>
#include <vector>

namespace uvgpt {

namespace {

// Everything the plan needs to know about one distinct target, merged over
// all intents that mention it.
struct Chain {
  TargetSpec target;
  bool explicit_detect = false;
  bool segment = false;
  bool show_boxes = true;
  Quantifier quantifier = Quantifier::First;
  bool conditional = false;
  std::set<Constraint> constraints;
};

std::vector<Chain> merge_chains(const IntentSet& intents) {
  std::vector<Chain> chains;
  for (const auto& intent : intents.intents) {
    if (intent.target.kind == TargetSpec::Kind::Named && intent.target.name.empty()) {
      throw PlanError(PlanErrc::InvalidIntentSet, "named target without a class");
    }
    if (intent.target.kind == TargetSpec::Kind::Category && intent.target.name.empty()) {
      throw PlanError(PlanErrc::InvalidIntentSet, "category target without a name");
    }
    auto it = std::find_if(chains.begin(), chains.end(),
                           [&](const Chain& c) { return c.target == intent.target; });
    if (it == chains.end()) {
      Chain fresh;
      fresh.target = intent.target;
      chains.push_back(std::move(fresh));
      it = std::prev(chains.end());
    }
    if (intent.action == Action::Detect) {
      it->explicit_detect = it->explicit_detect || intent.render;
    } else {
      it->segment = true;
    }
    it->show_boxes = it->show_boxes && intent.show_boxes;
    if (intent.quantifier == Quantifier::All) it->quantifier = Quantifier::All;
    it->conditional = it->conditional || intent.conditional;
    it->constraints.insert(intent.constraints.begin(), intent.constraints.end());
  }
  return chains;
}

bool has_cycle(const TaskPlan& plan) {
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(plan.tasks.size(), Mark::White);
  // Iterative DFS over dependency edges.
  for (std::size_t root = 0; root < plan.tasks.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::size_t, std::set<int>::const_iterator>> stack;
    mark[root] = Mark::Grey;
    stack.emplace_back(root, plan.tasks[root].depends_on.begin());
    while (!stack.empty()) {
      auto& [node, it] = stack.back();
      if (it == plan.tasks[node].depends_on.end()) {
        mark[node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const auto next = static_cast<std::size_t>(*it++);
      if (mark[next] == Mark::Grey) return true;
      if (mark[next] == Mark::White) {
        mark[next] = Mark::Grey;
        stack.emplace_back(next, plan.tasks[next].depends_on.begin());
      }
    }
  }
  return false;
}

std::string task_name(const VisionTask& t) { return "task " + std::to_string(t.id); }

}  // namespace

std::string to_string(PlanErrc code) {
  switch (code) {
    case PlanErrc::NoImages: return "NoImages";
    case PlanErrc::InvalidIntentSet: return "InvalidIntentSet";
    case PlanErrc::CyclicPlan: return "CyclicPlan";
    case PlanErrc::OrphanSegment: return "OrphanSegment";
    case PlanErrc::DanglingDependency: return "DanglingDependency";
    case PlanErrc::NonDenseIds: return "NonDenseIds";
    case PlanErrc::ForwardDependency: return "ForwardDependency";
    case PlanErrc::BadDependency: return "BadDependency";
    case PlanErrc::MissingField: return "MissingField";
  }
  return "PlanError";
}

TaskPlan plan(const IntentSet& intents, std::span<const ImageRef> images,
              const PlanOptions& options) {
  if (images.empty()) throw PlanError(PlanErrc::NoImages, "plan needs at least one image");
  if (intents.intents.empty()) throw PlanError(PlanErrc::InvalidIntentSet, "no intents");
  const auto chains = merge_chains(intents);

  TaskPlan out;
  out.source = intents;
  auto add = [&](VisionTask t) {
    t.id = static_cast<int>(out.tasks.size());
    out.tasks.push_back(std::move(t));
    return out.tasks.back().id;
  };

  std::set<int> renders;
  for (int img = 0; img < static_cast<int>(images.size()); ++img) {
    std::set<int> leaves;
    for (const auto& chain : chains) {
      VisionTask detect;
      detect.verb = Verb::Detect;
      detect.target = chain.target;
      detect.image = img;
      detect.quantifier = chain.quantifier;
      detect.conditional = chain.conditional;
      detect.constraints = chain.constraints;
      detect.draw_boxes = chain.explicit_detect && chain.show_boxes;
      const int detect_id = add(detect);
      leaves.insert(detect_id);
      if (chain.segment) {
        VisionTask segment = detect;
        segment.verb = Verb::Segment;
        segment.draw_boxes = false;
        segment.depends_on = {detect_id};
        leaves.insert(add(segment));
      }
    }
    VisionTask render;
    render.verb = Verb::Render;
    render.image = img;
    render.depends_on = leaves;
    renders.insert(add(render));
  }
  if (options.integrate && images.size() > 1) {
    VisionTask integrate;
    integrate.verb = Verb::Integrate;
    integrate.depends_on = renders;
    add(integrate);
  }
  return out;
}

void validate_plan(const TaskPlan& plan) {
  const auto& tasks = plan.tasks;
  const int n = static_cast<int>(tasks.size());
  for (int k = 0; k < n; ++k) {
    if (tasks[k].id != k) {
      throw PlanError(PlanErrc::NonDenseIds, "task at position " + std::to_string(k) +
                                                 " has id " + std::to_string(tasks[k].id));
    }
  }
  for (const auto& t : tasks) {
    for (int d : t.depends_on) {
      if (d < 0 || d >= n) {
        throw PlanError(PlanErrc::DanglingDependency,
                        task_name(t) + " depends on unknown task " + std::to_string(d));
      }
    }
  }
  if (has_cycle(plan)) throw PlanError(PlanErrc::CyclicPlan, "plan dependencies form a cycle");
  for (const auto& t : tasks) {
    if (!t.depends_on.empty() && *t.depends_on.rbegin() >= t.id) {
      throw PlanError(PlanErrc::ForwardDependency,
                      task_name(t) + " depends on a later task");
    }
  }

  for (const auto& t : tasks) {
    switch (t.verb) {
      case Verb::Detect:
      case Verb::Segment:
        if (!t.target || !t.image) {
          throw PlanError(PlanErrc::MissingField, task_name(t) + " needs a target and an image");
        }
        break;
      case Verb::Render:
        if (!t.image) throw PlanError(PlanErrc::MissingField, task_name(t) + " needs an image");
        break;
      case Verb::Integrate:
        break;
    }
  }

  for (const auto& t : tasks) {
    switch (t.verb) {
      case Verb::Detect:
        if (!t.depends_on.empty()) {
          throw PlanError(PlanErrc::BadDependency, task_name(t) + ": detect has dependencies");
        }
        break;
      case Verb::Segment: {
        const bool ok = t.depends_on.size() == 1 && [&] {
          const auto& dep = tasks[*t.depends_on.begin()];
          return dep.verb == Verb::Detect && dep.image == t.image && dep.target == t.target;
        }();
        if (!ok) {
          throw PlanError(PlanErrc::OrphanSegment,
                          task_name(t) + ": segment lacks its same-target detect");
        }
        break;
      }
      case Verb::Render:
        if (t.depends_on.empty()) {
          throw PlanError(PlanErrc::BadDependency, task_name(t) + ": render has no inputs");
        }
        for (int d : t.depends_on) {
          const auto& dep = tasks[d];
          if ((dep.verb != Verb::Detect && dep.verb != Verb::Segment) || dep.image != t.image) {
            throw PlanError(PlanErrc::BadDependency,
                            task_name(t) + ": render input must be detect/segment of its image");
          }
        }
        break;
      case Verb::Integrate:
        if (t.depends_on.empty()) {
          throw PlanError(PlanErrc::BadDependency, task_name(t) + ": integrate has no inputs");
        }
        for (int d : t.depends_on) {
          if (tasks[d].verb != Verb::Render) {
            throw PlanError(PlanErrc::BadDependency,
                            task_name(t) + ": integrate input must be a render");
          }
        }
        break;
    }
  }
}

}  // namespace uvgpt
