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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uvgpt/planner/planner.hpp"

namespace uvgpt::testing {

std::vector<std::uint32_t> naive_runs(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint32_t> runs{0};
  std::uint8_t cur = 0;
  for (auto b : bits) {
    if (b != cur) {
      runs.push_back(0);
      cur = b;
    }
    ++runs.back();
  }
  return runs;
}

std::vector<std::uint8_t> random_bitmap(std::mt19937& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (auto& b : bits) b = on(rng) ? 1 : 0;
  if (std::find(bits.begin(), bits.end(), 1) == bits.end()) bits[rng() % bits.size()] = 1;
  return bits;
}

std::vector<std::uint8_t> box_bitmap(const BBox& b, int w, int h) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x >= b.x && x < b.x + b.w && y >= b.y && y < b.y + b.h) bits[y * w + x] = 1;
    }
  }
  return bits;
}

double pixel_iou(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

namespace {

bool covers(const TargetSpec& t, const Vocabulary& v, const SemanticResolver& res) {
  if (v.open) return true;
  if (t.kind == TargetSpec::Kind::Named) return v.classes.count(t.name) > 0;
  if (t.kind == TargetSpec::Kind::Category) {
    for (const auto& m : res.expand(t.name)) {
      if (v.classes.count(m)) return true;
    }
    return false;
  }
  return true;
}

const std::vector<std::string> kClasses = {"dog", "cat", "bird", "house"};

}  // namespace

double oracle_task_cost(const VisionTask& t, const ModelDescriptor& m, const SelectorWeights& w,
                        const SemanticResolver& res) {
  const bool can = t.verb == Verb::Detect
                       ? m.capabilities.count(Capability::Detect) > 0
                       : m.capabilities.count(Capability::Segment) ||
                             m.capabilities.count(Capability::PromptSegment);
  if (!can) return INFINITY;
  double c = w.mu * m.latency_cost + w.nu * (1.0 - m.reliability);
  if (!covers(*t.target, m.vocabulary, res)) {
    if (!m.capabilities.count(Capability::PromptSegment)) return INFINITY;
    c += 1.0;
  }
  return c;
}

double brute_force_min(const TaskPlan& p, const std::vector<ModelDescriptor>& models,
                       const SelectorWeights& w, const SemanticResolver& res) {
  std::vector<int> ids;
  for (const auto& t : p.tasks) {
    if (t.verb == Verb::Detect || t.verb == Verb::Segment) ids.push_back(t.id);
  }
  double best = INFINITY;
  std::vector<std::size_t> pick(ids.size(), 0);
  while (true) {
    bool ok = true;
    double total = w.lambda * static_cast<double>(p.tasks.size());
    for (std::size_t k = 0; k < ids.size() && ok; ++k) {
      const auto& t = p.tasks[ids[k]];
      total += oracle_task_cost(t, models[pick[k]], w, res);
      if (t.verb != Verb::Segment) continue;
      const auto& dep = p.tasks[*t.depends_on.begin()];
      if (t.constraints.count(Constraint::DistinctModels) ||
          dep.constraints.count(Constraint::DistinctModels)) {
        const auto pos = std::find(ids.begin(), ids.end(), dep.id) - ids.begin();
        ok = models[pick[pos]].name != models[pick[k]].name;
      }
    }
    if (ok && total < best) best = total;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == models.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return best;
}

std::vector<ModelDescriptor> random_models(std::mt19937& rng) {
  const int n = 1 + static_cast<int>(rng() % 4);
  std::vector<ModelDescriptor> out;
  std::set<std::string> names;
  for (int i = 0; i < n; ++i) {
    ModelDescriptor m;
    m.name = std::string(1, static_cast<char>('a' + (rng() % 6))) + std::to_string(i);
    names.insert(m.name);
    do {
      m.capabilities.clear();
      if (rng() % 2) m.capabilities.insert(Capability::Detect);
      if (rng() % 2) m.capabilities.insert(Capability::Segment);
      if (rng() % 3 == 0) m.capabilities.insert(Capability::PromptSegment);
    } while (m.capabilities.empty());
    if (rng() % 3 == 0) {
      m.vocabulary = Vocabulary::open_set();
    } else {
      std::set<std::string> cls;
      for (const auto& c : kClasses) {
        if (rng() % 2) cls.insert(c);
      }
      if (cls.empty()) cls.insert(kClasses[rng() % kClasses.size()]);
      m.vocabulary = Vocabulary::fixed(cls);
    }
    m.latency_cost = static_cast<double>(rng() % 5);
    m.reliability = 0.25 * static_cast<double>(1 + rng() % 4);
    out.push_back(m);
  }
  return out;
}

TaskPlan random_plan(std::mt19937& rng) {
  const std::vector<TargetSpec> pool = {
      TargetSpec::named("dog"),   TargetSpec::named("cat"),        TargetSpec::named("zebra"),
      TargetSpec::named("house"), TargetSpec::category("animal"), TargetSpec::anomaly(),
      TargetSpec::main_object()};
  IntentSet set;
  const int targets = 1 + static_cast<int>(rng() % 2);
  std::set<TargetSpec> used;
  for (int i = 0; i < targets; ++i) {
    TargetSpec t = pool[rng() % pool.size()];
    if (!used.insert(t).second) continue;
    Intent d;
    d.action = Action::Detect;
    d.target = t;
    if (rng() % 3 == 0) d.constraints.insert(Constraint::DistinctModels);
    if (rng() % 4) {
      Intent s = d;
      s.action = Action::Segment;
      set.intents.push_back(s);
    }
    set.intents.push_back(d);
  }
  const std::vector<ImageRef> images{{"img", {}, 32, 32}};
  return plan(set, images);
}

}  // namespace uvgpt::testing
