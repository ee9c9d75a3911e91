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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uvgpt/parser/parser.hpp"
#include "uvgpt/planner/planner.hpp"
#include "uvgpt/registry/registry.hpp"
#include "uvgpt/registry/selector.hpp"

namespace uvgpt {
namespace {

ModelDescriptor yolo() {
  return {"yolo-mock", {Capability::Detect}, Vocabulary::fixed({"dog", "cat", "bird"}), 1.0, 0.95};
}
ModelDescriptor sam() {
  return {"sam-mock", {Capability::Segment, Capability::PromptSegment}, Vocabulary::open_set(), 4.0,
          0.95};
}
ModelDescriptor allinone() {
  return {"allinone-mock", {Capability::Detect, Capability::Segment}, Vocabulary::open_set(), 0.5,
          0.99};
}

VisionTask task(Verb v, TargetSpec t) {
  VisionTask out;
  out.verb = v;
  out.target = std::move(t);
  out.image = 0;
  return out;
}

std::vector<ImageRef> one_image() { return {{"img", {}, 32, 32}}; }

TEST(Registry, RegisterAndFind) {
  Registry r;
  r.register_model(yolo());
  EXPECT_TRUE(r.contains("yolo-mock"));
  EXPECT_EQ(r.find("yolo-mock"), yolo());
  EXPECT_FALSE(r.find("nope").has_value());
}

TEST(Registry, DuplicateName) {
  Registry r;
  r.register_model(yolo());
  try {
    r.register_model(yolo());
    FAIL();
  } catch (const RegistryError& e) {
    EXPECT_EQ(e.code(), RegistryErrc::DuplicateName);
  }
}

TEST(Registry, InvalidDescriptors) {
  Registry r;
  auto bad = yolo();
  bad.vocabulary = Vocabulary::fixed({});
  EXPECT_THROW(r.register_model(bad), RegistryError);
  bad = yolo();
  bad.reliability = 0.0;
  EXPECT_THROW(r.register_model(bad), RegistryError);
  bad = yolo();
  bad.capabilities.clear();
  EXPECT_THROW(r.register_model(bad), RegistryError);
  bad = yolo();
  bad.name = kCompositor;
  EXPECT_THROW(r.register_model(bad), RegistryError);
  EXPECT_TRUE(r.empty());
}

TEST(Registry, CandidatesAreCapableSubset) {
  Registry r;
  r.register_model(yolo());
  r.register_model(sam());
  r.register_model(allinone());
  const auto d = candidates(task(Verb::Detect, TargetSpec::named("dog")), r);
  std::set<std::string> names;
  for (const auto& m : d) names.insert(m.name);
  // set-filter oracle
  std::set<std::string> want;
  for (const auto& m : r.snapshot()) {
    if (m.can(Capability::Detect)) want.insert(m.name);
  }
  EXPECT_EQ(names, want);
}

TEST(Registry, CandidateExamples) {
  Registry r;
  r.register_model(yolo());
  r.register_model(sam());
  const auto d = candidates(task(Verb::Detect, TargetSpec::named("dog")), r);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].name, "yolo-mock");
  const auto s = candidates(task(Verb::Segment, TargetSpec::named("dog")), r);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].name, "sam-mock");

  Registry seg_only;
  seg_only.register_model(sam());
  try {
    candidates(task(Verb::Detect, TargetSpec::named("dog")), seg_only);
    FAIL();
  } catch (const RegistryError& e) {
    EXPECT_EQ(e.code(), RegistryErrc::NoCapableModel);
  }
}

TEST(Registry, JsonRoundTrip) {
  const Json j = Json::array({yolo(), sam()});
  const auto r = registry_from_json(j);
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(r.find("sam-mock"), sam());
  EXPECT_EQ(Json(sam()).at("capabilities"), (Json{"segment", "prompt_segment"}));
}

TEST(Select, UniqueCapableModels) {
  Registry r;
  r.register_model(yolo());
  r.register_model(sam());
  const auto p = plan(parse("find the dog and segment it"), one_image());
  const auto s = select(p, r);
  EXPECT_EQ(s.assignment.at(0), "yolo-mock");
  EXPECT_EQ(s.assignment.at(1), "sam-mock");
  EXPECT_EQ(s.assignment.at(2), kCompositor);
  const SelectorWeights w;
  const double expected = (w.mu * 1.0 + w.nu * 0.05) + (w.mu * 4.0 + w.nu * 0.05);
  EXPECT_NEAR(s.score.mismatch, expected, 1e-12);
  EXPECT_DOUBLE_EQ(s.score.regularizer, w.lambda * 3);
  EXPECT_EQ(s.score.total(), s.score.mismatch + s.score.regularizer);
}

TEST(Select, Case8DistinctModels) {
  Registry r;
  r.register_model(yolo());
  r.register_model(sam());
  r.register_model(allinone());
  const auto free_plan = plan(parse("detect and segment the bird"), one_image());
  const auto free = select(free_plan, r);
  EXPECT_EQ(free.assignment.at(0), "allinone-mock");
  EXPECT_EQ(free.assignment.at(1), "allinone-mock");

  const auto p =
      plan(parse("Detect and segment the bird using more than one foundation models."), one_image());
  const auto s = select(p, r);
  EXPECT_NE(s.assignment.at(0), s.assignment.at(1));
  EXPECT_EQ(s.assignment.at(0), "yolo-mock");
  EXPECT_EQ(s.assignment.at(1), "allinone-mock");
}

TEST(Select, DistinctModelsInfeasible) {
  Registry r;
  r.register_model(allinone());
  const auto p =
      plan(parse("Detect and segment the bird using more than one foundation models."), one_image());
  try {
    select(p, r);
    FAIL();
  } catch (const RegistryError& e) {
    EXPECT_EQ(e.code(), RegistryErrc::Infeasible);
  }
}

TEST(Select, VocabularyMissPenalty) {
  ModelDescriptor fixed_seg{"fixed-seg", {Capability::Segment, Capability::PromptSegment},
                            Vocabulary::fixed({"dog"}), 0.0, 1.0};
  const SelectorWeights w;
  EXPECT_EQ(task_cost(task(Verb::Segment, TargetSpec::named("dog")), fixed_seg, w), 0.0);
  EXPECT_EQ(task_cost(task(Verb::Segment, TargetSpec::named("zebra")), fixed_seg, w), 1.0);
  EXPECT_EQ(task_cost(task(Verb::Detect, TargetSpec::named("dog")), fixed_seg, w), kInfeasibleCost);
  EXPECT_EQ(task_cost(task(Verb::Detect, TargetSpec::named("zebra")), yolo(), w), kInfeasibleCost);
}

TEST(Select, CategoryCoverageUsesResolver) {
  const auto resolver = default_resolver();
  const auto t = task(Verb::Detect, TargetSpec::category("animal"));
  EXPECT_TRUE(std::isfinite(task_cost(t, yolo(), {}, resolver.get())));
  EXPECT_FALSE(std::isfinite(task_cost(t, yolo(), {}, nullptr)));
  const auto b = task(Verb::Detect, TargetSpec::category("building"));
  EXPECT_FALSE(std::isfinite(task_cost(b, yolo(), {}, resolver.get())));
}

TEST(Select, TiesBreakByName) {
  Registry r;
  auto a = yolo();
  a.name = "b-det";
  auto b = yolo();
  b.name = "a-det";
  r.register_model(a);
  r.register_model(b);
  r.register_model(sam());
  const auto s = select(plan(parse("find the dog"), one_image()), r);
  EXPECT_EQ(s.assignment.at(0), "a-det");
}

TEST(Select, LatencyScalingKeepsArgmin) {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<ModelDescriptor> ms;
    for (int i = 0; i < 4; ++i) {
      ms.push_back({"m" + std::to_string(i), {Capability::Detect, Capability::Segment},
                    Vocabulary::open_set(), static_cast<double>(rng() % 50) / 10.0, 1.0});
    }
    Registry base, scaled;
    for (auto m : ms) {
      base.register_model(m);
      m.latency_cost *= 7.5;
      scaled.register_model(m);
    }
    const auto p = plan(parse("find the dog and segment it"), one_image());
    EXPECT_EQ(select(p, base).assignment, select(p, scaled).assignment);
  }
}

using testing::random_models;
using testing::random_plan;

TEST(Select, MatchesExhaustiveEnumeration) {
  std::mt19937 rng(99);
  const auto res = default_resolver();
  const SelectorWeights w;
  int feasible = 0, infeasible = 0, constrained = 0;
  for (int round = 0; round < 1500; ++round) {
    const auto models = random_models(rng);
    const auto p = random_plan(rng);
    ASSERT_LE(p.tasks.size(), 6u);
    Registry r;
    std::set<std::string> seen;
    std::vector<ModelDescriptor> unique;
    for (const auto& m : models) {
      if (!seen.insert(m.name).second) continue;
      r.register_model(m);
      unique.push_back(m);
    }
    const double best = testing::brute_force_min(p, unique, w, *res);
    if (!std::isfinite(best)) {
      try {
        select(p, r, w, res.get());
        ADD_FAILURE() << "round " << round << ": expected Infeasible";
      } catch (const RegistryError& e) {
        EXPECT_EQ(e.code(), RegistryErrc::Infeasible) << "round " << round;
      }
      ++infeasible;
      continue;
    }
    const auto s = select(p, r, w, res.get());
    ASSERT_NEAR(s.score.total(), best, 1e-9) << "round " << round;
    // the reported score must be the score of the returned assignment
    ASSERT_NEAR(score_assignment(p, s.assignment, r, w, res.get()).total(), s.score.total(), 1e-12);
    for (const auto& t : p.tasks) {
      if (t.verb == Verb::Segment && t.constraints.count(Constraint::DistinctModels)) {
        EXPECT_NE(s.assignment.at(t.id), s.assignment.at(*t.depends_on.begin()));
        ++constrained;
      }
    }
    ++feasible;
  }
  EXPECT_GT(feasible, 500);
  EXPECT_GT(infeasible, 50);
  EXPECT_GT(constrained, 50);
}

TEST(Select, InsertionOrderInvariant) {
  std::mt19937 rng(3);
  for (int round = 0; round < 300; ++round) {
    auto models = random_models(rng);
    const auto p = random_plan(rng);
    std::set<std::string> seen;
    models.erase(std::remove_if(models.begin(), models.end(),
                                [&](const auto& m) { return !seen.insert(m.name).second; }),
                 models.end());
    Registry a, b;
    for (const auto& m : models) a.register_model(m);
    std::shuffle(models.begin(), models.end(), rng);
    for (const auto& m : models) b.register_model(m);
    try {
      const auto sa = select(p, a);
      EXPECT_EQ(sa.assignment, select(p, b).assignment);
    } catch (const RegistryError&) {
      EXPECT_THROW(select(p, b), RegistryError);
    }
  }
}

}  // namespace
}  // namespace uvgpt
