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

#include "uvgpt/core/json.hpp"
#include "uvgpt/parser/parser.hpp"
#include "uvgpt/parser/resolver.hpp"

namespace uvgpt {
namespace {

struct I {
  Action action;
  TargetSpec target;
  Quantifier q = Quantifier::First;
  bool conditional = false;
  bool boxes = true;
  std::set<Constraint> constraints = {};

  Intent make() const {
    Intent i;
    i.action = action;
    i.target = target;
    i.quantifier = q;
    i.conditional = conditional;
    i.show_boxes = boxes;
    i.constraints = constraints;
    return i;
  }
};

std::vector<Intent> intents(std::initializer_list<I> list) {
  std::vector<Intent> out;
  for (const auto& i : list) out.push_back(i.make());
  return out;
}

std::string show(const std::vector<Intent>& v) {
  std::string s;
  for (const auto& i : v) {
    s += to_string(i.action) + "(" + to_string(i.target) + "," + to_string(i.quantifier) +
         (i.conditional ? ",cond" : "") + (i.show_boxes ? "" : ",boxes-off") +
         (i.constraints.empty() ? "" : ",distinct") + ") ";
  }
  return s;
}

#define EXPECT_INTENTS(text, ...)                              \
  do {                                                         \
    const auto got = parse(text).intents;                      \
    const auto want = intents({__VA_ARGS__});                  \
    EXPECT_EQ(got, want) << "got:  " << show(got) << "\nwant: " << show(want); \
  } while (0)

const auto D = Action::Detect;
const auto S = Action::Segment;
const auto All = Quantifier::All;
const auto First = Quantifier::First;

TEST(Tokenize, Basic) {
  EXPECT_EQ(tokenize("Find the guitar and segment it"),
            (std::vector<std::string>{"find", "the", "guitar", "and", "segment", "it"}));
}

TEST(Tokenize, StripsPunctuation) {
  EXPECT_EQ(tokenize("Can you see a bird? Please mask it if so."),
            (std::vector<std::string>{"can", "you", "see", "a", "bird", "please", "mask", "it",
                                      "if", "so"}));
}

TEST(Tokenize, QuotedSpanIsOneToken) {
  EXPECT_EQ(tokenize("find \"Red Panda\" now"),
            (std::vector<std::string>{"find", "red panda", "now"}));
}

TEST(Tokenize, EmptyInstruction) {
  try {
    tokenize("");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseErrc::EmptyInstruction);
  }
}

TEST(Parse, Case1GuitarDetectThenSegment) {
  EXPECT_INTENTS("find the guitar and segment it", {D, TargetSpec::named("guitar"), First},
                 {S, TargetSpec::named("guitar"), First});
}

TEST(Parse, DogsAndLemonsHighlightOnly) {
  EXPECT_INTENTS("Find dogs and lemons in the images and then highlight them only",
                 {D, TargetSpec::named("dog"), All}, {D, TargetSpec::named("lemon"), All},
                 {S, TargetSpec::named("dog"), All, false, false},
                 {S, TargetSpec::named("lemon"), All, false, false});
}

TEST(Parse, Case2MultiWordTarget) {
  EXPECT_INTENTS("find the yellow flower and segment it",
                 {D, TargetSpec::named("yellow flower"), First},
                 {S, TargetSpec::named("yellow flower"), First});
}

TEST(Parse, Case3Category) {
  EXPECT_INTENTS("find an animal and mask it", {D, TargetSpec::category("animal"), First},
                 {S, TargetSpec::category("animal"), First});
}

TEST(Parse, Case4VerbsAccumulatePerTarget) {
  EXPECT_INTENTS("detect frog and then highlight it with masking",
                 {D, TargetSpec::named("frog"), First}, {S, TargetSpec::named("frog"), First});
}

TEST(Parse, Case5SegmentOnly) {
  EXPECT_INTENTS("highlight all frogs by masking them", {S, TargetSpec::named("frog"), All});
}

TEST(Parse, Case6MainObject) {
  EXPECT_INTENTS("mask out the main object in the image", {S, TargetSpec::main_object(), First});
}

TEST(Parse, Case7Conditional) {
  EXPECT_INTENTS("Can you see a bird? Please mask it if so.",
                 {D, TargetSpec::named("bird"), First},
                 {S, TargetSpec::named("bird"), First, true});
}

TEST(Parse, Case8DistinctModels) {
  const std::set<Constraint> distinct{Constraint::DistinctModels};
  EXPECT_INTENTS("Detect and segment the bird using more than one foundation models.",
                 {D, TargetSpec::named("bird"), First, false, true, distinct},
                 {S, TargetSpec::named("bird"), First, false, true, distinct});
}

TEST(Parse, Case9BuildingCategory) {
  EXPECT_INTENTS("Mask any building in the image.", {S, TargetSpec::category("building"), First});
}

TEST(Parse, Case10AnomalyConditional) {
  EXPECT_INTENTS("identify any anomaly object and segment it if have",
                 {D, TargetSpec::anomaly(), First}, {S, TargetSpec::anomaly(), First, true});
}

TEST(Parse, Case11SlashVerbs) {
  EXPECT_INTENTS("find any anomaly object and detect/segment it", {D, TargetSpec::anomaly(), First},
                 {S, TargetSpec::anomaly(), First});
}

TEST(Parse, Case12DifferentAnimal) {
  EXPECT_INTENTS("find a different animal and segment it", {D, TargetSpec::anomaly(), First},
                 {S, TargetSpec::anomaly(), First});
}

TEST(Parse, UnresolvedPronoun) {
  try {
    parse("segment it");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseErrc::UnresolvedPronoun);
  }
}

TEST(Parse, NoActionFound) {
  try {
    parse("the dog in the park");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseErrc::NoActionFound);
  }
}

TEST(Parse, VerbWithoutTarget) {
  try {
    parse("segment");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseErrc::MissingTarget);
  }
}

TEST(Parse, OpenVocabularyPassThrough) {
  EXPECT_INTENTS("find the quux", {D, TargetSpec::named("quux"), First});
}

TEST(Parse, IsPure) {
  const std::string text = "Find dogs and lemons in the images and then highlight them only";
  EXPECT_EQ(parse(text), parse(text));
  EXPECT_EQ(parse(text).raw, text);
}

TEST(Parse, NamedPromptsHaveOneDetectRootedChainPerTarget) {
  // Cases 1-9 name their objects; each distinct target must get exactly one Detect
  // or, when only masks are asked for, exactly one Segment (the planner adds Detect).
  const std::vector<std::string> prompts = {
      "find the guitar and segment it",
      "find the yellow flower and segment it",
      "find an animal and mask it",
      "detect frog and then highlight it with masking",
      "highlight all frogs by masking them",
      "mask out the main object in the image",
      "Can you see a bird? Please mask it if so.",
      "Detect and segment the bird using more than one foundation models.",
      "Mask any building in the image.",
  };
  for (const auto& p : prompts) {
    const auto set = parse(p);
    std::map<TargetSpec, std::pair<int, int>> per_target;
    for (const auto& i : set.intents) {
      auto& [d, s] = per_target[i.target];
      (i.action == Action::Detect ? d : s)++;
    }
    EXPECT_EQ(per_target.size(), 1u) << p;
    for (const auto& [t, counts] : per_target) {
      EXPECT_LE(counts.first, 1) << p;
      EXPECT_LE(counts.second, 1) << p;
    }
  }
}

TEST(Parse, NeverLeavesPronounTargets) {
  for (const auto& p : {"find the cat and segment it", "find cats and dogs then mask them",
                        "detect the car, then highlight it"}) {
    for (const auto& i : parse(p).intents) {
      EXPECT_NE(i.target.name, "it") << p;
      EXPECT_NE(i.target.name, "them") << p;
    }
  }
}

TEST(Resolver, DefaultTable) {
  const auto r = default_resolver();
  EXPECT_EQ(r->resolve("animal"), TargetSpec::category("animal"));
  EXPECT_EQ(r->resolve("building"), TargetSpec::category("building"));
  EXPECT_EQ(r->resolve("quux"), TargetSpec::named("quux"));
  EXPECT_EQ(r->expand("animal").size(), 11u);
  EXPECT_TRUE(r->expand("animal").contains("giraffe"));
  EXPECT_EQ(r->expand("building"), (std::set<std::string>{"tower", "house", "bridge-tower"}));
  EXPECT_TRUE(r->expand("vehicle").empty());
}

TEST(Resolver, CustomOntologyChangesParse) {
  TableResolver r({{"fruit", {"apple", "lemon"}}});
  const auto set = parse("find the fruit", r);
  ASSERT_EQ(set.intents.size(), 1u);
  EXPECT_EQ(set.intents[0].target, TargetSpec::category("fruit"));
}

TEST(Resolver, WireReplyRoundTrip) {
  ResolverReply reply{TargetSpec::category("animal"), {"cat", "dog"}};
  const auto j = resolver_reply_to_json(reply);
  EXPECT_EQ(j.at("kind"), "category");
  const auto back = resolver_reply_from_json(j);
  EXPECT_EQ(back.target, reply.target);
  EXPECT_EQ(back.members, reply.members);
  EXPECT_FALSE(resolver_reply_from_json(Json{{"kind", "unknown"}}).target.has_value());
  EXPECT_EQ(resolver_request_json("red panda").dump(), R"({"phrase":"red panda"})");
}

}  // namespace
}  // namespace uvgpt
