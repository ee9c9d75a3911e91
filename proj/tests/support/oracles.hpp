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


// Reference implementations used as independent oracles by the unit tests
// and the acceptance binary. None of these call into the code under test
// beyond plain data types and the parser/planner used to build inputs.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uvgpt/parser/resolver.hpp"
#include "uvgpt/registry/registry.hpp"
#include "uvgpt/registry/selector.hpp"

namespace uvgpt::testing {

/// Walks the bitmap and emits a run at every change of value, starting
/// from background.
std::vector<std::uint32_t> naive_runs(const std::vector<std::uint8_t>& bits);

/// At least one pixel is always set.
std::vector<std::uint8_t> random_bitmap(std::mt19937& rng, int w, int h, double density);
std::vector<std::uint8_t> box_bitmap(const BBox& b, int w, int h);

/// |A & B| / |A | B| by counting pixels.
double pixel_iou(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

double oracle_task_cost(const VisionTask& t, const ModelDescriptor& m, const SelectorWeights& w,
                        const SemanticResolver& res);

/// Minimum plan score over every model-per-task assignment; infinity when
/// none is feasible.
double brute_force_min(const TaskPlan& plan, const std::vector<ModelDescriptor>& models,
                       const SelectorWeights& w, const SemanticResolver& res);

/// 1-4 models with unique names, coarse costs so ties happen.
std::vector<ModelDescriptor> random_models(std::mt19937& rng);
/// Single-image plan of at most 6 tasks.
TaskPlan random_plan(std::mt19937& rng);

}  // namespace uvgpt::testing
