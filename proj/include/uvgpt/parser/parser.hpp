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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uvgpt/core/types.hpp"
#include "uvgpt/parser/resolver.hpp"

namespace uvgpt {

enum class ParseErrc { EmptyInstruction, NoActionFound, UnresolvedPronoun, MissingTarget };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ParseErrc code() const noexcept { return code_; }

 private:
  ParseErrc code_;
};

/// Lowercase word tokens with `.,?!` stripped. A double-quoted span is kept
/// as a single token (without the quotes).
std::vector<std::string> tokenize(std::string_view text);

/// Grammar-driven parse of an instruction into intents.
///
/// Clauses split on "and" (when it introduces a new verb), "then", and
/// sentence punctuation. Verbs accumulate per target, so "detect X and
/// segment it" yields one Detect and one Segment on X. Pronouns bind to the
/// most recent target ("it") or target group ("them"). Phrases the resolver
/// does not know pass through as Named classes.
IntentSet parse(std::string_view text, const SemanticResolver& resolver);
IntentSet parse(std::string_view text);

}  // namespace uvgpt
