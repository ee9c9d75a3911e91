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

#include "uvgpt/parser/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>

namespace uvgpt {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  bool boundary = false;  // clause-ending punctuation
};

bool is_stripped_punct(char c) { return c == '.' || c == ',' || c == '?' || c == '!'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back({std::move(word), false, false});
    word.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"') {
      flush();
      const auto close = text.find('"', i + 1);
      const auto end = close == std::string_view::npos ? text.size() : close;
      std::string span;
      for (char q : text.substr(i + 1, end - i - 1)) {
        span.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(q))));
      }
      if (!span.empty()) out.push_back({std::move(span), true, false});
      i = end;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (is_stripped_punct(c)) {
      flush();
      if (out.empty() || !out.back().boundary) out.push_back({{}, false, true});
    } else {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return out;
}

// --- lexicon ---------------------------------------------------------------

const std::set<std::string, std::less<>> kDetectVerbs = {"find",     "detect", "locate",
                                                         "identify", "see",    "spot"};
const std::set<std::string, std::less<>> kSegmentVerbs = {"segment", "mask", "highlight"};
const std::set<std::string, std::less<>> kAllDeterminers = {"all", "every", "each"};
const std::set<std::string, std::less<>> kFirstDeterminers = {"a", "an", "the", "any", "some"};
const std::set<std::string, std::less<>> kPrepositions = {
    "in", "on", "of", "from", "within", "at", "inside", "into", "for", "across", "to", "using"};
const std::set<std::string, std::less<>> kFillers = {
    "can",   "could",   "would", "will",   "you",      "please",  "if",       "so",     "have",
    "has",   "only",    "there", "is",     "are",      "me",      "i",        "we",     "do",
    "does",  "let",     "us",    "out",    "more",     "than",    "one",      "foundation",
    "model", "models",  "image", "images", "picture",  "pictures", "photo",   "photos", "scene",
    "frame", "or",      "by",    "with",   "and",      "then",    "it",       "them",   "they"};
const std::set<std::string, std::less<>> kAnomalyWords = {"anomaly", "anomalous", "different"};
const std::set<std::string, std::less<>> kObjectWords = {"object", "objects", "thing", "things"};

std::optional<Action> verb_action(std::string_view base) {
  if (kDetectVerbs.contains(base)) return Action::Detect;
  if (kSegmentVerbs.contains(base)) return Action::Segment;
  return std::nullopt;
}

// Recognizes inflected forms ("masking", "highlighted", "spotting").
std::optional<Action> single_verb(std::string_view w) {
  if (auto a = verb_action(w)) return a;
  auto strip = [&](std::string_view suffix) -> std::optional<std::string> {
    if (w.size() > suffix.size() + 1 && w.ends_with(suffix)) {
      return std::string(w.substr(0, w.size() - suffix.size()));
    }
    return std::nullopt;
  };
  for (std::string_view suffix : {"ing", "ed", "es", "s", "d"}) {
    auto stem = strip(suffix);
    if (!stem) continue;
    if (auto a = verb_action(*stem)) return a;
    if (auto a = verb_action(*stem + "e")) return a;
    if (stem->size() > 2 && stem->back() == (*stem)[stem->size() - 2]) {
      if (auto a = verb_action(stem->substr(0, stem->size() - 1))) return a;
    }
  }
  return std::nullopt;
}

// A token naming one or more verbs: "mask", "masking", "detect/segment".
std::optional<std::vector<Action>> verb_token(const Token& t) {
  if (t.quoted || t.boundary) return std::nullopt;
  std::vector<Action> actions;
  std::size_t start = 0;
  while (start <= t.text.size()) {
    const auto slash = t.text.find('/', start);
    const auto part = std::string_view(t.text).substr(
        start, slash == std::string::npos ? std::string::npos : slash - start);
    auto a = single_verb(part);
    if (!a) return std::nullopt;
    actions.push_back(*a);
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return actions;
}

bool is_keyword(const Token& t) {
  if (t.quoted) return false;
  if (t.boundary) return true;
  return verb_token(t).has_value() || kAllDeterminers.contains(t.text) ||
         kFirstDeterminers.contains(t.text) || kPrepositions.contains(t.text) ||
         kFillers.contains(t.text);
}

struct Binding {
  TargetSpec target;
  Quantifier quantifier = Quantifier::First;
};

struct Clause {
  std::vector<Action> verbs;
  std::vector<Binding> targets;
  bool boxes_off = false;
  bool conditional = false;
  bool distinct_models = false;

  void add_verb(Action a) {
    if (std::find(verbs.begin(), verbs.end(), a) == verbs.end()) verbs.push_back(a);
  }
  void add_target(const Binding& b) {
    auto same = [&](const Binding& x) { return x.target == b.target; };
    if (std::none_of(targets.begin(), targets.end(), same)) targets.push_back(b);
  }
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const SemanticResolver& resolver)
      : tokens_(std::move(tokens)), resolver_(resolver) {}

  std::vector<Intent> run() {
    for (i_ = 0; i_ < tokens_.size(); ++i_) step();
    flush();
    if (!saw_verb_ || intents_.empty()) {
      throw ParseError(ParseErrc::NoActionFound, "no action verb found in instruction");
    }
    return std::move(intents_);
  }

 private:
  const Token* peek(std::size_t offset = 1) const {
    const auto j = i_ + offset;
    return j < tokens_.size() ? &tokens_[j] : nullptr;
  }

  bool next_is(std::string_view word, std::size_t offset = 1) const {
    const auto* t = peek(offset);
    return t && !t->quoted && !t->boundary && t->text == word;
  }

  void step() {
    const Token& t = tokens_[i_];
    if (t.boundary) {
      flush();
      return;
    }
    if (t.quoted) {
      content_phrase();
      return;
    }
    const std::string& w = t.text;

    if (w == "more" && next_is("than") && next_is("one", 2)) {
      clause_.distinct_models = true;
      i_ += 2;
      return;
    }
    if (w == "then") {
      flush();
      skipping_ = false;
      return;
    }
    if (w == "and") {
      skipping_ = false;
      const Token* n = peek();
      const bool starts_clause = n && (next_is("then") || verb_token(*n).has_value());
      if (starts_clause && !clause_.targets.empty() && !clause_.verbs.empty()) flush();
      return;
    }
    if (auto actions = verb_token(t)) {
      skipping_ = false;
      saw_verb_ = true;
      if (next_is("out") && (w == "mask" || w == "cut")) ++i_;
      const bool manner = after_manner_marker_;
      after_manner_marker_ = false;
      if (!manner && !clause_.targets.empty() && !clause_.verbs.empty()) flush();
      for (auto a : *actions) clause_.add_verb(a);
      return;
    }
    if (w == "cut" && next_is("out")) {
      skipping_ = false;
      saw_verb_ = true;
      ++i_;
      if (!clause_.targets.empty() && !clause_.verbs.empty()) flush();
      clause_.add_verb(Action::Segment);
      return;
    }
    if (w == "by" || w == "with") {
      after_manner_marker_ = true;
      skipping_ = true;
      return;
    }
    if (kPrepositions.contains(w)) {
      skipping_ = true;
      return;
    }
    if (kAllDeterminers.contains(w) || kFirstDeterminers.contains(w)) {
      if (!skipping_) {
        pending_quantifier_ = kAllDeterminers.contains(w) ? Quantifier::All : Quantifier::First;
      }
      return;
    }
    if (w == "it" || w == "them" || w == "they") {
      skipping_ = false;
      bind_pronoun(w);
      return;
    }
    if (w == "if") {
      if (next_is("so") || next_is("have")) {
        clause_.conditional = true;
        ++i_;
      }
      return;
    }
    if (w == "only") {
      if (std::find(clause_.verbs.begin(), clause_.verbs.end(), Action::Segment) !=
          clause_.verbs.end()) {
        clause_.boxes_off = true;
      }
      return;
    }
    if (kFillers.contains(w)) {
      skipping_ = false;
      return;
    }
    content_phrase();
  }

  void bind_pronoun(const std::string& w) {
    const auto& recent = clause_.targets.empty() ? last_group_ : clause_.targets;
    if (recent.empty()) {
      throw ParseError(ParseErrc::UnresolvedPronoun,
                       "pronoun '" + w + "' has no preceding target");
    }
    if (w == "it") {
      clause_.add_target(recent.back());
    } else {
      const auto group = recent;
      for (const auto& b : group) clause_.add_target(b);
    }
  }

  // Consumes consecutive non-keyword tokens starting at i_ as one phrase.
  void content_phrase() {
    std::vector<std::string> words;
    std::size_t j = i_;
    for (; j < tokens_.size() && !is_keyword(tokens_[j]); ++j) words.push_back(tokens_[j].text);
    i_ = j - 1;
    const auto quantifier = pending_quantifier_;
    pending_quantifier_.reset();
    if (skipping_) return;

    std::optional<TargetSpec> target;
    bool plural = false;
    const bool has_main = std::find(words.begin(), words.end(), "main") != words.end();
    const bool has_anomaly = std::any_of(words.begin(), words.end(),
                                         [](const auto& x) { return kAnomalyWords.contains(x); });
    if (has_main) {
      target = TargetSpec::main_object();
    } else if (has_anomaly) {
      target = TargetSpec::anomaly();
      plural = std::any_of(words.begin(), words.end(),
                           [](const auto& x) { return x == "objects" || x == "things"; });
    } else {
      std::string phrase;
      for (const auto& x : words) {
        if (kObjectWords.contains(x)) continue;
        if (!phrase.empty()) phrase += ' ';
        phrase += x;
      }
      if (phrase.empty()) return;
      const auto label = normalize_label(phrase);
      plural = label != phrase;
      target = resolver_.resolve(phrase);
      if (!target) target = TargetSpec::named(label);
    }
    const auto q = quantifier.value_or(plural ? Quantifier::All : Quantifier::First);
    clause_.add_target({*target, q});
  }

  void flush() {
    skipping_ = false;
    after_manner_marker_ = false;
    pending_quantifier_.reset();
    if (clause_.verbs.empty()) {
      if (!clause_.targets.empty()) last_group_ = clause_.targets;
      clause_ = {};
      return;
    }
    if (clause_.targets.empty()) {
      if (last_group_.empty()) {
        throw ParseError(ParseErrc::MissingTarget, "action has no target");
      }
      clause_.targets = last_group_;
    }
    for (auto action : clause_.verbs) {
      for (const auto& b : clause_.targets) emit(action, b);
    }
    last_group_ = clause_.targets;
    clause_ = {};
  }

  void emit(Action action, const Binding& b) {
    auto it = std::find_if(intents_.begin(), intents_.end(), [&](const Intent& x) {
      return x.action == action && x.target == b.target;
    });
    if (it == intents_.end()) {
      Intent intent;
      intent.action = action;
      intent.render = true;
      intent.show_boxes = !clause_.boxes_off;
      intent.target = b.target;
      intent.quantifier = b.quantifier;
      intent.conditional = clause_.conditional;
      if (clause_.distinct_models) intent.constraints.insert(Constraint::DistinctModels);
      intents_.push_back(std::move(intent));
      return;
    }
    if (b.quantifier == Quantifier::All) it->quantifier = Quantifier::All;
    it->show_boxes = it->show_boxes && !clause_.boxes_off;
    it->conditional = it->conditional || clause_.conditional;
    if (clause_.distinct_models) it->constraints.insert(Constraint::DistinctModels);
  }

  std::vector<Token> tokens_;
  const SemanticResolver& resolver_;
  std::size_t i_ = 0;
  Clause clause_;
  std::vector<Binding> last_group_;
  std::vector<Intent> intents_;
  std::optional<Quantifier> pending_quantifier_;
  bool skipping_ = false;
  bool after_manner_marker_ = false;
  bool saw_verb_ = false;
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : lex(text)) {
    if (!t.boundary) out.push_back(std::move(t.text));
  }
  if (out.empty()) throw ParseError(ParseErrc::EmptyInstruction, "instruction is empty");
  return out;
}

IntentSet parse(std::string_view text, const SemanticResolver& resolver) {
  auto tokens = lex(text);
  const bool has_words =
      std::any_of(tokens.begin(), tokens.end(), [](const Token& t) { return !t.boundary; });
  if (!has_words) throw ParseError(ParseErrc::EmptyInstruction, "instruction is empty");
  IntentSet out;
  out.raw = std::string(text);
  out.intents = Parser(std::move(tokens), resolver).run();
  return out;
}

IntentSet parse(std::string_view text) { return parse(text, *default_resolver()); }

}  // namespace uvgpt
