// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace shotad {

// Terminal-punctuation splitter with guards for common abbreviations and
// initials. Terminators stay attached to their sentence.
std::vector<std::string> split_sentences(const std::string& text);

// Lowercased tokens; punctuation stripped except in-word apostrophes.
std::vector<std::string> tokenize_words(const std::string& text);

bool is_known_verb(const std::string& lemma);
bool is_copula(const std::string& word);

// Irregular table, then lexicon-guided suffix stripping with undoubling
// and e-restoration. Unknown words fall back to mechanical stripping.
std::string lemmatize_verb(const std::string& word);

struct ActionPhrase {
  std::string phrase;
  std::string lemma;
};

// Content verbs with their contiguous complement spans. Copulas are not
// content verbs; nouns are fenced off by a preceding determiner check.
std::vector<ActionPhrase> extract_action_phrases(const std::string& sentence);

}  // namespace shotad
