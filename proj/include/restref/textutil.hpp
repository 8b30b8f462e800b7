#pragma once

#include <string>
#include <vector>

namespace restref {

std::string to_lower_copy(std::string s);

// Splits an identifier on camelCase, snake_case, kebab-case and dots;
// returns lowercase tokens ("afterTimestamp" -> {"after", "timestamp"}).
std::vector<std::string> split_identifier(const std::string& name);

// Lowercase word tokens of free text, punctuation stripped, quoted literals
// kept as bare words.
std::vector<std::string> tokenize_text(const std::string& text);

// Fraction of `name_tokens` found in `text_tokens`, where a token matches on
// equality or on a shared prefix of at least 3 characters. Generic tokens
// ("id", "ids") are excluded from the denominator when others exist.
double name_overlap(const std::vector<std::string>& name_tokens,
                    const std::vector<std::string>& text_tokens);

// Singular/plural folding good enough for resource nouns (pets -> pet,
// categories -> category).
std::string singularize(const std::string& word);

bool contains_word(const std::string& haystack_lower, const std::string& word_lower);

// Quoted literals in order of appearance ('en', "points", ...).
std::vector<std::string> quoted_literals(const std::string& text);

}  // namespace restref
