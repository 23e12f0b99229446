#pragma once

#include <string>
#include <vector>

#include "nflcast/types.hpp"

namespace nflcast {

// Whitespace split, then strip punctuation from both ends of each token.
// Leading '#' and '@' are kept so hashtags and mentions survive.
std::vector<std::string> tokenize(const std::string& text);

std::string to_lower(const std::string& s);

// Fills tokens and tokens_lower from text.
void tokenize_tweet(TweetRecord& tweet);

// False iff the text contains a Katakana, Hiragana, or Han code point.
bool keep_non_cjk(const std::string& text);

// Decodes one UTF-8 code point starting at `i`; advances `i`. Invalid bytes
// decode as U+FFFD and advance by one.
char32_t utf8_next(const std::string& s, size_t& i);

}  // namespace nflcast
