#include "nflcast/text.hpp"

#include <cctype>

namespace nflcast {

const char* window_name(Window w) {
  switch (w) {
    case Window::Weekly: return "weekly";
    case Window::Pregame: return "pregame";
    case Window::Postgame: return "postgame";
  }
  return "?";
}

const char* task_name(Task t) {
  switch (t) {
    case Task::Winner: return "winner";
    case Task::Wts: return "wts";
    case Task::OverUnder: return "ou";
  }
  return "?";
}

namespace {

bool is_ascii_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_strippable(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

std::string strip_token(const std::string& tok) {
  size_t b = 0, e = tok.size();
  while (b < e && is_strippable(tok[b]) && tok[b] != '#' && tok[b] != '@') ++b;
  while (e > b && is_strippable(tok[e - 1])) --e;
  return tok.substr(b, e - b);
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < n && !is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      std::string tok = strip_token(text.substr(start, i - start));
      if (!tok.empty()) out.push_back(std::move(tok));
    }
  }
  return out;
}

std::string to_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void tokenize_tweet(TweetRecord& tweet) {
  tweet.tokens = tokenize(tweet.text);
  tweet.tokens_lower.clear();
  tweet.tokens_lower.reserve(tweet.tokens.size());
  for (const auto& t : tweet.tokens) tweet.tokens_lower.push_back(to_lower(t));
}

char32_t utf8_next(const std::string& s, size_t& i) {
  const unsigned char c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) {
    ++i;
    return c0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    len = 2;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    len = 3;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    len = 4;
    cp = c0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const unsigned char ck = static_cast<unsigned char>(s[i + k]);
    if ((ck & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (ck & 0x3F);
  }
  i += len;
  return cp;
}

namespace {

bool is_cjk(char32_t cp) {
  // Hiragana
  if (cp >= 0x3040 && cp <= 0x309F) return true;
  // Katakana (incl. phonetic extensions and halfwidth forms)
  if (cp >= 0x30A0 && cp <= 0x30FF) return true;
  if (cp >= 0x31F0 && cp <= 0x31FF) return true;
  if (cp >= 0xFF65 && cp <= 0xFF9F) return true;
  // Han
  if (cp >= 0x3400 && cp <= 0x4DBF) return true;
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
  if (cp >= 0xF900 && cp <= 0xFAFF) return true;
  if (cp >= 0x20000 && cp <= 0x2FA1F) return true;
  if (cp >= 0x3005 && cp <= 0x3007) return true;  // iteration mark, ideographic zero
  return false;
}

}  // namespace

bool keep_non_cjk(const std::string& text) {
  size_t i = 0;
  while (i < text.size()) {
    if (is_cjk(utf8_next(text, i))) return false;
  }
  return true;
}

}  // namespace nflcast
