#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

namespace evascore {

// Unicode NFC via ICU. Falls back to the input on ICU failure, which only
// happens for byte sequences that are not valid UTF-8.
inline std::string nfc(const std::string& text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) return text;
  icu::UnicodeString decoded = icu::UnicodeString::fromUTF8(text);
  icu::UnicodeString composed = norm->normalize(decoded, status);
  if (U_FAILURE(status)) return text;
  std::string out;
  composed.toUTF8String(out);
  return out;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// NFC, strip leading/trailing whitespace, collapse internal whitespace runs
// to a single space. Canonical form for every piece of text we hash, compare
// or feed into a prompt.
inline std::string normalize_text(const std::string& text) {
  std::string composed = nfc(text);
  std::string out;
  out.reserve(composed.size());
  bool pending_space = false;
  for (char c : composed) {
    if (is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

// Lowercased word tokens: runs of ASCII alphanumerics plus any non-ASCII
// bytes. Punctuation splits tokens; "café-bar" -> {"café", "bar"}.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    bool word_byte = (c >= 0x80) || (c >= '0' && c <= '9') ||
                     (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (word_byte) {
      current.push_back(
          (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                 : static_cast<char>(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Whitespace-delimited tokens; used for token counts and truncation, where
// punctuation should stay attached to its word.
inline std::vector<std::string> ws_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_ascii_space(c)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

inline std::size_t token_count(std::string_view text) {
  return ws_tokens(text).size();
}

// Keep the first ceil(max/2) and last floor(max/2) whitespace tokens with a
// "..." marker between them. Texts at or under the budget pass through
// untouched (as a single-spaced rejoin of their tokens).
inline std::string truncate_middle(const std::string& text,
                                   std::size_t max_tokens) {
  if (max_tokens < 2) {
    throw std::invalid_argument("truncate_middle: max_tokens must be >= 2");
  }
  std::vector<std::string> tokens = ws_tokens(text);
  auto join = [](const std::vector<std::string>& parts, std::size_t begin,
                 std::size_t end, std::string& out) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!out.empty()) out.push_back(' ');
      out += parts[i];
    }
  };
  std::string out;
  if (tokens.size() <= max_tokens) {
    join(tokens, 0, tokens.size(), out);
    return out;
  }
  std::size_t head = (max_tokens + 1) / 2;
  std::size_t tail = max_tokens / 2;
  join(tokens, 0, head, out);
  if (!out.empty()) out.push_back(' ');
  out += "...";
  out.push_back(' ');
  std::string back;
  join(tokens, tokens.size() - tail, tokens.size(), back);
  out += back;
  return out;
}

inline std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Case-insensitive (ASCII) substring test; non-ASCII bytes compare exactly.
inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  return ascii_lower(haystack).find(ascii_lower(needle)) != std::string::npos;
}

}  // namespace evascore
