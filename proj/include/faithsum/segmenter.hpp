#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace faithsum {

// A sentence inside its source text: text == source.substr(start, end - start).
// Spans exclude surrounding whitespace; the gaps between consecutive spans
// are whitespace only.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  bool operator==(const Span&) const = default;
};

std::vector<std::string> default_abbreviations();

// One abbreviation per line; blank lines and `#` lines are skipped.
std::vector<std::string> load_abbreviations(const std::filesystem::path& path);

// Rule-based sentence boundary disambiguation.
//
// A boundary follows a run of `.`, `!` or `?` (plus closing quotes or
// brackets) that is followed by whitespace or end of text, unless the run is
// a single period closing a known abbreviation. A blank line also ends a
// sentence. Decimal points never split because no whitespace follows them.
class SentenceSplitter {
 public:
  SentenceSplitter();
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  std::vector<Span> split(std::string_view text) const;
  std::vector<std::string> sentences(std::string_view text) const;

  const std::vector<std::string>& abbreviations() const { return abbreviations_; }

 private:
  bool ends_with_abbreviation(std::string_view text, std::size_t sentence_start,
                              std::size_t period) const;

  std::vector<std::string> abbreviations_;
};

std::vector<Span> split_sentences(std::string_view text);

// Clause-level fallback decomposition. Splits at ", and ", ", but ",
// ", while ", ";" and " which "; clauses lose trailing separators and
// terminal punctuation. A sentence with no trigger comes back whole.
std::vector<std::string> split_atomic_rule_based(std::string_view sentence);

}  // namespace faithsum
