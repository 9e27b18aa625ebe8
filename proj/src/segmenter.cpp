#include "faithsum/segmenter.hpp"

#include <array>
#include <fstream>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

}  // namespace

std::vector<std::string> default_abbreviations() {
  return {"Dr.", "Mr.", "Mrs.", "e.g.", "i.e.", "Fig.", "No.", "vs.", "et al."};
}

std::vector<std::string> load_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open abbreviation list: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

SentenceSplitter::SentenceSplitter() : SentenceSplitter(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

bool SentenceSplitter::ends_with_abbreviation(std::string_view text,
                                              std::size_t sentence_start,
                                              std::size_t period) const {
  const std::string_view head = text.substr(sentence_start, period + 1 - sentence_start);
  for (const auto& abbr : abbreviations_) {
    if (abbr.empty() || head.size() < abbr.size()) continue;
    if (head.substr(head.size() - abbr.size()) != abbr) continue;
    const std::size_t before = head.size() - abbr.size();
    // Must be a whole token: "Dr." matches "(Dr." but not "Endr.".
    if (before == 0 || text::is_space(head[before - 1]) || is_opener(head[before - 1])) {
      return true;
    }
  }
  return false;
}

std::vector<Span> SentenceSplitter::split(std::string_view text) const {
  std::vector<Span> spans;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n && text::is_space(text[i])) ++i;
  std::size_t start = i;

  auto emit = [&](std::size_t end) {
    // `end` may include trailing whitespace in the paragraph-break case.
    std::size_t e = end;
    while (e > start && text::is_space(text[e - 1])) --e;
    if (e > start) spans.push_back({start, e, std::string(text.substr(start, e - start))});
  };

  while (i < n) {
    const char c = text[i];
    if (is_terminator(c)) {
      std::size_t j = i;
      while (j < n && is_terminator(text[j])) ++j;
      const bool single_period = (j - i == 1 && c == '.');
      while (j < n && is_closer(text[j])) ++j;
      const bool at_gap = (j == n || text::is_space(text[j]));
      if (at_gap && !(single_period && ends_with_abbreviation(text, start, i))) {
        emit(j);
        i = j;
        while (i < n && text::is_space(text[i])) ++i;
        start = i;
        continue;
      }
      i = j;
      continue;
    }
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < n && text::is_space(text[j]) && text[j] != '\n') ++j;
      if (j < n && text[j] == '\n') {
        emit(i);
        while (j < n && text::is_space(text[j])) ++j;
        i = j;
        start = i;
        continue;
      }
    }
    ++i;
  }
  if (start < n) emit(n);
  return spans;
}

std::vector<std::string> SentenceSplitter::sentences(std::string_view text) const {
  std::vector<std::string> out;
  for (auto& s : split(text)) out.push_back(std::move(s.text));
  return out;
}

std::vector<Span> split_sentences(std::string_view text) {
  static const SentenceSplitter splitter;
  return splitter.split(text);
}

namespace {

std::string_view clean_clause(std::string_view clause) {
  clause = text::trim(clause);
  while (!clause.empty()) {
    const char c = clause.back();
    if (c == ',' || c == ';' || c == ':' || is_terminator(c) || text::is_space(c)) {
      clause.remove_suffix(1);
    } else {
      break;
    }
  }
  return clause;
}

}  // namespace

std::vector<std::string> split_atomic_rule_based(std::string_view sentence) {
  static constexpr std::array<std::string_view, 5> kTriggers = {
      ", and ", ", but ", ", while ", " which ", ";"};

  const std::string_view whole = text::trim(sentence);
  if (whole.empty()) throw PreconditionError("split_atomic_rule_based: empty sentence");
  std::vector<std::string_view> pieces;
  std::size_t last = 0;
  std::size_t i = 0;
  while (i < whole.size()) {
    bool cut = false;
    for (auto trig : kTriggers) {
      if (whole.compare(i, trig.size(), trig) == 0) {
        pieces.push_back(whole.substr(last, i - last));
        i += trig.size();
        last = i;
        cut = true;
        break;
      }
    }
    if (!cut) ++i;
  }
  if (pieces.empty()) return {std::string(whole)};
  pieces.push_back(whole.substr(last));

  std::vector<std::string> out;
  for (auto p : pieces) {
    auto c = clean_clause(p);
    if (!c.empty()) out.emplace_back(c);
  }
  if (out.empty()) return {std::string(whole)};
  return out;
}

}  // namespace faithsum
