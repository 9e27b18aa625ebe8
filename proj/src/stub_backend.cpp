#include "faithsum/stub_backend.hpp"

#include <cmath>
#include <cstdlib>

#include "faithsum/text.hpp"

namespace faithsum {

namespace {

constexpr std::string_view kDocumentMarker = "DOCUMENT:";
constexpr std::string_view kDecomposeMarker = "DECOMPOSE:";

// Position just past the last occurrence of `marker` that starts a line.
std::size_t after_line_marker(std::string_view prompt, std::string_view marker) {
  std::size_t pos = prompt.rfind(marker);
  while (pos != std::string_view::npos) {
    if (pos == 0 || prompt[pos - 1] == '\n') return pos + marker.size();
    pos = prompt.rfind(marker, pos - 1);
  }
  return std::string_view::npos;
}

std::string truncate_tokens(const std::string& s, int max_tokens) {
  const auto tokens = text::whitespace_tokens(s);
  if (tokens.size() <= static_cast<std::size_t>(max_tokens)) return s;
  const auto& last = tokens[static_cast<std::size_t>(max_tokens) - 1];
  return std::string(std::string_view(s).substr(0, (last.data() + last.size()) - s.data()));
}

}  // namespace

StubBackend::StubBackend() : StubBackend({"no", "not", "never", "without", "absent"}) {}

StubBackend::StubBackend(std::vector<std::string> contradiction_lexicon,
                         SentenceSplitter splitter)
    : splitter_(std::move(splitter)) {
  for (const auto& w : contradiction_lexicon) lexicon_.insert(text::to_lower(w));
}

NliDistribution StubBackend::do_nli(std::string_view premise,
                                    std::string_view hypothesis) const {
  const auto h = text::word_tokens(hypothesis);
  const auto p = text::word_tokens(premise);
  const std::set<std::string> hyp(h.begin(), h.end());
  const std::set<std::string> prem(p.begin(), p.end());
  if (hyp.empty()) return {0.0, 1.0, 0.0};

  std::size_t shared = 0;
  for (const auto& t : hyp) {
    if (prem.count(t)) {
      ++shared;
    } else if (lexicon_.count(t)) {
      return {0.0, 0.2, 0.8};
    }
  }
  const double o = static_cast<double>(shared) / static_cast<double>(hyp.size());
  return {o, 1.0 - o, 0.0};
}

std::vector<Embedding> StubBackend::do_embed(const std::vector<std::string>& texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    Embedding v(kEmbeddingDim, 0.0);
    for (const auto& tok : text::word_tokens(t)) {
      v[text::fnv1a64(tok) % kEmbeddingDim] += 1.0;
    }
    const double norm = l2_norm(v);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

double StubBackend::do_perplexity(std::string_view text) const {
  const auto tokens = text::whitespace_tokens(text);
  double ppl = 1.0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const auto a = static_cast<long long>(tokens[i].size());
    const auto b = static_cast<long long>(tokens[i + 1].size());
    ppl += static_cast<double>(std::llabs(a - b));
  }
  return ppl;
}

std::string StubBackend::do_generate(std::string_view prompt, int max_tokens) const {
  if (auto pos = after_line_marker(prompt, kDecomposeMarker); pos != std::string_view::npos) {
    const auto sentence = text::trim(prompt.substr(pos));
    if (sentence.empty()) return {};
    return truncate_tokens(text::join(split_atomic_rule_based(sentence), "\n"), max_tokens);
  }
  std::string_view source = prompt;
  if (auto pos = after_line_marker(prompt, kDocumentMarker); pos != std::string_view::npos) {
    source = prompt.substr(pos);
  }
  auto sentences = splitter_.sentences(source);
  if (sentences.size() > 3) sentences.resize(3);
  return truncate_tokens(text::join(sentences, " "), max_tokens);
}

}  // namespace faithsum
