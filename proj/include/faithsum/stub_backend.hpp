#pragma once

#include <set>
#include <string>
#include <vector>

#include "faithsum/scorers.hpp"
#include "faithsum/segmenter.hpp"

namespace faithsum {

// Deterministic, dependency-free scorers. Every output is a pure function of
// the input, so tests can reason about exact values:
//
//   nli         lowercased word-token sets; o = |H ∩ P| / |H|. A hypothesis
//               token from the contradiction lexicon that is absent from the
//               premise gives {0, 0.2, 0.8}; otherwise {o, 1 - o, 0}.
//   embed       256 dims; +1 at fnv1a64(token) % 256 per token; L2-normalized.
//   perplexity  1 + sum over adjacent whitespace tokens of |len(a) - len(b)|.
//   generate    "DECOMPOSE:" prompts return the rule-based clauses joined by
//               newlines; otherwise the first three sentences after the last
//               line-initial "DOCUMENT:" marker (or of the whole prompt).
class StubBackend : public Backend {
 public:
  static constexpr std::size_t kEmbeddingDim = 256;

  StubBackend();
  explicit StubBackend(std::vector<std::string> contradiction_lexicon,
                       SentenceSplitter splitter = SentenceSplitter());

  std::string describe() const override { return "stub/1"; }

 protected:
  NliDistribution do_nli(std::string_view premise,
                         std::string_view hypothesis) const override;
  std::vector<Embedding> do_embed(const std::vector<std::string>& texts) const override;
  double do_perplexity(std::string_view text) const override;
  std::string do_generate(std::string_view prompt, int max_tokens) const override;

 private:
  std::set<std::string> lexicon_;
  SentenceSplitter splitter_;
};

}  // namespace faithsum
