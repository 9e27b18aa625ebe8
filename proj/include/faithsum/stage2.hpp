#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "faithsum/config.hpp"
#include "faithsum/core.hpp"
#include "faithsum/scorers.hpp"
#include "faithsum/segmenter.hpp"

namespace faithsum {

// entailed iff E > t_e; confab iff N + C > t_c and not entailed; otherwise
// uncertain. All comparisons are strict.
DsuLabel classify_dsu(const NliDistribution& scores, const Thresholds& th);

struct Decomposition {
  std::vector<std::string> facts;
  bool fell_back = false;  // rule-based splitter was used after a generator failure
};

// Atomic facts of one sentence. With a generator, asks it for one fact per
// line; an error or an unusable completion falls back to the rule-based
// splitter. Without a generator the rule-based splitter is used directly.
Decomposition decompose_atomic(std::string_view sentence, const Backend* generator,
                               int max_tokens = 256);

// The prompt sent to the generator for atomic decomposition.
std::string decomposition_prompt(std::string_view sentence);

struct Stage2Options {
  ChunkingConfig chunking;
  int max_tokens = 256;
  SentenceSplitter splitter;
};

struct Stage2Result {
  SummaryDraft refined;  // stage == refined
  // Sentence DSUs in summary order; the atomic DSUs of an uncertain sentence
  // follow it directly.
  std::vector<Dsu> dsus;
  std::vector<std::string> removed_units;
  bool emptied = false;
  bool used_fallback = false;
};

// Confabulation removal by recursive threshold-based segmentation: score
// each summary sentence against the document; keep entailed sentences,
// drop confabulated ones, and replace uncertain ones by those of their
// atomic facts with E > t_a. Retained units are joined with single spaces;
// atomic facts lacking terminal punctuation get a period.
Stage2Result rtb_ts(const Document& document, const SummaryDraft& summary,
                    const Backend& nli, const Backend* decomposer, const Thresholds& th,
                    const Stage2Options& options = {});

}  // namespace faithsum
