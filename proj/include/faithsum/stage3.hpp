#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "faithsum/core.hpp"
#include "faithsum/scorers.hpp"
#include "faithsum/segmenter.hpp"

namespace faithsum {

// Greedy maximal marginal relevance over precomputed embeddings. At each
// step picks the unselected candidate maximizing
//   lambda * sim(x, context) - (1 - lambda) * max_{s selected} sim(x, s)
// (second term 0 while nothing is selected), earliest candidate on ties.
// Returns min(k, |candidates|) candidate indices in selection order and,
// when `scores` is given, each pick's score at selection time.
std::vector<std::size_t> mmr_order(const std::vector<Embedding>& candidates,
                                   const Embedding& context, std::size_t k, double lambda,
                                   std::vector<double>* scores = nullptr);

// Embeds candidates and context, then runs mmr_order.
std::vector<KeyUnit> mmr_select(const std::vector<std::string>& candidates,
                                std::string_view context, std::size_t k, double lambda,
                                const Backend& embedder,
                                KeySource source = KeySource::doc_sentence);

std::set<std::string> default_stopwords();
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// All distinct 1-3 grams inside maximal runs of non-stopword tokens, in
// order of first appearance (by start token, then length). Tokens are
// lowercased whitespace words with outer punctuation stripped; punctuation
// at a word edge also ends the run.
std::vector<std::string> candidate_phrases(std::string_view summary,
                                           const std::set<std::string>& stopwords);

// Up to top_m document sentences, context = full document text.
std::vector<KeyUnit> extract_key_sentences(const Document& document, const Thresholds& th,
                                           const Backend& embedder,
                                           const SentenceSplitter& splitter = SentenceSplitter());
std::vector<KeyUnit> extract_key_sentences(std::string_view document_text,
                                           const Thresholds& th, const Backend& embedder,
                                           const SentenceSplitter& splitter = SentenceSplitter());

// Up to top_n summary phrases, context = summary text.
std::vector<KeyUnit> extract_key_phrases(std::string_view summary, const Thresholds& th,
                                         const Backend& embedder,
                                         const std::set<std::string>& stopwords = default_stopwords());

struct CoverageReport {
  std::vector<KeyUnit> key_sentences;
  std::vector<KeyUnit> key_phrases;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> sim_matrix;  // row-major rows x cols
  std::vector<double> cov_scores;  // row max; -inf for every row when cols == 0
  std::vector<KeyUnit> missing;

  double sim(std::size_t i, std::size_t j) const { return sim_matrix[i * cols + j]; }
};

// sim = sentence embeddings x phrase embeddings^T from the units' stored
// embeddings; cov = row maxima. `missing` is left empty.
CoverageReport coverage(std::vector<KeyUnit> key_sentences, std::vector<KeyUnit> key_phrases);

// Same, after (re)embedding every unit's text with `embedder`.
CoverageReport coverage(std::vector<KeyUnit> key_sentences, std::vector<KeyUnit> key_phrases,
                        const Backend& embedder);

// Key sentences with cov <= cov_min, in document order.
std::vector<KeyUnit> detect_missing(const CoverageReport& report, double cov_min);

// Inserts `sentence` before the `position`-th sentence of `summary`
// (position == sentence count appends). Sentences are rejoined with single
// spaces; any sentence followed by another gets a period if it lacks
// terminal punctuation.
std::string insert_sentence(std::string_view summary, std::string_view sentence,
                            std::size_t position,
                            const SentenceSplitter& splitter = SentenceSplitter());

struct MergeResult {
  SummaryDraft final_summary;  // stage == final
  std::vector<Insertion> insertions;
  bool failed = false;  // scorer failure; final text is the refined text
  std::string error;
};

// Greedy perplexity-guided merge: each missing sentence, in the given order,
// goes to the location minimizing the perplexity of the whole candidate
// summary (smallest location on ties).
MergeResult merge_missing(const SummaryDraft& summary, const std::vector<KeyUnit>& missing,
                          const Backend& ppl_scorer,
                          const SentenceSplitter& splitter = SentenceSplitter());

// Re-applies recorded insertions to `refined`.
std::string replay_insertions(std::string_view refined, const std::vector<Insertion>& insertions,
                              const SentenceSplitter& splitter = SentenceSplitter());

}  // namespace faithsum
