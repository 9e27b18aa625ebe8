#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "faithsum/segmenter.hpp"
#include "json.hpp"

namespace faithsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Summary-level ROUGE-L: both texts are split into sentences and lowercased
// word tokens; each reference sentence contributes the union of its LCS
// alignments against every candidate sentence, with hits clipped by token
// counts. Empty inputs score 0.
RougeScore rouge_l_sum(std::string_view candidate, std::string_view reference,
                       const SentenceSplitter& splitter = SentenceSplitter());

// How equal metric values share ranks.
//   dense       1,2,2,3  (ties share a rank; next value gets the next rank)
//   fractional  1,2.5,2.5,4  (average of the tied positions)
//   min         1,2,2,4  (competition ranking)
enum class TieRule { dense, fractional, min };

std::string_view to_string(TieRule rule);
TieRule parse_tie_rule(std::string_view s);

// Rank 1 = best value under the metric's direction.
std::vector<double> rank_values(const std::vector<double>& values, bool higher_is_better,
                                TieRule rule);

struct MetricSpec {
  std::string name;  // may carry a group prefix, "MIMIC-III/R-Ls"
  bool higher_is_better = true;
  bool is_entailment = false;

  std::string group() const;
};

struct MethodEntry {
  std::string method;
  std::string model;

  // "method (model)", or just the method when the model is empty.
  std::string display() const;
};

struct MetricTable {
  std::vector<MethodEntry> methods;
  std::vector<MetricSpec> metrics;
  std::vector<std::vector<double>> scores;  // methods x metrics

  // Throws ParseError on ragged rows, non-finite cells or duplicate metric names.
  void validate() const;
};

// Header: method,model,<name>:<higher|lower>[:entailment],...
// A metric is an entailment column when flagged, or when its name (after
// any "group/" prefix) starts with "ent", case-insensitively.
MetricTable parse_metric_table(std::string_view csv);
MetricTable load_metric_table(const std::filesystem::path& path);

struct Ranking {
  bool include_entailment = true;
  TieRule rule = TieRule::dense;
  std::vector<std::size_t> metric_columns;         // table columns that were ranked
  std::vector<std::vector<double>> per_metric_ranks;  // methods x metric_columns
  std::vector<double> aggregate;                   // per method, lower is better
  std::vector<std::size_t> ordering;               // method indices, best first
};

// Ranks every included metric, sums per method, sorts ascending by the sum
// with ties broken by method then model name.
Ranking rank_methods(const MetricTable& table, bool include_entailment,
                     TieRule rule = TieRule::dense);

struct RankReport {
  Ranking with_entailment;
  Ranking without_entailment;
};

RankReport rank_report(const MetricTable& table, TieRule rule = TieRule::dense);

nlohmann::json to_json(const MetricTable& table, const Ranking& ranking);
std::string format_ranking(const MetricTable& table, const Ranking& ranking);

}  // namespace faithsum
