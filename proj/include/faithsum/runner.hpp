#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "faithsum/benchmark.hpp"
#include "faithsum/config.hpp"
#include "faithsum/pipeline.hpp"

namespace faithsum {

std::unique_ptr<Backend> make_backend(const Config& config);

struct ParsedRecord {
  std::optional<DocumentInput> input;
  std::string id;     // best effort, may be empty
  std::string error;  // set when input is empty
};

// One JSON Lines record: {"id", "document", "reference_summary"?,
// "dataset_kind"?}. `initial_summary_field`, when non-empty, names a field
// holding an externally produced initial summary.
ParsedRecord parse_dataset_record(std::string_view line, DatasetKind default_kind,
                                  std::string_view initial_summary_field);

// Parses "1,2,3"-style stage lists.
std::set<int> parse_stages(std::string_view s);

struct RunOptions {
  std::filesystem::path dataset;
  std::filesystem::path out_dir;
  Config config;
  std::set<int> stages{1, 2, 3};
  int jobs = 1;
  DatasetKind default_kind = DatasetKind::generic;
  std::filesystem::path icl_file;
  std::string initial_summary_field;
};

// Processes the dataset and writes summaries.jsonl, traces.jsonl and
// manifest.json into out_dir, flushing per document in input order.
// Returns 0 when at least one document succeeded, 1 when none did, 2 when
// the dataset cannot be read.
int run(const RunOptions& options, const Backend& backend);

struct BenchOptions {
  std::filesystem::path scores_csv;
  std::filesystem::path out_dir;  // empty: print only
  bool no_entailment = false;
  TieRule rule = TieRule::dense;
};

// Writes ranking.json and ranking.txt; returns the printed text.
std::string bench(const BenchOptions& options);

}  // namespace faithsum
