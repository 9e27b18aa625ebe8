#pragma once

#include <optional>
#include <set>
#include <string>

#include "faithsum/config.hpp"
#include "faithsum/scorers.hpp"
#include "faithsum/segmenter.hpp"
#include "faithsum/stage1.hpp"
#include "faithsum/trace.hpp"

namespace faithsum {

struct DocumentInput {
  std::string id;
  std::string text;
  DatasetKind kind = DatasetKind::generic;
  std::optional<std::string> initial_summary;  // bypasses stage 1 when set
  std::optional<std::string> reference_summary;
};

// Everything a document run needs besides the document itself. Shared
// read-only across worker threads.
struct PipelineContext {
  Config config;
  const Backend* backend = nullptr;
  Method method = Method::standard;
  std::vector<IclExample> icl_examples;
  SentenceSplitter splitter;
  std::set<std::string> stopwords;
  std::set<int> stages{1, 2, 3};

  // Reads abbreviation and stopword files named in `config`.
  static PipelineContext from_config(Config config, const Backend& backend);
};

// Runs the enabled stages on one document. Never throws for per-document
// failures: the trace comes back with status "skipped", a reason, and
// whatever the completed stages recorded.
PipelineTrace process_document(const DocumentInput& input, const PipelineContext& ctx);

}  // namespace faithsum
