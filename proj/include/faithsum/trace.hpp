#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "faithsum/core.hpp"
#include "json.hpp"

namespace faithsum {

enum class TraceFlag { empty_after_stage2, no_missing_info, backend_fallback };

std::string_view to_string(TraceFlag flag);
TraceFlag parse_trace_flag(std::string_view s);

// A key unit as recorded in the trace; embeddings are not persisted.
struct KeyRecord {
  std::string text;
  std::size_t position = 0;
  double mmr_score = 0.0;

  bool operator==(const KeyRecord&) const = default;
};

// Per-document audit log of every stage's inputs, decisions and outputs.
struct PipelineTrace {
  std::string document_id;
  std::string status = "ok";  // "ok" or "skipped"
  std::string reason;

  // stage 1
  std::string prompt;
  std::string raw_completion;
  std::string initial_summary;

  // stage 2
  std::vector<Dsu> dsus;
  std::vector<std::string> removed_units;
  std::string refined_summary;

  // stage 3
  std::vector<KeyRecord> key_sentences;
  std::vector<KeyRecord> key_phrases;
  std::size_t sim_rows = 0;
  std::size_t sim_cols = 0;
  std::vector<double> sim_matrix;  // row-major, sim_rows x sim_cols
  std::vector<double> cov_scores;  // -inf when there are no key phrases
  std::vector<std::string> missing;
  std::vector<Insertion> insertions;
  std::string final_summary;

  std::set<TraceFlag> flags;

  bool has_flag(TraceFlag f) const { return flags.count(f) != 0; }
  bool operator==(const PipelineTrace&) const = default;
};

PipelineTrace new_trace(const Document& document);

void to_json(nlohmann::json& j, const PipelineTrace& trace);
void from_json(const nlohmann::json& j, PipelineTrace& trace);

std::string serialize(const PipelineTrace& trace);
PipelineTrace parse_trace(std::string_view line);

}  // namespace faithsum
