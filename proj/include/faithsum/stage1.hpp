#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "faithsum/core.hpp"
#include "faithsum/scorers.hpp"
#include "faithsum/segmenter.hpp"

namespace faithsum {

enum class Method { standard, element_aware, chain_of_density, hierarchical };

std::string_view to_string(Method method);
Method parse_method(std::string_view s);

struct IclExample {
  std::string document;
  std::string summary;
};

struct PromptSpec {
  DatasetKind dataset_kind = DatasetKind::generic;
  Method method = Method::standard;
  std::vector<IclExample> icl_examples;
  // Replaces the dataset instruction; required for DatasetKind::generic.
  std::optional<std::string> instruction_override;
};

// The per-dataset task instruction, or nullopt for DatasetKind::generic.
std::optional<std::string_view> dataset_instruction(DatasetKind kind);

// Layout: instruction, method directions, ICL examples, then a line-initial
// "DOCUMENT:" followed by the document text as the final section.
std::string build_prompt(const PromptSpec& spec, const Document& document);

// JSONL of {"document": ..., "summary": ...} pairs.
std::vector<IclExample> load_icl_examples(const std::filesystem::path& path);

struct InitialGeneration {
  SummaryDraft draft;  // stage == initial
  std::string prompt;  // last prompt sent (the merge prompt for hierarchical)
  std::string raw_completion;
};

struct GenerationOptions {
  int max_tokens = 256;
  std::size_t hierarchical_block_size = 20;  // sentences per block
};

// Stage 1. Hierarchical summarizes blocks of sentences then merges the block
// summaries with a second prompt; other methods issue one prompt. Backend
// failures propagate as BackendError.
InitialGeneration generate_initial(const Document& document, const PromptSpec& spec,
                                   const Backend& generator,
                                   const GenerationOptions& options = {},
                                   const SentenceSplitter& splitter = SentenceSplitter());

// Bypass for externally produced summaries.
InitialGeneration provided_initial(const Document& document, std::string summary);

}  // namespace faithsum
