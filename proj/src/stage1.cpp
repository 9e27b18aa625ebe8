#include "faithsum/stage1.hpp"

#include <algorithm>
#include <fstream>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"
#include "json.hpp"

namespace faithsum {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::standard: return "standard";
    case Method::element_aware: return "element_aware";
    case Method::chain_of_density: return "chain_of_density";
    case Method::hierarchical: return "hierarchical";
  }
  return "standard";
}

Method parse_method(std::string_view s) {
  const std::string m = text::to_lower(text::trim(s));
  if (m == "standard") return Method::standard;
  if (m == "element_aware" || m == "element-aware") return Method::element_aware;
  if (m == "chain_of_density" || m == "chain-of-density") return Method::chain_of_density;
  if (m == "hierarchical") return Method::hierarchical;
  throw ParseError("unknown method: '" + std::string(s) + "'");
}

std::optional<std::string_view> dataset_instruction(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::mimic3:
      return "Summarize the radiology report findings into an impression in 35 words or less";
    case DatasetKind::meqsum:
      return "Summarize the patient health query into one question of 15 words or less";
    case DatasetKind::acibench:
      return "Summarize the patient/doctor dialogue into an assessment and plan";
    case DatasetKind::generic:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::string_view method_directions(Method method) {
  switch (method) {
    case Method::standard:
      return "";
    case Method::element_aware:
      return "First identify the key elements of the document: the entities, the findings "
             "or events, their time course, and the resulting assessment or outcome. Then "
             "write the summary so that it covers those elements.";
    case Method::chain_of_density:
      return "Write an initial summary, then rewrite it repeatedly, each time adding one or "
             "two salient details from the document that are still missing without making "
             "it longer. Output only the final, densest summary.";
    case Method::hierarchical:
      return "The document is processed in sections. Summarize this section.";
  }
  return "";
}

constexpr std::string_view kMergeDirections =
    "The document below consists of section summaries. Merge them into one coherent "
    "summary without adding information.";

std::string resolve_instruction(const PromptSpec& spec) {
  if (spec.instruction_override) return *spec.instruction_override;
  if (auto inst = dataset_instruction(spec.dataset_kind)) return std::string(*inst);
  throw PreconditionError(
      "build_prompt: dataset kind 'generic' requires an instruction override");
}

std::string assemble(std::string_view instruction, std::string_view directions,
                     const std::vector<IclExample>& examples, std::string_view body) {
  std::string p(instruction);
  if (!p.empty() && !text::ends_with_terminal(p)) p.push_back('.');
  if (!directions.empty()) {
    p.push_back('\n');
    p.append(directions);
  }
  p.append("\n\n");
  for (const auto& ex : examples) {
    p.append("Example input:\n");
    p.append(ex.document);
    p.append("\nExample summary:\n");
    p.append(ex.summary);
    p.append("\n\n");
  }
  p.append("DOCUMENT:\n");
  p.append(body);
  return p;
}

void check_examples(const std::vector<IclExample>& examples) {
  for (const auto& ex : examples) {
    if (text::trim(ex.document).empty() || text::trim(ex.summary).empty()) {
      throw PreconditionError("ICL examples must have non-empty document and summary");
    }
  }
}

}  // namespace

std::string build_prompt(const PromptSpec& spec, const Document& document) {
  check_examples(spec.icl_examples);
  return assemble(resolve_instruction(spec), method_directions(spec.method),
                  spec.icl_examples, document.text());
}

std::vector<IclExample> load_icl_examples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ICL file: " + path.string());
  std::vector<IclExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("document").get<std::string>(), j.at("summary").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  check_examples(out);
  return out;
}

InitialGeneration generate_initial(const Document& document, const PromptSpec& spec,
                                   const Backend& generator,
                                   const GenerationOptions& options,
                                   const SentenceSplitter& splitter) {
  InitialGeneration out;
  out.draft.parent_id = document.id();
  out.draft.stage = Stage::initial;

  std::string prompt = build_prompt(spec, document);
  if (spec.method == Method::hierarchical) {
    const auto sentences = splitter.sentences(document.text());
    const std::size_t block = std::max<std::size_t>(1, options.hierarchical_block_size);
    if (sentences.size() > block) {
      const std::string instruction = resolve_instruction(spec);
      std::vector<std::string> partials;
      for (std::size_t i = 0; i < sentences.size(); i += block) {
        const std::size_t end = std::min(sentences.size(), i + block);
        std::vector<std::string> chunk(sentences.begin() + static_cast<std::ptrdiff_t>(i),
                                       sentences.begin() + static_cast<std::ptrdiff_t>(end));
        const auto block_prompt = assemble(instruction, method_directions(Method::hierarchical),
                                           spec.icl_examples, text::join(chunk, " "));
        partials.emplace_back(text::trim(generator.generate(block_prompt, options.max_tokens)));
      }
      prompt = assemble(instruction, kMergeDirections, {}, text::join(partials, "\n"));
    }
  }

  out.prompt = prompt;
  out.raw_completion = generator.generate(prompt, options.max_tokens);
  out.draft.text = std::string(text::trim(out.raw_completion));
  return out;
}

InitialGeneration provided_initial(const Document& document, std::string summary) {
  InitialGeneration out;
  out.draft = SummaryDraft{std::move(summary), Stage::initial, document.id()};
  return out;
}

}  // namespace faithsum
