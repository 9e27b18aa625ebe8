#include "faithsum/pipeline.hpp"

#include "faithsum/error.hpp"
#include "faithsum/stage2.hpp"
#include "faithsum/stage3.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

PipelineContext PipelineContext::from_config(Config config, const Backend& backend) {
  PipelineContext ctx;
  ctx.method = parse_method(config.method);
  if (!config.abbreviations_file.empty()) {
    ctx.splitter = SentenceSplitter(load_abbreviations(config.abbreviations_file));
  }
  ctx.stopwords = default_stopwords();
  if (!config.stopwords_file.empty()) {
    for (auto& w : load_stopwords(config.stopwords_file)) ctx.stopwords.insert(w);
  }
  ctx.config = std::move(config);
  ctx.backend = &backend;
  return ctx;
}

namespace {

std::vector<KeyRecord> records(const std::vector<KeyUnit>& units) {
  std::vector<KeyRecord> out;
  for (const auto& u : units) out.push_back({u.text, u.position, u.mmr_score});
  return out;
}

void run_stages(const DocumentInput& input, const PipelineContext& ctx, PipelineTrace& trace) {
  const Backend& backend = *ctx.backend;
  const Document doc(input.id, input.text, input.kind);
  const Thresholds& th = ctx.config.thresholds;

  // Stage 1
  InitialGeneration initial;
  if (input.initial_summary) {
    initial = provided_initial(doc, *input.initial_summary);
  } else if (ctx.stages.count(1)) {
    PromptSpec spec;
    spec.dataset_kind = doc.kind();
    spec.method = ctx.method;
    spec.icl_examples = ctx.icl_examples;
    if (doc.kind() == DatasetKind::generic) spec.instruction_override = ctx.config.generic_instruction;
    GenerationOptions gen;
    gen.max_tokens = ctx.config.max_tokens;
    gen.hierarchical_block_size = static_cast<std::size_t>(ctx.config.hierarchical_block_size);
    initial = generate_initial(doc, spec, backend, gen, ctx.splitter);
  } else {
    throw PreconditionError("stage 1 disabled and no initial summary provided");
  }
  trace.prompt = initial.prompt;
  trace.raw_completion = initial.raw_completion;
  trace.initial_summary = initial.draft.text;
  if (text::trim(initial.draft.text).empty()) {
    throw PreconditionError("initial summary is empty");
  }

  // Stage 2
  SummaryDraft refined;
  if (ctx.stages.count(2)) {
    Stage2Options opts;
    opts.chunking = ctx.config.chunking;
    opts.max_tokens = ctx.config.max_tokens;
    opts.splitter = ctx.splitter;
    auto result = rtb_ts(doc, initial.draft, backend, &backend, th, opts);
    trace.dsus = std::move(result.dsus);
    trace.removed_units = std::move(result.removed_units);
    if (result.emptied) trace.flags.insert(TraceFlag::empty_after_stage2);
    if (result.used_fallback) trace.flags.insert(TraceFlag::backend_fallback);
    refined = std::move(result.refined);
  } else {
    refined = initial.draft.advance(Stage::refined, initial.draft.text);
  }
  trace.refined_summary = refined.text;

  // Stage 3
  if (!ctx.stages.count(3)) {
    trace.final_summary = refined.text;
    return;
  }
  auto key_sentences = extract_key_sentences(doc, th, backend, ctx.splitter);
  auto key_phrases = extract_key_phrases(refined.text, th, backend, ctx.stopwords);
  trace.key_sentences = records(key_sentences);
  trace.key_phrases = records(key_phrases);
  auto report = coverage(std::move(key_sentences), std::move(key_phrases));
  report.missing = detect_missing(report, th.cov_min);
  trace.sim_rows = report.rows;
  trace.sim_cols = report.cols;
  trace.sim_matrix = report.sim_matrix;
  trace.cov_scores = report.cov_scores;
  for (const auto& m : report.missing) trace.missing.push_back(m.text);
  if (report.missing.empty()) trace.flags.insert(TraceFlag::no_missing_info);

  auto merged = merge_missing(refined, report.missing, backend, ctx.splitter);
  if (merged.failed) trace.flags.insert(TraceFlag::backend_fallback);
  trace.insertions = std::move(merged.insertions);
  trace.final_summary = std::move(merged.final_summary.text);
}

}  // namespace

PipelineTrace process_document(const DocumentInput& input, const PipelineContext& ctx) {
  PipelineTrace trace;
  trace.document_id = input.id;
  if (!ctx.backend) {
    trace.status = "skipped";
    trace.reason = "no backend configured";
    return trace;
  }
  try {
    run_stages(input, ctx, trace);
  } catch (const std::exception& e) {
    trace.status = "skipped";
    trace.reason = e.what();
  }
  return trace;
}

}  // namespace faithsum
