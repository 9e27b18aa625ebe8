#include "faithsum/stage2.hpp"

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

DsuLabel classify_dsu(const NliDistribution& scores, const Thresholds& th) {
  if (scores.entailment > th.t_e) return DsuLabel::entailed;
  if (scores.neutral + scores.contradiction > th.t_c) return DsuLabel::confab;
  return DsuLabel::uncertain;
}

std::string decomposition_prompt(std::string_view sentence) {
  std::string p =
      "Break the following sentence into independent atomic facts. Write one fact per "
      "line and nothing else.\nDECOMPOSE: ";
  p.append(text::trim(sentence));
  return p;
}

namespace {

// Strips "- ", "* ", "1. " and "1) " list markers from a completion line.
std::string_view strip_list_marker(std::string_view line) {
  line = text::trim(line);
  if (line.size() >= 2 && (line[0] == '-' || line[0] == '*') && text::is_space(line[1])) {
    return text::trim(line.substr(2));
  }
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') &&
      text::is_space(line[i + 1])) {
    return text::trim(line.substr(i + 2));
  }
  return line;
}

std::vector<std::string> parse_fact_lines(std::string_view completion) {
  std::vector<std::string> facts;
  std::size_t pos = 0;
  while (pos <= completion.size()) {
    auto nl = completion.find('\n', pos);
    if (nl == std::string_view::npos) nl = completion.size();
    auto fact = strip_list_marker(completion.substr(pos, nl - pos));
    if (!fact.empty()) facts.emplace_back(fact);
    pos = nl + 1;
  }
  return facts;
}

std::string terminated(std::string_view s) {
  std::string out(text::trim(s));
  if (!text::ends_with_terminal(out)) out.push_back('.');
  return out;
}

}  // namespace

Decomposition decompose_atomic(std::string_view sentence, const Backend* generator,
                               int max_tokens) {
  if (text::trim(sentence).empty()) {
    throw PreconditionError("decompose_atomic: empty sentence");
  }
  if (generator) {
    try {
      auto facts = parse_fact_lines(generator->generate(decomposition_prompt(sentence),
                                                        max_tokens));
      if (!facts.empty()) return {std::move(facts), false};
    } catch (const BackendError&) {
    }
    return {split_atomic_rule_based(sentence), true};
  }
  return {split_atomic_rule_based(sentence), false};
}

Stage2Result rtb_ts(const Document& document, const SummaryDraft& summary,
                    const Backend& nli, const Backend* decomposer, const Thresholds& th,
                    const Stage2Options& options) {
  if (text::trim(summary.text).empty()) throw PreconditionError("rtb_ts: empty summary");

  auto score = [&](std::string_view unit) {
    return nli_with_chunking(nli, document.text(), unit, options.chunking.window,
                             options.chunking.stride);
  };

  Stage2Result out;
  std::vector<std::string> kept;
  const auto sentences = options.splitter.sentences(summary.text);
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    Dsu dsu{sentences[k], DsuLevel::sentence, std::nullopt, score(sentences[k]),
            DsuLabel::uncertain, false};
    dsu.label = classify_dsu(dsu.scores, th);

    if (dsu.label == DsuLabel::entailed) {
      dsu.retained = true;
      kept.push_back(dsu.text);
      out.dsus.push_back(std::move(dsu));
      continue;
    }
    if (dsu.label == DsuLabel::confab) {
      out.removed_units.push_back(dsu.text);
      out.dsus.push_back(std::move(dsu));
      continue;
    }

    // Uncertain: one level of decomposition, never deeper.
    auto decomposition = decompose_atomic(dsu.text, decomposer, options.max_tokens);
    out.used_fallback = out.used_fallback || decomposition.fell_back;
    std::vector<Dsu> facts;
    for (auto& fact : decomposition.facts) {
      Dsu atomic{std::move(fact), DsuLevel::atomic, k, {}, DsuLabel::uncertain, false};
      atomic.scores = score(atomic.text);
      atomic.label = classify_dsu(atomic.scores, th);
      atomic.retained = atomic.scores.entailment > th.t_a;
      if (atomic.retained) {
        kept.push_back(terminated(atomic.text));
      } else {
        out.removed_units.push_back(atomic.text);
      }
      facts.push_back(std::move(atomic));
    }
    out.dsus.push_back(std::move(dsu));
    for (auto& f : facts) out.dsus.push_back(std::move(f));
  }

  out.refined = summary.stage == Stage::initial
                    ? summary.advance(Stage::refined, text::join(kept, " "))
                    : SummaryDraft{text::join(kept, " "), Stage::refined, summary.parent_id};
  out.emptied = kept.empty();
  return out;
}

}  // namespace faithsum
