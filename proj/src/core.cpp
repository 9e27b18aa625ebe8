#include "faithsum/core.hpp"

#include <cmath>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::mimic3: return "mimic3";
    case DatasetKind::meqsum: return "meqsum";
    case DatasetKind::acibench: return "acibench";
    case DatasetKind::generic: return "generic";
  }
  return "generic";
}

DatasetKind parse_dataset_kind(std::string_view s) {
  const std::string k = text::to_lower(text::trim(s));
  if (k == "mimic3" || k == "mimic-iii" || k == "mimic_iii") {
    return DatasetKind::mimic3;
  }
  if (k == "meqsum") return DatasetKind::meqsum;
  if (k == "acibench" || k == "aci-bench" || k == "aci_bench") {
    return DatasetKind::acibench;
  }
  if (k == "generic") return DatasetKind::generic;
  throw ParseError("unknown dataset_kind: '" + std::string(s) + "'");
}

Document::Document(std::string id, std::string text, DatasetKind kind)
    : id_(std::move(id)), text_(std::move(text)), kind_(kind) {
  if (text::trim(text_).empty()) {
    throw PreconditionError("document '" + id_ + "' has empty text");
  }
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::initial: return "initial";
    case Stage::refined: return "refined";
    case Stage::final: return "final";
  }
  return "initial";
}

SummaryDraft SummaryDraft::advance(Stage next, std::string new_text) const {
  const bool ok = (stage == Stage::initial && next == Stage::refined) ||
                  (stage == Stage::refined && next == Stage::final);
  if (!ok) {
    throw PreconditionError("illegal summary stage transition " +
                            std::string(to_string(stage)) + " -> " +
                            std::string(to_string(next)));
  }
  return SummaryDraft{std::move(new_text), next, parent_id};
}

namespace {

void check_probability(std::string_view name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must be a probability in [0,1], got " +
                      std::to_string(v));
  }
}

}  // namespace

void Thresholds::validate() const {
  check_probability("t_e", t_e);
  check_probability("t_c", t_c);
  check_probability("t_a", t_a);
  if (top_m < 1) throw ConfigError("top_m must be a positive integer");
  if (top_n < 1) throw ConfigError("top_n must be a positive integer");
  if (!(cov_min >= -1.0 && cov_min <= 1.0)) {
    throw ConfigError("cov_min must lie in [-1,1], got " + std::to_string(cov_min));
  }
  if (!(mmr_lambda >= 0.0 && mmr_lambda <= 1.0)) {
    throw ConfigError("mmr_lambda must lie in [0,1], got " +
                      std::to_string(mmr_lambda));
  }
}

bool NliDistribution::is_valid(double tol) const {
  for (double p : {entailment, neutral, contradiction}) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
  }
  return std::fabs(sum() - 1.0) <= tol;
}

std::string_view to_string(DsuLevel level) {
  return level == DsuLevel::sentence ? "sentence" : "atomic";
}

std::string_view to_string(DsuLabel label) {
  switch (label) {
    case DsuLabel::entailed: return "entailed";
    case DsuLabel::confab: return "confab";
    case DsuLabel::uncertain: return "uncertain";
  }
  return "uncertain";
}

DsuLevel parse_dsu_level(std::string_view s) {
  if (s == "sentence") return DsuLevel::sentence;
  if (s == "atomic") return DsuLevel::atomic;
  throw ParseError("unknown DSU level: " + std::string(s));
}

DsuLabel parse_dsu_label(std::string_view s) {
  if (s == "entailed") return DsuLabel::entailed;
  if (s == "confab") return DsuLabel::confab;
  if (s == "uncertain") return DsuLabel::uncertain;
  throw ParseError("unknown DSU label: " + std::string(s));
}

}  // namespace faithsum
