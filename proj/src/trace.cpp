#include "faithsum/trace.hpp"

#include <cmath>
#include <limits>

#include "faithsum/error.hpp"

namespace faithsum {

using nlohmann::json;

std::string_view to_string(TraceFlag flag) {
  switch (flag) {
    case TraceFlag::empty_after_stage2: return "empty_after_stage2";
    case TraceFlag::no_missing_info: return "no_missing_info";
    case TraceFlag::backend_fallback: return "backend_fallback";
  }
  return "backend_fallback";
}

TraceFlag parse_trace_flag(std::string_view s) {
  if (s == "empty_after_stage2") return TraceFlag::empty_after_stage2;
  if (s == "no_missing_info") return TraceFlag::no_missing_info;
  if (s == "backend_fallback") return TraceFlag::backend_fallback;
  throw ParseError("unknown trace flag: " + std::string(s));
}

PipelineTrace new_trace(const Document& document) {
  PipelineTrace t;
  t.document_id = document.id();
  return t;
}

namespace {

// JSON has no infinities; the "no key phrases" sentinel is written as null.
json real_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double real_from(const json& j) {
  if (j.is_null()) return -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json key_records(const std::vector<KeyRecord>& units) {
  json out = json::array();
  for (const auto& u : units) {
    out.push_back({{"text", u.text}, {"position", u.position}, {"mmr_score", u.mmr_score}});
  }
  return out;
}

std::vector<KeyRecord> key_records_from(const json& j) {
  std::vector<KeyRecord> out;
  for (const auto& u : j) {
    out.push_back({u.at("text").get<std::string>(), u.at("position").get<std::size_t>(),
                   u.at("mmr_score").get<double>()});
  }
  return out;
}

}  // namespace

void to_json(json& j, const PipelineTrace& t) {
  json dsus = json::array();
  for (const auto& d : t.dsus) {
    dsus.push_back({
        {"text", d.text},
        {"level", to_string(d.level)},
        {"parent_index", d.parent_index ? json(*d.parent_index) : json(nullptr)},
        {"e", d.scores.entailment},
        {"n", d.scores.neutral},
        {"c", d.scores.contradiction},
        {"label", to_string(d.label)},
        {"retained", d.retained},
    });
  }
  json sim = json::array();
  for (double v : t.sim_matrix) sim.push_back(real_or_null(v));
  json cov = json::array();
  for (double v : t.cov_scores) cov.push_back(real_or_null(v));
  json insertions = json::array();
  for (const auto& ins : t.insertions) {
    insertions.push_back({{"text", ins.text}, {"position", ins.position},
                          {"ppl", ins.perplexity}});
  }
  json flags = json::array();
  for (auto f : t.flags) flags.push_back(to_string(f));

  j = json{
      {"document_id", t.document_id},
      {"status", t.status},
      {"reason", t.reason},
      {"prompt", t.prompt},
      {"raw_completion", t.raw_completion},
      {"initial_summary", t.initial_summary},
      {"dsus", std::move(dsus)},
      {"removed_units", t.removed_units},
      {"refined_summary", t.refined_summary},
      {"key_sentences", key_records(t.key_sentences)},
      {"key_phrases", key_records(t.key_phrases)},
      {"sim_matrix", {{"rows", t.sim_rows}, {"cols", t.sim_cols}, {"values", std::move(sim)}}},
      {"cov_scores", std::move(cov)},
      {"missing", t.missing},
      {"insertions", std::move(insertions)},
      {"final_summary", t.final_summary},
      {"flags", std::move(flags)},
  };
}

void from_json(const json& j, PipelineTrace& t) {
  t = PipelineTrace{};
  t.document_id = j.at("document_id").get<std::string>();
  t.status = j.at("status").get<std::string>();
  t.reason = j.at("reason").get<std::string>();
  t.prompt = j.at("prompt").get<std::string>();
  t.raw_completion = j.at("raw_completion").get<std::string>();
  t.initial_summary = j.at("initial_summary").get<std::string>();
  for (const auto& d : j.at("dsus")) {
    Dsu dsu;
    dsu.text = d.at("text").get<std::string>();
    dsu.level = parse_dsu_level(d.at("level").get<std::string>());
    if (!d.at("parent_index").is_null()) {
      dsu.parent_index = d.at("parent_index").get<std::size_t>();
    }
    dsu.scores = {d.at("e").get<double>(), d.at("n").get<double>(), d.at("c").get<double>()};
    dsu.label = parse_dsu_label(d.at("label").get<std::string>());
    dsu.retained = d.at("retained").get<bool>();
    t.dsus.push_back(std::move(dsu));
  }
  t.removed_units = j.at("removed_units").get<std::vector<std::string>>();
  t.refined_summary = j.at("refined_summary").get<std::string>();
  t.key_sentences = key_records_from(j.at("key_sentences"));
  t.key_phrases = key_records_from(j.at("key_phrases"));
  const auto& sim = j.at("sim_matrix");
  t.sim_rows = sim.at("rows").get<std::size_t>();
  t.sim_cols = sim.at("cols").get<std::size_t>();
  for (const auto& v : sim.at("values")) t.sim_matrix.push_back(real_from(v));
  for (const auto& v : j.at("cov_scores")) t.cov_scores.push_back(real_from(v));
  t.missing = j.at("missing").get<std::vector<std::string>>();
  for (const auto& ins : j.at("insertions")) {
    t.insertions.push_back({ins.at("text").get<std::string>(),
                            ins.at("position").get<std::size_t>(),
                            ins.at("ppl").get<double>()});
  }
  t.final_summary = j.at("final_summary").get<std::string>();
  for (const auto& f : j.at("flags")) t.flags.insert(parse_trace_flag(f.get<std::string>()));
}

std::string serialize(const PipelineTrace& trace) {
  return json(trace).dump();
}

PipelineTrace parse_trace(std::string_view line) {
  try {
    return json::parse(line).get<PipelineTrace>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace faithsum
