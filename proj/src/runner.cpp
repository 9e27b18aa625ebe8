#include "faithsum/runner.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "faithsum/error.hpp"
#include "faithsum/remote_backend.hpp"
#include "faithsum/stub_backend.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

using nlohmann::json;

std::unique_ptr<Backend> make_backend(const Config& config) {
  if (config.backend.kind == BackendKind::remote) {
    return std::make_unique<RemoteBackend>(config.backend);
  }
  return std::make_unique<StubBackend>(config.contradiction_lexicon);
}

ParsedRecord parse_dataset_record(std::string_view line, DatasetKind default_kind,
                                  std::string_view initial_summary_field) {
  ParsedRecord out;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    out.error = std::string("invalid JSON: ") + e.what();
    return out;
  }
  if (!j.is_object()) {
    out.error = "record is not a JSON object";
    return out;
  }
  if (j.contains("id") && j["id"].is_string()) out.id = j["id"].get<std::string>();
  if (out.id.empty()) {
    out.error = "record has no string \"id\"";
    return out;
  }
  if (!j.contains("document") || !j["document"].is_string()) {
    out.error = "record has no string \"document\"";
    return out;
  }
  DocumentInput input;
  input.id = out.id;
  input.text = j["document"].get<std::string>();
  if (text::trim(input.text).empty()) {
    out.error = "document text is empty";
    return out;
  }
  input.kind = default_kind;
  try {
    if (j.contains("dataset_kind") && !j["dataset_kind"].is_null()) {
      input.kind = parse_dataset_kind(j["dataset_kind"].get<std::string>());
    }
    if (j.contains("reference_summary") && j["reference_summary"].is_string()) {
      input.reference_summary = j["reference_summary"].get<std::string>();
    }
    if (!initial_summary_field.empty()) {
      const std::string field(initial_summary_field);
      if (j.contains(field) && j[field].is_string()) {
        input.initial_summary = j[field].get<std::string>();
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
  out.input = std::move(input);
  return out;
}

std::set<int> parse_stages(std::string_view s) {
  std::set<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    const auto item = text::trim(s.substr(start, comma - start));
    if (item == "1" || item == "2" || item == "3") {
      out.insert(item[0] - '0');
    } else if (!item.empty()) {
      throw ParseError("unknown stage '" + std::string(item) + "' (expected 1, 2 or 3)");
    }
    start = comma + 1;
  }
  if (out.empty()) throw ParseError("no stages selected");
  return out;
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct Slot {
  ParsedRecord record;
  std::optional<PipelineTrace> trace;
  bool done = false;
};

json summary_line(const DocumentInput& input, const PipelineTrace& trace,
                  const SentenceSplitter& splitter) {
  json j = {{"id", trace.document_id},
            {"initial", trace.initial_summary},
            {"refined", trace.refined_summary},
            {"final", trace.final_summary}};
  if (input.reference_summary) {
    const auto r = rouge_l_sum(trace.final_summary, *input.reference_summary, splitter);
    j["rouge_lsum"] = {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
  }
  return j;
}

}  // namespace

int run(const RunOptions& options, const Backend& backend) {
  std::ifstream in(options.dataset);
  if (!in) {
    std::cerr << "error: cannot read dataset " << options.dataset << '\n';
    return 2;
  }
  const std::string started = utc_timestamp();

  PipelineContext ctx = PipelineContext::from_config(options.config, backend);
  ctx.stages = options.stages;
  if (!options.icl_file.empty()) ctx.icl_examples = load_icl_examples(options.icl_file);

  std::vector<Slot> slots;
  std::unordered_set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    Slot slot;
    slot.record = parse_dataset_record(line, options.default_kind, options.initial_summary_field);
    if (slot.record.input && !ids.insert(slot.record.id).second) {
      slot.record.error = "duplicate id";
      slot.record.input.reset();
    }
    slots.push_back(std::move(slot));
  }

  std::filesystem::create_directories(options.out_dir);
  std::ofstream summaries(options.out_dir / "summaries.jsonl", std::ios::trunc);
  std::ofstream traces(options.out_dir / "traces.jsonl", std::ios::trunc);
  if (!summaries || !traces) {
    std::cerr << "error: cannot write to " << options.out_dir << '\n';
    return 2;
  }

  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      std::optional<PipelineTrace> trace;
      if (slots[i].record.input) trace = process_document(*slots[i].record.input, ctx);
      {
        std::lock_guard lock(mu);
        slots[i].trace = std::move(trace);
        slots[i].done = true;
      }
      cv.notify_all();
    }
  };
  const int jobs = std::max(1, options.jobs);
  std::vector<std::jthread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);

  // Single writer, input order.
  json statuses = json::array();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return slots[i].done; });
    }
    const Slot& slot = slots[i];
    json status = {{"index", i}, {"id", slot.record.id}};
    if (!slot.trace) {
      status["status"] = "skipped";
      status["reason"] = slot.record.error;
    } else {
      traces << serialize(*slot.trace) << '\n';
      traces.flush();
      status["status"] = slot.trace->status;
      if (slot.trace->status == "ok") {
        ++ok;
        summaries << summary_line(*slot.record.input, *slot.trace, ctx.splitter).dump() << '\n';
        summaries.flush();
      } else {
        status["reason"] = slot.trace->reason;
      }
    }
    statuses.push_back(std::move(status));
  }
  pool.clear();

  json stages = json::array();
  for (int s : options.stages) stages.push_back(s);
  json manifest = {
      {"config", options.config.to_json()},
      {"backend", {{"kind", to_string(options.config.backend.kind)}, {"version", backend.describe()}}},
      {"dataset", {{"path", options.dataset.string()}, {"records", slots.size()}}},
      {"stages", stages},
      {"method", to_string(ctx.method)},
      {"jobs", jobs},
      {"started_at", started},
      {"finished_at", utc_timestamp()},
      {"ok", ok},
      {"skipped", slots.size() - ok},
      {"documents", std::move(statuses)},
  };
  std::ofstream(options.out_dir / "manifest.json", std::ios::trunc) << manifest.dump(2) << '\n';
  return ok > 0 ? 0 : 1;
}

std::string bench(const BenchOptions& options) {
  const MetricTable table = load_metric_table(options.scores_csv);
  std::vector<Ranking> rankings;
  if (!options.no_entailment) rankings.push_back(rank_methods(table, true, options.rule));
  rankings.push_back(rank_methods(table, false, options.rule));

  std::string text;
  json j = json::object();
  for (const auto& r : rankings) {
    if (!text.empty()) text += '\n';
    text += format_ranking(table, r);
    j[r.include_entailment ? "with_entailment" : "without_entailment"] = to_json(table, r);
  }
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    std::ofstream(options.out_dir / "ranking.json", std::ios::trunc) << j.dump(2) << '\n';
    std::ofstream(options.out_dir / "ranking.txt", std::ios::trunc) << text;
  }
  return text;
}

}  // namespace faithsum
