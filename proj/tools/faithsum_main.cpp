// faithsum: faithful-summary pipeline runner, benchmark ranker and stub
// scoring server.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "faithsum/error.hpp"
#include "faithsum/runner.hpp"
#include "faithsum/stub_backend.hpp"
#include "faithsum/stub_server.hpp"

namespace {

faithsum::WireServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faithsum - faithful summarization pipeline"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline over a JSONL dataset");
  std::string dataset, out_dir, config_path, backend_kind, backend_url, stages = "1,2,3";
  std::string method, dataset_kind, icl_file, initial_field;
  int jobs = 1;
  run_cmd->add_option("dataset", dataset, "JSON Lines dataset")->required();
  run_cmd->add_option("-o,--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--config", config_path, "key=value config file");
  run_cmd->add_option("--backend", backend_kind, "stub or remote")
      ->check(CLI::IsMember({"stub", "remote"}));
  run_cmd->add_option("--backend-url", backend_url, "Scoring service base URL");
  run_cmd->add_option("--stages", stages, "Comma-separated stages to run")->capture_default_str();
  run_cmd->add_option("--jobs", jobs, "Documents processed in parallel")->capture_default_str();
  run_cmd->add_option("--method", method,
                      "standard, element_aware, chain_of_density or hierarchical");
  run_cmd->add_option("--dataset-kind", dataset_kind,
                      "Default dataset kind: mimic3, meqsum, acibench or generic");
  run_cmd->add_option("--icl-file", icl_file, "JSONL of {document, summary} examples");
  run_cmd->add_option("--initial-summary-field", initial_field,
                      "Record field holding a precomputed initial summary");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Rank methods from a metric score table");
  std::string scores_csv, bench_out, tie_rule = "dense";
  bool no_entailment = false;
  bench_cmd->add_option("scores", scores_csv, "CSV: method,model,metric:direction,...")
      ->required();
  bench_cmd->add_option("-o,--out", bench_out, "Directory for ranking.json / ranking.txt");
  bench_cmd->add_flag("--no-entailment", no_entailment,
                      "Exclude entailment columns from the aggregate");
  bench_cmd->add_option("--tie-rule", tie_rule, "dense, fractional or min")
      ->capture_default_str();

  // serve-stub
  auto* serve_cmd = app.add_subcommand("serve-stub", "Serve the stub scorers over HTTP");
  std::string host = "127.0.0.1";
  int port = 8089;
  serve_cmd->add_option("--host", host, "Interface to bind")->capture_default_str();
  serve_cmd->add_option("--port", port, "Port to listen on (0 picks a free port)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      faithsum::Config config;
      if (!config_path.empty()) config = faithsum::load_config(config_path);
      faithsum::apply_env_overrides(config);
      if (!backend_kind.empty()) config.backend.kind = faithsum::parse_backend_kind(backend_kind);
      if (!backend_url.empty()) config.backend.base_url = backend_url;
      if (!method.empty()) config.method = method;
      config.validate();

      faithsum::RunOptions opts;
      opts.dataset = dataset;
      opts.out_dir = out_dir;
      opts.config = config;
      opts.stages = faithsum::parse_stages(stages);
      opts.jobs = jobs;
      if (!dataset_kind.empty()) opts.default_kind = faithsum::parse_dataset_kind(dataset_kind);
      opts.icl_file = icl_file;
      opts.initial_summary_field = initial_field;

      auto backend = faithsum::make_backend(config);
      const int rc = faithsum::run(opts, *backend);
      std::cerr << "wrote " << out_dir << " (exit " << rc << ")\n";
      return rc;
    }
    if (*bench_cmd) {
      faithsum::BenchOptions opts;
      opts.scores_csv = scores_csv;
      opts.out_dir = bench_out;
      opts.no_entailment = no_entailment;
      opts.rule = faithsum::parse_tie_rule(tie_rule);
      std::cout << faithsum::bench(opts);
      return 0;
    }
    if (*serve_cmd) {
      faithsum::WireServer server(std::make_shared<faithsum::StubBackend>());
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "serving stub backend on http://" << host << ":" << bound << '\n';
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const faithsum::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
