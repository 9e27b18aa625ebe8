#pragma once

#include <atomic>
#include <memory>
#include <semaphore>
#include <string>

#include "faithsum/config.hpp"
#include "faithsum/scorers.hpp"
#include "json.hpp"

namespace faithsum {

// Client for the JSON-over-HTTP scoring protocol:
//
//   POST /v1/nli        {"premise", "hypothesis"} -> {"entailment", "neutral", "contradiction"}
//   POST /v1/embed      {"texts": [...]}          -> {"vectors": [[...]], "dim": n}
//   POST /v1/perplexity {"text"}                  -> {"perplexity"}
//   POST /v1/generate   {"prompt", "max_tokens"}  -> {"text"}
//   GET  /v1/health                               -> {"status": "ok"}
//
// Non-200 responses carry {"error": "..."}. Transport failures and 5xx are
// retried max_retries times with exponential backoff; at most max_in_flight
// requests are outstanding at once.
class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(BackendConfig config);
  ~RemoteBackend() override;

  std::string describe() const override;

  // GET /v1/health; true iff it answers {"status": "ok"}. Never retries.
  bool healthy() const;

  // Total HTTP attempts issued so far, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 protected:
  NliDistribution do_nli(std::string_view premise,
                         std::string_view hypothesis) const override;
  std::vector<Embedding> do_embed(const std::vector<std::string>& texts) const override;
  double do_perplexity(std::string_view text) const override;
  std::string do_generate(std::string_view prompt, int max_tokens) const override;

 private:
  nlohmann::json post(const std::string& endpoint, const nlohmann::json& body) const;

  BackendConfig config_;
  BaseUrl url_;
  mutable std::counting_semaphore<> in_flight_;
  mutable std::atomic<std::size_t> attempts_{0};
};

}  // namespace faithsum
