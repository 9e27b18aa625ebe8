#include "faithsum/remote_backend.hpp"

#include <thread>

#include "faithsum/error.hpp"
#include "httplib.h"

namespace faithsum {

using nlohmann::json;

namespace {

std::string error_message(const httplib::Result& res) {
  try {
    auto body = json::parse(res->body);
    if (body.contains("error") && body["error"].is_string()) {
      return body["error"].get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return res->body;
}

double number_field(const json& body, const char* name) {
  if (!body.contains(name) || !body[name].is_number()) {
    throw BackendError(std::string("malformed response: missing numeric field '") +
                       name + "'");
  }
  return body[name].get<double>();
}

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SemaphoreGuard() { s_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

RemoteBackend::RemoteBackend(BackendConfig config)
    : config_(std::move(config)),
      url_(parse_base_url(config_.base_url)),
      in_flight_(config_.max_in_flight) {
  config_.validate();
  if (url_.scheme != "http") {
    throw ConfigError("remote backend: only http:// urls are supported in this build");
  }
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::describe() const { return "remote:" + config_.base_url; }

json RemoteBackend::post(const std::string& endpoint, const json& body) const {
  SemaphoreGuard guard(in_flight_);
  const std::string path = url_.path_prefix + endpoint;
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.retry_backoff * (1LL << (attempt - 1)));
    }
    httplib::Client client(url_.host, url_.port);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    ++attempts_;
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + error_message(res);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(endpoint + " failed with HTTP " + std::to_string(res->status) +
                         ": " + error_message(res));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw BackendError(endpoint + ": malformed response body: " + e.what());
    }
  }
  throw BackendError(endpoint + " unreachable after " +
                     std::to_string(config_.max_retries + 1) + " attempts (" + last_error +
                     ")");
}

bool RemoteBackend::healthy() const {
  httplib::Client client(url_.host, url_.port);
  client.set_connection_timeout(config_.timeout);
  auto res = client.Get(url_.path_prefix + "/v1/health");
  if (!res || res->status != 200) return false;
  try {
    auto body = json::parse(res->body);
    return body.value("status", "") == "ok";
  } catch (const json::exception&) {
    return false;
  }
}

NliDistribution RemoteBackend::do_nli(std::string_view premise,
                                      std::string_view hypothesis) const {
  const auto body = post("/v1/nli", {{"premise", premise}, {"hypothesis", hypothesis}});
  return {number_field(body, "entailment"), number_field(body, "neutral"),
          number_field(body, "contradiction")};
}

std::vector<Embedding> RemoteBackend::do_embed(const std::vector<std::string>& texts) const {
  const auto body = post("/v1/embed", {{"texts", texts}});
  if (!body.contains("vectors") || !body["vectors"].is_array()) {
    throw BackendError("malformed response: missing 'vectors'");
  }
  const auto dim = static_cast<std::size_t>(number_field(body, "dim"));
  std::vector<Embedding> out;
  try {
    for (const auto& v : body["vectors"]) {
      auto vec = v.get<Embedding>();
      if (vec.size() != dim) throw BackendError("malformed response: vector length != dim");
      out.push_back(std::move(vec));
    }
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed response: ") + e.what());
  }
  return out;
}

double RemoteBackend::do_perplexity(std::string_view text) const {
  return number_field(post("/v1/perplexity", {{"text", text}}), "perplexity");
}

std::string RemoteBackend::do_generate(std::string_view prompt, int max_tokens) const {
  const auto body = post("/v1/generate", {{"prompt", prompt}, {"max_tokens", max_tokens}});
  if (!body.contains("text") || !body["text"].is_string()) {
    throw BackendError("malformed response: missing 'text'");
  }
  return body["text"].get<std::string>();
}

}  // namespace faithsum
