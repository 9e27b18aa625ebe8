#include "faithsum/stub_server.hpp"

#include "faithsum/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace faithsum {

using nlohmann::json;

struct WireServer::Impl {
  std::shared_ptr<const Backend> backend;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

const json& require(const json& body, const char* field, json::value_t type) {
  if (!body.is_object() || !body.contains(field)) {
    throw PreconditionError(std::string("missing field '") + field + "'");
  }
  const auto& v = body[field];
  const bool ok = type == json::value_t::number_integer ? v.is_number_integer()
                                                        : v.type() == type;
  if (!ok) throw PreconditionError(std::string("field '") + field + "' has the wrong type");
  return v;
}

template <typename F>
httplib::Server::Handler wrap(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      json body = json::parse(req.body);
      reply(res, 200, f(body));
    } catch (const json::exception& e) {
      reply(res, 400, {{"error", std::string("invalid request: ") + e.what()}});
    } catch (const PreconditionError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

WireServer::WireServer(std::shared_ptr<const Backend> backend)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  const Backend& b = *impl_->backend;
  auto& s = impl_->server;

  s.Post("/v1/nli", wrap([&b](const json& body) -> json {
           const auto& p = require(body, "premise", json::value_t::string);
           const auto& h = require(body, "hypothesis", json::value_t::string);
           const auto d = b.nli_score(p.get<std::string>(), h.get<std::string>());
           return {{"entailment", d.entailment},
                   {"neutral", d.neutral},
                   {"contradiction", d.contradiction}};
         }));
  s.Post("/v1/embed", wrap([&b](const json& body) -> json {
           const auto& t = require(body, "texts", json::value_t::array);
           std::vector<std::string> texts;
           for (const auto& x : t) {
             if (!x.is_string()) throw PreconditionError("'texts' must hold strings");
             texts.push_back(x.get<std::string>());
           }
           const auto vectors = b.embed(texts);
           const std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
           return {{"vectors", vectors}, {"dim", dim}};
         }));
  s.Post("/v1/perplexity", wrap([&b](const json& body) -> json {
           const auto& t = require(body, "text", json::value_t::string);
           return {{"perplexity", b.perplexity(t.get<std::string>())}};
         }));
  s.Post("/v1/generate", wrap([&b](const json& body) -> json {
           const auto& p = require(body, "prompt", json::value_t::string);
           const auto& n = require(body, "max_tokens", json::value_t::number_integer);
           return {{"text", b.generate(p.get<std::string>(), n.get<int>())}};
         }));
  s.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });
}

WireServer::~WireServer() { stop(); }

int WireServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void WireServer::listen() { impl_->server.listen_after_bind(); }

int WireServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  thread_ = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return bound;
}

void WireServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace faithsum
