#include "faithsum/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::stub ? "stub" : "remote";
}

BackendKind parse_backend_kind(std::string_view s) {
  if (s == "stub") return BackendKind::stub;
  if (s == "remote") return BackendKind::remote;
  throw ConfigError("unknown backend kind: '" + std::string(s) + "'");
}

BaseUrl parse_base_url(std::string_view url) {
  BaseUrl out;
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw ConfigError("backend url lacks a scheme: '" + std::string(url) + "'");
  }
  out.scheme = text::to_lower(url.substr(0, sep));
  if (out.scheme != "http" && out.scheme != "https") {
    throw ConfigError("backend url scheme must be http or https: '" +
                      std::string(url) + "'");
  }
  out.port = out.scheme == "https" ? 443 : 80;
  const std::string rest(url.substr(sep + 3));
  const auto slash = rest.find('/');
  std::string_view authority = std::string_view(rest).substr(0, slash);
  if (slash != std::string_view::npos) {
    std::string_view path = std::string_view(rest).substr(slash);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    out.path_prefix = std::string(path);
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    std::string_view port = authority.substr(colon + 1);
    int value = 0;
    auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || p != port.data() + port.size() || value <= 0 ||
        value > 65535) {
      throw ConfigError("backend url has an invalid port: '" + std::string(url) + "'");
    }
    out.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw ConfigError("backend url has no host: '" + std::string(url) + "'");
  }
  for (char c : authority) {
    if (text::is_space(c) || c == '@' || c == '?' || c == '#') {
      throw ConfigError("backend url has an invalid host: '" + std::string(url) + "'");
    }
  }
  out.host = std::string(authority);
  return out;
}

void BackendConfig::validate() const {
  if (kind == BackendKind::remote) {
    if (base_url.empty()) throw ConfigError("remote backend requires backend_url");
    parse_base_url(base_url);
  }
  if (timeout.count() <= 0) throw ConfigError("timeout_ms must be positive");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (retry_backoff.count() < 0) throw ConfigError("retry_backoff_ms must be >= 0");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
}

void Config::validate() const {
  thresholds.validate();
  backend.validate();
  if (chunking.stride == 0 || chunking.window < chunking.stride) {
    throw ConfigError("nli_window must be >= nli_stride > 0");
  }
  if (max_tokens < 1) throw ConfigError("max_tokens must be positive");
  if (hierarchical_block_size < 1) {
    throw ConfigError("hierarchical_block_size must be positive");
  }
}

nlohmann::json Config::to_json() const {
  return {
      {"t_e", thresholds.t_e},
      {"t_c", thresholds.t_c},
      {"t_a", thresholds.t_a},
      {"top_m", thresholds.top_m},
      {"top_n", thresholds.top_n},
      {"cov_min", thresholds.cov_min},
      {"mmr_lambda", thresholds.mmr_lambda},
      {"backend", to_string(backend.kind)},
      {"backend_url", backend.base_url},
      {"timeout_ms", backend.timeout.count()},
      {"max_retries", backend.max_retries},
      {"retry_backoff_ms", backend.retry_backoff.count()},
      {"max_in_flight", backend.max_in_flight},
      {"nli_window", chunking.window},
      {"nli_stride", chunking.stride},
      {"contradiction_lexicon", contradiction_lexicon},
      {"abbreviations_file", abbreviations_file},
      {"stopwords_file", stopwords_file},
      {"method", method},
      {"generic_instruction", generic_instruction},
      {"max_tokens", max_tokens},
      {"hierarchical_block_size", hierarchical_block_size},
  };
}

namespace {

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": not a number: '" + std::string(v) + "'");
  }
  return out;
}

long long parse_int(std::string_view key, std::string_view v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": not an integer: '" + std::string(v) + "'");
  }
  return out;
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    auto comma = v.find(',', start);
    if (comma == std::string_view::npos) comma = v.size();
    auto item = text::trim(v.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

using Setter = std::function<void(Config&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"t_e", [](Config& c, auto k, auto v) { c.thresholds.t_e = parse_double(k, v); }},
      {"t_c", [](Config& c, auto k, auto v) { c.thresholds.t_c = parse_double(k, v); }},
      {"t_a", [](Config& c, auto k, auto v) { c.thresholds.t_a = parse_double(k, v); }},
      {"top_m", [](Config& c, auto k, auto v) { c.thresholds.top_m = static_cast<int>(parse_int(k, v)); }},
      {"top_n", [](Config& c, auto k, auto v) { c.thresholds.top_n = static_cast<int>(parse_int(k, v)); }},
      {"cov_min", [](Config& c, auto k, auto v) { c.thresholds.cov_min = parse_double(k, v); }},
      {"mmr_lambda", [](Config& c, auto k, auto v) { c.thresholds.mmr_lambda = parse_double(k, v); }},
      {"backend", [](Config& c, auto, auto v) { c.backend.kind = parse_backend_kind(v); }},
      {"backend_url", [](Config& c, auto, auto v) { c.backend.base_url = std::string(v); }},
      {"timeout_ms", [](Config& c, auto k, auto v) { c.backend.timeout = std::chrono::milliseconds(parse_int(k, v)); }},
      {"max_retries", [](Config& c, auto k, auto v) { c.backend.max_retries = static_cast<int>(parse_int(k, v)); }},
      {"retry_backoff_ms", [](Config& c, auto k, auto v) { c.backend.retry_backoff = std::chrono::milliseconds(parse_int(k, v)); }},
      {"max_in_flight", [](Config& c, auto k, auto v) { c.backend.max_in_flight = static_cast<int>(parse_int(k, v)); }},
      {"nli_window", [](Config& c, auto k, auto v) {
         auto n = parse_int(k, v);
         if (n < 1) throw ConfigError("nli_window must be positive");
         c.chunking.window = static_cast<std::size_t>(n);
       }},
      {"nli_stride", [](Config& c, auto k, auto v) {
         auto n = parse_int(k, v);
         if (n < 1) throw ConfigError("nli_stride must be positive");
         c.chunking.stride = static_cast<std::size_t>(n);
       }},
      {"contradiction_lexicon", [](Config& c, auto, auto v) { c.contradiction_lexicon = parse_list(v); }},
      {"abbreviations_file", [](Config& c, auto, auto v) { c.abbreviations_file = std::string(v); }},
      {"stopwords_file", [](Config& c, auto, auto v) { c.stopwords_file = std::string(v); }},
      {"method", [](Config& c, auto, auto v) { c.method = std::string(v); }},
      {"generic_instruction", [](Config& c, auto, auto v) { c.generic_instruction = std::string(v); }},
      {"max_tokens", [](Config& c, auto k, auto v) { c.max_tokens = static_cast<int>(parse_int(k, v)); }},
      {"hierarchical_block_size", [](Config& c, auto k, auto v) { c.hierarchical_block_size = static_cast<int>(parse_int(k, v)); }},
  };
  return table;
}

}  // namespace

Config parse_config(std::string_view content, std::string_view source) {
  Config config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = text::trim(content.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected key = value");
    }
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    }
    if (!seen.emplace(key).second) {
      throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      it->second(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void apply_env_overrides(Config& config) {
  if (const char* url = std::getenv("FAITHSUM_BACKEND_URL"); url && *url) {
    config.backend.base_url = url;
  }
}

}  // namespace faithsum
