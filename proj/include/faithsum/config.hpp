#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "faithsum/core.hpp"
#include "json.hpp"

namespace faithsum {

enum class BackendKind { stub, remote };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view s);

struct BaseUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 80;
  std::string path_prefix;  // no trailing slash, may be empty
};

// Throws ConfigError unless `url` looks like scheme://host[:port][/prefix].
BaseUrl parse_base_url(std::string_view url);

struct BackendConfig {
  BackendKind kind = BackendKind::stub;
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{100};
  int max_in_flight = 8;

  void validate() const;
};

struct ChunkingConfig {
  std::size_t window = 384;
  std::size_t stride = 256;
};

struct Config {
  Thresholds thresholds;
  BackendConfig backend;
  ChunkingConfig chunking;
  std::vector<std::string> contradiction_lexicon{"no", "not", "never",
                                                 "without", "absent"};
  std::string abbreviations_file;
  std::string stopwords_file;
  std::string method = "standard";
  std::string generic_instruction = "Summarize the following document";
  int max_tokens = 256;
  int hierarchical_block_size = 20;

  void validate() const;
  nlohmann::json to_json() const;
};

// Flat UTF-8 `key = value` lines; `#` starts a comment line. Unset keys keep
// their defaults, unknown or repeated keys are errors.
Config parse_config(std::string_view content, std::string_view source = "<config>");
Config load_config(const std::filesystem::path& path);

// FAITHSUM_BACKEND_URL, when set and non-empty, replaces backend.base_url.
void apply_env_overrides(Config& config);

}  // namespace faithsum
