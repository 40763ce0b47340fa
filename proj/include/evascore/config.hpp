#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"

namespace evascore {

// Every knob lives here; the CLI only overrides fields. Defaults mirror the
// documented config file shape.
struct Config {
  std::string backend = "replay";  // "live" or "replay"
  std::string chat_endpoint;
  std::string embed_endpoint;
  std::string api_key_env = "EVASCORE_API_KEY";

  std::string afg_model = "chatgpt";
  std::string afcg_model = "mixtral-7b-instruct";
  std::string docre_model = "gpt-4";
  std::string validation_model = "mixtral-7b-instruct";
  std::string embed_model = "text-embedding-3-small";

  int max_concurrency = 4;
  std::string cache_path;
  std::string fixtures_path;

  int retrieval_k = 5;
  double theta_tfidf = 0.6;
  double theta_embed = 0.85;
  std::string paraphrase_mode = "template";  // or "chat"

  int workers = 1;
  int max_tokens = 0;  // source/summary truncation budget; 0 = off
  bool strict = false;

  int chat_max_tokens = 512;
  int max_attempts = 5;
  int retry_base_ms = 250;

  static Config load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw ConfigError("config is not a JSON object: " + path.string());
    }
    Config config;
    try {
      config.backend = parsed.value("backend", config.backend);
      config.chat_endpoint = parsed.value("chat_endpoint", config.chat_endpoint);
      config.embed_endpoint =
          parsed.value("embed_endpoint", config.embed_endpoint);
      config.api_key_env = parsed.value("api_key_env", config.api_key_env);
      config.afg_model = parsed.value("afg_model", config.afg_model);
      config.afcg_model = parsed.value("afcg_model", config.afcg_model);
      config.docre_model = parsed.value("docre_model", config.docre_model);
      config.validation_model =
          parsed.value("validation_model", config.validation_model);
      config.embed_model = parsed.value("embed_model", config.embed_model);
      config.max_concurrency =
          parsed.value("max_concurrency", config.max_concurrency);
      config.cache_path = parsed.value("cache_path", config.cache_path);
      config.fixtures_path = parsed.value("fixtures", config.fixtures_path);
      config.retrieval_k = parsed.value("k", config.retrieval_k);
      config.theta_tfidf = parsed.value("theta_tfidf", config.theta_tfidf);
      config.theta_embed = parsed.value("theta_embed", config.theta_embed);
      config.paraphrase_mode =
          parsed.value("paraphrase_mode", config.paraphrase_mode);
      config.workers = parsed.value("workers", config.workers);
      config.max_tokens = parsed.value("max_tokens", config.max_tokens);
      config.strict = parsed.value("strict", config.strict);
      config.chat_max_tokens =
          parsed.value("chat_max_tokens", config.chat_max_tokens);
      config.max_attempts = parsed.value("max_attempts", config.max_attempts);
      config.retry_base_ms =
          parsed.value("retry_base_ms", config.retry_base_ms);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad config value: ") + e.what());
    }
    config.validate();
    return config;
  }

  void validate() const {
    if (backend != "live" && backend != "replay") {
      throw ConfigError("backend must be 'live' or 'replay', got '" + backend +
                        "'");
    }
    if (backend == "live" && chat_endpoint.empty()) {
      throw ConfigError("live backend requires chat_endpoint");
    }
    if (backend == "replay" && fixtures_path.empty()) {
      throw ConfigError("replay backend requires a fixtures path");
    }
    if (retrieval_k < 1) throw ConfigError("k must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
    if (max_tokens != 0 && max_tokens < 2) {
      throw ConfigError("max_tokens must be 0 (off) or >= 2");
    }
    if (theta_tfidf < 0.0 || theta_embed < 0.0) {
      throw ConfigError("thresholds must be non-negative");
    }
    if (paraphrase_mode != "template" && paraphrase_mode != "chat") {
      throw ConfigError("paraphrase_mode must be 'template' or 'chat'");
    }
  }
};

}  // namespace evascore
