#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"
#include "evascore/hash.hpp"
#include "evascore/text.hpp"

namespace evascore {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;
};

// Canonical JSON forms: nlohmann::json orders keys lexicographically, message
// content is normalized, and an "endpoint" discriminator keeps chat and embed
// keys from ever colliding. Request keys are SHA-256 over the dump, so the
// same logical request maps to the same cache/fixture entry in every run.
inline nlohmann::json canonical_chat_request(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatMessage& m : request.messages) {
    messages.push_back(
        {{"content", normalize_text(m.content)}, {"role", m.role}});
  }
  return nlohmann::json{{"endpoint", "chat"},
                        {"max_tokens", request.max_tokens},
                        {"messages", messages},
                        {"model", request.model},
                        {"temperature", request.temperature}};
}

inline std::string chat_request_key(const ChatRequest& request) {
  return sha256_hex(canonical_chat_request(request).dump());
}

inline nlohmann::json canonical_embed_request(const std::string& model,
                                              const std::string& text) {
  return nlohmann::json{
      {"endpoint", "embed"}, {"input", normalize_text(text)}, {"model", model}};
}

inline std::string embed_request_key(const std::string& model,
                                     const std::string& text) {
  return sha256_hex(canonical_embed_request(model, text).dump());
}

// Where model responses come from. complete() returns the assistant message
// content; embed() returns the embedding vector.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::vector<double> embed(const std::string& model,
                                    const std::string& text) = 0;
  // HTTP attempts actually sent over the wire; zero for offline backends.
  virtual std::uint64_t network_calls() const { return 0; }
};

// Recorded request/response pairs, one JSON object per line:
//   {"key": "...", "request": {...}, "response": <string or number array>}
// The same format serves both as replay fixtures and as the persistent cache.
class FixtureStore {
 public:
  FixtureStore() = default;

  static FixtureStore load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fixtures: " + path.string());
    FixtureStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json entry;
      try {
        entry = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("bad fixture line " + std::to_string(line_no) + ": " +
                         e.what());
      }
      if (!entry.contains("key") || !entry.contains("response")) {
        throw ParseError("fixture line " + std::to_string(line_no) +
                         " missing key/response");
      }
      store.entries_[entry.at("key").get<std::string>()] = entry;
    }
    return store;
  }

  void add(const std::string& key, nlohmann::json request,
           nlohmann::json response) {
    entries_[key] = nlohmann::json{{"key", key},
                                   {"request", std::move(request)},
                                   {"response", std::move(response)}};
  }

  bool contains(const std::string& key) const {
    return entries_.find(key) != entries_.end();
  }

  const nlohmann::json& response(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw FixtureMiss("no fixture for key " + key);
    return it->second.at("response");
  }

  const std::map<std::string, nlohmann::json>& entries() const {
    return entries_;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, nlohmann::json> entries_;
};

// Replays recorded fixtures; any request outside the recording is a hard
// error so offline runs can never silently invent model output.
class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(FixtureStore store) : store_(std::move(store)) {}

  static std::shared_ptr<ReplayBackend> from_file(
      const std::filesystem::path& path) {
    return std::make_shared<ReplayBackend>(FixtureStore::load(path));
  }

  std::string name() const override { return "replay"; }

  std::string complete(const ChatRequest& request) override {
    const nlohmann::json& response = store_.response(chat_request_key(request));
    if (!response.is_string()) {
      throw ParseError("fixture for chat request is not a string");
    }
    return response.get<std::string>();
  }

  std::vector<double> embed(const std::string& model,
                            const std::string& text) override {
    const nlohmann::json& response =
        store_.response(embed_request_key(model, text));
    if (!response.is_array()) {
      throw ParseError("fixture for embed request is not an array");
    }
    return response.get<std::vector<double>>();
  }

 private:
  FixtureStore store_;
};

struct GatewayConfig {
  int max_concurrency = 4;
  std::string cache_path;  // empty disables the persistent cache
  int max_attempts = 5;
  int retry_base_ms = 250;  // doubles per retry; tests shrink it
};

struct GatewayStats {
  std::uint64_t chat_calls = 0;
  std::uint64_t embed_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t coalesced = 0;
  std::uint64_t upstream_calls = 0;
  std::uint64_t network_calls = 0;
  std::uint64_t retries = 0;
};

inline void to_json(nlohmann::json& j, const GatewayStats& s) {
  j = nlohmann::json{{"chat_calls", s.chat_calls},
                     {"embed_calls", s.embed_calls},
                     {"cache_hits", s.cache_hits},
                     {"coalesced", s.coalesced},
                     {"upstream_calls", s.upstream_calls},
                     {"network_calls", s.network_calls},
                     {"retries", s.retries}};
}

// Front door for all model traffic. Adds, in order: an in-memory +
// append-only on-disk cache keyed by canonical request, coalescing of
// identical concurrent requests, a concurrency bound, bounded exponential
// retry on transport errors, and optional fixture recording.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<ChatBackend> backend,
                   GatewayConfig config = {})
      : backend_(std::move(backend)),
        config_(config),
        semaphore_(config.max_concurrency > 0 ? config.max_concurrency : 1) {
    if (!config_.cache_path.empty()) load_cache();
  }

  std::string chat(const ChatRequest& request) {
    if (request.messages.empty()) {
      throw std::invalid_argument("chat request has no messages");
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++stats_.chat_calls;
    }
    nlohmann::json canonical = canonical_chat_request(request);
    std::string key = sha256_hex(canonical.dump());
    nlohmann::json response = cached_call(key, canonical, [&] {
      return nlohmann::json(backend_->complete(request));
    });
    if (!response.is_string()) {
      throw ParseError("cached chat response is not a string");
    }
    return response.get<std::string>();
  }

  std::vector<double> embed(const std::string& model, const std::string& text) {
    if (normalize_text(text).empty()) {
      throw EmptyInput("embed called with empty text");
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++stats_.embed_calls;
    }
    nlohmann::json canonical = canonical_embed_request(model, text);
    std::string key = sha256_hex(canonical.dump());
    nlohmann::json response = cached_call(key, canonical, [&] {
      return nlohmann::json(backend_->embed(model, text));
    });
    if (!response.is_array()) {
      throw ParseError("cached embed response is not an array");
    }
    return response.get<std::vector<double>>();
  }

  // Tee every upstream response (cache misses only) to a fixtures file.
  void record_fixtures(const std::filesystem::path& path) {
    std::lock_guard<std::mutex> lock(mu_);
    recorder_ = std::make_unique<std::ofstream>(path, std::ios::app);
    if (!*recorder_) {
      recorder_.reset();
      throw ConfigError("cannot open fixture output: " + path.string());
    }
  }

  void stop_recording() {
    std::lock_guard<std::mutex> lock(mu_);
    recorder_.reset();
  }

  GatewayStats stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    GatewayStats out = stats_;
    out.network_calls = backend_->network_calls();
    return out;
  }

  ChatBackend& backend() { return *backend_; }

 private:
  void load_cache() {
    std::ifstream in(config_.cache_path);
    if (!in) return;  // first run: the file does not exist yet
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json entry = nlohmann::json::parse(line, nullptr, false);
      if (entry.is_discarded() || !entry.contains("key") ||
          !entry.contains("response")) {
        continue;  // tolerate a torn trailing line from a crashed run
      }
      cache_[entry.at("key").get<std::string>()] = entry.at("response");
    }
  }

  void persist(const std::string& key, const nlohmann::json& canonical,
               const nlohmann::json& response) {
    nlohmann::json entry{
        {"key", key}, {"request", canonical}, {"response", response}};
    if (recorder_) {
      *recorder_ << entry.dump() << "\n";
      recorder_->flush();
    }
    if (!config_.cache_path.empty()) {
      entry["created_at"] = timestamp();
      std::ofstream out(config_.cache_path, std::ios::app);
      if (out) out << entry.dump() << "\n";
    }
  }

  static std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
  }

  nlohmann::json cached_call(const std::string& key,
                             const nlohmann::json& canonical,
                             const std::function<nlohmann::json()>& upstream) {
    std::shared_future<nlohmann::json> waiter;
    std::promise<nlohmann::json> promise;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto cached = cache_.find(key);
      if (cached != cache_.end()) {
        ++stats_.cache_hits;
        return cached->second;
      }
      auto inflight = inflight_.find(key);
      if (inflight != inflight_.end()) {
        ++stats_.coalesced;
        waiter = inflight->second;
      } else {
        inflight_[key] = promise.get_future().share();
      }
    }
    if (waiter.valid()) return waiter.get();  // rethrows the leader's error

    try {
      semaphore_.acquire();
      nlohmann::json response;
      try {
        response = call_with_retries(upstream);
      } catch (...) {
        semaphore_.release();
        throw;
      }
      semaphore_.release();
      {
        std::lock_guard<std::mutex> lock(mu_);
        ++stats_.upstream_calls;
        cache_[key] = response;
        persist(key, canonical, response);
        inflight_.erase(key);
      }
      promise.set_value(response);
      return response;
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        inflight_.erase(key);
      }
      promise.set_exception(std::current_exception());
      throw;
    }
  }

  nlohmann::json call_with_retries(
      const std::function<nlohmann::json()>& upstream) {
    int attempts = config_.max_attempts > 0 ? config_.max_attempts : 1;
    for (int attempt = 1;; ++attempt) {
      try {
        return upstream();
      } catch (const NetworkError&) {
        if (attempt >= attempts) throw;
        {
          std::lock_guard<std::mutex> lock(mu_);
          ++stats_.retries;
        }
        auto delay = std::chrono::milliseconds(
            static_cast<long long>(config_.retry_base_ms) << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }
    }
  }

  std::shared_ptr<ChatBackend> backend_;
  GatewayConfig config_;
  std::counting_semaphore<256> semaphore_;
  mutable std::mutex mu_;
  GatewayStats stats_;
  std::map<std::string, nlohmann::json> cache_;
  std::map<std::string, std::shared_future<nlohmann::json>> inflight_;
  std::unique_ptr<std::ofstream> recorder_;
};

}  // namespace evascore
