#pragma once

// HTTP backend, kept out of gateway.hpp so that only translation units that
// actually talk to the network pay for httplib.

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"
#include "evascore/gateway.hpp"

namespace evascore {

// "https://host:port/some/path" -> {"https://host:port", "/some/path"}
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// OpenAI-style chat-completions and embeddings endpoints.
class HttpChatBackend : public ChatBackend {
 public:
  HttpChatBackend(std::string chat_endpoint, std::string embed_endpoint,
                  std::string api_key)
      : chat_endpoint_(std::move(chat_endpoint)),
        embed_endpoint_(std::move(embed_endpoint)),
        api_key_(std::move(api_key)) {}

  std::string name() const override { return "live"; }

  std::uint64_t network_calls() const override { return network_calls_; }

  std::string complete(const ChatRequest& request) override {
    nlohmann::json messages = nlohmann::json::array();
    for (const ChatMessage& m : request.messages) {
      messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    nlohmann::json body{{"model", request.model},
                        {"messages", messages},
                        {"temperature", request.temperature},
                        {"max_tokens", request.max_tokens}};
    nlohmann::json reply = post(chat_endpoint_, body);
    try {
      return reply.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("unexpected chat response shape: ") +
                       e.what());
    }
  }

  std::vector<double> embed(const std::string& model,
                            const std::string& text) override {
    nlohmann::json body{{"model", model}, {"input", text}};
    nlohmann::json reply = post(embed_endpoint_, body);
    try {
      return reply.at("data").at(0).at("embedding")
          .get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("unexpected embed response shape: ") +
                       e.what());
    }
  }

 private:
  nlohmann::json post(const std::string& endpoint,
                      const nlohmann::json& body) {
    auto [host, path] = split_url(endpoint);
    httplib::Client client(host);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
      headers.emplace("Authorization", "Bearer " + api_key_);
    }
    ++network_calls_;
    httplib::Result result =
        client.Post(path, headers, body.dump(), "application/json");
    if (!result) {
      throw NetworkError("request to " + endpoint + " failed: " +
                         httplib::to_string(result.error()));
    }
    if (result->status == 429) {
      throw RateLimited("rate limited by " + endpoint);
    }
    if (result->status < 200 || result->status >= 300) {
      throw NetworkError("request to " + endpoint + " returned status " +
                         std::to_string(result->status));
    }
    nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
    if (reply.is_discarded()) {
      throw ParseError("response from " + endpoint + " is not JSON");
    }
    return reply;
  }

  std::string chat_endpoint_;
  std::string embed_endpoint_;
  std::string api_key_;
  std::atomic<std::uint64_t> network_calls_{0};
};

}  // namespace evascore
