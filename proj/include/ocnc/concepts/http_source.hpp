#pragma once

#include <chrono>
#include <cstdio>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ocnc/concepts/article_source.hpp"
#include "ocnc/core/error.hpp"

namespace ocnc::concepts {

struct HttpSourceConfig {
  // Must contain "{title}", which is replaced by the percent-encoded title,
  // e.g. "http://localhost:8080/article/{title}".
  std::string url_template;
  std::chrono::milliseconds timeout{10000};
  std::chrono::milliseconds delay{1000};  // minimum gap between requests

  static HttpSourceConfig from_json(const nlohmann::json& j) {
    HttpSourceConfig c;
    c.url_template = j.at("url_template").get<std::string>();
    if (j.contains("timeout_ms")) c.timeout = std::chrono::milliseconds(j["timeout_ms"].get<long>());
    if (j.contains("delay_ms")) c.delay = std::chrono::milliseconds(j["delay_ms"].get<long>());
    return c;
  }
};

inline std::string percent_encode(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out += ch;
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

/// Article source backed by an HTTP endpoint returning {"text": ..., "links": [...]}.
/// A 404 means the title does not exist. Requests are serialized (one in flight)
/// and spaced by at least `delay`.
class HttpSource final : public ArticleSource {
 public:
  explicit HttpSource(HttpSourceConfig config) : config_(std::move(config)) {
    const auto pos = config_.url_template.find("{title}");
    if (pos == std::string::npos) throw InvalidArgument("url_template lacks {title}");
    const auto scheme_end = config_.url_template.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("url_template lacks a scheme");
    const auto path_start = config_.url_template.find('/', scheme_end + 3);
    if (path_start == std::string::npos || path_start > pos)
      throw InvalidArgument("{title} must be inside the URL path");
    origin_ = config_.url_template.substr(0, path_start);
    path_prefix_ = config_.url_template.substr(path_start, pos - path_start);
    path_suffix_ = config_.url_template.substr(pos + 7);
  }

  std::optional<Article> fetch(const std::string& title) override {
    std::lock_guard lock(mutex_);
    if (last_request_) {
      const auto wait = *last_request_ + config_.delay - std::chrono::steady_clock::now();
      if (wait > std::chrono::steady_clock::duration::zero()) std::this_thread::sleep_for(wait);
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    const auto res = client.Get(path_prefix_ + percent_encode(title) + path_suffix_);
    last_request_ = std::chrono::steady_clock::now();
    if (!res) throw Error("HTTP request for '" + title + "' failed: " + httplib::to_string(res.error()));
    if (res->status == 404) return std::nullopt;
    if (res->status != 200)
      throw Error("HTTP " + std::to_string(res->status) + " for '" + title + "'");
    try {
      const auto j = nlohmann::json::parse(res->body);
      Article a;
      a.text = j.at("text").get<std::string>();
      a.links = j.at("links").get<std::vector<std::string>>();
      return a;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad article JSON for '" + title + "': " + e.what());
    }
  }

 private:
  HttpSourceConfig config_;
  std::string origin_, path_prefix_, path_suffix_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace ocnc::concepts
