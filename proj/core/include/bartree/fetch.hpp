#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace bartree {

struct FetchResult {
  std::string body;
  std::string final_url;
};

struct FetchOptions {
  std::chrono::milliseconds timeout{std::chrono::seconds(30)};
  std::string user_agent = "bartree-harvest/1.0";
  // Minimum gap between two requests to the same host.
  std::chrono::milliseconds politeness_delay{std::chrono::seconds(1)};
  int max_redirects = 5;

  // Defaults overridden by HARVEST_TIMEOUT_SECS and HARVEST_USER_AGENT.
  static FetchOptions from_env();
};

// Fetch failures surface as Error with code NetworkError, HttpStatus
// (detail = status code) or Timeout.
class PageSource {
 public:
  virtual ~PageSource() = default;
  virtual FetchResult fetch(const std::string& url) = 0;
};

struct Url {
  std::string scheme;  // http, https or file
  std::string host;
  int port = 0;
  std::string target;  // path and query; for file:// the local path

  std::string origin() const;  // scheme://host:port
  std::string str() const;
};

// Throws Error(InvalidInput) on anything that is not an absolute
// http(s):// or file:// URL.
Url parse_url(std::string_view text);

// Resolves a redirect Location against the URL that produced it.
std::string resolve_url(const Url& base, std::string_view location);

// HTTP(S) with manual redirect following, per-host serialization and a
// politeness delay; file:// URLs are read from disk.
class HttpFetcher : public PageSource {
 public:
  explicit HttpFetcher(FetchOptions options = FetchOptions::from_env());

  FetchResult fetch(const std::string& url) override;

 private:
  struct HostSlot {
    std::mutex in_flight;
    std::chrono::steady_clock::time_point last{};
  };
  std::shared_ptr<HostSlot> slot_for(const std::string& host);
  std::string get_once(const Url& url, int& status, std::string& location);

  FetchOptions options_;
  std::mutex slots_mutex_;
  std::map<std::string, std::shared_ptr<HostSlot>> slots_;
};

// In-memory pages keyed by URL; unknown URLs answer HttpStatus 404.
class MemoryPageSource : public PageSource {
 public:
  void set(const std::string& url, std::string body);
  void erase(const std::string& url);
  FetchResult fetch(const std::string& url) override;

 private:
  std::mutex mutex_;
  std::map<std::string, std::string> pages_;
};

}  // namespace bartree
