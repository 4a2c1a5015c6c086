#include "bartree/fetch.hpp"

#include <httplib.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "bartree/error.hpp"

namespace bartree {

FetchOptions FetchOptions::from_env() {
  FetchOptions options;
  if (const char* secs = std::getenv("HARVEST_TIMEOUT_SECS")) {
    char* end = nullptr;
    const long value = std::strtol(secs, &end, 10);
    if (end != secs && *end == '\0' && value > 0) {
      options.timeout = std::chrono::seconds(value);
    }
  }
  if (const char* agent = std::getenv("HARVEST_USER_AGENT"); agent && *agent) {
    options.user_agent = agent;
  }
  return options;
}

std::string Url::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

std::string Url::str() const {
  if (scheme == "file") return "file://" + target;
  const bool default_port = (scheme == "http" && port == 80) ||
                            (scheme == "https" && port == 443);
  return scheme + "://" + host + (default_port ? "" : ":" + std::to_string(port)) +
         target;
}

Url parse_url(std::string_view text) {
  const auto bad = [&] {
    return Error(ErrorCode::InvalidInput, "invalid URL '" + std::string(text) + "'");
  };
  const std::size_t sep = text.find("://");
  if (sep == std::string_view::npos || sep == 0) throw bad();
  Url url;
  for (char c : text.substr(0, sep)) {
    url.scheme.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::string_view rest = text.substr(sep + 3);
  if (url.scheme == "file") {
    if (rest.empty() || rest[0] != '/') throw bad();
    url.target = std::string(rest);
    return url;
  }
  if (url.scheme != "http" && url.scheme != "https") throw bad();

  const std::size_t slash = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, slash);
  std::string_view target =
      slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  if (const std::size_t at = authority.rfind('@'); at != std::string_view::npos) {
    authority = authority.substr(at + 1);
  }
  url.port = url.scheme == "https" ? 443 : 80;
  const std::size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    if (port.empty()) throw bad();
    int value = 0;
    for (char c : port) {
      if (c < '0' || c > '9') throw bad();
      value = value * 10 + (c - '0');
      if (value > 65535) throw bad();
    }
    url.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw bad();
  for (char c : authority) {
    if (std::isspace(static_cast<unsigned char>(c))) throw bad();
  }
  url.host = std::string(authority);
  if (const std::size_t hash = target.find('#'); hash != std::string_view::npos) {
    target = target.substr(0, hash);
  }
  url.target = target.empty() ? "/" : std::string(target);
  if (url.target[0] == '?') url.target.insert(0, "/");
  return url;
}

std::string resolve_url(const Url& base, std::string_view location) {
  if (location.find("://") != std::string_view::npos) return std::string(location);
  if (location.starts_with("//")) return base.scheme + ":" + std::string(location);
  Url next = base;
  if (location.starts_with("/")) {
    next.target = std::string(location);
  } else {
    std::string path = base.target.substr(0, base.target.find('?'));
    path = path.substr(0, path.rfind('/') + 1);
    next.target = path + std::string(location);
  }
  return next.str();
}

HttpFetcher::HttpFetcher(FetchOptions options) : options_(std::move(options)) {}

std::shared_ptr<HttpFetcher::HostSlot> HttpFetcher::slot_for(const std::string& host) {
  std::lock_guard lock(slots_mutex_);
  auto& slot = slots_[host];
  if (!slot) slot = std::make_shared<HostSlot>();
  return slot;
}

std::string HttpFetcher::get_once(const Url& url, int& status, std::string& location) {
  auto slot = slot_for(url.origin());
  std::lock_guard in_flight(slot->in_flight);
  const auto ready = slot->last + options_.politeness_delay;
  if (slot->last.time_since_epoch().count() != 0) {
    std::this_thread::sleep_until(ready);
  }

  httplib::Client client(url.origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(false);

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Get(url.target, {{"User-Agent", options_.user_agent}});
  slot->last = std::chrono::steady_clock::now();

  if (!result) {
    const httplib::Error err = result.error();
    const bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && slot->last - started >= options_.timeout);
    throw Error(timed_out ? ErrorCode::Timeout : ErrorCode::NetworkError,
                "fetch " + url.str() + ": " + httplib::to_string(err));
  }
  status = result->status;
  location = result->get_header_value("Location");
  return std::move(result->body);
}

FetchResult HttpFetcher::fetch(const std::string& url_text) {
  Url url = parse_url(url_text);
  if (url.scheme == "file") {
    std::ifstream in(url.target, std::ios::binary);
    if (!in) throw Error(ErrorCode::HttpStatus, "cannot read " + url.target, 404);
    std::ostringstream body;
    body << in.rdbuf();
    return {body.str(), url.str()};
  }

  for (int hop = 0; hop <= options_.max_redirects; ++hop) {
    int status = 0;
    std::string location;
    std::string body = get_once(url, status, location);
    if (status >= 200 && status < 300) return {std::move(body), url.str()};
    const bool redirect = status == 301 || status == 302 || status == 303 ||
                          status == 307 || status == 308;
    if (!redirect || location.empty()) {
      throw Error(ErrorCode::HttpStatus,
                  "HTTP " + std::to_string(status) + " for " + url.str(), status);
    }
    url = parse_url(resolve_url(url, location));
  }
  throw Error(ErrorCode::NetworkError,
              "more than " + std::to_string(options_.max_redirects) +
                  " redirects from " + url_text);
}

void MemoryPageSource::set(const std::string& url, std::string body) {
  std::lock_guard lock(mutex_);
  pages_[url] = std::move(body);
}

void MemoryPageSource::erase(const std::string& url) {
  std::lock_guard lock(mutex_);
  pages_.erase(url);
}

FetchResult MemoryPageSource::fetch(const std::string& url) {
  std::lock_guard lock(mutex_);
  const auto it = pages_.find(url);
  if (it == pages_.end()) {
    throw Error(ErrorCode::HttpStatus, "HTTP 404 for " + url, 404);
  }
  return {it->second, url};
}

}  // namespace bartree
