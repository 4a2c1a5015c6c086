#include "bartree/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "bartree/error.hpp"
#include "bartree/serialization.hpp"

namespace bartree {
namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t upto = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
}

}  // namespace

TagConfig TagClassOverrides::apply(const TagConfig& base) const {
  TagConfig config = base;
  if (text_format) config.text_format = {text_format->begin(), text_format->end()};
  if (layout_format) config.layout_format = {layout_format->begin(), layout_format->end()};
  if (void_tags) config.void_tags = {void_tags->begin(), void_tags->end()};
  return config;
}

RoiSpec TargetConfig::roi_spec() const {
  return RoiSpec::make(roi_text, attributes, occurrence);
}

BarParams TargetConfig::params_for(std::size_t d_max) const {
  BarParams params = BarParams::defaults_for(d_max);
  if (I) params.I = *I;
  if (r) params.r = *r;
  return params;
}

TargetConfig load_target_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (!text) {
    throw Error(ErrorCode::InvalidInput, "cannot read target config " + path.string());
  }
  Json j;
  try {
    j = Json::parse(*text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput,
                "target config " + path.string() + " line " +
                    std::to_string(line_of(*text, e.byte)) + ": " + e.what());
  }
  TargetConfig config;
  try {
    config = target_config_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidInput, "target config " + path.string() + ": " + e.what());
  }
  if (config.roi_file.empty()) {
    throw Error(ErrorCode::InvalidInput, "target config " + path.string() + " has no roi_file");
  }
  std::filesystem::path roi_path(config.roi_file);
  if (roi_path.is_relative()) roi_path = path.parent_path() / roi_path;
  const auto roi = read_file(roi_path);
  if (!roi) {
    throw Error(ErrorCode::InvalidInput, "cannot read roi file " + roi_path.string());
  }
  config.roi_text = *roi;
  return config;
}

Registry store_load(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (!text) {
    throw Error(ErrorCode::CorruptStore, "cannot read store " + path.string());
  }
  if (text->find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::CorruptStore, "store " + path.string() + " is empty");
  }
  Json j;
  try {
    j = Json::parse(*text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::CorruptStore,
                "store " + path.string() + " line " +
                    std::to_string(line_of(*text, e.byte)) + ": " + e.what());
  }
  return registry_from_json(j);
}

void store_save(const Registry& registry, const std::filesystem::path& path) {
  const std::string body = to_json(registry).dump(2) + "\n";
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot replace " + path.string() + ": " + ec.message());
  }
}

}  // namespace bartree
