#include "bartree/serialization.hpp"

#include "bartree/error.hpp"

namespace bartree {
namespace {

// Typed field access that reports the JSON path of whatever is malformed.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

  const Json& at(const char* key) const {
    if (!j_.contains(key)) fail(key, "missing field");
    return j_[key];
  }

  Reader object(const char* key) const { return Reader(at(key), child(key)); }

  std::string str(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::size_t count(const char* key) const {
    const std::int64_t v = integer(key);
    if (v < 0) fail(key, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  Rational rational(const char* key) const { return to_rational(at(key), child(key)); }

  const Json& array(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw Error(ErrorCode::CorruptStore,
                what + " at " + (key.empty() ? path_ : child(key)));
  }

  static Rational to_rational(const Json& v, const std::string& path) {
    if (!v.is_string()) {
      throw Error(ErrorCode::CorruptStore, "expected \"num/den\" string at " + path);
    }
    const std::string text = v.get<std::string>();
    if (text.find('/') == std::string::npos) {
      throw Error(ErrorCode::CorruptStore, "expected \"num/den\" string at " + path);
    }
    try {
      return parse_rational(text);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptStore, std::string(e.what()) + " at " + path);
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

std::vector<std::string> string_list(const Reader& r, const char* key) {
  std::vector<std::string> out;
  const Json& arr = r.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) r.fail(std::string(key) + "/" + std::to_string(i), "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

Json to_json(const AttributeAnchor& anchor) {
  Json path = Json::array();
  for (const auto& step : anchor.path) {
    path.push_back({{"tag", step.tag}, {"depth", step.depth}, {"ordinal", step.ordinal}});
  }
  return {{"path", path}, {"prefix", anchor.prefix}, {"suffix", anchor.suffix}};
}

Fingerprint fingerprint_from(const Reader& r) {
  Fingerprint fp;
  fp.d_max = r.count("d_max");
  fp.A_total = r.rational("A_total");
  const Json& P = r.array("P");
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!P[i].is_number_unsigned() && !P[i].is_number_integer()) {
      r.fail("P/" + std::to_string(i), "expected an integer");
    }
    fp.P.push_back(P[i].get<std::size_t>());
  }
  const Json& A = r.array("A");
  for (std::size_t i = 0; i < A.size(); ++i) {
    fp.A.push_back(Reader::to_rational(A[i], r.child("A/" + std::to_string(i))));
  }
  fp.sigma_upper = r.integer("sigma_upper");
  fp.sigma_lower = r.integer("sigma_lower");
  fp.delta = r.integer("delta");
  fp.params.I = r.rational("I");
  fp.params.r = r.rational("r");
  fp.captured_at = r.str("captured_at");
  fp.roi_digest = r.str("roi_digest");
  if (fp.P.size() != fp.d_max || fp.A.size() != fp.d_max + 1) {
    r.fail("", "P/A lengths disagree with d_max");
  }
  if (fp.delta != fp.sigma_upper - fp.sigma_lower) {
    r.fail("delta", "delta != sigma_upper - sigma_lower");
  }
  return fp;
}

TargetConfig config_from(const Reader& r) {
  TargetConfig c;
  c.target_id = r.str("target_id");
  if (c.target_id.empty()) r.fail("target_id", "empty target id");
  c.url = r.str("url");
  c.roi_file = r.has("roi_file") ? r.str("roi_file") : std::string{};
  if (r.has("roi_text")) c.roi_text = r.str("roi_text");
  if (r.has("attributes")) {
    const Json& attrs = r.array("attributes");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      const Reader a(attrs[i], r.child("attributes/" + std::to_string(i)));
      c.attributes.push_back({a.str("label"), a.str("text")});
    }
  }
  if (r.has("occurrence")) c.occurrence = r.count("occurrence");
  if (r.has("params")) {
    const Reader p = r.object("params");
    if (p.has("I")) c.I = p.rational("I");
    if (p.has("r")) c.r = p.rational("r");
  }
  if (r.has("tag_classes")) {
    const Reader t = r.object("tag_classes");
    if (t.has("text_format")) c.tag_classes.text_format = string_list(t, "text_format");
    if (t.has("layout_format")) c.tag_classes.layout_format = string_list(t, "layout_format");
    if (t.has("void")) c.tag_classes.void_tags = string_list(t, "void");
  }
  if (r.has("mode")) {
    const auto mode = parse_compare_mode(r.str("mode"));
    if (!mode) r.fail("mode", "unknown compare mode");
    c.mode = *mode;
  }
  return c;
}

TargetRecord record_from(const Reader& r) {
  TargetRecord rec;
  rec.config = config_from(r.object("config"));
  rec.fingerprint = fingerprint_from(r.object("fingerprint"));
  const Json& anchors = r.array("anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Reader a(anchors[i], r.child("anchors/" + std::to_string(i)));
    AttributeAnchor anchor;
    const Json& path = a.array("path");
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Reader s(path[k], a.child("path/" + std::to_string(k)));
      anchor.path.push_back({s.str("tag"), s.count("depth"), s.count("ordinal")});
    }
    anchor.prefix = a.str("prefix");
    anchor.suffix = a.str("suffix");
    rec.anchors.emplace_back(a.str("label"), std::move(anchor));
  }
  const Json& history = r.array("history");
  for (std::size_t i = 0; i < history.size(); ++i) {
    rec.history.push_back(
        fingerprint_from(Reader(history[i], r.child("history/" + std::to_string(i)))));
  }
  return rec;
}

}  // namespace

Json to_json(const Fingerprint& fp) {
  Json A = Json::array();
  for (const auto& a : fp.A) A.push_back(to_fraction_string(a));
  return {
      {"d_max", fp.d_max},
      {"A_total", to_fraction_string(fp.A_total)},
      {"P", fp.P},
      {"A", A},
      {"sigma_upper", fp.sigma_upper},
      {"sigma_lower", fp.sigma_lower},
      {"delta", fp.delta},
      {"I", to_fraction_string(fp.params.I)},
      {"r", to_fraction_string(fp.params.r)},
      {"captured_at", fp.captured_at},
      {"roi_digest", fp.roi_digest},
  };
}

Fingerprint fingerprint_from_json(const Json& j) {
  return fingerprint_from(Reader(j, "fingerprint"));
}

Json to_json(const ChangeReport& report) {
  return {
      {"changed", report.changed},
      {"differing", report.differing},
      {"delta_case", std::string(to_string(report.delta_case))},
      {"mode", std::string(to_string(report.mode))},
  };
}

ChangeReport change_report_from_json(const Json& j) {
  const Reader r(j, "report");
  ChangeReport report;
  const Json& changed = r.at("changed");
  if (!changed.is_boolean()) r.fail("changed", "expected a boolean");
  report.changed = changed.get<bool>();
  report.differing = string_list(r, "differing");
  const auto dc = parse_delta_case(r.str("delta_case"));
  if (!dc) r.fail("delta_case", "unknown delta case");
  report.delta_case = *dc;
  const auto mode = parse_compare_mode(r.str("mode"));
  if (!mode) r.fail("mode", "unknown compare mode");
  report.mode = *mode;
  return report;
}

Json to_json(const TargetConfig& c) {
  Json j = {{"target_id", c.target_id}, {"url", c.url}, {"roi_file", c.roi_file}};
  if (!c.roi_text.empty()) j["roi_text"] = c.roi_text;
  Json attrs = Json::array();
  for (const auto& a : c.attributes) attrs.push_back({{"label", a.label}, {"text", a.text}});
  j["attributes"] = attrs;
  if (c.occurrence) j["occurrence"] = *c.occurrence;
  if (c.I || c.r) {
    Json params = Json::object();
    if (c.I) params["I"] = to_fraction_string(*c.I);
    if (c.r) params["r"] = to_fraction_string(*c.r);
    j["params"] = params;
  }
  if (!c.tag_classes.empty()) {
    Json tags = Json::object();
    if (c.tag_classes.text_format) tags["text_format"] = *c.tag_classes.text_format;
    if (c.tag_classes.layout_format) tags["layout_format"] = *c.tag_classes.layout_format;
    if (c.tag_classes.void_tags) tags["void"] = *c.tag_classes.void_tags;
    j["tag_classes"] = tags;
  }
  j["mode"] = std::string(to_string(c.mode));
  return j;
}

TargetConfig target_config_from_json(const Json& j) {
  return config_from(Reader(j, "config"));
}

Json to_json(const TargetRecord& record) {
  Json anchors = Json::array();
  for (const auto& [label, anchor] : record.anchors) {
    Json a = {{"label", label}};
    a.update(to_json(anchor));
    anchors.push_back(std::move(a));
  }
  Json history = Json::array();
  for (const auto& fp : record.history) history.push_back(to_json(fp));
  return {
      {"config", to_json(record.config)},
      {"fingerprint", to_json(record.fingerprint)},
      {"anchors", anchors},
      {"history", history},
  };
}

TargetRecord target_record_from_json(const Json& j) {
  return record_from(Reader(j, "record"));
}

Json to_json(const Registry& registry) {
  Json targets = Json::object();
  for (const auto& [id, record] : registry.targets) targets[id] = to_json(record);
  return {{"schema_version", kStoreSchemaVersion}, {"targets", targets}};
}

Registry registry_from_json(const Json& j) {
  const Reader r(j, "");
  const std::int64_t version = r.integer("schema_version");
  if (version != kStoreSchemaVersion) {
    throw Error(ErrorCode::CorruptStore,
                "unsupported store schema version " + std::to_string(version),
                static_cast<long>(version));
  }
  const Json& targets = r.at("targets");
  if (!targets.is_object()) r.fail("targets", "expected an object");
  Registry registry;
  for (const auto& [id, value] : targets.items()) {
    TargetRecord rec = record_from(Reader(value, "/targets/" + id));
    if (rec.config.target_id != id) {
      throw Error(ErrorCode::CorruptStore,
                  "target id mismatch at /targets/" + id + "/config/target_id");
    }
    registry.targets.emplace(id, std::move(rec));
  }
  return registry;
}

}  // namespace bartree
