#pragma once

#include <nlohmann/json.hpp>

#include "bartree/bar_tree.hpp"
#include "bartree/change_detector.hpp"
#include "bartree/store.hpp"

namespace bartree {

using Json = nlohmann::ordered_json;

Json to_json(const Fingerprint& fp);
Fingerprint fingerprint_from_json(const Json& j);

Json to_json(const ChangeReport& report);
ChangeReport change_report_from_json(const Json& j);

Json to_json(const TargetConfig& config);
TargetConfig target_config_from_json(const Json& j);

Json to_json(const TargetRecord& record);
TargetRecord target_record_from_json(const Json& j);

Json to_json(const Registry& registry);
Registry registry_from_json(const Json& j);

}  // namespace bartree
