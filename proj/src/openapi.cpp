/*
 * Copyright 2026 The e2ecov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <yaml-cpp/yaml.h>

#include <map>

#include "e2ecov/extract_static.hpp"
#include "e2ecov/path.hpp"
#include "json.hpp"

namespace e2ecov {

using nlohmann::json;

namespace {

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Scalar:
      return node.as<std::string>();
    default:
      return nullptr;
  }
}

json parse_document(std::string_view doc) {
  auto first = doc.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string_view::npos && doc[first] == '{') return json::parse(doc);
    return yaml_to_json(YAML::Load(std::string(doc)));
  } catch (const json::exception& err) {
    throw InputError(std::string("OpenAPI document is not valid JSON: ") + err.what());
  } catch (const YAML::Exception& err) {
    throw InputError(std::string("OpenAPI document is not valid YAML: ") + err.what());
  }
}

// Follows a local "#/a/b" reference; anything else is returned unchanged.
const json& resolve(const json& root, const json& node) {
  const json* cur = &node;
  for (int hops = 0; hops < 16 && cur->is_object() && cur->contains("$ref"); ++hops) {
    const auto& ref = cur->at("$ref");
    if (!ref.is_string()) break;
    std::string target = ref.get<std::string>();
    if (target.rfind("#/", 0) != 0) break;
    try {
      cur = &root.at(json::json_pointer(target.substr(1)));
    } catch (const json::exception&) {
      break;
    }
  }
  return *cur;
}

ParamType schema_type(const json& root, const json& param) {
  const json* type = nullptr;
  if (param.contains("schema")) {
    const json& schema = resolve(root, param.at("schema"));
    if (schema.is_object() && schema.contains("type")) type = &schema.at("type");
  } else if (param.contains("type")) {
    type = &param.at("type");
  }
  if (!type || !type->is_string()) return ParamType::kOpaque;
  const auto name = type->get<std::string>();
  if (name == "integer") return ParamType::kInteger;
  if (name == "number") return ParamType::kNumber;
  if (name == "boolean") return ParamType::kBoolean;
  if (name == "string") return ParamType::kString;
  return ParamType::kOpaque;
}

// name -> declared parameter object, for `in: path` parameters only.
void collect_path_params(const json& root, const json& list, std::map<std::string, const json*>& out) {
  if (!list.is_array()) return;
  for (const auto& item : list) {
    const json& p = resolve(root, item);
    if (!p.is_object() || p.value("in", "") != "path" || !p.contains("name") || !p.at("name").is_string())
      continue;
    out[p.at("name").get<std::string>()] = &p;
  }
}

std::string server_prefix(const json& doc) {
  if (!doc.contains("servers") || !doc.at("servers").is_array() || doc.at("servers").empty()) return {};
  const auto& first = doc.at("servers").at(0);
  if (!first.is_object() || !first.contains("url") || !first.at("url").is_string()) return {};
  std::string url = first.at("url").get<std::string>();
  if (url.find('{') != std::string::npos) return {};
  if (auto scheme = url.find("://"); scheme != std::string::npos) {
    auto slash = url.find('/', scheme + 3);
    url = slash == std::string::npos ? std::string{} : url.substr(slash);
  }
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

}  // namespace

EndpointInventory parse_openapi(std::string_view doc_text, const std::string& service_id, Diagnostics& diag) {
  const json doc = parse_document(doc_text);
  if (!doc.is_object() || !doc.contains("paths") || !doc.at("paths").is_object())
    throw InputError("OpenAPI document for '" + service_id + "' has no 'paths' object");
  const json& paths = doc.at("paths");
  if (paths.empty()) throw InputError("OpenAPI document for '" + service_id + "' declares no paths");

  const std::string prefix = server_prefix(doc);
  EndpointInventory inv;
  inv.ensure_service(service_id);
  for (const auto& [path, raw_item] : paths.items()) {
    const json& item = resolve(doc, raw_item);
    if (!item.is_object()) continue;
    std::map<std::string, const json*> shared;
    if (item.contains("parameters")) collect_path_params(doc, item.at("parameters"), shared);
    for (const auto& [key, op] : item.items()) {
      if (key == "parameters" || key == "summary" || key == "description" || key == "servers" || key == "$ref" ||
          key.rfind("x-", 0) == 0)
        continue;
      auto method = parse_method(key);
      if (!method) {
        diag.warn("OpenAPI '" + service_id + "': unsupported operation '" + key + "' on " + path);
        continue;
      }
      std::map<std::string, const json*> params = shared;
      if (op.is_object() && op.contains("parameters")) collect_path_params(doc, op.at("parameters"), params);

      Endpoint e;
      e.service_id = service_id;
      e.method = *method;
      try {
        e.path = normalize_path(prefix + path);
      } catch (const RecordError& err) {
        diag.warn("OpenAPI '" + service_id + "': path '" + path + "' skipped: " + err.what());
        continue;
      }
      for (auto& seg : e.path) {
        auto* p = std::get_if<Param>(&seg);
        if (!p || p->type == ParamType::kOpaque) continue;
        if (auto it = params.find(p->name); it != params.end()) {
          p->type = schema_type(doc, *it->second);
        } else {
          diag.warn("OpenAPI '" + service_id + "': " + std::string(key) + " " + path + ": path parameter '" +
                    p->name + "' is not declared; typed opaque");
          p->type = ParamType::kOpaque;
        }
      }
      if (op.is_object() && op.contains("operationId") && op.at("operationId").is_string())
        e.source_location = "operationId:" + op.at("operationId").get<std::string>();
      inv.add(std::move(e));
    }
  }
  return inv;
}

}  // namespace e2ecov
