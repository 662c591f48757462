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

#include "e2ecov/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "e2ecov/path.hpp"

namespace e2ecov {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(std::string(where) + ": missing field '" + key + "'");
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw InputError(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

HttpMethod require_method(const json& obj, const char* key, const char* where) {
  auto text = require_string(obj, key, where);
  auto m = parse_method(text);
  if (!m) throw InputError(std::string(where) + ": unknown HTTP method '" + text + "'");
  return *m;
}

json ref_to_json(const EndpointRef& ref) {
  return json{{"service", ref.service_id}, {"url", ref.url}, {"method", to_string(ref.method)}};
}

EndpointRef ref_from_json(const json& obj, const char* where) {
  return EndpointRef{require_string(obj, "service", where), require_method(obj, "method", where),
                     require_string(obj, "url", where)};
}

}  // namespace

json inventory_to_json(const EndpointInventory& inv) {
  json services = json::array();
  for (const auto& [name, entry] : inv.services()) {
    json endpoints = json::array();
    for (const auto& e : entry.endpoints) {
      json params = json::array();
      for (const auto& seg : e.path) {
        if (const auto* p = std::get_if<Param>(&seg))
          params.push_back(json{{"name", p->name}, {"type", to_string(p->type)}});
      }
      json ep{{"method", to_string(e.method)}, {"path", render_path(e.path)}, {"params", params}};
      if (e.source_location) ep["source"] = *e.source_location;
      if (e.return_type) ep["returns"] = *e.return_type;
      endpoints.push_back(std::move(ep));
    }
    services.push_back(json{{"name", name},
                            {"gateway", entry.gateway.value_or(false)},
                            {"endpoints", std::move(endpoints)}});
  }
  return json{{"services", std::move(services)}};
}

EndpointInventory inventory_from_json(const json& doc) {
  constexpr const char* kWhere = "inventory";
  const json& services = require(doc, "services", kWhere);
  if (!services.is_array()) throw InputError("inventory: 'services' must be an array");
  EndpointInventory inv;
  for (const auto& svc : services) {
    std::string name = require_string(svc, "name", kWhere);
    bool gateway = svc.value("gateway", false);
    if (inv.has_service(name)) throw InputError("inventory: duplicate service '" + name + "'");
    inv.ensure_service(name, gateway);
    if (!svc.contains("endpoints")) continue;
    for (const auto& ep : svc.at("endpoints")) {
      Endpoint e;
      e.service_id = name;
      e.method = require_method(ep, "method", kWhere);
      std::string path = require_string(ep, "path", kWhere);
      try {
        e.path = normalize_path(path);
      } catch (const RecordError& err) {
        throw InputError("inventory: service '" + name + "': " + err.what() + ": '" + path + "'");
      }
      // Entries are positional when their names line up with the
      // placeholders, which keeps repeated names apart; otherwise by name.
      std::vector<std::pair<std::string, ParamType>> declared;
      if (ep.contains("params")) {
        for (const auto& p : ep.at("params"))
          declared.emplace_back(require_string(p, "name", kWhere), parse_param_type(p.value("type", "opaque")));
      }
      std::vector<Param*> placeholders;
      for (auto& seg : e.path)
        if (auto* p = std::get_if<Param>(&seg)) placeholders.push_back(p);
      bool positional = declared.size() == placeholders.size();
      for (std::size_t i = 0; positional && i < declared.size(); ++i)
        positional = declared[i].first == placeholders[i]->name;
      for (std::size_t i = 0; i < placeholders.size(); ++i) {
        if (positional) {
          placeholders[i]->type = declared[i].second;
          continue;
        }
        auto it = std::find_if(declared.begin(), declared.end(),
                               [&](const auto& d) { return d.first == placeholders[i]->name; });
        if (it != declared.end()) placeholders[i]->type = it->second;
      }
      if (ep.contains("source") && ep.at("source").is_string()) e.source_location = ep.at("source").get<std::string>();
      if (ep.contains("returns") && ep.at("returns").is_string()) e.return_type = ep.at("returns").get<std::string>();
      std::string display = display_name(e);
      if (!inv.add(std::move(e)))
        throw InputError("inventory: duplicate endpoint '" + display + "' in service '" + name + "'");
    }
  }
  return inv;
}

json call_to_json(const EndpointCall& call) {
  json out{{"ts", format_rfc3339(call.timestamp)}, {"dst", ref_to_json(call.destination)}};
  if (call.source) out["src"] = ref_to_json(*call.source);
  return out;
}

EndpointCall call_from_json(const json& line, std::string raw) {
  constexpr const char* kWhere = "call log";
  EndpointCall call;
  call.timestamp = parse_rfc3339(require_string(line, "ts", kWhere));
  call.destination = ref_from_json(require(line, "dst", kWhere), kWhere);
  if (line.contains("src") && !line.at("src").is_null()) call.source = ref_from_json(line.at("src"), kWhere);
  call.raw = raw.empty() ? line.dump() : std::move(raw);
  return call;
}

std::string write_call_log(const std::vector<EndpointCall>& calls) {
  std::string out;
  for (const auto& c : calls) {
    out += call_to_json(c).dump();
    out += '\n';
  }
  return out;
}

std::vector<EndpointCall> read_call_log(std::istream& in, Diagnostics* diag) {
  std::vector<EndpointCall> calls;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto doc = json::parse(line);
      calls.push_back(call_from_json(doc, line));
    } catch (const std::exception& err) {
      if (!diag) throw RecordError("call log line " + std::to_string(lineno) + ": " + err.what(), line);
      diag->warn("call log line " + std::to_string(lineno) + " skipped: " + err.what());
    }
  }
  return calls;
}

json manifest_to_json(const std::vector<TestWindow>& tests) {
  json arr = json::array();
  for (const auto& t : tests)
    arr.push_back(json{{"id", t.test_id}, {"start", format_rfc3339(t.start)}, {"end", format_rfc3339(t.end)}});
  return json{{"tests", std::move(arr)}};
}

std::vector<TestWindow> manifest_from_json(const json& doc) {
  constexpr const char* kWhere = "test manifest";
  const json& tests = require(doc, "tests", kWhere);
  if (!tests.is_array()) throw InputError("test manifest: 'tests' must be an array");
  std::vector<TestWindow> out;
  std::set<std::string> seen;
  for (const auto& t : tests) {
    TestWindow w{require_string(t, "id", kWhere), parse_rfc3339(require_string(t, "start", kWhere)),
                 parse_rfc3339(require_string(t, "end", kWhere))};
    if (w.start > w.end) throw InputError("test manifest: test '" + w.test_id + "' ends before it starts");
    if (!seen.insert(w.test_id).second) throw InputError("test manifest: duplicate test id '" + w.test_id + "'");
    out.push_back(std::move(w));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("cannot write '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

json read_json_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + err.what());
  }
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace e2ecov
