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

#include "e2ecov/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>

namespace e2ecov {

namespace {

constexpr std::array<std::pair<HttpMethod, std::string_view>, 7> kMethods{{
    {HttpMethod::kGet, "GET"},
    {HttpMethod::kPost, "POST"},
    {HttpMethod::kPut, "PUT"},
    {HttpMethod::kDelete, "DELETE"},
    {HttpMethod::kPatch, "PATCH"},
    {HttpMethod::kHead, "HEAD"},
    {HttpMethod::kOptions, "OPTIONS"},
}};

constexpr std::array<std::pair<ParamType, std::string_view>, 5> kTypes{{
    {ParamType::kInteger, "integer"},
    {ParamType::kNumber, "number"},
    {ParamType::kBoolean, "boolean"},
    {ParamType::kString, "string"},
    {ParamType::kOpaque, "opaque"},
}};

void append_escaped(std::string& out, std::string_view text, std::string_view reserved) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (unsigned char c : text) {
    if (reserved.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
}

bool is_wrapped_placeholder(std::string_view name) {
  return name.find('{') != std::string_view::npos || name.find('}') != std::string_view::npos;
}

}  // namespace

std::string_view to_string(HttpMethod m) {
  for (const auto& [value, name] : kMethods)
    if (value == m) return name;
  return "GET";
}

std::optional<HttpMethod> parse_method(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& [value, name] : kMethods)
    if (name == upper) return value;
  return std::nullopt;
}

std::string_view to_string(ParamType t) {
  for (const auto& [value, name] : kTypes)
    if (value == t) return name;
  return "opaque";
}

ParamType parse_param_type(std::string_view text) {
  for (const auto& [value, name] : kTypes)
    if (name == text) return value;
  return ParamType::kOpaque;
}

std::string identity_key(const Endpoint& e) {
  std::string key;
  append_escaped(key, e.service_id, "|%");
  key += '|';
  key += to_string(e.method);
  key += '|';
  bool first = true;
  for (const auto& seg : e.path) {
    if (!first) key += '/';
    first = false;
    if (const auto* lit = std::get_if<Literal>(&seg)) {
      append_escaped(key, lit->text, "/{}|%");
    } else {
      key += '{';
      key += to_string(std::get<Param>(seg).type);
      key += '}';
    }
  }
  return key;
}

std::string render_path(const PathTemplate& path) {
  std::string out;
  for (const auto& seg : path) {
    out += '/';
    if (const auto* lit = std::get_if<Literal>(&seg)) {
      if (!lit->text.empty() && lit->text.front() == ':') {
        out += "%3A";
        append_escaped(out, std::string_view(lit->text).substr(1), "/?#%{}");
      } else {
        append_escaped(out, lit->text, "/?#%{}");
      }
    } else {
      const auto& param = std::get<Param>(seg);
      if (is_wrapped_placeholder(param.name)) {
        out += param.name;
      } else {
        out += '{';
        out += param.name;
        out += '}';
      }
    }
  }
  return out.empty() ? "/" : out;
}

std::string display_name(const Endpoint& e) {
  return std::string(to_string(e.method)) + " " + render_path(e.path);
}

bool EndpointInventory::add(Endpoint e) {
  auto& entry = ensure_service(e.service_id);
  std::string key = identity_key(e);
  auto pos = std::lower_bound(entry.endpoints.begin(), entry.endpoints.end(), key,
                              [](const Endpoint& a, const std::string& k) { return identity_key(a) < k; });
  if (pos != entry.endpoints.end() && identity_key(*pos) == key) return false;
  entry.endpoints.insert(pos, std::move(e));
  return true;
}

ServiceEntry& EndpointInventory::ensure_service(const std::string& service_id,
                                                std::optional<bool> gateway) {
  auto& entry = services_[service_id];
  if (gateway) entry.gateway = gateway;
  return entry;
}

bool EndpointInventory::has_service(const std::string& service_id) const {
  return services_.contains(service_id);
}

bool EndpointInventory::is_gateway(const std::string& service_id) const {
  auto it = services_.find(service_id);
  return it != services_.end() && it->second.gateway.value_or(false);
}

std::set<std::string> EndpointInventory::gateway_services() const {
  std::set<std::string> out;
  for (const auto& [id, entry] : services_)
    if (entry.gateway.value_or(false)) out.insert(id);
  return out;
}

void EndpointInventory::set_gateway(const std::string& service_id, bool gateway) {
  services_[service_id].gateway = gateway;
}

std::size_t EndpointInventory::universe_size() const {
  std::size_t n = 0;
  for (const auto& [id, entry] : services_)
    if (!entry.gateway.value_or(false)) n += entry.endpoints.size();
  return n;
}

std::size_t EndpointInventory::service_count() const {
  return static_cast<std::size_t>(std::count_if(services_.begin(), services_.end(), [](const auto& kv) {
    return !kv.second.gateway.value_or(false);
  }));
}

std::size_t EndpointInventory::endpoint_count() const {
  std::size_t n = 0;
  for (const auto& [id, entry] : services_) n += entry.endpoints.size();
  return n;
}

const Endpoint* EndpointInventory::find(const std::string& key) const {
  auto bar = key.find('|');
  if (bar == std::string::npos) return nullptr;
  // Service ids only escape '|' and '%', so decode the prefix before lookup.
  std::string service;
  for (std::size_t i = 0; i < bar; ++i) {
    if (key[i] == '%' && i + 2 < bar) {
      service.push_back(static_cast<char>(std::stoi(key.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      service.push_back(key[i]);
    }
  }
  auto it = services_.find(service);
  if (it == services_.end()) return nullptr;
  for (const auto& e : it->second.endpoints)
    if (identity_key(e) == key) return &e;
  return nullptr;
}

bool operator==(const EndpointInventory& a, const EndpointInventory& b) {
  if (a.services_.size() != b.services_.size()) return false;
  for (auto ia = a.services_.begin(), ib = b.services_.begin(); ia != a.services_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second.gateway.value_or(false) != ib->second.gateway.value_or(false)) return false;
    const auto& ea = ia->second.endpoints;
    const auto& eb = ib->second.endpoints;
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (identity_key(ea[i]) != identity_key(eb[i])) return false;
      if (ea[i].source_location != eb[i].source_location) return false;
    }
  }
  return true;
}

bool chronological_less(const EndpointCall& a, const EndpointCall& b) {
  return std::tie(a.timestamp, a.destination, a.source, a.raw) <
         std::tie(b.timestamp, b.destination, b.source, b.raw);
}

}  // namespace e2ecov
