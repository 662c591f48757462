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

#include <map>

#include "e2ecov/extract_static.hpp"

namespace e2ecov {

namespace {

// Identity with parameter types erased.
std::string shape_key(const Endpoint& e) {
  Endpoint erased = e;
  for (auto& seg : erased.path)
    if (auto* p = std::get_if<Param>(&seg)) p->type = ParamType::kOpaque;
  return identity_key(erased);
}

}  // namespace

EndpointInventory merge_inventories(const std::vector<EndpointInventory>& parts, Diagnostics& diag) {
  EndpointInventory out;
  std::map<std::string, std::string> shapes;  // shape key -> first identity key
  for (const auto& part : parts) {
    for (const auto& [service, entry] : part.services()) {
      auto& merged = out.ensure_service(service);
      if (entry.gateway) {
        if (merged.gateway && *merged.gateway != *entry.gateway)
          throw InputError("service '" + service + "' is flagged as gateway in one input and not in another");
        merged.gateway = entry.gateway;
      }
      for (const auto& e : entry.endpoints) {
        std::string key = identity_key(e);
        auto [it, fresh] = shapes.emplace(shape_key(e), key);
        if (!fresh && it->second != key) {
          diag.warn("service '" + service + "': '" + display_name(e) +
                    "' is declared with conflicting parameter types; both kept");
        }
        out.add(e);
      }
    }
  }
  return out;
}

void exclude_paths(EndpointInventory& inv, const std::vector<std::regex>& patterns, Diagnostics& diag) {
  if (patterns.empty()) return;
  std::size_t dropped = 0;
  for (auto& [service, entry] : inv.services()) {
    std::erase_if(entry.endpoints, [&](const Endpoint& e) {
      std::string rendered = render_path(e.path);
      for (const auto& re : patterns) {
        if (std::regex_search(rendered, re)) {
          ++dropped;
          return true;
        }
      }
      return false;
    });
  }
  if (dropped > 0) diag.warn("excluded " + std::to_string(dropped) + " endpoint(s) by path pattern");
}

}  // namespace e2ecov
