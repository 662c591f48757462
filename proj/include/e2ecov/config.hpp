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

// Config file format: one "key = value" per line. Blank lines and lines
// starting with '#' are ignored. Keys are the long CLI option names without
// the leading dashes. Repeatable options may appear on several lines:
//
//   # deployment settings
//   source-root = services/
//   gateway-service = ts-gateway-service
//   gateway-service = ts-ui-dashboard
//   relation-index = sw_endpoint_relation_server_side
//   color-scale = 0:red,50:orange,99.99:yellow,100:green

#ifndef E2ECOV_CONFIG_HPP_
#define E2ECOV_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "e2ecov/extract_dynamic.hpp"
#include "e2ecov/time.hpp"

namespace e2ecov {

struct RunConfig {
  // Inventory inputs.
  std::vector<std::filesystem::path> source_roots;
  std::optional<std::filesystem::path> services_manifest;
  std::optional<std::string> single_service;  // treat each root as one service
  std::vector<std::pair<std::string, std::filesystem::path>> openapi;  // service, document
  std::optional<std::filesystem::path> inventory;  // pre-built inventory JSON

  // Trace inputs.
  TraceFormat format = TraceFormat::kNormalizedJsonl;
  std::vector<std::filesystem::path> traces;
  TraceFields fields;
  Duration clock_skew{0};
  std::optional<std::filesystem::path> manifest;

  std::vector<std::string> gateway_services;
  std::vector<std::string> exclude_path_regex;
  std::filesystem::path out_dir = "e2ecov-out";
  std::string color_scale = "0:red,50:orange,99.99:yellow,100:green";

  bool from_cache = false;
  std::optional<double> min_suite_coverage;  // percent
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses the key-value format above. Throws InputError with the line number
/// on a line without '=' or with an empty key.
ConfigEntries parse_config(std::string_view text);

/// Every key the config file accepts.
const std::set<std::string>& config_keys();

/// Applies entries to `cfg`, skipping keys in `overridden` (options already
/// given on the command line). Repeatable keys accumulate. Throws InputError
/// on unknown keys or unparsable values.
void apply_config(RunConfig& cfg, const ConfigEntries& entries, const std::set<std::string>& overridden = {});

/// Sets one option from its textual values, as the config file would. For a
/// repeatable key the values replace the current list; for any other key the
/// last value wins. Throws InputError like apply_config.
void set_option(RunConfig& cfg, const std::string& key, const std::vector<std::string>& values);

}  // namespace e2ecov

#endif  // E2ECOV_CONFIG_HPP_
