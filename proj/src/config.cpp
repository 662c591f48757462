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

#include "e2ecov/config.hpp"

#include <charconv>
#include <cmath>

#include "e2ecov/errors.hpp"

namespace e2ecov {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kRepeatable{"source-root", "openapi",         "traces",
                                        "timestamp-field", "gateway-service", "exclude-path-regex"};

double parse_percent(const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v) || v < 0.0 || v > 100.0)
    throw InputError("min-suite-coverage must be a percentage in [0, 100], got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InputError(key + " expects a boolean, got '" + text + "'");
}

std::pair<std::string, std::filesystem::path> parse_openapi_arg(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw InputError("openapi expects <service>=<file>, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

ConfigEntries parse_config(std::string_view text) {
  ConfigEntries out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "source-root",     "services",        "single-service", "openapi",      "inventory",
      "format",          "traces",          "relation-index", "source-field", "dest-field",
      "timestamp-field", "entry-marker",    "clock-skew",     "manifest",     "gateway-service",
      "exclude-path-regex", "out",          "color-scale",    "from-cache",   "min-suite-coverage"};
  return keys;
}

void set_option(RunConfig& cfg, const std::string& key, const std::vector<std::string>& values) {
  if (!config_keys().contains(key)) throw InputError("unknown option '" + key + "'");
  if (values.empty()) return;
  const std::string& last = values.back();

  if (kRepeatable.contains(key)) {
    if (key == "source-root") {
      cfg.source_roots.assign(values.begin(), values.end());
    } else if (key == "openapi") {
      cfg.openapi.clear();
      for (const auto& v : values) cfg.openapi.push_back(parse_openapi_arg(v));
    } else if (key == "traces") {
      cfg.traces.assign(values.begin(), values.end());
    } else if (key == "timestamp-field") {
      cfg.fields.timestamp_fields = values;
    } else if (key == "gateway-service") {
      cfg.gateway_services = values;
    } else {
      cfg.exclude_path_regex = values;
    }
    return;
  }

  if (key == "services") {
    cfg.services_manifest = last;
  } else if (key == "single-service") {
    cfg.single_service = last;
  } else if (key == "inventory") {
    cfg.inventory = last;
  } else if (key == "format") {
    auto f = parse_trace_format(last);
    if (!f) throw InputError("format must be 'jsonl' or 'skywalking-es', got '" + last + "'");
    cfg.format = *f;
  } else if (key == "relation-index") {
    cfg.fields.relation_index = last;
  } else if (key == "source-field") {
    cfg.fields.source_field = last;
  } else if (key == "dest-field") {
    cfg.fields.dest_field = last;
  } else if (key == "entry-marker") {
    cfg.fields.entry_marker = last;
  } else if (key == "clock-skew") {
    cfg.clock_skew = parse_duration(last);
  } else if (key == "manifest") {
    cfg.manifest = last;
  } else if (key == "out") {
    if (last.empty()) throw InputError("out must not be empty");
    cfg.out_dir = last;
  } else if (key == "color-scale") {
    cfg.color_scale = last;
  } else if (key == "from-cache") {
    cfg.from_cache = parse_bool(key, last);
  } else if (key == "min-suite-coverage") {
    cfg.min_suite_coverage = parse_percent(last);
  }
}

void apply_config(RunConfig& cfg, const ConfigEntries& entries, const std::set<std::string>& overridden) {
  std::map<std::string, std::vector<std::string>> grouped;
  for (const auto& [key, value] : entries) {
    if (!config_keys().contains(key)) throw InputError("config file: unknown key '" + key + "'");
    grouped[key].push_back(value);
  }
  for (const auto& [key, values] : grouped) {
    if (overridden.contains(key)) continue;
    set_option(cfg, key, values);
  }
}

}  // namespace e2ecov
