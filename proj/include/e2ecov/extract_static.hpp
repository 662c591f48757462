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

#ifndef E2ECOV_EXTRACT_STATIC_HPP_
#define E2ECOV_EXTRACT_STATIC_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "e2ecov/errors.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

enum class ServiceLayout { kOneDirPerService, kSingleService };

struct ServiceDecl {
  std::string dir;  // relative to the source root
  bool gateway = false;
};

struct SourceTree {
  std::filesystem::path root_dir;
  ServiceLayout layout = ServiceLayout::kOneDirPerService;
  // Used as the service id in single-service mode; defaults to the root
  // directory name.
  std::string single_service_id;
  // fnmatch(3) patterns against the path relative to the service directory,
  // without FNM_PATHNAME, so '*' also crosses '/'.
  std::vector<std::string> include_globs{"*.java"};
  std::vector<std::string> exclude_globs{"*/test/*", "test/*"};
  // Overrides directory discovery when non-empty: service id -> declaration.
  std::map<std::string, ServiceDecl> services;
};

/// Reads a services manifest: {"services": {"<name>": {"dir": str?, "gateway": bool?}}}.
/// "dir" defaults to the service name.
std::map<std::string, ServiceDecl> load_services_manifest(const std::filesystem::path& file);

enum class MappingKind { kClassMapping, kMethodMapping };

struct ParamDecl {
  std::string name;       // bound path variable name
  std::string type_text;  // declared type as written
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

/// One recognised mapping annotation.
struct AnnotationMatch {
  std::string file;
  int line = 1;
  MappingKind kind = MappingKind::kMethodMapping;
  std::optional<HttpMethod> http_method;
  std::string path_value;
  std::vector<ParamDecl> param_decls;
  std::string return_type;
};

/// Maps a declared Java-style type to a parameter type:
/// int/long/short/byte (boxed too, BigInteger) -> integer;
/// float/double/BigDecimal -> number; boolean -> boolean;
/// String/CharSequence/char/UUID -> string; anything else -> opaque.
ParamType map_declared_type(std::string_view type_text);

/// Lexical scan of one controller source. Returns only mappings that belong
/// to classes annotated RestController/Controller; method mappings carry the
/// class prefix already joined into path_value. A bare RequestMapping
/// without a method attribute is returned with http_method = GET and a
/// warning.
std::vector<AnnotationMatch> scan_source(std::string_view text, const std::string& file,
                                         Diagnostics& diag);

/// Builds the inventory fragment for one file's matches.
EndpointInventory endpoints_from_matches(const std::vector<AnnotationMatch>& matches,
                                         const std::string& service_id, Diagnostics& diag);

/// Walks the tree and scans every included file. Services come from the
/// manifest when given, otherwise from the top-level directories.
EndpointInventory scan_annotations(const SourceTree& tree, Diagnostics& diag);

/// Parses an OpenAPI 3.x document (JSON or YAML) for one service. Throws
/// InputError when "paths" is missing or the document does not parse.
EndpointInventory parse_openapi(std::string_view doc, const std::string& service_id,
                                Diagnostics& diag);

/// Union by endpoint identity. Conflicting explicit gateway flags throw
/// InputError; endpoints with equal shape but different parameter types are
/// kept side by side with a warning.
EndpointInventory merge_inventories(const std::vector<EndpointInventory>& parts, Diagnostics& diag);

/// Drops endpoints whose rendered path matches any of the patterns.
void exclude_paths(EndpointInventory& inv, const std::vector<std::regex>& patterns,
                   Diagnostics& diag);

}  // namespace e2ecov

#endif  // E2ECOV_EXTRACT_STATIC_HPP_
