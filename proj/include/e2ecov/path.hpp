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

#ifndef E2ECOV_PATH_HPP_
#define E2ECOV_PATH_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "e2ecov/model.hpp"

namespace e2ecov {

/// Normalizes a route template into segments.
///
/// Strips scheme/authority, query and fragment; drops leading, trailing and
/// repeated slashes; turns whole-segment "{name}", "{name:regex}" and ":name"
/// placeholders into string-typed Params. A segment that only partly
/// contains a placeholder ("v{n}") becomes an opaque Param. Literals are
/// percent-decoded.
///
/// Throws RecordError on malformed percent-encoding or when nothing is left.
PathTemplate normalize_path(std::string_view raw);

/// Splits a concrete invoked URL into percent-decoded segments. Braces and
/// colons are ordinary characters here. "/" yields an empty vector.
std::vector<std::string> split_url(std::string_view raw);

/// Decodes %XX escapes. Throws RecordError on a malformed escape.
std::string percent_decode(std::string_view text);

}  // namespace e2ecov

#endif  // E2ECOV_PATH_HPP_
