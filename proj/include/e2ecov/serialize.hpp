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

// Interchange formats shared by the pipeline stages:
//
//   inventory  {"services":[{"name","gateway","endpoints":[
//                 {"method","path","params":[{"name","type"}],"source"?}]}]}
//   call log   JSON Lines, {"ts","src"?:{"service","url","method"},
//                           "dst":{"service","url","method"}}
//   manifest   {"tests":[{"id","start","end"}]}

#ifndef E2ECOV_SERIALIZE_HPP_
#define E2ECOV_SERIALIZE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "e2ecov/errors.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

nlohmann::json inventory_to_json(const EndpointInventory& inv);
// Throws InputError on schema violations. Params named in "params" type the
// matching placeholders; placeholders without an entry keep the type normalize_path gave them.
EndpointInventory inventory_from_json(const nlohmann::json& doc);

nlohmann::json call_to_json(const EndpointCall& call);
EndpointCall call_from_json(const nlohmann::json& line, std::string raw = {});

// One line per call, LF terminated.
std::string write_call_log(const std::vector<EndpointCall>& calls);
// Blank lines are skipped. Lines that fail to parse throw RecordError unless
// `diag` is given, in which case they are reported there and skipped.
std::vector<EndpointCall> read_call_log(std::istream& in, Diagnostics* diag = nullptr);

nlohmann::json manifest_to_json(const std::vector<TestWindow>& tests);
// Enforces start <= end and unique ids.
std::vector<TestWindow> manifest_from_json(const nlohmann::json& doc);

std::string read_file(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view content);
nlohmann::json read_json_file(const std::filesystem::path& path);
// Two-space indentation, sorted keys, trailing LF.
std::string dump_canonical(const nlohmann::json& doc);

}  // namespace e2ecov

#endif  // E2ECOV_SERIALIZE_HPP_
