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

#ifndef E2ECOV_EXTRACT_DYNAMIC_HPP_
#define E2ECOV_EXTRACT_DYNAMIC_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "e2ecov/errors.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

enum class TraceFormat { kNormalizedJsonl, kSkywalkingEs };

std::optional<TraceFormat> parse_trace_format(std::string_view text);

struct TraceSource {
  TraceFormat format = TraceFormat::kNormalizedJsonl;
  std::vector<std::filesystem::path> files;
};

/// Field names and markers for SkyWalking-style exports.
struct TraceFields {
  std::string relation_index = "sw_endpoint_relation_server_side";
  std::string source_field = "source_endpoint";
  std::string dest_field = "dest_endpoint";
  // Tried in order; "time_bucket" is parsed as a SkyWalking bucket, anything
  // else as epoch millis/micros (by magnitude) or RFC 3339.
  std::vector<std::string> timestamp_fields{"timestamp", "time_bucket"};
  // Decoded source descriptor (or its service part) marking the UI side.
  std::string entry_marker = "User";
};

struct RawTraceRecord {
  std::optional<std::string> index_name;
  std::map<std::string, std::string> payload;
  std::string raw;
};

/// Reads a SkyWalking-style export: JSON Lines of {"_index", "_source"}.
/// Malformed lines are counted in `bad_lines` and reported to `diag`.
std::vector<RawTraceRecord> read_es_export(std::istream& in, Diagnostics& diag, std::size_t* bad_lines = nullptr);

struct FilterResult {
  std::vector<RawTraceRecord> kept;
  std::size_t dropped = 0;
};

/// Keeps endpoint-relation records: index equal to `fields.relation_index`
/// or to it followed by "-<suffix>" (date-partitioned indices). Records of
/// the normalized format pass unconditionally.
FilterResult filter_endpoint_records(std::vector<RawTraceRecord> records, TraceFormat format,
                                     const TraceFields& fields);

bool is_relation_index(std::string_view index, std::string_view relation_index);

/// Strict standard Base64 (with padding). Throws RecordError.
std::string base64_decode(std::string_view text);
std::string base64_encode(std::string_view bytes);

/// Parses a decoded "service/METHOD:/path" descriptor, or the SkyWalking
/// entity-id form base64(service) ".1_" base64("{METHOD}/path" | "METHOD:/path").
/// The input here is the raw (still encoded) field value.
EndpointRef decode_descriptor(std::string_view encoded);

/// Decodes one filtered record into a call. Throws RecordError with the raw
/// payload attached.
EndpointCall decode_record(const RawTraceRecord& record, const TraceFields& fields);

struct DecodeResult {
  std::vector<EndpointCall> calls;  // chronological
  std::size_t errors = 0;
};

/// Decodes every record, skipping failures (reported to `diag`), then sorts.
DecodeResult decode_records(const std::vector<RawTraceRecord>& records, const TraceFields& fields,
                            Diagnostics& diag);

struct IngestStats {
  std::size_t total_records = 0;
  std::size_t kept_records = 0;
  std::size_t dropped_records = 0;
  std::size_t bad_lines = 0;
  std::size_t decode_errors = 0;
};

/// Reads every file of the source into chronologically sorted calls.
std::vector<EndpointCall> load_calls(const TraceSource& source, const TraceFields& fields, Diagnostics& diag,
                                     IngestStats* stats = nullptr);

struct WindowedCalls {
  std::map<std::string, std::vector<EndpointCall>> per_test;  // every manifest test present
  std::vector<EndpointCall> orphans;
  std::size_t overlapping_pairs = 0;
};

/// Assigns call c to test t iff t.start + skew <= c.timestamp <= t.end + skew.
/// Calls in no window become orphans; calls in several windows go to all of
/// them (with a warning per overlapping window pair). Output lists are in
/// chronological order. Throws InputError on an empty manifest.
WindowedCalls window_calls(const std::vector<EndpointCall>& calls, const std::vector<TestWindow>& manifest,
                           Duration clock_skew, Diagnostics& diag);

}  // namespace e2ecov

#endif  // E2ECOV_EXTRACT_DYNAMIC_HPP_
