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

#include "e2ecov/extract_dynamic.hpp"

#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "e2ecov/serialize.hpp"
#include "json.hpp"

namespace e2ecov {

using nlohmann::json;

std::optional<TraceFormat> parse_trace_format(std::string_view text) {
  if (text == "jsonl" || text == "normalized-jsonl") return TraceFormat::kNormalizedJsonl;
  if (text == "skywalking-es" || text == "skywalking-es-export") return TraceFormat::kSkywalkingEs;
  return std::nullopt;
}

std::vector<RawTraceRecord> read_es_export(std::istream& in, Diagnostics& diag, std::size_t* bad_lines) {
  std::vector<RawTraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t bad = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto doc = json::parse(line);
      RawTraceRecord rec;
      if (doc.contains("_index") && doc.at("_index").is_string()) rec.index_name = doc.at("_index").get<std::string>();
      const json& source = doc.contains("_source") ? doc.at("_source") : doc;
      if (!source.is_object()) throw std::runtime_error("'_source' is not an object");
      for (const auto& [key, value] : source.items()) {
        if (value.is_string()) {
          rec.payload[key] = value.get<std::string>();
        } else if (value.is_primitive() && !value.is_null()) {
          rec.payload[key] = value.dump();
        }
      }
      if (rec.payload.empty()) throw std::runtime_error("empty payload");
      rec.raw = line;
      out.push_back(std::move(rec));
    } catch (const std::exception& err) {
      ++bad;
      diag.warn("trace export line " + std::to_string(lineno) + " skipped: " + err.what());
    }
  }
  if (bad_lines) *bad_lines += bad;
  return out;
}

bool is_relation_index(std::string_view index, std::string_view relation_index) {
  if (index == relation_index) return true;
  return index.size() > relation_index.size() + 1 && index.substr(0, relation_index.size()) == relation_index &&
         index[relation_index.size()] == '-';
}

FilterResult filter_endpoint_records(std::vector<RawTraceRecord> records, TraceFormat format,
                                     const TraceFields& fields) {
  FilterResult result;
  if (format == TraceFormat::kNormalizedJsonl) {
    result.kept = std::move(records);
    return result;
  }
  for (auto& r : records) {
    if (r.index_name && is_relation_index(*r.index_name, fields.relation_index)) {
      result.kept.push_back(std::move(r));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

std::string base64_decode(std::string_view text) {
  static const bool ready = sodium_init() >= 0;
  (void)ready;
  std::string out(text.size() / 4 * 3 + 3, '\0');
  std::size_t len = 0;
  const char* end = nullptr;
  if (text.empty() ||
      sodium_base642bin(reinterpret_cast<unsigned char*>(out.data()), out.size(), text.data(), text.size(), nullptr,
                        &len, &end, sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    throw RecordError("invalid Base64", std::string(text));
  }
  out.resize(len);
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.size() - 1);  // trailing NUL
  return out;
}

namespace {

// Splits the entity-id form "<b64 service>.<n>_<b64 endpoint>".
std::optional<std::pair<std::string_view, std::string_view>> split_entity_id(std::string_view encoded) {
  auto underscore = encoded.find('_');
  if (underscore == std::string_view::npos) return std::nullopt;
  auto dot = encoded.rfind('.', underscore);
  if (dot == std::string_view::npos) return std::nullopt;
  return std::make_pair(encoded.substr(0, dot), encoded.substr(underscore + 1));
}

// "METHOD:/path" or "{METHOD}/path".
std::pair<HttpMethod, std::string> parse_endpoint_name(std::string_view name, std::string_view raw) {
  std::string_view method_text;
  std::string_view path;
  if (!name.empty() && name.front() == '{') {
    auto close = name.find('}');
    if (close == std::string_view::npos) throw RecordError("malformed endpoint name", std::string(raw));
    method_text = name.substr(1, close - 1);
    path = name.substr(close + 1);
  } else {
    auto colon = name.find(':');
    if (colon == std::string_view::npos) throw RecordError("endpoint name lacks an HTTP method", std::string(raw));
    method_text = name.substr(0, colon);
    path = name.substr(colon + 1);
  }
  auto method = parse_method(method_text);
  if (!method) throw RecordError("unknown HTTP method '" + std::string(method_text) + "'", std::string(raw));
  if (path.empty()) path = "/";
  if (path.find('{') != std::string_view::npos)
    throw RecordError("endpoint URL contains a template placeholder", std::string(raw));
  return {*method, std::string(path)};
}

std::string service_of(std::string_view encoded) {
  if (auto parts = split_entity_id(encoded)) return base64_decode(parts->first);
  std::string decoded = base64_decode(encoded);
  return decoded.substr(0, decoded.find('/'));
}

Instant parse_timestamp_value(const std::string& field, const std::string& value) {
  if (field == "time_bucket") return parse_time_bucket(value);
  if (!value.empty() && std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    long long n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc{}) throw InputError("timestamp out of range");
    // Epoch micros exceed 1e14 for any date after 1973; millis stay below.
    return n >= 100'000'000'000'000LL ? from_epoch_micros(n) : from_epoch_millis(n);
  }
  return parse_rfc3339(value);
}

}  // namespace

EndpointRef decode_descriptor(std::string_view encoded) {
  if (auto parts = split_entity_id(encoded)) {
    std::string service = base64_decode(parts->first);
    std::string name = base64_decode(parts->second);
    auto [method, url] = parse_endpoint_name(name, encoded);
    if (service.empty()) throw RecordError("empty service name", std::string(encoded));
    return EndpointRef{std::move(service), method, std::move(url)};
  }
  std::string decoded = base64_decode(encoded);
  auto slash = decoded.find('/');
  if (slash == std::string::npos || slash == 0)
    throw RecordError("descriptor '" + decoded + "' lacks a service part", std::string(encoded));
  auto [method, url] = parse_endpoint_name(std::string_view(decoded).substr(slash + 1), encoded);
  return EndpointRef{decoded.substr(0, slash), method, std::move(url)};
}

EndpointCall decode_record(const RawTraceRecord& record, const TraceFields& fields) {
  try {
    EndpointCall call;
    call.raw = record.raw;
    auto dest = record.payload.find(fields.dest_field);
    if (dest == record.payload.end() || dest->second.empty())
      throw RecordError("missing destination field '" + fields.dest_field + "'", record.raw);
    call.destination = decode_descriptor(dest->second);

    auto src = record.payload.find(fields.source_field);
    if (src != record.payload.end() && !src->second.empty()) {
      std::string decoded_service = service_of(src->second);
      bool entry = decoded_service == fields.entry_marker;
      if (!entry) {
        // A bare marker such as base64("User") carries no '/'.
        auto plain = split_entity_id(src->second) ? std::string{} : base64_decode(src->second);
        entry = plain == fields.entry_marker;
      }
      if (!entry) call.source = decode_descriptor(src->second);
    }

    bool have_time = false;
    for (const auto& field : fields.timestamp_fields) {
      auto it = record.payload.find(field);
      if (it == record.payload.end()) continue;
      call.timestamp = parse_timestamp_value(field, it->second);
      have_time = true;
      break;
    }
    if (!have_time) throw RecordError("record has no timestamp field", record.raw);
    return call;
  } catch (const RecordError& err) {
    throw RecordError(err.what(), record.raw);
  } catch (const InputError& err) {
    throw RecordError(err.what(), record.raw);
  }
}

DecodeResult decode_records(const std::vector<RawTraceRecord>& records, const TraceFields& fields,
                            Diagnostics& diag) {
  DecodeResult result;
  for (const auto& r : records) {
    try {
      result.calls.push_back(decode_record(r, fields));
    } catch (const RecordError& err) {
      ++result.errors;
      diag.warn(std::string("undecodable trace record: ") + err.what() + ": " + err.raw());
    }
  }
  std::sort(result.calls.begin(), result.calls.end(), chronological_less);
  return result;
}

std::vector<EndpointCall> load_calls(const TraceSource& source, const TraceFields& fields, Diagnostics& diag,
                                     IngestStats* stats) {
  if (source.files.empty()) throw InputError("no trace files given");
  IngestStats local;
  std::vector<EndpointCall> calls;
  for (const auto& file : source.files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read trace file '" + file.string() + "'");
    if (source.format == TraceFormat::kNormalizedJsonl) {
      Diagnostics file_diag;
      auto part = read_call_log(in, &file_diag);
      local.bad_lines += file_diag.warnings().size();
      for (auto& w : file_diag.warnings()) diag.warn(file.string() + ": " + w);
      local.total_records += part.size() + file_diag.warnings().size();
      local.kept_records += part.size();
      std::move(part.begin(), part.end(), std::back_inserter(calls));
    } else {
      std::size_t bad = 0;
      auto records = read_es_export(in, diag, &bad);
      local.bad_lines += bad;
      local.total_records += records.size() + bad;
      auto filtered = filter_endpoint_records(std::move(records), source.format, fields);
      local.dropped_records += filtered.dropped;
      local.kept_records += filtered.kept.size();
      auto decoded = decode_records(filtered.kept, fields, diag);
      local.decode_errors += decoded.errors;
      std::move(decoded.calls.begin(), decoded.calls.end(), std::back_inserter(calls));
    }
  }
  std::sort(calls.begin(), calls.end(), chronological_less);
  if (stats) *stats = local;
  return calls;
}

WindowedCalls window_calls(const std::vector<EndpointCall>& calls, const std::vector<TestWindow>& manifest,
                           Duration clock_skew, Diagnostics& diag) {
  if (manifest.empty()) throw InputError("test manifest is empty");
  WindowedCalls out;
  for (const auto& w : manifest) out.per_test[w.test_id];

  for (std::size_t a = 0; a < manifest.size(); ++a) {
    for (std::size_t b = a + 1; b < manifest.size(); ++b) {
      if (manifest[a].start <= manifest[b].end && manifest[b].start <= manifest[a].end) {
        ++out.overlapping_pairs;
        diag.warn("test windows '" + manifest[a].test_id + "' and '" + manifest[b].test_id +
                  "' overlap; shared calls count for both");
      }
    }
  }

  std::vector<EndpointCall> sorted = calls;
  std::sort(sorted.begin(), sorted.end(), chronological_less);
  for (const auto& call : sorted) {
    bool assigned = false;
    for (const auto& w : manifest) {
      if (w.start + clock_skew <= call.timestamp && call.timestamp <= w.end + clock_skew) {
        out.per_test[w.test_id].push_back(call);
        assigned = true;
      }
    }
    if (!assigned) out.orphans.push_back(call);
  }
  return out;
}

}  // namespace e2ecov
