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

#include "e2ecov/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sodium.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <fmt/format.h>
#include <regex>
#include <sstream>

#include "e2ecov/extract_static.hpp"
#include "e2ecov/match.hpp"
#include "e2ecov/metrics.hpp"
#include "e2ecov/report.hpp"
#include "e2ecov/serialize.hpp"

namespace e2ecov {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kInventoryFile = "inventory.json";
constexpr const char* kTestsFile = "tests.json";
constexpr const char* kOrphansFile = "orphans.jsonl";
constexpr const char* kCallsDir = "calls";
constexpr const char* kAuditFile = "match_audit.jsonl";
constexpr const char* kExtractStamp = ".extract.fingerprint";
constexpr const char* kIngestStamp = ".ingest.fingerprint";
constexpr const char* kLockFile = ".e2ecov.lock";
// Bumped whenever a stage's output format changes, invalidating caches.
constexpr const char* kStageVersion = "e2ecov-stage-v1";

class Hasher {
 public:
  Hasher() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialize");
    crypto_generichash_init(&state_, nullptr, 0, crypto_generichash_BYTES);
  }

  // Length-prefixed so adjacent fields cannot run into each other.
  Hasher& add(std::string_view bytes) {
    auto len = std::to_string(bytes.size()) + ":";
    crypto_generichash_update(&state_, reinterpret_cast<const unsigned char*>(len.data()), len.size());
    crypto_generichash_update(&state_, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
    return *this;
  }

  Hasher& add_file(const fs::path& p) { return add(p.generic_string()).add(read_file(p)); }

  Hasher& add_tree(const fs::path& root) {
    if (!fs::is_directory(root)) throw InputError("source root '" + root.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    add(root.generic_string());
    for (const auto& f : files) add(fs::relative(f, root).generic_string()).add(read_file(f));
    return *this;
  }

  std::string hex() {
    unsigned char digest[crypto_generichash_BYTES];
    crypto_generichash_final(&state_, digest, sizeof digest);
    char out[crypto_generichash_BYTES * 2 + 1];
    sodium_bin2hex(out, sizeof out, digest, sizeof digest);
    return out;
  }

 private:
  crypto_generichash_state state_;
};

std::string read_stamp(const fs::path& file) {
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) return {};
  std::string s = read_file(file);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string calls_file_name(std::size_t index) { return fmt::format("{}/{:04}.jsonl", kCallsDir, index); }

void write_extract_outputs(const RunConfig& cfg, const EndpointInventory& inv, const std::string& stamp) {
  write_file(cfg.out_dir / kInventoryFile, dump_canonical(inventory_to_json(inv)));
  write_file(cfg.out_dir / kExtractStamp, stamp + "\n");
}

EndpointInventory read_inventory_output(const RunConfig& cfg) {
  auto file = cfg.out_dir / kInventoryFile;
  if (!fs::exists(file))
    throw InputError("no inventory input configured and '" + file.string() + "' does not exist; run extract first");
  return inventory_from_json(read_json_file(file));
}

void write_ingest_outputs(const RunConfig& cfg, const IngestOutput& in, const std::string& stamp) {
  std::error_code ec;
  fs::remove_all(cfg.out_dir / kCallsDir, ec);
  json tests = json::array();
  for (std::size_t i = 0; i < in.tests.size(); ++i) {
    const auto& w = in.tests[i];
    const auto& calls = in.windows.per_test.at(w.test_id);
    auto name = calls_file_name(i);
    write_file(cfg.out_dir / name, write_call_log(calls));
    tests.push_back({{"id", w.test_id},
                     {"start", format_rfc3339(w.start)},
                     {"end", format_rfc3339(w.end)},
                     {"calls_file", name},
                     {"call_count", calls.size()}});
  }
  write_file(cfg.out_dir / kOrphansFile, write_call_log(in.windows.orphans));
  json doc{{"tests", std::move(tests)},
           {"clock_skew_us", cfg.clock_skew.count()},
           {"orphans_file", kOrphansFile},
           {"orphan_count", in.windows.orphans.size()},
           {"overlapping_pairs", in.windows.overlapping_pairs},
           {"stats",
            {{"total_records", in.stats.total_records},
             {"kept_records", in.stats.kept_records},
             {"dropped_records", in.stats.dropped_records},
             {"bad_lines", in.stats.bad_lines},
             {"decode_errors", in.stats.decode_errors}}}};
  write_file(cfg.out_dir / kTestsFile, dump_canonical(doc));
  write_file(cfg.out_dir / kIngestStamp, stamp + "\n");
}

std::vector<EndpointCall> read_log(const fs::path& file) {
  std::istringstream in(read_file(file));
  return read_call_log(in);
}

IngestOutput read_ingest_outputs(const RunConfig& cfg) {
  auto file = cfg.out_dir / kTestsFile;
  if (!fs::exists(file))
    throw InputError("no trace input configured and '" + file.string() + "' does not exist; run ingest first");
  json doc = read_json_file(file);
  IngestOutput out;
  out.tests = manifest_from_json(doc);
  try {
    for (std::size_t i = 0; i < out.tests.size(); ++i) {
      std::string name = doc.at("tests").at(i).value("calls_file", calls_file_name(i));
      out.windows.per_test[out.tests[i].test_id] = read_log(cfg.out_dir / name);
    }
    out.windows.orphans = read_log(cfg.out_dir / doc.value("orphans_file", std::string(kOrphansFile)));
    out.windows.overlapping_pairs = doc.value("overlapping_pairs", std::size_t{0});
    if (doc.contains("stats")) {
      const auto& s = doc.at("stats");
      out.stats = {s.value("total_records", std::size_t{0}), s.value("kept_records", std::size_t{0}),
                   s.value("dropped_records", std::size_t{0}), s.value("bad_lines", std::size_t{0}),
                   s.value("decode_errors", std::size_t{0})};
    }
  } catch (const json::exception& err) {
    throw InputError("'" + file.string() + "' is malformed: " + err.what());
  }
  return out;
}

bool fresh(const RunConfig& cfg, const char* stamp_file, const std::string& stamp,
           std::initializer_list<const char*> outputs) {
  if (read_stamp(cfg.out_dir / stamp_file) != stamp) return false;
  for (const char* o : outputs)
    if (!fs::exists(cfg.out_dir / o)) return false;
  return true;
}

json audit_line(const std::string& test_id, const MatchResult& r) {
  json line{{"test", test_id},
            {"call", call_to_json(r.call)},
            {"outcome", to_string(r.outcome)},
            {"candidates", r.candidates_considered},
            {"survivors", r.survivors},
            {"rule", to_string(r.rule_applied)}};
  if (r.endpoint_key) line["endpoint"] = *r.endpoint_key;
  if (r.reason != UnmatchedReason::kNone) line["reason"] = to_string(r.reason);
  return line;
}

CoverageReport analyze_unlocked(const RunConfig& cfg, Diagnostics& diag) {
  ColorScale scale = ColorScale::parse(cfg.color_scale);

  EndpointInventory inv;
  if (has_inventory_inputs(cfg)) {
    std::string stamp = extract_fingerprint(cfg);
    if (cfg.from_cache && fresh(cfg, kExtractStamp, stamp, {kInventoryFile})) {
      inv = read_inventory_output(cfg);
    } else {
      inv = build_inventory(cfg, diag);
      write_extract_outputs(cfg, inv, stamp);
    }
  } else {
    inv = read_inventory_output(cfg);
  }

  IngestOutput ingest;
  if (has_trace_inputs(cfg)) {
    std::string stamp = ingest_fingerprint(cfg);
    if (cfg.from_cache && fresh(cfg, kIngestStamp, stamp, {kTestsFile, kOrphansFile})) {
      ingest = read_ingest_outputs(cfg);
    } else {
      ingest = ingest_traces(cfg, diag);
      write_ingest_outputs(cfg, ingest, stamp);
    }
  } else {
    ingest = read_ingest_outputs(cfg);
  }

  std::vector<std::pair<std::string, MatchResult>> audit;
  auto traces = match_test_traces(ingest.windows.per_test, inv, diag, &audit);
  CoverageReport report = build_report(inv, traces, diag);
  report.calls.orphans = ingest.windows.orphans.size();

  std::string audit_text;
  for (const auto& [test_id, r] : audit) audit_text += audit_line(test_id, r).dump() + "\n";
  write_file(cfg.out_dir / kAuditFile, audit_text);

  write_file(cfg.out_dir / "coverage.json", render_json(report));
  write_file(cfg.out_dir / "coverage.txt", render_text(report));
  write_file(cfg.out_dir / "coverage.dot", render_dot(report, scale));
  write_file(cfg.out_dir / "coverage.html", render_endpoint_list_html(report, inv));
  return report;
}

}  // namespace

OutputLock::OutputLock(const fs::path& out_dir, Diagnostics& diag) : file_(out_dir / kLockFile) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  for (int attempt = 0; attempt < 2; ++attempt) {
    int fd = ::open(file_.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
    if (fd >= 0) {
      auto pid = std::to_string(::getpid()) + "\n";
      [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      return;
    }
    if (errno != EEXIST) throw InputError("cannot create lock file '" + file_.string() + "'");
    long holder = 0;
    try {
      holder = std::stol(read_file(file_));
    } catch (const std::exception&) {
      holder = 0;
    }
    if (holder > 0 && (::kill(static_cast<pid_t>(holder), 0) == 0 || errno == EPERM))
      throw InputError("output directory '" + out_dir.string() + "' is in use by process " + std::to_string(holder));
    diag.warn("removing stale lock file '" + file_.string() + "'");
    fs::remove(file_, ec);
  }
  throw InputError("cannot acquire lock file '" + file_.string() + "'");
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(file_, ec);
}

bool has_inventory_inputs(const RunConfig& cfg) {
  return !cfg.source_roots.empty() || !cfg.openapi.empty() || cfg.inventory.has_value();
}

bool has_trace_inputs(const RunConfig& cfg) { return !cfg.traces.empty(); }

EndpointInventory build_inventory(const RunConfig& cfg, Diagnostics& diag) {
  if (!has_inventory_inputs(cfg))
    throw InputError("no inventory input: give --source-root, --openapi or --inventory");
  std::vector<EndpointInventory> parts;
  std::map<std::string, ServiceDecl> declared;
  if (cfg.services_manifest) declared = load_services_manifest(*cfg.services_manifest);
  for (const auto& root : cfg.source_roots) {
    if (!fs::is_directory(root)) throw InputError("source root '" + root.string() + "' is not a directory");
    SourceTree tree;
    tree.root_dir = root;
    if (cfg.single_service) {
      tree.layout = ServiceLayout::kSingleService;
      tree.single_service_id = *cfg.single_service;
    }
    tree.services = declared;
    parts.push_back(scan_annotations(tree, diag));
  }
  for (const auto& [service, file] : cfg.openapi) parts.push_back(parse_openapi(read_file(file), service, diag));
  if (cfg.inventory) parts.push_back(inventory_from_json(read_json_file(*cfg.inventory)));

  EndpointInventory inv = merge_inventories(parts, diag);
  for (const auto& g : cfg.gateway_services) inv.set_gateway(g, true);

  std::vector<std::regex> patterns;
  for (const auto& re : cfg.exclude_path_regex) {
    try {
      patterns.emplace_back(re, std::regex::ECMAScript);
    } catch (const std::regex_error& err) {
      throw InputError("invalid exclude-path-regex '" + re + "': " + err.what());
    }
  }
  if (!patterns.empty()) exclude_paths(inv, patterns, diag);
  if (inv.universe_size() == 0) diag.warn("the endpoint inventory is empty");
  return inv;
}

IngestOutput ingest_traces(const RunConfig& cfg, Diagnostics& diag) {
  if (!has_trace_inputs(cfg)) throw InputError("no trace input: give --traces");
  if (!cfg.manifest) throw InputError("no test manifest: give --manifest");
  IngestOutput out;
  out.tests = manifest_from_json(read_json_file(*cfg.manifest));
  auto calls = load_calls(TraceSource{cfg.format, cfg.traces}, cfg.fields, diag, &out.stats);
  out.windows = window_calls(calls, out.tests, cfg.clock_skew, diag);
  if (!out.windows.orphans.empty())
    diag.warn(std::to_string(out.windows.orphans.size()) + " calls fall outside every test window");
  return out;
}

std::string extract_fingerprint(const RunConfig& cfg) {
  Hasher h;
  h.add(kStageVersion).add("extract");
  for (const auto& root : cfg.source_roots) h.add_tree(root);
  h.add(cfg.services_manifest ? read_file(*cfg.services_manifest) : "-");
  h.add(cfg.single_service.value_or("-"));
  for (const auto& [service, file] : cfg.openapi) h.add(service).add_file(file);
  if (cfg.inventory) h.add_file(*cfg.inventory);
  h.add("gateways");
  for (const auto& g : cfg.gateway_services) h.add(g);
  h.add("exclude");
  for (const auto& re : cfg.exclude_path_regex) h.add(re);
  return h.hex();
}

std::string ingest_fingerprint(const RunConfig& cfg) {
  Hasher h;
  h.add(kStageVersion).add("ingest");
  h.add(cfg.format == TraceFormat::kNormalizedJsonl ? "jsonl" : "skywalking-es");
  for (const auto& f : cfg.traces) h.add_file(f);
  h.add(cfg.manifest ? read_file(*cfg.manifest) : "-");
  h.add(cfg.fields.relation_index).add(cfg.fields.source_field).add(cfg.fields.dest_field);
  for (const auto& f : cfg.fields.timestamp_fields) h.add(f);
  h.add(cfg.fields.entry_marker);
  h.add(std::to_string(cfg.clock_skew.count()));
  return h.hex();
}

void cmd_extract(const RunConfig& cfg, Diagnostics& diag) {
  OutputLock lock(cfg.out_dir, diag);
  auto stamp = extract_fingerprint(cfg);
  write_extract_outputs(cfg, build_inventory(cfg, diag), stamp);
}

void cmd_ingest(const RunConfig& cfg, Diagnostics& diag) {
  OutputLock lock(cfg.out_dir, diag);
  auto stamp = ingest_fingerprint(cfg);
  write_ingest_outputs(cfg, ingest_traces(cfg, diag), stamp);
}

CoverageReport cmd_analyze(const RunConfig& cfg, Diagnostics& diag) {
  OutputLock lock(cfg.out_dir, diag);
  return analyze_unlocked(cfg, diag);
}

bool cmd_check(const RunConfig& cfg, Diagnostics& diag, CoverageReport* report) {
  if (!cfg.min_suite_coverage) throw InputError("check needs --min-suite-coverage");
  CoverageReport r = cmd_analyze(cfg, diag);
  bool pass = r.suite_coverage * 100.0 >= *cfg.min_suite_coverage;
  if (report) *report = std::move(r);
  return pass;
}

}  // namespace e2ecov
