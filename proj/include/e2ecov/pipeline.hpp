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

// Stage orchestration. Every stage hands off through files in the output
// directory so any stage can be replaced by an external tool:
//
//   inventory.json        extract  (endpoint inventory)
//   tests.json            ingest   (test windows, call counts, file names)
//   calls/NNNN.jsonl      ingest   (one call log per test, manifest order)
//   orphans.jsonl         ingest   (calls outside every window)
//   match_audit.jsonl     analyze  (one match decision per call)
//   coverage.{json,txt,dot,html}   analyze
//
// Hidden files: .extract.fingerprint and .ingest.fingerprint record the
// inputs a stage output was built from; .e2ecov.lock guards the directory.

#ifndef E2ECOV_PIPELINE_HPP_
#define E2ECOV_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "e2ecov/config.hpp"
#include "e2ecov/errors.hpp"
#include "e2ecov/extract_dynamic.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

/// Exclusive ownership of an output directory for the lifetime of the
/// object. A lock left behind by a dead process is taken over with a
/// warning; a live holder makes the constructor throw InputError.
class OutputLock {
 public:
  OutputLock(const std::filesystem::path& out_dir, Diagnostics& diag);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path file_;
};

bool has_inventory_inputs(const RunConfig& cfg);
bool has_trace_inputs(const RunConfig& cfg);

/// Stage 1 in memory: scans source roots, parses OpenAPI documents, loads a
/// prebuilt inventory, merges them, then applies gateway overrides and path
/// exclusions. Throws InputError when there is no inventory input.
EndpointInventory build_inventory(const RunConfig& cfg, Diagnostics& diag);

struct IngestOutput {
  std::vector<TestWindow> tests;
  WindowedCalls windows;
  IngestStats stats;
};

/// Stage 2 in memory: loads the trace files and cuts them into test windows.
IngestOutput ingest_traces(const RunConfig& cfg, Diagnostics& diag);

// Hex digests of every input that influences a stage's output.
std::string extract_fingerprint(const RunConfig& cfg);
std::string ingest_fingerprint(const RunConfig& cfg);

void cmd_extract(const RunConfig& cfg, Diagnostics& diag);
void cmd_ingest(const RunConfig& cfg, Diagnostics& diag);

/// Runs extract, ingest, match, metrics and report. A stage whose inputs are
/// not configured is read back from the output directory; with from_cache a
/// configured stage is skipped when its fingerprint is unchanged.
CoverageReport cmd_analyze(const RunConfig& cfg, Diagnostics& diag);

/// cmd_analyze followed by the gate: true when suite coverage in percent is
/// at least min_suite_coverage. Throws InputError when no threshold is set.
bool cmd_check(const RunConfig& cfg, Diagnostics& diag, CoverageReport* report = nullptr);

}  // namespace e2ecov

#endif  // E2ECOV_PIPELINE_HPP_
