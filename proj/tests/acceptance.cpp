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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <unistd.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "e2ecov/extract_static.hpp"
#include "e2ecov/match.hpp"
#include "e2ecov/metrics.hpp"
#include "e2ecov/pipeline.hpp"
#include "e2ecov/serialize.hpp"
#include "oracle/oracle.hpp"

namespace {

namespace fs = std::filesystem;
using namespace e2ecov;
using Clock = std::chrono::steady_clock;

const fs::path kFixtures(E2ECOV_FIXTURES);

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream msg;
    msg << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::fabs(got - want) <= tol, msg.str());
  }
};

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("e2ecov_accept_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

CoverageReport analyze_in(const RunConfig& cfg) {
  Diagnostics diag;
  return cmd_analyze(cfg, diag);
}

RunConfig example_config(const fs::path& out) {
  RunConfig cfg;
  cfg.inventory = kFixtures / "worked_example/inventory.json";
  cfg.traces = {kFixtures / "worked_example/calls.jsonl"};
  cfg.manifest = kFixtures / "worked_example/manifest.json";
  cfg.out_dir = out;
  return cfg;
}

RunConfig case_config(const fs::path& out) {
  RunConfig cfg;
  cfg.inventory = kFixtures / "case_study/inventory.json";
  cfg.format = TraceFormat::kSkywalkingEs;
  cfg.traces = {kFixtures / "case_study/traces.es.jsonl"};
  cfg.manifest = kFixtures / "case_study/manifest.json";
  cfg.out_dir = out;
  return cfg;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t count_value(const std::map<std::string, double>& pct, double value) {
  std::size_t n = 0;
  for (const auto& [k, v] : pct) n += std::fabs(round2(v) - value) < 1e-9;
  return n;
}

void criterion1(Check& c) {
  fs::path out = scratch("worked_example");
  auto t0 = Clock::now();
  auto r = analyze_in(example_config(out));
  double elapsed = seconds_since(t0);
  c.near(r.per_service.at("MS-1").ratio * 100, 50.0, 0.01, "C_ms(MS-1)");
  c.near(r.per_service.at("MS-2").ratio * 100, 100.0, 0.01, "C_ms(MS-2)");
  c.near(r.per_service.at("MS-3").ratio * 100, 50.0, 0.01, "C_ms(MS-3)");
  c.expect(r.per_service.size() == 3, "exactly three non-gateway services");
  c.near(r.per_test.at("Test-1").ratio * 100, 33.33, 0.01, "C_test(Test-1)");
  c.near(r.per_test.at("Test-2").ratio * 100, 50.0, 0.01, "C_test(Test-2)");
  c.near(r.suite_coverage * 100, 66.67, 0.01, "C_suite");
  c.expect(r.dependency_edges.contains(DependencyEdge{"MS-2", "MS-3", true}), "MS-2 -> MS-3 edge");
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s >= 1 s");
  fs::remove_all(out);
}

// Criteria 2-4 share one case-study run.
CoverageReport case_report(double* elapsed) {
  static std::optional<CoverageReport> cached;
  static double took = 0.0;
  if (!cached) {
    fs::path out = scratch("case");
    auto t0 = Clock::now();
    cached = analyze_in(case_config(out));
    took = seconds_since(t0);
    fs::remove_all(out);
  }
  if (elapsed) *elapsed = took;
  return *cached;
}

void criterion2(Check& c) {
  double elapsed = 0;
  auto r = case_report(&elapsed);
  c.expect(r.universe == 262, "universe " + std::to_string(r.universe) + " != 262");
  std::size_t called = r.calls.distinct_matched + r.calls.distinct_gateway;
  c.expect(called == 171, "distinct called endpoints " + std::to_string(called) + " != 171");
  c.expect(r.calls.distinct_gateway == 52, "gateway targets " + std::to_string(r.calls.distinct_gateway) + " != 52");
  c.expect(r.calls.distinct_matched == 119, "matched " + std::to_string(r.calls.distinct_matched) + " != 119");
  c.expect(r.calls.unmatched == 0, "unmatched calls present");
  c.near(r.suite_coverage * 100, 45.42, 0.01, "C_suite");
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s >= 5 s");
}

void criterion3(Check& c) {
  auto r = case_report(nullptr);
  std::map<std::string, double> pct;
  double lo = 100.0;
  double hi = 0.0;
  for (const auto& [id, t] : r.per_test) {
    pct[id] = t.ratio * 100;
    lo = std::min(lo, pct[id]);
    hi = std::max(hi, pct[id]);
  }
  c.near(hi, 15.27, 0.01, "max C_test");
  c.near(lo, 1.14, 0.01, "min C_test");
  c.expect(r.test_stats.has_value(), "test statistics present");
  if (r.test_stats) c.near(r.test_stats->mode, 7.25, 0.01, "mode C_test");
  c.expect(count_value(pct, 7.25) == 5, "mode 7.25% appears for " + std::to_string(count_value(pct, 7.25)) +
                                            " tests, want 5");
}

void criterion4(Check& c) {
  auto r = case_report(nullptr);
  std::map<std::string, double> pct;
  for (const auto& [id, s] : r.per_service) pct[id] = s.ratio * 100;
  c.expect(r.service_stats.has_value(), "service statistics present");
  if (!r.service_stats) return;
  c.near(r.service_stats->min, 0.0, 0.01, "min C_ms");
  c.expect(count_value(pct, 0.0) == 4, "services at 0%: " + std::to_string(count_value(pct, 0.0)) + ", want 4");
  c.near(r.service_stats->max, 100.0, 0.01, "max C_ms");
  c.near(r.service_stats->mode, 25.0, 0.01, "mode C_ms");
  c.expect(count_value(pct, 25.0) == 4, "services at 25%: " + std::to_string(count_value(pct, 25.0)) + ", want 4");
  c.near(r.service_stats->avg, 44.5, 0.5, "avg C_ms");
}

void criterion5(Check& c) {
  oracle::InstanceGenerator gen(20260001);
  std::size_t calls = 0;
  for (int i = 0; i < 1000 && c.failures.size() < 5; ++i) {
    auto inst = gen.next(8, 5, 6);
    Diagnostics diag;
    auto r = build_report(inst.inv, match_test_traces(inst.windows, inst.inv, diag), diag);
    auto o = oracle::metrics(inst.inv, inst.windows);
    bool same = r.universe == o.universe && r.covered_endpoints == o.covered && r.suite_coverage == o.c_suite &&
                r.per_service.size() == o.c_ms.size() && r.per_test.size() == o.c_test.size();
    for (const auto& [svc, v] : o.c_ms) same = same && r.per_service.contains(svc) && r.per_service.at(svc).ratio == v;
    for (const auto& [t, v] : o.c_test) same = same && r.per_test.contains(t) && r.per_test.at(t).ratio == v;
    c.expect(same, "build_report differs from oracle on instance " + std::to_string(i));
    for (const auto& [t, window] : inst.windows) {
      for (const auto& call : window) {
        ++calls;
        auto got = match_call(call, inst.inv);
        auto want = oracle::match(call.destination, inst.inv);
        c.expect(got.endpoint_key == want.key && (got.outcome == MatchOutcome::kGateway) == want.gateway &&
                     got.survivors == want.survivors,
                 "match_call differs from oracle for " + call.destination.service_id + " " + call.destination.url);
      }
    }
  }
  c.expect(calls > 0, "no calls generated");
}

void criterion6(Check& c) {
  oracle::InstanceGenerator gen(20260002);
  auto report = [](const EndpointInventory& inv, const std::map<std::string, std::vector<EndpointCall>>& w) {
    Diagnostics diag;
    return build_report(inv, match_test_traces(w, inv, diag), diag);
  };
  for (int i = 0; i < 1000 && c.failures.size() < 5; ++i) {
    auto inst = gen.next();
    auto r = report(inst.inv, inst.windows);
    std::string at = " (instance " + std::to_string(i) + ")";

    bool in_range = r.suite_coverage >= 0.0 && r.suite_coverage <= 1.0;
    for (const auto& [s, v] : r.per_service) in_range = in_range && v.ratio >= 0.0 && v.ratio <= 1.0;
    for (const auto& [t, v] : r.per_test) in_range = in_range && v.ratio >= 0.0 && v.ratio <= 1.0;
    c.expect(in_range, "range" + at);

    std::size_t tested = 0;
    std::size_t total = 0;
    for (const auto& [s, v] : r.per_service) {
      tested += v.tested_count;
      total += v.total_count;
    }
    c.expect(total == r.universe &&
                 r.suite_coverage == static_cast<double>(tested) / static_cast<double>(total),
             "aggregation identity" + at);

    double max_test = 0.0;
    double sum_test = 0.0;
    for (const auto& [t, v] : r.per_test) {
      max_test = std::max(max_test, v.ratio);
      sum_test += v.ratio;
    }
    c.expect(max_test <= r.suite_coverage + 1e-12 && r.suite_coverage <= sum_test + 1e-12, "union bounds" + at);

    auto more = inst.windows;
    more["zz-added"] = gen.next().windows.begin()->second;
    auto grown = report(inst.inv, more);
    bool monotone = grown.suite_coverage >= r.suite_coverage;
    for (const auto& [s, v] : r.per_service) monotone = monotone && grown.per_service.at(s).ratio >= v.ratio;
    c.expect(monotone, "monotonicity under added tests" + at);

    auto doubled = inst.windows;
    for (auto& [t, calls] : doubled) {
      auto copy = calls;
      calls.insert(calls.end(), copy.begin(), copy.end());
      std::sort(calls.begin(), calls.end(), chronological_less);
    }
    auto dup = report(inst.inv, doubled);
    c.expect(dup.suite_coverage == r.suite_coverage && dup.per_service == r.per_service && dup.per_test == r.per_test,
             "duplicate-call invariance" + at);

    auto stripped = inst.windows;
    for (auto& [t, calls] : stripped)
      std::erase_if(calls, [&](const EndpointCall& x) { return inst.inv.is_gateway(x.destination.service_id); });
    auto nogw = report(inst.inv, stripped);
    bool gw_ok = nogw.suite_coverage == r.suite_coverage && nogw.per_service == r.per_service &&
                 nogw.per_test == r.per_test;
    for (const auto& g : inst.inv.gateway_services()) gw_ok = gw_ok && !r.per_service.contains(g);
    c.expect(gw_ok, "gateway invariance" + at);
  }
}

std::set<std::string> keys_of(const EndpointInventory& inv) {
  std::set<std::string> out;
  for (const auto& [svc, entry] : inv.services())
    for (const auto& e : entry.endpoints) out.insert(identity_key(e));
  return out;
}

void criterion7(Check& c) {
  const fs::path root = kFixtures / "scanner";
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "src"))
    files += entry.is_regular_file() && entry.path().extension() == ".java";
  c.expect(files >= 10, "corpus has " + std::to_string(files) + " Java files, want >= 10");

  std::set<std::string> expected;
  std::ifstream in(root / "expected_keys.txt");
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) expected.insert(line);

  Diagnostics diag;
  SourceTree tree;
  tree.root_dir = root / "src";
  auto scanned = scan_annotations(tree, diag);
  c.expect(scanned.service_count() >= 3, "scanner found fewer than three services");

  std::vector<EndpointInventory> parts;
  parts.push_back(parse_openapi(read_file(root / "openapi/svc-alpha.yaml"), "svc-alpha", diag));
  parts.push_back(parse_openapi(read_file(root / "openapi/svc-beta.json"), "svc-beta", diag));
  parts.push_back(parse_openapi(read_file(root / "openapi/svc-gamma.yaml"), "svc-gamma", diag));
  auto documented = merge_inventories(parts, diag);

  for (const auto& [name, inv] : {std::pair{"scanner", &scanned}, std::pair{"openapi", &documented}}) {
    auto got = keys_of(*inv);
    for (const auto& k : expected) c.expect(got.contains(k), std::string(name) + " missed " + k);
    for (const auto& k : got) c.expect(expected.contains(k), std::string(name) + " spurious " + k);
  }
  c.expect(keys_of(scanned) == keys_of(documented), "scanner and OpenAPI inventories differ");
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("'") + E2ECOV_CLI + "' " + args + " >/dev/null 2>&1";
  int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void criterion8(Check& c) {
  fs::path out = scratch("determinism");
  fs::path cs = kFixtures / "case_study";
  std::string args = "analyze --inventory '" + (cs / "inventory.json").string() + "' --format skywalking-es --traces '" +
                     (cs / "traces.es.jsonl").string() + "' --manifest '" + (cs / "manifest.json").string() +
                     "' --out '" + out.string() + "'";
  const char* files[] = {"coverage.json", "coverage.txt", "coverage.dot", "coverage.html"};
  c.expect(run_cli(args) == 0, "first analyze run failed");
  std::map<std::string, std::string> first;
  for (const char* f : files) first[f] = slurp(out / f);
  c.expect(run_cli(args) == 0, "second analyze run failed");
  for (const char* f : files) {
    c.expect(!first[f].empty(), std::string(f) + " is empty");
    c.expect(slurp(out / f) == first[f], std::string(f) + " differs between runs");
  }
  fs::remove_all(out);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"worked example", criterion1},
      {"case-study arithmetic", criterion2},
      {"per-test statistics", criterion3},
      {"per-service statistics", criterion4},
      {"oracle equivalence", criterion5},
      {"invariant suite", criterion6},
      {"extractor golden corpus", criterion7},
      {"report determinism", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    auto t0 = Clock::now();
    try {
      criteria[i].second(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double ms = seconds_since(t0) * 1000.0;
    bool ok = check.failures.empty();
    failed += !ok;
    std::printf("%s criterion %zu: %s (%.0f ms)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, ms);
    for (const auto& f : check.failures) std::printf("    %s\n", f.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
