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

#include "e2ecov/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace e2ecov {

namespace {

// identity key -> owning service, for the non-gateway universe.
std::map<std::string, std::string> universe_index(const EndpointInventory& inv) {
  std::map<std::string, std::string> out;
  for (const auto& [service, entry] : inv.services()) {
    if (entry.gateway.value_or(false)) continue;
    for (const auto& e : entry.endpoints) out.emplace(identity_key(e), service);
  }
  return out;
}

std::size_t require_universe(const EndpointInventory& inv) {
  std::size_t n = inv.universe_size();
  if (n == 0) throw InputError("endpoint inventory is empty; coverage is undefined");
  return n;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t known_count(const std::set<std::string>& keys, const std::map<std::string, std::string>& universe) {
  return static_cast<std::size_t>(
      std::count_if(keys.begin(), keys.end(), [&](const std::string& k) { return universe.contains(k); }));
}

}  // namespace

double round2(double value) { return std::round(value * 100.0) / 100.0; }

std::map<std::string, ServiceCoverage> service_coverage(const EndpointInventory& inv,
                                                        const std::vector<TestTrace>& traces, Diagnostics& diag) {
  const auto universe = universe_index(inv);
  std::map<std::string, std::set<std::string>> tested;
  for (const auto& t : traces) {
    for (const auto& key : t.matched_endpoints) {
      if (auto it = universe.find(key); it != universe.end()) tested[it->second].insert(key);
    }
  }
  std::map<std::string, ServiceCoverage> out;
  for (const auto& [service, entry] : inv.services()) {
    if (entry.gateway.value_or(false)) continue;
    ServiceCoverage c;
    c.total_count = entry.endpoints.size();
    c.tested_count = tested[service].size();
    c.ratio = ratio(c.tested_count, c.total_count);
    if (c.total_count == 0) diag.warn("service '" + service + "' has no endpoints; its coverage is reported as 0");
    out.emplace(service, c);
  }
  return out;
}

std::map<std::string, TestCoverage> test_coverage(const EndpointInventory& inv, const std::vector<TestTrace>& traces) {
  const std::size_t n = require_universe(inv);
  const auto universe = universe_index(inv);
  std::map<std::string, TestCoverage> out;
  for (const auto& t : traces) {
    TestCoverage c;
    c.tested_count = known_count(t.matched_endpoints, universe);
    c.universe_count = n;
    c.ratio = ratio(c.tested_count, n);
    out[t.test_id] = c;
  }
  return out;
}

double suite_coverage(const EndpointInventory& inv, const std::vector<TestTrace>& traces) {
  const std::size_t n = require_universe(inv);
  const auto universe = universe_index(inv);
  std::set<std::string> all;
  for (const auto& t : traces) all.insert(t.matched_endpoints.begin(), t.matched_endpoints.end());
  return ratio(known_count(all, universe), n);
}

Summary summarize(std::span<const double> percentages) {
  if (percentages.empty()) throw InputError("cannot summarize an empty population");
  Summary s;
  double lo = percentages.front();
  double hi = percentages.front();
  double sum = 0.0;
  std::map<double, std::size_t> freq;
  for (double p : percentages) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
    sum += p;
    ++freq[round2(p)];
  }
  s.min = round2(lo);
  s.max = round2(hi);
  s.avg = round2(sum / static_cast<double>(percentages.size()));
  std::size_t best = 0;
  for (const auto& [value, count] : freq) {
    // Ascending iteration with >= lets the larger value win ties.
    if (count >= best) {
      best = count;
      s.mode = value;
    }
  }
  return s;
}

CoverageReport build_report(const EndpointInventory& inv, const std::vector<TestTrace>& traces, Diagnostics& diag) {
  CoverageReport r;
  r.universe = require_universe(inv);
  const auto universe = universe_index(inv);

  r.per_service = service_coverage(inv, traces, diag);
  r.per_test = test_coverage(inv, traces);
  r.suite_coverage = suite_coverage(inv, traces);
  r.m_total = inv.service_count();
  r.t_total = r.per_test.size();

  for (const auto& t : traces)
    for (const auto& key : t.matched_endpoints)
      if (universe.contains(key)) r.covered_endpoints.insert(key);
  r.suite_tested = r.covered_endpoints.size();

  std::vector<double> service_pct;
  for (const auto& [id, c] : r.per_service) service_pct.push_back(c.ratio * 100.0);
  if (!service_pct.empty()) r.service_stats = summarize(service_pct);
  std::vector<double> test_pct;
  for (const auto& [id, c] : r.per_test) test_pct.push_back(c.ratio * 100.0);
  if (!test_pct.empty()) r.test_stats = summarize(test_pct);

  std::map<std::pair<std::string, std::string>, bool> edges;
  std::set<EndpointRef> gateway_targets;
  for (const auto& t : traces) {
    r.calls.total += t.calls.size();
    r.calls.matched += t.matched_calls.size();
    r.calls.gateway += t.gateway_calls.size();
    r.calls.unmatched += t.unmatched_calls.size();
    for (const auto& g : t.gateway_calls) gateway_targets.insert(g.destination);
    for (const auto& m : t.matched_calls) {
      if (m.call.source) edges[{m.call.source->service_id, m.call.destination.service_id}] = true;
      if (m.survivors > 1) r.risky_matches.insert(RiskyMatch{t.test_id, m.call.destination, m.endpoint_key, m.survivors});
    }
    for (const auto& u : t.unmatched_calls) {
      if (u.source) edges.try_emplace({u.source->service_id, u.destination.service_id}, false);
    }
  }
  for (const auto& [pair, covered] : edges) r.dependency_edges.insert(DependencyEdge{pair.first, pair.second, covered});
  r.calls.distinct_matched = r.covered_endpoints.size();
  r.calls.distinct_gateway = gateway_targets.size();
  return r;
}

}  // namespace e2ecov
